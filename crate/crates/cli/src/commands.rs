use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde_json::{json, Map, Value};

use onsager::exponent::{embedding_exponents, BootstrapTrace, EmbeddingExponents};
use onsager::mollify::{geometric_eps_grid, verify_lemma_rates, write_rate_csv, MollifierRates};
use onsager::sim::{parse_real, run_with, write_csv, write_summary, SimConfig, SimSummary};
use onsager::spectral::{
    gagliardo_seminorm, hs_norm, hs_seminorm, inverse_transform, l2_norm, make_abc,
    make_helical_beltrami, random_band_limited, read_pfld, synth_regularity, transform,
    write_meta, write_pfld, FieldFile, FieldMeta, Grid, RealField, Sign, SpectralField,
};
use onsager::{
    beltrami_verdict, bootstrap_trace, check_energy_criterion, constant_lambda_verdict,
    product_admissible, ExtRat, MixedNorm, Outcome, ProductQuery, Rat, RegularityIndex, Verdict,
};

use crate::cli::{Command, FieldKind};

/// Result of one command before it is printed.
pub struct Output {
    pub value: Value,
    pub table: String,
    pub exit: i32,
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
    pub artifacts: Vec<PathBuf>,
    /// Default manifest location for commands that write files.
    pub manifest_beside: Option<PathBuf>,
}

impl Output {
    fn new(value: Value, table: String) -> Self {
        Output {
            value,
            table,
            exit: 0,
            parameters: Map::new(),
            seed: None,
            artifacts: Vec::new(),
            manifest_beside: None,
        }
    }

    fn param(mut self, key: &str, v: Value) -> Self {
        self.parameters.insert(key.to_string(), v);
        self
    }
}

/// `num/den`, also for integers.
pub fn rat_str(r: &Rat) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

fn ext_str(r: &ExtRat) -> Value {
    match r.finite() {
        Some(r) => rat_str(r),
        None => Value::String("inf".into()),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn verdict_exit(v: &Verdict) -> i32 {
    if v.outcome == Outcome::NoVerdict {
        2
    } else {
        0
    }
}

fn verdict_table(v: &Verdict) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "outcome  {}", v.outcome);
    let _ = writeln!(t, "basis    {}", v.basis);
    if let Some(w) = &v.witness {
        let _ = writeln!(t, "witness  {w}");
    }
    let _ = writeln!(t, "reason   {}", v.reason);
    t
}

fn grid(n: usize) -> Result<Grid> {
    Grid::new(n).with_context(|| format!("invalid grid size {n}"))
}

fn load_spectral(path: &Path) -> Result<SpectralField> {
    let f = read_pfld(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(match f {
        FieldFile::Spectral(s) => s,
        FieldFile::Real(r) => transform(&r)?,
    })
}

fn load_real(path: &Path) -> Result<RealField> {
    let f = read_pfld(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(match f {
        FieldFile::Spectral(s) => inverse_transform(&s),
        FieldFile::Real(r) => r,
    })
}

fn manifest_for(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.manifest.json"))
}

pub fn execute(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Criterion { q, s, attained } => {
            let idx = RegularityIndex {
                value: s.clone(),
                attained: *attained,
            };
            let v = check_energy_criterion(&MixedNorm::new(q.clone(), idx))?;
            let mut out = Output::new(to_json(&v), verdict_table(&v));
            out.exit = verdict_exit(&v);
            Ok(out
                .param("q", ext_str(q))
                .param("s", rat_str(s))
                .param("attained", json!(attained)))
        }
        Command::Product { s1, s2, s } => {
            let res = product_admissible(&ProductQuery::new(s1.clone(), s2.clone(), s.clone()));
            let mut t = String::new();
            let _ = writeln!(t, "admissible  {}", res.admissible);
            let _ = writeln!(t, "rule        {}", res.rule);
            if !res.violated_conditions.is_empty() {
                let v: Vec<String> = res.violated_conditions.iter().map(|c| c.to_string()).collect();
                let _ = writeln!(t, "violated    {}", v.join(", "));
            }
            Ok(Output::new(to_json(&res), t)
                .param("s1", rat_str(s1))
                .param("s2", rat_str(s2))
                .param("s", rat_str(s)))
        }
        Command::Embed { s } => {
            let e = embedding_exponents(s)?;
            Ok(Output::new(to_json(&e), embed_table(&e)).param("s", rat_str(s)))
        }
        Command::Bootstrap { tau, beta } => {
            let t = bootstrap_trace(tau, beta)?;
            let mut out = Output::new(to_json(&t), bootstrap_table(&t));
            out.exit = verdict_exit(&t.verdict);
            Ok(out.param("tau", rat_str(tau)).param("beta", rat_str(beta)))
        }
        Command::BeltramiVerdict { tau, beta } => {
            let v = beltrami_verdict(tau, beta)?;
            let mut out = Output::new(to_json(&v), verdict_table(&v));
            out.exit = verdict_exit(&v);
            Ok(out.param("tau", rat_str(tau)).param("beta", rat_str(beta)))
        }
        Command::LambdaConst { p } => {
            let v = constant_lambda_verdict(p, false)?;
            let mut out = Output::new(to_json(&v), verdict_table(&v));
            out.exit = verdict_exit(&v);
            Ok(out.param("p", ext_str(p)))
        }
        Command::Norms { field, s_list } => norms(field, s_list),
        Command::Gagliardo {
            field,
            alpha,
            p,
            max_n,
        } => {
            let f = load_real(field)?;
            let value = gagliardo_seminorm(&f, alpha.to_f64(), p.to_f64(), *max_n)?;
            let mut v = json!({ "alpha": alpha, "p": p, "n": f.grid().n(), "gagliardo": value });
            let mut t = format!("gagliardo  {value:.10e}\n");
            if *p == Rat::int(2) {
                let hs = hs_seminorm(&transform(&f)?, alpha.to_f64());
                v["hs_seminorm"] = json!(hs);
                v["ratio"] = json!(value / hs);
                let _ = writeln!(t, "hs         {hs:.10e}\nratio      {:.6}", value / hs);
            }
            Ok(Output::new(v, t)
                .param("field", json!(field))
                .param("alpha", rat_str(alpha))
                .param("p", rat_str(p))
                .param("max_n", json!(max_n)))
        }
        Command::MollifyRates {
            alpha,
            n,
            eps0,
            steps,
            seed,
            out_dir,
        } => mollify_rates(alpha, *n, eps0, *steps, *seed, out_dir.as_deref()),
        Command::MakeField { kind } => make_field(kind),
        Command::Simulate { config, out_dir } => simulate(config, out_dir),
        Command::Replay { .. } => bail!("replay is dispatched separately"),
    }
}

fn embed_table(e: &EmbeddingExponents) -> String {
    let mut t = String::new();
    let rows = [
        ("p_commutator", &e.p_commutator),
        ("alpha", &e.alpha),
        ("theta", &e.theta),
        ("p", &e.p),
        ("p_dual", &e.p_dual),
        ("p_star", &e.p_star),
    ];
    let _ = writeln!(t, "s             {}", e.s);
    for (k, v) in rows {
        if let Some(v) = v {
            let _ = writeln!(t, "{k:<13} {v}");
        }
    }
    t
}

fn bootstrap_table(tr: &BootstrapTrace) -> String {
    let mut t = String::new();
    let _ = writeln!(t, "{:>4}  {:>12}  {:>12}", "n", "beta_n", "sigma_n");
    for s in &tr.steps {
        let sigma = if s.sigma_n.attained {
            format!("{}", s.sigma_n.value)
        } else {
            format!("{}-", s.sigma_n.value)
        };
        let _ = writeln!(t, "{:>4}  {:>12}  {:>12}", s.n, s.beta_n.to_string(), sigma);
    }
    let n0 = tr.n0.map_or("-".to_string(), |n| n.to_string());
    let _ = writeln!(t, "n0       {n0}");
    t + &verdict_table(&tr.verdict)
}

fn norms(path: &Path, s_list: &[Rat]) -> Result<Output> {
    let f = load_spectral(path)?;
    let l2 = l2_norm(&f);
    let rows: Vec<Value> = s_list
        .iter()
        .map(|s| {
            let x = s.to_f64();
            json!({ "s": s, "hs_norm": hs_norm(&f, x), "hs_seminorm": hs_seminorm(&f, x) })
        })
        .collect();
    let mut t = format!("n   {}\nL2  {l2:.10e}\n", f.grid().n());
    let _ = writeln!(t, "{:>8}  {:>18}  {:>18}", "s", "H^s norm", "H^s seminorm");
    for r in &rows {
        let _ = writeln!(
            t,
            "{:>8}  {:>18.10e}  {:>18.10e}",
            r["s"].as_str().unwrap_or_default(),
            r["hs_norm"].as_f64().unwrap_or(f64::NAN),
            r["hs_seminorm"].as_f64().unwrap_or(f64::NAN)
        );
    }
    let v = json!({ "n": f.grid().n(), "l2": l2, "energy": 0.5 * l2 * l2, "norms": rows });
    Ok(Output::new(v, t)
        .param("field", json!(path))
        .param("s_list", Value::Array(s_list.iter().map(rat_str).collect())))
}

fn rates_table(r: &MollifierRates) -> String {
    let mut t = String::new();
    let _ = writeln!(
        t,
        "{:>10}  {:>14}  {:>14}  {:>14}",
        "eps", "|grad f_eps|", "|R_eps|", "eps^(1-a)|grad|"
    );
    for i in 0..r.grad_report.eps_grid.len() {
        let _ = writeln!(
            t,
            "{:>10.5}  {:>14.6e}  {:>14.6e}  {:>14.6e}",
            r.grad_report.eps_grid[i],
            r.grad_report.norms[i],
            r.comm_report.norms[i],
            r.vanishing_report.values[i]
        );
    }
    let _ = writeln!(
        t,
        "gradient slope    {:.4} (bound {:.4}), R² {:.4}",
        r.grad_report.fitted_slope,
        r.alpha - 1.0,
        r.grad_report.r_squared
    );
    let _ = writeln!(
        t,
        "commutator slope  {:.4} (expected {:.4}), R² {:.4}",
        r.comm_report.fitted_slope,
        2.0 * r.alpha,
        r.comm_report.r_squared
    );
    let _ = writeln!(
        t,
        "vanishing term decreasing  {}",
        r.vanishing_report.monotone_decreasing
    );
    t
}

fn mollify_rates(
    alpha: &Rat,
    n: usize,
    eps0: &Rat,
    steps: usize,
    seed: u64,
    out_dir: Option<&Path>,
) -> Result<Output> {
    let g = grid(n)?;
    let a = alpha.to_f64();
    let eps = geometric_eps_grid(&g, eps0.to_f64(), steps)?;
    let field = synth_regularity(g, a, seed)?;
    let rates = verify_lemma_rates(&field, a, &eps)?;
    let mut out = Output::new(to_json(&rates), rates_table(&rates))
        .param("alpha", rat_str(alpha))
        .param("n", json!(n))
        .param("eps0", rat_str(eps0))
        .param("steps", json!(steps));
    out.seed = Some(seed);
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(dir)?;
        let grad = dir.join("grad_rate.csv");
        let comm = dir.join("commutator_rate.csv");
        write_rate_csv(&grad, &rates.grad_report)?;
        write_rate_csv(&comm, &rates.comm_report)?;
        let rates_json = dir.join("rates.json");
        std::fs::write(&rates_json, serde_json::to_string_pretty(&out.value)? + "\n")?;
        out.artifacts = vec![grad, comm, rates_json];
        out.manifest_beside = Some(dir.join("manifest.json"));
    }
    Ok(out)
}

fn write_field(out: &Path, field: &SpectralField, meta: FieldMeta) -> Result<Vec<PathBuf>> {
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_pfld(out, &FieldFile::Spectral(field.clone()))
        .with_context(|| format!("writing {}", out.display()))?;
    let meta = write_meta(out, &meta)?;
    Ok(vec![out.to_path_buf(), meta])
}

fn make_field(kind: &FieldKind) -> Result<Output> {
    let (field, constructor, seed, params, out) = match kind {
        FieldKind::Abc { n, a, b, c, out } => {
            let f = make_abc(grid(*n)?, a.to_f64(), b.to_f64(), c.to_f64());
            let mut p = Map::new();
            p.insert("a".into(), rat_str(a));
            p.insert("b".into(), rat_str(b));
            p.insert("c".into(), rat_str(c));
            (f, "abc", None, p, out)
        }
        FieldKind::Helical {
            n,
            shell,
            sign,
            seed,
            out,
        } => {
            let f = make_helical_beltrami(grid(*n)?, *shell, *sign, *seed)?;
            let mut p = Map::new();
            p.insert("shell".into(), json!(shell));
            p.insert("sign".into(), json!(sign));
            (f, "helical", Some(*seed), p, out)
        }
        FieldKind::Synth { n, s, seed, out } => {
            let f = synth_regularity(grid(*n)?, s.to_f64(), *seed)?;
            let mut p = Map::new();
            p.insert("s".into(), rat_str(s));
            (f, "synth", Some(*seed), p, out)
        }
    };
    let n = field.grid().n();
    let meta = FieldMeta {
        constructor: constructor.to_string(),
        seed,
        n,
        parameters: params.clone(),
    };
    let artifacts = write_field(out, &field, meta)?;
    let l2 = l2_norm(&field);
    let v = json!({
        "constructor": constructor,
        "n": n,
        "seed": seed,
        "l2": l2,
    });
    let t = format!(
        "wrote {} ({constructor}, n = {n}, L2 = {l2:.6e})\n",
        out.display()
    );
    let mut o = Output::new(v, t);
    o.parameters = params;
    o.parameters.insert("kind".into(), json!(constructor));
    o.parameters.insert("n".into(), json!(n));
    o.seed = seed;
    o.artifacts = artifacts;
    o.manifest_beside = Some(manifest_for(out));
    Ok(o)
}

fn init_value<'a>(cfg: &'a SimConfig, key: &str) -> Option<&'a str> {
    cfg.init.get(key).map(String::as_str)
}

fn init_parse<T: std::str::FromStr>(cfg: &SimConfig, key: &str, default: T) -> Result<T> {
    match init_value(cfg, key) {
        None => Ok(default),
        Some(v) => v
            .parse()
            .map_err(|_| anyhow::anyhow!("init.{key}: cannot read '{v}'")),
    }
}

fn init_real(cfg: &SimConfig, key: &str, default: f64) -> Result<f64> {
    match init_value(cfg, key) {
        None => Ok(default),
        Some(v) => parse_real(v).with_context(|| format!("init.{key}: cannot read '{v}'")),
    }
}

/// Initial velocity described by the `init.*` keys.
pub fn initial_field(cfg: &SimConfig, base: &Path) -> Result<SpectralField> {
    let g = cfg.grid()?;
    let kind = init_value(cfg, "kind").unwrap_or("abc");
    let seed: u64 = init_parse(cfg, "seed", 0)?;
    let u = match kind {
        "abc" => make_abc(
            g,
            init_real(cfg, "a", 1.0)?,
            init_real(cfg, "b", 1.0)?,
            init_real(cfg, "c", 1.0)?,
        ),
        "helical" => {
            let shell: u64 = init_parse(cfg, "shell", 1)?;
            let sign: Sign = init_value(cfg, "sign")
                .unwrap_or("+")
                .parse()
                .map_err(|e: String| anyhow::anyhow!("init.sign: {e}"))?;
            make_helical_beltrami(g, shell, sign, seed)?
        }
        "synth" => synth_regularity(g, init_real(cfg, "s", 1.0)?, seed)?,
        "random" => random_band_limited(g, init_real(cfg, "kmax", 4.0)?, seed)?,
        "file" => {
            let p = init_value(cfg, "path").context("init.kind = file needs init.path")?;
            load_spectral(&base.join(p))?
        }
        other => bail!("unknown init.kind '{other}'"),
    };
    let amp = init_real(cfg, "amplitude", 1.0)?;
    Ok(if amp == 1.0 { u } else { u.scaled(amp) })
}

fn simulate(config: &Path, out_dir: &Path) -> Result<Output> {
    let text = std::fs::read_to_string(config)
        .with_context(|| format!("reading {}", config.display()))?;
    let cfg = SimConfig::parse(&text)?;
    let base = config.parent().unwrap_or(Path::new("."));
    let u0 = initial_field(&cfg, base)?;
    std::fs::create_dir_all(out_dir)?;
    let mut rows = Vec::new();
    let final_state = run_with(&cfg, &u0, |r| {
        rows.push(r.clone());
        Ok(())
    })?;
    let csv = out_dir.join("diagnostics.csv");
    let summary_path = out_dir.join("summary.json");
    let initial = out_dir.join("initial.pfld");
    let fin = out_dir.join("final.pfld");
    write_csv(&csv, &cfg, &rows)?;
    let summary = SimSummary::from_rows(&cfg, &rows).context("run produced no rows")?;
    write_summary(&summary_path, &summary)?;
    write_pfld(&initial, &FieldFile::Spectral(u0))?;
    write_pfld(&fin, &FieldFile::Spectral(final_state.u))?;

    let mut t = String::new();
    let _ = writeln!(t, "steps              {}", summary.steps);
    let _ = writeln!(t, "t_final            {}", summary.t_final);
    let _ = writeln!(t, "energy             {:.12e} -> {:.12e}", summary.energy_initial, summary.energy_final);
    let _ = writeln!(t, "max energy drift   {:.3e}", summary.max_energy_drift);
    let _ = writeln!(t, "max helicity drift {:.3e}", summary.max_helicity_drift);
    let _ = writeln!(t, "max beltrami res   {:.3e}", summary.max_beltrami_residual);
    let _ = writeln!(t, "max lamb res       {:.3e}", summary.max_lamb_residual);
    let _ = writeln!(t, "max div res        {:.3e}", summary.max_div_residual);
    let _ = writeln!(t, "outputs in         {}", out_dir.display());

    let mut out = Output::new(to_json(&summary), t);
    out.parameters = match to_json(&cfg) {
        Value::Object(m) => m,
        _ => Map::new(),
    };
    out.parameters.insert("config".into(), json!(config));
    out.seed = init_value(&cfg, "seed").and_then(|s| s.parse().ok());
    out.artifacts = vec![csv, summary_path, initial, fin];
    out.manifest_beside = Some(out_dir.join("manifest.json"));
    Ok(out)
}
