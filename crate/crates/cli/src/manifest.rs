//! Run manifests and replay.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::cli::{Cli, Command};
use crate::commands::{execute, Output};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    /// Arguments after the program name, without `--manifest`.
    pub argv: Vec<String>,
    /// Working directory that relative paths in `argv` refer to.
    pub cwd: PathBuf,
    /// Rationals as `"num/den"`.
    pub parameters: Map<String, Value>,
    pub seed: Option<u64>,
    pub artifacts: Vec<PathBuf>,
    pub tool_version: String,
    pub exit_code: i32,
    pub result: Value,
}

/// Removes `--manifest <path>` and `--manifest=<path>`.
pub fn strip_manifest_flag(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--manifest" {
            skip = true;
            continue;
        }
        if a.starts_with("--manifest=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

pub fn subcommand_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Criterion { .. } => "criterion",
        Command::Product { .. } => "product",
        Command::Embed { .. } => "embed",
        Command::Bootstrap { .. } => "bootstrap",
        Command::BeltramiVerdict { .. } => "beltrami-verdict",
        Command::LambdaConst { .. } => "lambda-const",
        Command::Norms { .. } => "norms",
        Command::Gagliardo { .. } => "gagliardo",
        Command::MollifyRates { .. } => "mollify-rates",
        Command::MakeField { .. } => "make-field",
        Command::Simulate { .. } => "simulate",
        Command::Replay { .. } => "replay",
    }
}

impl RunManifest {
    pub fn new(cmd: &Command, argv: Vec<String>, out: &Output) -> Result<Self> {
        Ok(RunManifest {
            subcommand: subcommand_name(cmd).to_string(),
            argv,
            cwd: std::env::current_dir()?,
            parameters: out.parameters.clone(),
            seed: out.seed,
            artifacts: out.artifacts.clone(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            exit_code: out.exit,
            result: out.value.clone(),
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, serde_json::to_string_pretty(self)? + "\n")
            .with_context(|| format!("writing {}", path.display()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}

const OUTPUT_FLAGS: [&str; 2] = ["--out", "--out-dir"];
const INPUT_FLAGS: [&str; 2] = ["--field", "--config"];

/// Sends outputs into `scratch` and anchors relative inputs at `cwd`.
fn rewrite_args(argv: &[String], cwd: &Path, scratch: &Path) -> Vec<String> {
    // files land directly in `scratch`, where artifacts are looked up by name
    let redirect = |flag: &str, v: &str| {
        let p = if flag == "--out-dir" {
            scratch.to_path_buf()
        } else {
            scratch.join(Path::new(v).file_name().unwrap_or_default())
        };
        p.to_string_lossy().into_owned()
    };
    let anchor = |v: &str| cwd.join(v).to_string_lossy().into_owned();
    let mut out = Vec::with_capacity(argv.len());
    let mut pending: Option<&str> = None;
    for a in argv {
        if let Some(flag) = pending.take() {
            out.push(if OUTPUT_FLAGS.contains(&flag) {
                redirect(flag, a)
            } else {
                anchor(a)
            });
            continue;
        }
        if let Some((flag, v)) = a.split_once('=') {
            if OUTPUT_FLAGS.contains(&flag) {
                out.push(format!("{flag}={}", redirect(flag, v)));
                continue;
            }
            if INPUT_FLAGS.contains(&flag) {
                out.push(format!("{flag}={}", anchor(v)));
                continue;
            }
        }
        if let Some(f) = OUTPUT_FLAGS.iter().chain(&INPUT_FLAGS).find(|f| **f == a) {
            pending = Some(f);
        }
        out.push(a.clone());
    }
    out
}

/// Compares JSON values; numbers within relative tolerance `rtol`.
fn values_match(a: &Value, b: &Value, rtol: f64, at: &str, diffs: &mut Vec<String>) {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap_or(f64::NAN), y.as_f64().unwrap_or(f64::NAN));
            if !numbers_match(x, y, rtol) {
                diffs.push(format!("{at}: {x} vs {y}"));
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (i, (p, q)) in x.iter().zip(y).enumerate() {
                values_match(p, q, rtol, &format!("{at}[{i}]"), diffs);
            }
        }
        (Value::Object(x), Value::Object(y)) if x.len() == y.len() => {
            for (k, p) in x {
                match y.get(k) {
                    Some(q) => values_match(p, q, rtol, &format!("{at}.{k}"), diffs),
                    None => diffs.push(format!("{at}.{k}: missing")),
                }
            }
        }
        _ if a == b => {}
        _ => diffs.push(format!("{at}: {a} vs {b}")),
    }
}

fn numbers_match(x: f64, y: f64, rtol: f64) -> bool {
    x == y || (x - y).abs() <= rtol * x.abs().max(y.abs())
}

/// Byte-identical, or the same tokens with numbers within `rtol`.
fn files_match(a: &Path, b: &Path, rtol: f64) -> Result<bool> {
    let (x, y) = (std::fs::read(a)?, std::fs::read(b)?);
    if x == y {
        return Ok(true);
    }
    if a.extension().is_some_and(|e| e == "pfld") {
        if x.len() != y.len() || x.len() < 14 || x[..14] != y[..14] {
            return Ok(false);
        }
        let f = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8 bytes"));
        return Ok(x[14..]
            .chunks(8)
            .zip(y[14..].chunks(8))
            .all(|(p, q)| numbers_match(f(p), f(q), rtol)));
    }
    let (x, y) = (String::from_utf8_lossy(&x), String::from_utf8_lossy(&y));
    let split = |s: &str| -> Vec<String> {
        s.split(|c: char| c.is_whitespace() || ",:[]{}\"".contains(c))
            .filter(|t| !t.is_empty())
            .map(String::from)
            .collect()
    };
    let (tx, ty) = (split(&x), split(&y));
    Ok(tx.len() == ty.len()
        && tx.iter().zip(&ty).all(|(p, q)| {
            p == q
                || matches!((p.parse::<f64>(), q.parse::<f64>()),
                    (Ok(u), Ok(v)) if numbers_match(u, v, rtol))
        }))
}

pub struct ReplayReport {
    pub matches: bool,
    pub differences: Vec<String>,
    pub compared_artifacts: usize,
}

pub fn replay(path: &Path, rtol: f64) -> Result<ReplayReport> {
    let m = RunManifest::read(path)?;
    let scratch = std::env::temp_dir().join(format!(
        "onsager-replay-{}-{}",
        std::process::id(),
        std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos())
            .unwrap_or(0)
    ));
    std::fs::create_dir_all(&scratch)?;
    let result = replay_into(&m, &scratch, rtol);
    let _ = std::fs::remove_dir_all(&scratch);
    result
}

fn replay_into(m: &RunManifest, scratch: &Path, rtol: f64) -> Result<ReplayReport> {
    let argv = rewrite_args(&m.argv, &m.cwd, scratch);
    let mut full: Vec<OsString> = vec!["onsager".into()];
    full.extend(argv.iter().map(OsString::from));
    let cli = Cli::try_parse_from(full).context("manifest arguments no longer parse")?;
    if matches!(cli.command, Command::Replay { .. }) {
        bail!("a replay manifest cannot be replayed");
    }
    let out = execute(&cli.command)?;
    let mut diffs = Vec::new();
    if out.exit != m.exit_code {
        diffs.push(format!("exit code {} vs {}", m.exit_code, out.exit));
    }
    values_match(&m.result, &out.value, rtol, "result", &mut diffs);
    let mut compared = 0;
    for a in &m.artifacts {
        let orig = if a.is_absolute() { a.clone() } else { m.cwd.join(a) };
        let Some(name) = a.file_name() else { continue };
        let new = scratch.join(name);
        if !orig.exists() {
            diffs.push(format!("{}: original missing", a.display()));
            continue;
        }
        if !new.exists() {
            diffs.push(format!("{}: not produced on replay", a.display()));
            continue;
        }
        compared += 1;
        if !files_match(&orig, &new, rtol)? {
            diffs.push(format!("{}: contents differ", a.display()));
        }
    }
    Ok(ReplayReport {
        matches: diffs.is_empty(),
        differences: diffs,
        compared_artifacts: compared,
    })
}
