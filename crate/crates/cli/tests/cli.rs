use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn onsager(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onsager"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&o.stdout));
    })
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stderr).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&o.stderr));
    })
}

fn here() -> tempfile::TempDir {
    tempfile::tempdir().unwrap()
}

#[test]
fn criterion_verdicts_and_exit_codes() {
    let d = here();
    let o = onsager(d.path(), &["--json", "criterion", "--q", "3", "--s", "5/6", "--attained"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["outcome"], "conserves");
    assert_eq!(v["witness"], "5/6");

    let o = onsager(d.path(), &["--json", "criterion", "--q", "1", "--s", "1/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json_out(&o)["outcome"], "no_verdict");

    let o = onsager(d.path(), &["--json", "criterion", "--q", "inf", "--s", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["outcome"], "conserves");
}

#[test]
fn bootstrap_reports_first_conserving_step() {
    let d = here();
    let o = onsager(d.path(), &["--json", "bootstrap", "--tau", "3/4", "--beta", "25"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    assert_eq!(v["n0"], 3);
    assert_eq!(v["verdict"]["outcome"], "conserves");

    let o = onsager(d.path(), &["bootstrap", "--tau", "3/4", "--beta", "25"]);
    let table = String::from_utf8(o.stdout).unwrap();
    assert!(table.contains("n0       3"), "{table}");
    assert!(table.contains("conserves"));
}

#[test]
fn exact_rationals_in_json() {
    let d = here();
    let o = onsager(d.path(), &["--json", "embed", "--s=-1/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["p_star"], "3/2");
    let o = onsager(d.path(), &["--json", "embed", "--s", "0.25"]);
    assert_eq!(json_out(&o)["s"], "1/4");
}

#[test]
fn usage_errors_exit_one_with_json() {
    let d = here();
    for args in [
        &["criterion", "--q", "x", "--s", "1"][..],
        &["no-such-command"][..],
        &["bootstrap", "--tau", "1"][..],
        &[][..],
    ] {
        let o = onsager(d.path(), args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert_eq!(stderr_json(&o)["error"]["kind"], "usage", "{args:?}");
    }
    let o = onsager(d.path(), &["--help"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn domain_errors_are_classified() {
    let d = here();
    let o = onsager(d.path(), &["criterion", "--q", "1/2", "--s", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr_json(&o)["error"]["kind"], "exponent");

    let o = onsager(d.path(), &["norms", "--field", "missing.pfld", "--s-list", "1"]);
    assert_eq!(o.status.code(), Some(1));
    let kind = stderr_json(&o)["error"]["kind"].clone();
    assert!(kind == "io" || kind == "spectral", "{kind}");

    std::fs::write(
        d.path().join("fast.cfg"),
        "n = 16\ndt = 0.5\nt_end = 1\ninit.kind = abc\ninit.amplitude = 10\n",
    )
    .unwrap();
    let o = onsager(d.path(), &["simulate", "--config", "fast.cfg", "--out-dir", "r"]);
    assert_eq!(o.status.code(), Some(1));
    let e = stderr_json(&o);
    assert_eq!(e["error"]["kind"], "simulation");
    assert!(e["error"]["message"].as_str().unwrap().contains("CFL"));
}

#[test]
fn field_round_trip_and_replay() {
    let d = here();
    let o = onsager(
        d.path(),
        &["make-field", "abc", "--n", "16", "--a", "1", "--b", "1/2", "--out", "f/abc.pfld"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["abc.pfld", "abc.meta.json", "abc.manifest.json"] {
        assert!(d.path().join("f").join(f).exists(), "{f}");
    }

    let o = onsager(
        d.path(),
        &["--json", "norms", "--field", "f/abc.pfld", "--s-list", "0,1", "--manifest", "n.json"],
    );
    assert_eq!(o.status.code(), Some(0));
    let v = json_out(&o);
    // each component holds two of A², B², C², each averaging to ½:
    // E = ½∫|u|² = (2π)³(A² + B² + C²)/2
    let vol = (2.0 * std::f64::consts::PI).powi(3);
    let energy = vol * (1.0 + 0.25 + 1.0) / 2.0;
    assert!((v["energy"].as_f64().unwrap() - energy).abs() < 1e-10 * energy);
    // on a single shell the H¹ seminorm equals the L² norm
    let l2 = v["l2"].as_f64().unwrap();
    let h1 = v["norms"][1]["hs_seminorm"].as_f64().unwrap();
    assert!((h1 - l2).abs() < 1e-10 * l2);

    let m: Value =
        serde_json::from_str(&std::fs::read_to_string(d.path().join("n.json")).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "norms");
    assert_eq!(m["parameters"]["s_list"][0], "0/1");
    assert_eq!(m["exit_code"], 0);
    assert!(!m["argv"].as_array().unwrap().iter().any(|a| a == "--manifest"));

    for manifest in ["f/abc.manifest.json", "n.json"] {
        let o = onsager(d.path(), &["replay", manifest]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    }

    // a tampered artifact is detected
    let pfld = d.path().join("f/abc.pfld");
    let mut bytes = std::fs::read(&pfld).unwrap();
    let last = bytes.len() - 1;
    bytes[last] ^= 0x40;
    std::fs::write(&pfld, bytes).unwrap();
    let o = onsager(d.path(), &["--json", "replay", "f/abc.manifest.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_out(&o)["matches"], false);
}

#[test]
fn simulate_writes_outputs_and_replays() {
    let d = here();
    std::fs::write(
        d.path().join("run.cfg"),
        "# helical shell, exact steady state\n\
         n = 16\ndt = 1e-2\nt_end = 0.05\ns_list = 0, 1/2\neps_list = 0.8\n\
         init.kind = helical\ninit.shell = 2\ninit.sign = -\ninit.seed = 4\n",
    )
    .unwrap();
    let o = onsager(d.path(), &["--json", "simulate", "--config", "run.cfg", "--out-dir", "out"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = json_out(&o);
    assert_eq!(s["steps"], 5);
    assert!(s["max_energy_drift"].as_f64().unwrap() < 1e-12);
    assert!(s["max_beltrami_residual"].as_f64().unwrap() < 1e-10);

    let csv = std::fs::read_to_string(d.path().join("out/diagnostics.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,E,H0,H0.5,flux0.8,beltrami_res,lamb_res,div_res"
    );
    assert_eq!(lines.count(), 6);
    for f in ["summary.json", "initial.pfld", "final.pfld", "manifest.json"] {
        assert!(d.path().join("out").join(f).exists(), "{f}");
    }
    let o = onsager(d.path(), &["replay", "out/manifest.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn mollify_rates_tables() {
    let d = here();
    let o = onsager(
        d.path(),
        &["--json", "mollify-rates", "--alpha", "1/2", "--n", "32", "--out-dir", "rates"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    let slope = v["grad_report"]["fitted_slope"].as_f64().unwrap();
    assert!(slope < 0.0);
    for f in ["grad_rate.csv", "commutator_rate.csv", "rates.json", "manifest.json"] {
        assert!(d.path().join("rates").join(f).exists(), "{f}");
    }
    let m: Value = serde_json::from_str(
        &std::fs::read_to_string(d.path().join("rates/manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(m["seed"], 1);
    assert_eq!(m["parameters"]["alpha"], "1/2");
}
