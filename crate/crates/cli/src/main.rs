mod cli;
mod commands;
mod manifest;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use onsager::mollify::MollifyError;
use onsager::sim::SimError;
use onsager::spectral::SpectralError;
use onsager::ExponentError;

use cli::{Cli, Command};
use manifest::{replay, strip_manifest_flag, RunManifest};

fn main() {
    std::process::exit(run(std::env::args_os().collect()));
}

fn report(kind: &str, message: &str) {
    eprintln!("{}", json!({ "error": { "kind": kind, "message": message } }));
}

fn error_kind(e: &anyhow::Error) -> &'static str {
    for cause in e.chain() {
        if cause.is::<ExponentError>() {
            return "exponent";
        }
        if cause.is::<SpectralError>() {
            return "spectral";
        }
        if cause.is::<MollifyError>() {
            return "mollify";
        }
        if cause.is::<SimError>() {
            return "simulation";
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
    }
    "error"
}

fn run(args: Vec<OsString>) -> i32 {
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return 0;
            }
            report("usage", e.to_string().trim_end());
            return 1;
        }
    };
    match dispatch(&cli, &args) {
        Ok(code) => code,
        Err(e) => {
            report(error_kind(&e), &format!("{e:#}"));
            1
        }
    }
}

fn dispatch(cli: &Cli, args: &[OsString]) -> anyhow::Result<i32> {
    if let Command::Replay { path, rtol } = &cli.command {
        let r = replay(path, *rtol)?;
        if cli.json {
            let v = json!({
                "matches": r.matches,
                "compared_artifacts": r.compared_artifacts,
                "differences": r.differences,
            });
            println!("{}", serde_json::to_string_pretty(&v)?);
        } else {
            println!(
                "{} ({} artifacts compared)",
                if r.matches { "replay matches" } else { "replay differs" },
                r.compared_artifacts
            );
            for d in &r.differences {
                println!("  {d}");
            }
        }
        return Ok(if r.matches { 0 } else { 1 });
    }

    let out = commands::execute(&cli.command)?;
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&out.value)?);
    } else {
        print!("{}", out.table);
    }
    if let Some(path) = cli.manifest.as_ref().or(out.manifest_beside.as_ref()) {
        let argv: Vec<String> = args
            .iter()
            .skip(1)
            .map(|a| a.to_string_lossy().into_owned())
            .collect();
        RunManifest::new(&cli.command, strip_manifest_flag(&argv), &out)?.write(path)?;
    }
    Ok(out.exit)
}
