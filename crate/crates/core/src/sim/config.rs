use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::SimError;
use crate::mollify::check_eps;
use crate::spectral::Grid;
use crate::Rat;

/// Run parameters, read from a flat `key = value` file.
///
/// ```text
/// # ABC flow, inviscid
/// n = 32
/// dt = 1e-3
/// t_end = 1
/// nu = 0
/// dealias = true
/// s_list = 0, 1/2, 1
/// eps_list = 0.8, 0.4
/// output_every = 100
/// init.kind = abc
/// ```
///
/// `n`, `dt` and `t_end` are required. Numbers may be written as decimals,
/// in exponent form or as fractions. Keys under `init.` are not interpreted
/// here and are kept for whoever builds the initial field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimConfig {
    pub n: usize,
    pub dt: f64,
    pub t_end: f64,
    pub nu: f64,
    pub dealias: bool,
    pub s_list: Vec<f64>,
    pub eps_list: Vec<f64>,
    pub output_every: usize,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub init: BTreeMap<String, String>,
}

fn bad(msg: impl Into<String>) -> SimError {
    SimError::Config(msg.into())
}

/// A decimal, exponent-form or fractional number.
pub fn parse_real(s: &str) -> Option<f64> {
    let s = s.trim();
    match Rat::from_str(s) {
        Ok(r) => Some(r.to_f64()),
        Err(_) => s.parse::<f64>().ok(),
    }
}

fn parse_list(key: &str, v: &str) -> Result<Vec<f64>, SimError> {
    v.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_real(t).ok_or_else(|| bad(format!("{key}: cannot read '{t}'"))))
        .collect()
}

impl SimConfig {
    pub fn new(n: usize, dt: f64, t_end: f64) -> Self {
        SimConfig {
            n,
            dt,
            t_end,
            nu: 0.0,
            dealias: true,
            s_list: Vec::new(),
            eps_list: Vec::new(),
            output_every: 1,
            init: BTreeMap::new(),
        }
    }

    pub fn grid(&self) -> Result<Grid, SimError> {
        Ok(Grid::new(self.n)?)
    }

    /// Number of steps, `t_end/dt` rounded to the nearest integer.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let grid = self.grid()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(bad(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(bad(format!("t_end must be positive, got {}", self.t_end)));
        }
        let steps = self.t_end / self.dt;
        if (steps - steps.round()).abs() > 1e-9 * steps.max(1.0) {
            return Err(bad(format!(
                "t_end = {} is not a whole number of steps of {}",
                self.t_end, self.dt
            )));
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(bad(format!("nu must be >= 0, got {}", self.nu)));
        }
        if self.output_every == 0 {
            return Err(bad("output_every must be >= 1"));
        }
        if let Some(s) = self.s_list.iter().find(|s| !s.is_finite()) {
            return Err(bad(format!("bad entry {s} in s_list")));
        }
        for &e in &self.eps_list {
            check_eps(&grid, e).map_err(|err| bad(format!("eps_list: {err}")))?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<SimConfig, SimError> {
        let mut raw: BTreeMap<String, String> = BTreeMap::new();
        let mut init = BTreeMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key = value", lineno + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if let Some(rest) = k.strip_prefix("init.") {
                init.insert(rest.to_string(), v);
                continue;
            }
            if raw.insert(k.clone(), v).is_some() {
                return Err(bad(format!("line {}: duplicate key {k}", lineno + 1)));
            }
        }
        let take = |raw: &mut BTreeMap<String, String>, key: &str| raw.remove(key);
        let real = |key: &str, v: String| {
            parse_real(&v).ok_or_else(|| bad(format!("{key}: cannot read '{v}'")))
        };
        let count = |key: &str, v: String| {
            v.parse::<usize>()
                .map_err(|_| bad(format!("{key}: expected a non-negative integer, got '{v}'")))
        };
        let required = |raw: &mut BTreeMap<String, String>, key: &str| {
            take(raw, key).ok_or_else(|| bad(format!("missing required key {key}")))
        };

        let n = count("n", required(&mut raw, "n")?)?;
        let dt = real("dt", required(&mut raw, "dt")?)?;
        let t_end = real("t_end", required(&mut raw, "t_end")?)?;
        let mut cfg = SimConfig::new(n, dt, t_end);
        if let Some(v) = take(&mut raw, "nu") {
            cfg.nu = real("nu", v)?;
        }
        if let Some(v) = take(&mut raw, "dealias") {
            cfg.dealias = match v.as_str() {
                "true" | "1" | "yes" => true,
                "false" | "0" | "no" => false,
                _ => return Err(bad(format!("dealias: expected true or false, got '{v}'"))),
            };
        }
        if let Some(v) = take(&mut raw, "s_list") {
            cfg.s_list = parse_list("s_list", &v)?;
        }
        if let Some(v) = take(&mut raw, "eps_list") {
            cfg.eps_list = parse_list("eps_list", &v)?;
        }
        if let Some(v) = take(&mut raw, "output_every") {
            cfg.output_every = count("output_every", v)?;
        }
        if let Some(k) = raw.keys().next() {
            return Err(bad(format!("unknown key {k}")));
        }
        cfg.init = init;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Text form accepted by [`SimConfig::parse`].
    pub fn to_text(&self) -> String {
        let list = |v: &[f64]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut s = String::new();
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "dt = {:e}", self.dt);
        let _ = writeln!(s, "t_end = {}", self.t_end);
        let _ = writeln!(s, "nu = {}", self.nu);
        let _ = writeln!(s, "dealias = {}", self.dealias);
        let _ = writeln!(s, "s_list = {}", list(&self.s_list));
        let _ = writeln!(s, "eps_list = {}", list(&self.eps_list));
        let _ = writeln!(s, "output_every = {}", self.output_every);
        for (k, v) in &self.init {
            let _ = writeln!(s, "init.{k} = {v}");
        }
        s
    }
}
