use std::io::Write;
use std::path::Path;

use serde::Serialize;

use super::{check_eps, CommutatorEngine, MollifyError};
use crate::spectral::{hs_seminorm, Grid, SpectralField};

/// Least-squares power law `value ≈ C·ε^slope`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    pub eps_grid: Vec<f64>,
    pub norms: Vec<f64>,
    pub fitted_slope: f64,
    pub r_squared: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_slope: Option<f64>,
}

impl RateReport {
    pub fn with_expected(mut self, slope: f64) -> Self {
        self.expected_slope = Some(slope);
        self
    }

    /// Slopes between consecutive grid points.
    pub fn local_slopes(&self) -> Vec<f64> {
        self.eps_grid
            .windows(2)
            .zip(self.norms.windows(2))
            .map(|(e, v)| (v[1] / v[0]).ln() / (e[1] / e[0]).ln())
            .collect()
    }

    /// Decades of `ε` spanned by the grid.
    pub fn decades(&self) -> f64 {
        match (self.eps_grid.first(), self.eps_grid.last()) {
            (Some(a), Some(b)) => (a / b).log10(),
            _ => 0.0,
        }
    }
}

fn check_grid(eps: &[f64]) -> Result<(), MollifyError> {
    if eps.iter().any(|&e| !(e > 0.0)) || eps.windows(2).any(|w| w[1] >= w[0]) {
        return Err(MollifyError::NotDecreasing);
    }
    Ok(())
}

/// Ordinary least squares on `(ln ε, ln value)`.
pub fn rate_fit(eps: &[f64], values: &[f64]) -> Result<RateReport, MollifyError> {
    if eps.len() != values.len() {
        return Err(MollifyError::InvalidArgument(format!(
            "{} scales but {} values",
            eps.len(),
            values.len()
        )));
    }
    if eps.len() < 4 {
        return Err(MollifyError::TooFewPoints(eps.len()));
    }
    check_grid(eps)?;
    if let Some((index, &value)) = values
        .iter()
        .enumerate()
        .find(|(_, v)| !(**v > 0.0 && v.is_finite()))
    {
        return Err(MollifyError::NonPositive { index, value });
    }
    let x: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let y: Vec<f64> = values.iter().map(|v| v.ln()).collect();
    let m = x.len() as f64;
    let xm = x.iter().sum::<f64>() / m;
    let ym = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - xm).powi(2)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - xm) * (b - ym)).sum();
    let syy: f64 = y.iter().map(|b| (b - ym).powi(2)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    Ok(RateReport {
        eps_grid: eps.to_vec(),
        norms: values.to_vec(),
        fitted_slope: slope,
        r_squared,
        expected_slope: None,
    })
}

/// `ε_j = 2^{-j/2} ε₀` for `j = 0..=steps`, stopping at the resolution floor.
pub fn geometric_eps_grid(grid: &Grid, eps0: f64, steps: usize) -> Result<Vec<f64>, MollifyError> {
    check_eps(grid, eps0)?;
    Ok((0..=steps)
        .map(|j| eps0 * 2f64.powf(-(j as f64) / 2.0))
        .take_while(|&e| check_eps(grid, e).is_ok())
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VanishingReport {
    pub eps_grid: Vec<f64>,
    /// `ε^{1−α}‖∇f_ε‖_{L²}`.
    pub values: Vec<f64>,
    pub monotone_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MollifierRates {
    pub alpha: f64,
    /// `‖∇f_ε‖_{L²}`; the bound allows growth no faster than `ε^{α−1}`.
    pub grad_report: RateReport,
    /// `‖(f⊗f)_ε − f_ε⊗f_ε‖_{L²}`, expected to scale as `ε^{2α}`.
    pub comm_report: RateReport,
    pub vanishing_report: VanishingReport,
}

impl MollifierRates {
    pub fn grad_ok(&self, tol: f64) -> bool {
        self.grad_report.fitted_slope >= self.alpha - 1.0 - tol
    }

    pub fn comm_ok(&self, tol: f64) -> bool {
        (self.comm_report.fitted_slope - 2.0 * self.alpha).abs() <= tol
    }
}

/// Gradient growth, commutator decay and the vanishing of
/// `ε^{1−α}‖∇f_ε‖` for a field of regularity `α`.
pub fn verify_lemma_rates(
    f: &SpectralField,
    alpha: f64,
    eps_grid: &[f64],
) -> Result<MollifierRates, MollifyError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(MollifyError::InvalidArgument(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    check_grid(eps_grid)?;
    let engine = CommutatorEngine::new(f)?;
    let mut grad = Vec::with_capacity(eps_grid.len());
    let mut comm = Vec::with_capacity(eps_grid.len());
    for &eps in eps_grid {
        let (r, fe) = engine.at_with_mollified(eps)?;
        comm.push(r.l2_norm());
        grad.push(hs_seminorm(&fe, 1.0));
    }
    let values: Vec<f64> = eps_grid
        .iter()
        .zip(&grad)
        .map(|(e, g)| e.powf(1.0 - alpha) * g)
        .collect();
    let monotone_decreasing = values.windows(2).all(|w| w[1] < w[0]);
    Ok(MollifierRates {
        alpha,
        grad_report: rate_fit(eps_grid, &grad)?.with_expected(alpha - 1.0),
        comm_report: rate_fit(eps_grid, &comm)?.with_expected(2.0 * alpha),
        vanishing_report: VanishingReport {
            eps_grid: eps_grid.to_vec(),
            values,
            monotone_decreasing,
        },
    })
}

/// `eps,value` rows for plotting.
pub fn write_rate_csv(path: &Path, report: &RateReport) -> Result<(), MollifyError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "eps,value")?;
    for (e, v) in report.eps_grid.iter().zip(&report.norms) {
        writeln!(w, "{e:.17e},{v:.17e}")?;
    }
    w.flush()?;
    Ok(())
}
