//! Friedrichs mollification on the torus and empirical rate estimates.
//!
//! `f_ε = ρ_ε * f` with `ρ_ε(x) = ε⁻³ρ(x/ε)` and the standard bump
//! `ρ(x) = c·exp(−1/(1−|x|²))` on the unit ball. On the torus this is the
//! Fourier multiplier `ρ̂(ε|k|)`, where `ρ̂` is the radial transform of the
//! bump, evaluated by composite Gauss–Legendre quadrature.

mod commutator;
mod quadrature;
mod rates;

pub use commutator::{
    commutator, commutator_spectrum, CommutatorEngine, CommutatorSpectrum, ENTRIES,
};
pub use quadrature::{composite, gauss_legendre};
pub use rates::{
    geometric_eps_grid, rate_fit, verify_lemma_rates, write_rate_csv, MollifierRates, RateReport,
    VanishingReport,
};

use thiserror::Error;

use crate::spectral::{Grid, SpectralError, SpectralField};

#[derive(Debug, Error)]
pub enum MollifyError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error("eps = {eps} outside (0, 1]")]
    EpsOutOfRange { eps: f64 },
    #[error("eps = {eps} is below the resolution floor {floor:.4} of this grid")]
    BelowResolution { eps: f64, floor: f64 },
    #[error("rate fit needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("rate fit needs positive values; entry {index} is {value}")]
    NonPositive { index: usize, value: f64 },
    #[error("eps grid must be strictly decreasing and positive")]
    NotDecreasing,
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Smallest accepted `ε` in units of the lattice spacing `2π/n`.
pub const RESOLUTION_GUARD_CELLS: f64 = 0.5;

pub fn resolution_floor(grid: &Grid) -> f64 {
    RESOLUTION_GUARD_CELLS * grid.spacing()
}

pub fn check_eps(grid: &Grid, eps: f64) -> Result<(), MollifyError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(MollifyError::EpsOutOfRange { eps });
    }
    let floor = resolution_floor(grid);
    if eps < floor {
        return Err(MollifyError::BelowResolution { eps, floor });
    }
    Ok(())
}

/// Target accuracy of the radial quadrature.
const RADIAL_TOL: f64 = 1e-12;
const RADIAL_ORDER: usize = 16;

fn bump(r: f64) -> f64 {
    if r < 1.0 {
        (-1.0 / (1.0 - r * r)).exp()
    } else {
        0.0
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// Unit-mass radial bump. Quadrature nodes are chosen once, so evaluation
/// of `ρ̂` at many frequencies is a dot product.
#[derive(Debug, Clone)]
pub struct Kernel {
    eps: f64,
    /// `ρ(r) r² w` per node, scaled to sum to one.
    weights: Vec<f64>,
    nodes: Vec<f64>,
    /// `1/∫ρ` for the unscaled bump.
    density_scale: f64,
}

impl Kernel {
    /// Kernel at scale `eps`, with a rule accurate for `|ξ| <= xi_max`.
    pub fn new(eps: f64, xi_max: f64) -> Result<Kernel, MollifyError> {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(MollifyError::EpsOutOfRange { eps });
        }
        let eval = |panels: usize, xi: f64| {
            let (x, w) = composite(0.0, 1.0, panels, RADIAL_ORDER);
            let mass: f64 = x.iter().zip(&w).map(|(r, w)| w * bump(*r) * r * r).sum();
            let v: f64 = x
                .iter()
                .zip(&w)
                .map(|(r, w)| w * bump(*r) * r * r * sinc(xi * r))
                .sum();
            v / mass
        };
        let probe = (eps * xi_max).max(1.0);
        let mut panels = 4;
        loop {
            let a = eval(panels, probe);
            let b = eval(2 * panels, probe);
            panels *= 2;
            if (a - b).abs() < RADIAL_TOL || panels > 4096 {
                break;
            }
        }
        let (nodes, w) = composite(0.0, 1.0, panels, RADIAL_ORDER);
        let mass: f64 = nodes
            .iter()
            .zip(&w)
            .map(|(r, w)| w * bump(*r) * r * r)
            .sum();
        let weights = nodes
            .iter()
            .zip(&w)
            .map(|(r, w)| w * bump(*r) * r * r / mass)
            .collect();
        Ok(Kernel {
            eps,
            weights,
            nodes,
            density_scale: 1.0 / (4.0 * std::f64::consts::PI * mass),
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// `ρ̂(ε|k|)` for `|k| = wavenumber`.
    pub fn multiplier(&self, wavenumber: f64) -> f64 {
        let xi = self.eps * wavenumber;
        if xi == 0.0 {
            // unit mass, exactly
            return 1.0;
        }
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(r, w)| w * sinc(xi * r))
            .sum()
    }

    /// `ρ̂(ε√q)` for every integer `q = |k|²` that occurs on `grid`,
    /// indexed by `q`.
    pub fn table(&self, grid: &Grid) -> Vec<f64> {
        let k2 = grid.k2_table();
        let max = k2.iter().copied().max().unwrap_or(0) as usize;
        let mut present = vec![false; max + 1];
        for &q in &k2 {
            present[q as usize] = true;
        }
        present
            .iter()
            .enumerate()
            .map(|(q, &p)| {
                if p {
                    self.multiplier((q as f64).sqrt())
                } else {
                    0.0
                }
            })
            .collect()
    }

    /// Physical-space profile `ρ_ε(x)` at distance `r` from the origin.
    pub fn density(&self, r: f64) -> f64 {
        self.density_scale * bump(r / self.eps) / self.eps.powi(3)
    }
}

fn max_wavenumber(grid: &Grid) -> f64 {
    (3.0f64).sqrt() * (grid.n() / 2) as f64
}

/// `f_ε`, the multiplier `ρ̂(ε|k|)` applied to every mode.
pub fn mollify(f: &SpectralField, eps: f64) -> Result<SpectralField, MollifyError> {
    let grid = f.grid();
    check_eps(&grid, eps)?;
    let kernel = Kernel::new(eps, max_wavenumber(&grid))?;
    Ok(mollify_with(f, &kernel))
}

pub(crate) fn mollify_with(f: &SpectralField, kernel: &Kernel) -> SpectralField {
    let grid = f.grid();
    let table = kernel.table(&grid);
    let flag = f.is_flagged_solenoidal();
    f.apply_multiplier(&grid.k2_table(), |q| table[q as usize])
        .with_flag(flag)
}
