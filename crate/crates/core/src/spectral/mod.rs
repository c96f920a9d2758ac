//! Periodic vector fields on the 2π-torus in Fourier representation.
//!
//! Convention: `u(x) = Σ_k û(k) e^{ik·x}`, so `‖u‖²_{L²} = (2π)³ Σ_k |û(k)|²`
//! and the `H^s` multiplier is literally `|k|^s`. Coefficients are stored on
//! the full `n³` FFT lattice, row-major with `k₁` slowest.
//!
//! The Nyquist plane `k_i = -n/2` has no real-valued derivative. Differential
//! operators treat its wavenumber as 0, and the field constructors leave it
//! empty.

pub mod fft;
mod construct;
mod io;
mod norms;
mod ops;
pub(crate) mod pad;

pub use construct::{
    make_abc, make_helical_beltrami, random_band_limited, shell_wavevectors, synth_regularity,
    HelicalMode, Sign,
};
pub use io::{meta_path, read_meta, read_pfld, write_meta, write_pfld, FieldFile, FieldMeta};
pub use norms::{
    gagliardo_seminorm, hs_norm, hs_seminorm, l2_norm, lp_norm, DEFAULT_GAGLIARDO_MAX_N,
};
pub(crate) use ops::kd_vectors;
pub use ops::{
    curl, curl_inverse, divergence, divergence_residual, gradient, inverse_transform,
    leray_project, transform, SOLENOIDAL_TOL,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// `(2π)³`, the torus volume.
pub const VOLUME: f64 = TWO_PI * TWO_PI * TWO_PI;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("grid size must be even and at least 4, got {0}")]
    InvalidGrid(usize),
    #[error("grid mismatch: {0} vs {1}")]
    GridMismatch(usize, usize),
    #[error("expected {expected} component(s), got {got}")]
    ComponentMismatch { expected: usize, got: usize },
    #[error("input is not solenoidal (relative divergence {0:.3e})")]
    NotSolenoidal(f64),
    #[error("grid n = {n} exceeds the cap {cap} for this O(n^6) quadrature")]
    GridTooLarge { n: usize, cap: usize },
    #[error("no integer wavevector with |k|^2 = {0} fits the grid")]
    EmptyShell(u64),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("field file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self, SpectralError> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(SpectralError::InvalidGrid(n));
        }
        Ok(Grid { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Lattice spacing `2π/n`.
    pub fn spacing(&self) -> f64 {
        TWO_PI / self.n as f64
    }

    /// Signed wavenumber of FFT index `i` in `[-n/2, n/2)`.
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Wavenumbers per index, with the Nyquist entry zeroed, for derivatives.
    pub fn derivative_wavenumbers(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                if i == self.n / 2 {
                    0.0
                } else {
                    self.wavenumber(i) as f64
                }
            })
            .collect()
    }

    pub fn index_of(&self, k: [i64; 3]) -> Option<usize> {
        let h = (self.n / 2) as i64;
        let mut idx = 0;
        for &c in &k {
            if c < -h || c >= h {
                return None;
            }
            idx = idx * self.n + c.rem_euclid(self.n as i64) as usize;
        }
        Some(idx)
    }

    pub fn wavevector(&self, idx: usize) -> [i64; 3] {
        let n = self.n;
        [
            self.wavenumber(idx / (n * n)),
            self.wavenumber((idx / n) % n),
            self.wavenumber(idx % n),
        ]
    }

    pub fn is_nyquist(&self, idx: usize) -> bool {
        let h = -((self.n / 2) as i64);
        self.wavevector(idx).contains(&h)
    }

    /// Integer `|k|²` per flat index (Nyquist included with `|k_i| = n/2`).
    pub fn k2_table(&self) -> Vec<u64> {
        (0..self.len())
            .map(|idx| {
                let k = self.wavevector(idx);
                k.iter().map(|&c| (c * c) as u64).sum()
            })
            .collect()
    }

    pub(crate) fn check_same(&self, other: &Grid) -> Result<(), SpectralError> {
        if self.n != other.n {
            return Err(SpectralError::GridMismatch(self.n, other.n));
        }
        Ok(())
    }
}

/// Fourier coefficients of a real 1- or 3-component field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    comps: Vec<Vec<Complex64>>,
    solenoidal: bool,
}

impl SpectralField {
    pub fn zeros(grid: Grid, ncomp: usize) -> Self {
        assert!(ncomp == 1 || ncomp == 3, "ncomp must be 1 or 3");
        SpectralField {
            grid,
            comps: vec![vec![Complex64::default(); grid.len()]; ncomp],
            solenoidal: ncomp == 3,
        }
    }

    pub fn from_components(grid: Grid, comps: Vec<Vec<Complex64>>) -> Result<Self, SpectralError> {
        if comps.len() != 1 && comps.len() != 3 {
            return Err(SpectralError::ComponentMismatch {
                expected: 3,
                got: comps.len(),
            });
        }
        if comps.iter().any(|c| c.len() != grid.len()) {
            return Err(SpectralError::Format("component length is not n^3".into()));
        }
        Ok(SpectralField {
            grid,
            comps,
            solenoidal: false,
        })
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.comps
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.comps[c]
    }

    /// Mutable access clears the solenoidal flag.
    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        self.solenoidal = false;
        &mut self.comps[c]
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.comps
    }

    /// True when the field was produced by an operation that guarantees
    /// `k·û(k) = 0`.
    pub fn is_flagged_solenoidal(&self) -> bool {
        self.solenoidal
    }

    pub(crate) fn with_flag(mut self, solenoidal: bool) -> Self {
        self.solenoidal = solenoidal && self.ncomp() == 3;
        self
    }

    pub fn coeff(&self, c: usize, k: [i64; 3]) -> Complex64 {
        self.grid
            .index_of(k)
            .map_or(Complex64::default(), |i| self.comps[c][i])
    }

    pub fn mean(&self) -> Vec<Complex64> {
        self.comps.iter().map(|c| c[0]).collect()
    }

    pub fn remove_mean(&mut self) {
        for c in &mut self.comps {
            c[0] = Complex64::default();
        }
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.comps {
            for z in c.iter_mut() {
                *z *= a;
            }
        }
        out
    }

    /// `self + a·other`.
    pub fn axpy(&self, a: f64, other: &SpectralField) -> Result<Self, SpectralError> {
        self.grid.check_same(&other.grid)?;
        if self.ncomp() != other.ncomp() {
            return Err(SpectralError::ComponentMismatch {
                expected: self.ncomp(),
                got: other.ncomp(),
            });
        }
        let mut out = self.clone();
        for (c, o) in out.comps.iter_mut().zip(&other.comps) {
            for (z, w) in c.iter_mut().zip(o) {
                *z += w * a;
            }
        }
        out.solenoidal = self.solenoidal && other.solenoidal;
        Ok(out)
    }

    /// Multiplies every mode by a real radial factor indexed by `|k|²`.
    pub(crate) fn apply_multiplier(&self, k2: &[u64], f: impl Fn(u64) -> f64) -> Self {
        let mut out = self.clone();
        for c in &mut out.comps {
            for (z, &q) in c.iter_mut().zip(k2) {
                *z *= f(q);
            }
        }
        out
    }

    /// `(2π)³ Σ_k Re⟨û(k), v̂(k)⟩`, the real L² inner product.
    pub fn inner(&self, other: &SpectralField) -> Result<f64, SpectralError> {
        self.grid.check_same(&other.grid)?;
        if self.ncomp() != other.ncomp() {
            return Err(SpectralError::ComponentMismatch {
                expected: self.ncomp(),
                got: other.ncomp(),
            });
        }
        let mut acc = 0.0;
        for (a, b) in self.comps.iter().zip(&other.comps) {
            for (x, y) in a.iter().zip(b) {
                acc += (x * y.conj()).re;
            }
        }
        Ok(VOLUME * acc)
    }

    /// Largest `|û(-k) - conj û(k)|`, zero for a real field.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n();
        let mut worst = 0.0f64;
        for c in &self.comps {
            for (idx, z) in c.iter().enumerate() {
                let m = c[fft::negated_index(idx, n)];
                worst = worst.max((m - z.conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.comps
            .iter()
            .flat_map(|c| c.iter())
            .fold(0.0, |m, z| m.max(z.norm()))
    }
}

/// Samples on the uniform lattice `x = (2π/n)·(i, j, l)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealField {
    grid: Grid,
    comps: Vec<Vec<f64>>,
}

impl RealField {
    pub fn zeros(grid: Grid, ncomp: usize) -> Self {
        RealField {
            grid,
            comps: vec![vec![0.0; grid.len()]; ncomp],
        }
    }

    pub fn from_components(grid: Grid, comps: Vec<Vec<f64>>) -> Result<Self, SpectralError> {
        if comps.is_empty() {
            return Err(SpectralError::ComponentMismatch {
                expected: 1,
                got: 0,
            });
        }
        if comps.iter().any(|c| c.len() != grid.len()) {
            return Err(SpectralError::Format("component length is not n^3".into()));
        }
        Ok(RealField { grid, comps })
    }

    /// Samples `f(x)` at every lattice point.
    pub fn from_fn(grid: Grid, ncomp: usize, f: impl Fn([f64; 3]) -> Vec<f64>) -> Self {
        let mut out = RealField::zeros(grid, ncomp);
        let n = grid.n();
        let h = grid.spacing();
        for idx in 0..grid.len() {
            let x = [
                (idx / (n * n)) as f64 * h,
                ((idx / n) % n) as f64 * h,
                (idx % n) as f64 * h,
            ];
            let v = f(x);
            for (c, val) in v.into_iter().enumerate().take(ncomp) {
                out.comps[c][idx] = val;
            }
        }
        out
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.comps
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.comps[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [f64] {
        &mut self.comps[c]
    }

    pub fn into_components(self) -> Vec<Vec<f64>> {
        self.comps
    }

    /// Pointwise Euclidean magnitude over components.
    pub fn magnitude(&self) -> Vec<f64> {
        (0..self.grid.len())
            .map(|i| self.comps.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt())
            .collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.magnitude().into_iter().fold(0.0, f64::max)
    }
}
