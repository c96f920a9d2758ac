//! `R_ε = (u⊗u)_ε − u_ε⊗u_ε`.
//!
//! Products are formed on a grid padded by 3/2 and truncated back to the
//! modes of the input grid.

use num_complex::Complex64;

use super::{check_eps, max_wavenumber, mollify_with, Kernel, MollifyError};
use crate::spectral::pad::Padding;
use crate::spectral::{fft, Grid, RealField, SpectralField, VOLUME};

/// Upper-triangle order of the six independent entries.
pub const ENTRIES: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

fn entry_index(i: usize, j: usize) -> usize {
    let (a, b) = if i <= j { (i, j) } else { (j, i) };
    ENTRIES.iter().position(|&e| e == (a, b)).unwrap()
}

/// Dealiased spectra of the six products `u_i u_j`.
fn products(padding: &Padding, u: &[Vec<f64>; 3]) -> Vec<Vec<Complex64>> {
    let prod = |(i, j): (usize, usize)| -> Vec<f64> {
        u[i].iter().zip(&u[j]).map(|(a, b)| a * b).collect()
    };
    let mut out = Vec::with_capacity(6);
    for pair in ENTRIES.chunks(2) {
        let (a, b) = padding.truncated_pair(&prod(pair[0]), &prod(pair[1]));
        out.push(a);
        out.push(b);
    }
    out
}

/// Symmetric tensor field in spectral form, six upper-triangle entries.
#[derive(Debug, Clone)]
pub struct CommutatorSpectrum {
    grid: Grid,
    entries: Vec<Vec<Complex64>>,
}

impl CommutatorSpectrum {
    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Complex64] {
        &self.entries[entry_index(i, j)]
    }

    /// Frobenius `L²` norm `(∫ Σ_ij R_ij² dx)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        let mut acc = 0.0;
        for (e, &(i, j)) in self.entries.iter().zip(&ENTRIES) {
            let mult = if i == j { 1.0 } else { 2.0 };
            acc += mult * e.iter().map(|z| z.norm_sqr()).sum::<f64>();
        }
        (VOLUME * acc).sqrt()
    }

    /// All nine entries, row-major `3i + j`, as physical samples.
    pub fn to_real(&self) -> RealField {
        let n = self.grid.n();
        let phys: Vec<Vec<f64>> = self
            .entries
            .iter()
            .map(|e| fft::inverse_real(e, n))
            .collect();
        let comps = (0..9)
            .map(|c| phys[entry_index(c / 3, c % 3)].clone())
            .collect();
        RealField::from_components(self.grid, comps).expect("shape")
    }
}

/// Caches the ε-independent product `(u⊗u)^` so that many scales can be
/// evaluated at the cost of one padded product each.
pub struct CommutatorEngine {
    u: SpectralField,
    padding: Padding,
    uu: Vec<Vec<Complex64>>,
}

impl CommutatorEngine {
    pub fn new(u: &SpectralField) -> Result<Self, MollifyError> {
        if u.ncomp() != 3 {
            return Err(MollifyError::InvalidArgument(format!(
                "commutator needs a 3-component field, got {}",
                u.ncomp()
            )));
        }
        let padding = Padding::new(&u.grid());
        let phys = padding.physical3(u.components());
        let uu = products(&padding, &phys);
        Ok(CommutatorEngine {
            u: u.clone(),
            padding,
            uu,
        })
    }

    pub fn field(&self) -> &SpectralField {
        &self.u
    }

    pub fn kernel(&self, eps: f64) -> Result<Kernel, MollifyError> {
        let grid = self.u.grid();
        check_eps(&grid, eps)?;
        Kernel::new(eps, max_wavenumber(&grid))
    }

    /// `R̂_ε` together with `û_ε`.
    pub fn at_with_mollified(
        &self,
        eps: f64,
    ) -> Result<(CommutatorSpectrum, SpectralField), MollifyError> {
        let kernel = self.kernel(eps)?;
        let grid = self.u.grid();
        let table = kernel.table(&grid);
        let k2 = grid.k2_table();
        let ue = mollify_with(&self.u, &kernel);
        let phys = self.padding.physical3(ue.components());
        let mut entries = products(&self.padding, &phys);
        for (e, uu) in entries.iter_mut().zip(&self.uu) {
            for ((r, p), &q) in e.iter_mut().zip(uu).zip(&k2) {
                *r = p * table[q as usize] - *r;
            }
        }
        Ok((CommutatorSpectrum { grid, entries }, ue))
    }

    pub fn at(&self, eps: f64) -> Result<CommutatorSpectrum, MollifyError> {
        Ok(self.at_with_mollified(eps)?.0)
    }
}

pub fn commutator_spectrum(
    u: &SpectralField,
    eps: f64,
) -> Result<CommutatorSpectrum, MollifyError> {
    check_eps(&u.grid(), eps)?;
    CommutatorEngine::new(u)?.at(eps)
}

/// `R_ε` as a nine-component physical field.
pub fn commutator(u: &SpectralField, eps: f64) -> Result<RealField, MollifyError> {
    Ok(commutator_spectrum(u, eps)?.to_real())
}
