//! Products of band-limited fields on a grid padded by 3/2, which is free
//! of aliasing for quadratic terms. Results are truncated back to the modes
//! of the input grid; its Nyquist plane is discarded.

use num_complex::Complex64;

use super::{fft, Grid};

/// Padded size: at least `3n/2`, even.
fn padded_size(n: usize) -> usize {
    let m = 3 * n / 2;
    m + m % 2
}

pub(crate) struct Padding {
    n: usize,
    m: usize,
    /// Padded index per input index, `None` on the Nyquist plane.
    map: Vec<Option<usize>>,
}

impl Padding {
    pub(crate) fn new(grid: &Grid) -> Self {
        let n = grid.n();
        let m = padded_size(n);
        let big = Grid::new(m).expect("padded grid valid");
        let map = (0..grid.len())
            .map(|idx| {
                if grid.is_nyquist(idx) {
                    None
                } else {
                    big.index_of(grid.wavevector(idx))
                }
            })
            .collect();
        Padding { n, m, map }
    }

    fn pad(&self, src: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); self.m * self.m * self.m];
        for (v, mi) in src.iter().zip(&self.map) {
            if let Some(mi) = mi {
                out[*mi] = *v;
            }
        }
        out
    }

    /// Physical samples of two spectral components on the padded grid.
    pub(crate) fn physical_pair(&self, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
        fft::inverse_pair(&self.pad(a), &self.pad(b), self.m)
    }

    pub(crate) fn physical(&self, a: &[Complex64]) -> Vec<f64> {
        fft::inverse_real(&self.pad(a), self.m)
    }

    /// Physical samples of three spectral components.
    pub(crate) fn physical3(&self, comps: &[Vec<Complex64>]) -> [Vec<f64>; 3] {
        let (a, b) = self.physical_pair(&comps[0], &comps[1]);
        [a, b, self.physical(&comps[2])]
    }

    /// Forward transforms of two real padded fields, truncated to the input
    /// modes.
    pub(crate) fn truncated_pair(&self, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
        let mut z: Vec<Complex64> = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| Complex64::new(x, y))
            .collect();
        fft::forward(&mut z, self.m);
        let len = self.n * self.n * self.n;
        let mut fa = vec![Complex64::default(); len];
        let mut fb = vec![Complex64::default(); len];
        for (idx, mi) in self.map.iter().enumerate() {
            if let Some(mi) = *mi {
                let zk = z[mi];
                let zm = z[fft::negated_index(mi, self.m)].conj();
                fa[idx] = (zk + zm) * 0.5;
                let d = zk - zm;
                fb[idx] = Complex64::new(d.im * 0.5, -d.re * 0.5);
            }
        }
        (fa, fb)
    }

    pub(crate) fn truncated(&self, a: &[f64]) -> Vec<Complex64> {
        let full = fft::forward_real(a, self.m);
        self.map
            .iter()
            .map(|mi| mi.map_or(Complex64::default(), |mi| full[mi]))
            .collect()
    }

    /// Truncated spectra of three real padded fields.
    pub(crate) fn truncated3(&self, f: &[Vec<f64>; 3]) -> Vec<Vec<Complex64>> {
        let (a, b) = self.truncated_pair(&f[0], &f[1]);
        vec![a, b, self.truncated(&f[2])]
    }
}
