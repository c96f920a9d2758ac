//! Cubic 3D FFT built from rustfft line transforms.
//!
//! Data is row-major with `x₁` slowest. Forward carries the `1/n³`
//! normalization so that the output is the Fourier coefficient `û(k)`.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

fn plan(n: usize, dir: FftDirection) -> Arc<dyn Fft<f64>> {
    planner().lock().unwrap().plan_fft(n, dir)
}

/// Lines of the gathered block for strided axes.
const BLOCK: usize = 16;

fn transform_axis(
    data: &mut [Complex64],
    n: usize,
    stride: usize,
    fft: &dyn Fft<f64>,
    scratch: &mut Vec<Complex64>,
    work: &mut [Complex64],
) {
    if stride == 1 {
        fft.process_with_scratch(data, work);
        return;
    }
    let outer = data.len() / (n * stride);
    scratch.resize(BLOCK * n, Complex64::default());
    for o in 0..outer {
        let base = o * n * stride;
        let mut i0 = 0;
        while i0 < stride {
            let b = BLOCK.min(stride - i0);
            for t in 0..n {
                let row = base + t * stride + i0;
                for j in 0..b {
                    scratch[j * n + t] = data[row + j];
                }
            }
            fft.process_with_scratch(&mut scratch[..b * n], work);
            for t in 0..n {
                let row = base + t * stride + i0;
                for j in 0..b {
                    data[row + j] = scratch[j * n + t];
                }
            }
            i0 += b;
        }
    }
}

fn fft3(data: &mut [Complex64], n: usize, dir: FftDirection) {
    assert_eq!(data.len(), n * n * n, "buffer is not n^3");
    let fft = plan(n, dir);
    let mut work = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut scratch = Vec::new();
    for stride in [1, n, n * n] {
        transform_axis(data, n, stride, fft.as_ref(), &mut scratch, &mut work);
    }
}

/// In place `û(k) = n⁻³ Σ_x u(x) e^{-ik·x}`.
pub fn forward(data: &mut [Complex64], n: usize) {
    fft3(data, n, FftDirection::Forward);
    let s = 1.0 / (n * n * n) as f64;
    for z in data.iter_mut() {
        *z *= s;
    }
}

/// In place `u(x) = Σ_k û(k) e^{ik·x}`.
pub fn inverse(data: &mut [Complex64], n: usize) {
    fft3(data, n, FftDirection::Inverse);
}

/// Index of `-k` for the flat index of `k`.
#[inline]
pub fn negated_index(idx: usize, n: usize) -> usize {
    let i = idx / (n * n);
    let j = (idx / n) % n;
    let l = idx % n;
    let neg = |a: usize| (n - a) % n;
    (neg(i) * n + neg(j)) * n + neg(l)
}

/// Forward transform of two real fields with a single complex FFT.
pub fn forward_pair(a: &[f64], b: &[f64], n: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut z: Vec<Complex64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| Complex64::new(x, y))
        .collect();
    forward(&mut z, n);
    let mut fa = vec![Complex64::default(); z.len()];
    let mut fb = vec![Complex64::default(); z.len()];
    for idx in 0..z.len() {
        let zm = z[negated_index(idx, n)].conj();
        fa[idx] = (z[idx] + zm) * 0.5;
        // (Z - conj Z(-k)) / 2i
        let d = z[idx] - zm;
        fb[idx] = Complex64::new(d.im * 0.5, -d.re * 0.5);
    }
    (fa, fb)
}

pub fn forward_real(a: &[f64], n: usize) -> Vec<Complex64> {
    let mut z: Vec<Complex64> = a.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    forward(&mut z, n);
    z
}

/// Inverse transform of two Hermitian spectra; imaginary parts of the
/// individual results (roundoff only) are discarded.
pub fn inverse_pair(a: &[Complex64], b: &[Complex64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut z: Vec<Complex64> = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| x + Complex64::new(-y.im, y.re))
        .collect();
    inverse(&mut z, n);
    (z.iter().map(|c| c.re).collect(), z.iter().map(|c| c.im).collect())
}

pub fn inverse_real(a: &[Complex64], n: usize) -> Vec<f64> {
    let mut z = a.to_vec();
    inverse(&mut z, n);
    z.iter().map(|c| c.re).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_forward(u: &[Complex64], n: usize) -> Vec<Complex64> {
        let tau = 2.0 * std::f64::consts::PI / n as f64;
        let mut out = vec![Complex64::default(); u.len()];
        for k in 0..u.len() {
            let (k1, k2, k3) = (k / (n * n), (k / n) % n, k % n);
            let mut acc = Complex64::default();
            for x in 0..u.len() {
                let (x1, x2, x3) = (x / (n * n), (x / n) % n, x % n);
                let ph = -tau * ((k1 * x1 + k2 * x2 + k3 * x3) % n) as f64;
                acc += u[x] * Complex64::from_polar(1.0, ph);
            }
            out[k] = acc / (u.len() as f64);
        }
        out
    }

    #[test]
    fn matches_naive_dft() {
        let n = 4;
        let u: Vec<Complex64> = (0..n * n * n)
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos()))
            .collect();
        let want = naive_forward(&u, n);
        let mut got = u.clone();
        forward(&mut got, n);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).norm() < 1e-13);
        }
        inverse(&mut got, n);
        for (a, b) in got.iter().zip(&u) {
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn pair_matches_single() {
        let n = 6;
        let a: Vec<f64> = (0..n * n * n).map(|i| (i as f64 * 0.11).sin()).collect();
        let b: Vec<f64> = (0..n * n * n).map(|i| (i as f64 * 0.07).cos() - 0.2).collect();
        let (fa, fb) = forward_pair(&a, &b, n);
        let (sa, sb) = (forward_real(&a, n), forward_real(&b, n));
        for i in 0..a.len() {
            assert!((fa[i] - sa[i]).norm() < 1e-14);
            assert!((fb[i] - sb[i]).norm() < 1e-14);
        }
        let (ra, rb) = inverse_pair(&fa, &fb, n);
        for i in 0..a.len() {
            assert!((ra[i] - a[i]).abs() < 1e-13);
            assert!((rb[i] - b[i]).abs() < 1e-13);
        }
    }
}
