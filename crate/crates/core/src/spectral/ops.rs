use num_complex::Complex64;

use super::{fft, Grid, RealField, SpectralError, SpectralField};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn require(f: &SpectralField, ncomp: usize) -> Result<(), SpectralError> {
    if f.ncomp() != ncomp {
        return Err(SpectralError::ComponentMismatch {
            expected: ncomp,
            got: f.ncomp(),
        });
    }
    Ok(())
}

/// Derivative wavevector per flat index, Nyquist entries zeroed.
pub(crate) fn kd_vectors(grid: &Grid) -> Vec<[f64; 3]> {
    let k = grid.derivative_wavenumbers();
    let n = grid.n();
    (0..grid.len())
        .map(|idx| [k[idx / (n * n)], k[(idx / n) % n], k[idx % n]])
        .collect()
}

pub fn transform(f: &RealField) -> Result<SpectralField, SpectralError> {
    let grid = f.grid();
    let n = grid.n();
    let c = f.components();
    let comps = match c.len() {
        1 => vec![fft::forward_real(&c[0], n)],
        3 => {
            let (a, b) = fft::forward_pair(&c[0], &c[1], n);
            vec![a, b, fft::forward_real(&c[2], n)]
        }
        m => {
            return Err(SpectralError::ComponentMismatch {
                expected: 3,
                got: m,
            })
        }
    };
    SpectralField::from_components(grid, comps)
}

pub fn inverse_transform(f: &SpectralField) -> RealField {
    let grid = f.grid();
    let n = grid.n();
    let c = f.components();
    let comps = if c.len() == 1 {
        vec![fft::inverse_real(&c[0], n)]
    } else {
        let (a, b) = fft::inverse_pair(&c[0], &c[1], n);
        vec![a, b, fft::inverse_real(&c[2], n)]
    };
    RealField::from_components(grid, comps).expect("shape preserved")
}

/// `ik × û`.
pub fn curl(f: &SpectralField) -> Result<SpectralField, SpectralError> {
    require(f, 3)?;
    let grid = f.grid();
    let kd = kd_vectors(&grid);
    let u = f.components();
    let mut out = vec![vec![Complex64::default(); grid.len()]; 3];
    for (idx, k) in kd.iter().enumerate() {
        let (a, b, c) = (u[0][idx], u[1][idx], u[2][idx]);
        out[0][idx] = I * (k[1] * c - k[2] * b);
        out[1][idx] = I * (k[2] * a - k[0] * c);
        out[2][idx] = I * (k[0] * b - k[1] * a);
    }
    Ok(SpectralField::from_components(grid, out)?.with_flag(true))
}

/// `ik · û`, a scalar field.
pub fn divergence(f: &SpectralField) -> Result<SpectralField, SpectralError> {
    require(f, 3)?;
    let grid = f.grid();
    let kd = kd_vectors(&grid);
    let u = f.components();
    let out = kd
        .iter()
        .enumerate()
        .map(|(idx, k)| I * (k[0] * u[0][idx] + k[1] * u[1][idx] + k[2] * u[2][idx]))
        .collect();
    SpectralField::from_components(grid, vec![out])
}

/// `ik φ̂` for a scalar field.
pub fn gradient(f: &SpectralField) -> Result<SpectralField, SpectralError> {
    require(f, 1)?;
    let grid = f.grid();
    let kd = kd_vectors(&grid);
    let phi = f.component(0);
    let mut out = vec![vec![Complex64::default(); grid.len()]; 3];
    for (idx, k) in kd.iter().enumerate() {
        for d in 0..3 {
            out[d][idx] = I * k[d] * phi[idx];
        }
    }
    SpectralField::from_components(grid, out)
}

/// `sqrt(Σ|k·û|²) / sqrt(Σ|k|²|û|²)`; zero for a field with no
/// non-constant modes.
pub fn divergence_residual(f: &SpectralField) -> Result<f64, SpectralError> {
    require(f, 3)?;
    let kd = kd_vectors(&f.grid());
    let u = f.components();
    let (mut num, mut den) = (0.0, 0.0);
    for (idx, k) in kd.iter().enumerate() {
        let d = k[0] * u[0][idx] + k[1] * u[1][idx] + k[2] * u[2][idx];
        num += d.norm_sqr();
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        den += k2 * (u[0][idx].norm_sqr() + u[1][idx].norm_sqr() + u[2][idx].norm_sqr());
    }
    Ok(if den > 0.0 { (num / den).sqrt() } else { 0.0 })
}

/// `û ↦ û − k(k·û)/|k|²`.
pub fn leray_project(f: &SpectralField) -> Result<SpectralField, SpectralError> {
    require(f, 3)?;
    let grid = f.grid();
    let kd = kd_vectors(&grid);
    let mut out = f.clone().into_components();
    for (idx, k) in kd.iter().enumerate() {
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            continue;
        }
        let d = (k[0] * out[0][idx] + k[1] * out[1][idx] + k[2] * out[2][idx]) / k2;
        for c in 0..3 {
            out[c][idx] -= d * k[c];
        }
    }
    Ok(SpectralField::from_components(grid, out)?.with_flag(true))
}

/// Tolerance on the relative divergence accepted by [`curl_inverse`].
pub const SOLENOIDAL_TOL: f64 = 1e-10;

/// Biot–Savart: `û = ik × Ŵ / |k|²`, the zero-mean solenoidal `u` with
/// `curl u = W`.
pub fn curl_inverse(w: &SpectralField) -> Result<SpectralField, SpectralError> {
    require(w, 3)?;
    let res = divergence_residual(w)?;
    if res > SOLENOIDAL_TOL {
        return Err(SpectralError::NotSolenoidal(res));
    }
    let grid = w.grid();
    let kd = kd_vectors(&grid);
    let v = w.components();
    let mut out = vec![vec![Complex64::default(); grid.len()]; 3];
    for (idx, k) in kd.iter().enumerate() {
        let k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
        if k2 == 0.0 {
            continue;
        }
        let (a, b, c) = (v[0][idx], v[1][idx], v[2][idx]);
        out[0][idx] = I * (k[1] * c - k[2] * b) / k2;
        out[1][idx] = I * (k[2] * a - k[0] * c) / k2;
        out[2][idx] = I * (k[0] * b - k[1] * a) / k2;
    }
    Ok(SpectralField::from_components(grid, out)?.with_flag(true))
}
