use num_complex::Complex64;

use super::{fft, transform, RealField, SpectralError, SpectralField, VOLUME};

/// `‖F‖_{L²}` including the mean.
pub fn l2_norm(f: &SpectralField) -> f64 {
    let s: f64 = f
        .components()
        .iter()
        .flat_map(|c| c.iter())
        .map(|z| z.norm_sqr())
        .sum();
    (VOLUME * s).sqrt()
}

/// `((2π)³ Σ_{k≠0} |k|^{2s} |û(k)|²)^{1/2}`, any real `s`.
pub fn hs_seminorm(f: &SpectralField, s: f64) -> f64 {
    let grid = f.grid();
    let k2 = grid.k2_table();
    let mut acc = 0.0;
    for c in f.components() {
        for (z, &q) in c.iter().zip(&k2) {
            if q != 0 {
                acc += (q as f64).powf(s) * z.norm_sqr();
            }
        }
    }
    (VOLUME * acc).sqrt()
}

/// `(‖F‖²_{L²} + [F]²_{H^s})^{1/2}`.
pub fn hs_norm(f: &SpectralField, s: f64) -> f64 {
    let l2 = l2_norm(f);
    let semi = hs_seminorm(f, s);
    (l2 * l2 + semi * semi).sqrt()
}

/// Lattice quadrature of `‖f‖_{L^p}` with the pointwise Euclidean norm over
/// components; `p = ∞` is the maximum sample.
pub fn lp_norm(f: &RealField, p: f64) -> f64 {
    assert!(p >= 1.0, "lp_norm needs p >= 1");
    let mag = f.magnitude();
    if p.is_infinite() {
        return mag.into_iter().fold(0.0, f64::max);
    }
    let h = f.grid().spacing();
    let cell = h * h * h;
    let s: f64 = mag.iter().map(|m| m.powf(p)).sum();
    (cell * s).powf(1.0 / p)
}

/// Largest grid accepted by [`gagliardo_seminorm`] unless overridden.
pub const DEFAULT_GAGLIARDO_MAX_N: usize = 16;

/// Lattice quadrature of
/// `(∫∫ |f(x) − f(y)|^p / |x − y|^{3+αp} dx dy)^{1/p}` over the torus, with
/// the periodic distance.
///
/// The second point runs over the lattice offset by half a cell in every
/// axis, `y = x + (m + ½)h`, which keeps it off the diagonal singularity;
/// `f(y)` is the trigonometric interpolant. Cost is `O(n⁶)`, so grids above
/// `max_n` are refused.
pub fn gagliardo_seminorm(
    f: &RealField,
    alpha: f64,
    p: f64,
    max_n: usize,
) -> Result<f64, SpectralError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(SpectralError::InvalidArgument(format!(
            "alpha must lie in (0,1), got {alpha}"
        )));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(SpectralError::InvalidArgument(format!(
            "p must be finite and >= 1, got {p}"
        )));
    }
    let grid = f.grid();
    let n = grid.n();
    if n > max_n {
        return Err(SpectralError::GridTooLarge { n, cap: max_n });
    }
    let spec = transform(f)?;
    let h = grid.spacing();
    let pi = std::f64::consts::PI;
    let expo = 3.0 + alpha * p;

    // e^{i k (m+½) h} per axis, indexed [m][fft index]
    let phase: Vec<Vec<Complex64>> = (0..n)
        .map(|m| {
            let d = (m as f64 + 0.5) * h;
            (0..n)
                .map(|i| Complex64::from_polar(1.0, grid.wavenumber(i) as f64 * d))
                .collect()
        })
        .collect();
    let dist = |m: usize| {
        let d = (m as f64 + 0.5) * h;
        if d > pi {
            d - 2.0 * pi
        } else {
            d
        }
    };

    let base = f.components();
    let mut total = 0.0;
    let mut shifted = vec![Complex64::default(); grid.len()];
    for m1 in 0..n {
        for m2 in 0..n {
            for m3 in 0..n {
                let r2 = dist(m1).powi(2) + dist(m2).powi(2) + dist(m3).powi(2);
                let weight = r2.powf(-expo / 2.0);
                let mut diff2 = vec![0.0; grid.len()];
                for (c, coeffs) in spec.components().iter().enumerate() {
                    for (idx, z) in coeffs.iter().enumerate() {
                        let (i, j, l) = (idx / (n * n), (idx / n) % n, idx % n);
                        shifted[idx] = z * phase[m1][i] * phase[m2][j] * phase[m3][l];
                    }
                    let vals = fft::inverse_real(&shifted, n);
                    for (acc, (y, x)) in diff2.iter_mut().zip(vals.iter().zip(&base[c])) {
                        *acc += (y - x) * (y - x);
                    }
                }
                let s: f64 = diff2.iter().map(|d| d.powf(p / 2.0)).sum();
                total += weight * s;
            }
        }
    }
    let h6 = h.powi(6);
    Ok((h6 * total).powf(1.0 / p))
}

#[cfg(test)]
mod tests {
    use super::super::Grid;
    use super::*;

    #[test]
    fn constant_field_has_zero_seminorm() {
        let g = Grid::new(4).unwrap();
        let f = RealField::from_fn(g, 1, |_| vec![2.5]);
        assert!(gagliardo_seminorm(&f, 0.5, 2.0, 16).unwrap() < 1e-12);
    }

    #[test]
    fn guard_refuses_large_grids() {
        let g = Grid::new(32).unwrap();
        let f = RealField::zeros(g, 1);
        assert!(matches!(
            gagliardo_seminorm(&f, 0.5, 2.0, DEFAULT_GAGLIARDO_MAX_N),
            Err(SpectralError::GridTooLarge { n: 32, cap: 16 })
        ));
    }

    #[test]
    fn lp_of_constant() {
        let g = Grid::new(8).unwrap();
        let f = RealField::from_fn(g, 1, |_| vec![-3.0]);
        for p in [1.0, 2.0, 3.5] {
            let want = 3.0 * VOLUME.powf(1.0 / p);
            assert!((lp_norm(&f, p) - want).abs() < 1e-12 * want);
        }
        assert_eq!(lp_norm(&f, f64::INFINITY), 3.0);
    }
}
