use num_complex::Complex64;
use onsager::spectral::{
    curl, curl_inverse, divergence_residual, gagliardo_seminorm, gradient, hs_norm, hs_seminorm,
    inverse_transform, l2_norm, leray_project, lp_norm, make_abc, make_helical_beltrami,
    random_band_limited, synth_regularity, transform, Grid, HelicalMode, RealField, Sign,
    SpectralError, SpectralField, VOLUME,
};

fn grid(n: usize) -> Grid {
    Grid::new(n).unwrap()
}

/// `‖a − λ b‖ / ‖b‖`.
fn rel_diff(a: &SpectralField, b: &SpectralField, lambda: f64) -> f64 {
    l2_norm(&a.axpy(-lambda, b).unwrap()) / l2_norm(b)
}

fn single_mode(g: Grid, mode: &HelicalMode, amp: Complex64) -> SpectralField {
    let mut f = SpectralField::zeros(g, 3);
    let k = mode.k;
    let i = g.index_of(k).unwrap();
    let j = g.index_of([-k[0], -k[1], -k[2]]).unwrap();
    for c in 0..3 {
        f.component_mut(c)[i] = mode.h[c] * amp;
        f.component_mut(c)[j] = (mode.h[c] * amp).conj();
    }
    f
}

#[test]
fn transform_of_zero_and_cosine() {
    let g = grid(8);
    let zero = transform(&RealField::zeros(g, 1)).unwrap();
    assert_eq!(zero.max_abs_coeff(), 0.0);

    let f = RealField::from_fn(g, 1, |x| vec![x[0].cos()]);
    let spec = transform(&f).unwrap();
    for idx in 0..g.len() {
        let k = g.wavevector(idx);
        let want = if k == [1, 0, 0] || k == [-1, 0, 0] { 0.5 } else { 0.0 };
        assert!((spec.component(0)[idx] - Complex64::new(want, 0.0)).norm() < 1e-15);
    }
}

#[test]
fn random_round_trip() {
    let g = grid(16);
    let f = RealField::from_fn(g, 3, |x| {
        vec![
            (x[0] + 2.0 * x[1]).sin() + 0.3,
            (3.0 * x[2]).cos() * x[0].sin(),
            (x[0] * x[1]).sin(),
        ]
    });
    let back = inverse_transform(&transform(&f).unwrap());
    let mut num = 0.0;
    let mut den = 0.0;
    for c in 0..3 {
        for (a, b) in back.component(c).iter().zip(f.component(c)) {
            num += (a - b).powi(2);
            den += b * b;
        }
    }
    assert!((num / den).sqrt() < 1e-12);
}

#[test]
fn parseval() {
    let g = grid(16);
    let fields = [
        make_abc(g, 1.0, 0.7, 0.3),
        random_band_limited(g, 4.0, 3).unwrap(),
        synth_regularity(g, 0.5, 11).unwrap(),
        make_helical_beltrami(g, 9, Sign::Minus, 2).unwrap(),
    ];
    for f in &fields {
        let spec = l2_norm(f);
        let quad = lp_norm(&inverse_transform(f), 2.0);
        assert!((spec - quad).abs() < 1e-10 * spec, "{spec} vs {quad}");
    }
}

#[test]
fn lp_norm_of_cosine() {
    let g = grid(8);
    let f = RealField::from_fn(g, 1, |x| vec![x[0].cos()]);
    let want = VOLUME.sqrt() / 2f64.sqrt();
    assert!((lp_norm(&f, 2.0) - want).abs() < 1e-12 * want);
    assert!((lp_norm(&f, f64::INFINITY) - 1.0).abs() < 1e-15);
}

#[test]
fn gradient_fields_are_curl_free_and_projected_away() {
    let g = grid(16);
    let phi = RealField::from_fn(g, 1, |x| vec![(x[0] + x[1]).sin() * (2.0 * x[2]).cos()]);
    let grad = gradient(&transform(&phi).unwrap()).unwrap();
    assert!(l2_norm(&grad) > 1.0);
    assert!(l2_norm(&curl(&grad).unwrap()) < 1e-12 * l2_norm(&grad));
    assert!(l2_norm(&leray_project(&grad).unwrap()) < 1e-12 * l2_norm(&grad));
}

#[test]
fn helical_mode_is_curl_eigenvector() {
    let g = grid(8);
    for k in [[1, 0, 0], [1, 2, -1], [0, -3, 2], [2, 2, 2]] {
        for sign in [Sign::Plus, Sign::Minus] {
            let m = HelicalMode::new(k, sign).unwrap();
            let kf = k.map(|c| c as f64);
            let kh: Complex64 = (0..3).map(|d| m.h[d] * kf[d]).sum();
            assert!(kh.norm() < 1e-14);
            let norm: f64 = m.h.iter().map(|z| z.norm_sqr()).sum();
            assert!((norm - 1.0).abs() < 1e-14);
            let f = single_mode(g, &m, Complex64::new(0.3, -0.8));
            let w = curl(&f).unwrap();
            assert!(rel_diff(&w, &f, m.eigenvalue()) < 1e-14);
            // Biot-Savart returns the mode divided by its eigenvalue
            let back = curl_inverse(&f).unwrap();
            assert!(rel_diff(&back, &f, 1.0 / m.eigenvalue()) < 1e-14);
        }
    }
}

#[test]
fn abc_is_curl_eigenfield() {
    let g = grid(8);
    for (a, b, c) in [(1.0, 1.0, 1.0), (1.0, 0.0, 0.0), (0.3, -1.2, 2.0)] {
        let u = make_abc(g, a, b, c);
        assert!(rel_diff(&curl(&u).unwrap(), &u, 1.0) < 1e-12);
        assert!(rel_diff(&curl_inverse(&u).unwrap(), &u, 1.0) < 1e-12);
        assert!(divergence_residual(&u).unwrap() < 1e-15);
    }
    assert_eq!(make_abc(g, 0.0, 0.0, 0.0).max_abs_coeff(), 0.0);
}

#[test]
fn abc_matches_formula() {
    let g = grid(8);
    let (a, b, c) = (0.9, 0.4, -0.6);
    let u = inverse_transform(&make_abc(g, a, b, c));
    let want = RealField::from_fn(g, 3, |x| {
        vec![
            a * x[2].sin() + c * x[1].cos(),
            b * x[0].sin() + a * x[2].cos(),
            c * x[1].sin() + b * x[0].cos(),
        ]
    });
    for comp in 0..3 {
        for (p, q) in u.component(comp).iter().zip(want.component(comp)) {
            assert!((p - q).abs() < 1e-14);
        }
    }
}

#[test]
fn curl_inverse_edge_cases() {
    let g = grid(8);
    let zero = SpectralField::zeros(g, 3);
    assert_eq!(curl_inverse(&zero).unwrap().max_abs_coeff(), 0.0);

    let phi = RealField::from_fn(g, 1, |x| vec![x[0].sin()]);
    let grad = gradient(&transform(&phi).unwrap()).unwrap();
    assert!(matches!(
        curl_inverse(&grad),
        Err(SpectralError::NotSolenoidal(_))
    ));
}

#[test]
fn curl_of_curl_inverse_is_identity() {
    let g = grid(16);
    for seed in 0..4 {
        let w = random_band_limited(g, 6.0, seed).unwrap();
        let u = curl_inverse(&w).unwrap();
        assert!(divergence_residual(&u).unwrap() < 1e-14);
        assert!(rel_diff(&curl(&u).unwrap(), &w, 1.0) < 1e-12);
    }
}

#[test]
fn leray_is_idempotent_and_fixes_solenoidal() {
    let g = grid(8);
    let raw = RealField::from_fn(g, 3, |x| {
        vec![x[0].sin() * x[1].cos(), (x[2] + x[0]).cos(), (2.0 * x[1]).sin()]
    });
    let f = transform(&raw).unwrap();
    let p = leray_project(&f).unwrap();
    let pp = leray_project(&p).unwrap();
    assert!(p.is_flagged_solenoidal());
    assert!(divergence_residual(&p).unwrap() < 1e-15);
    assert!(rel_diff(&pp, &p, 1.0) < 1e-15);

    let s = random_band_limited(g, 3.0, 9).unwrap();
    assert!(rel_diff(&leray_project(&s).unwrap(), &s, 1.0) < 1e-15);
}

#[test]
fn seminorm_examples() {
    let g = grid(8);
    let m = HelicalMode::new([2, 0, 0], Sign::Plus).unwrap();
    let f = single_mode(g, &m, Complex64::new(1.0, 0.5));
    let l2 = l2_norm(&f);
    assert!((hs_seminorm(&f, 1.0) - 2.0 * l2).abs() < 1e-13 * l2);
    assert!((hs_norm(&f, 1.0) - 5f64.sqrt() * l2).abs() < 1e-13 * l2);

    let u = random_band_limited(g, 3.0, 1).unwrap();
    assert!((hs_seminorm(&u, 0.0) - l2_norm(&u)).abs() < 1e-14);
    // negative orders are allowed
    assert!(hs_seminorm(&u, -1.0) < hs_seminorm(&u, 0.0));
}

#[test]
fn interpolation_between_l2_and_hs() {
    let g = grid(16);
    for seed in 0..10 {
        let u = synth_regularity(g, 1.0 + seed as f64 * 0.2, seed).unwrap();
        let l2 = l2_norm(&u);
        for s in [1.5, 2.0] {
            let lhs = hs_seminorm(&u, 1.0);
            let rhs = l2.powf(1.0 - 1.0 / s) * hs_seminorm(&u, s).powf(1.0 / s);
            assert!(lhs <= rhs * (1.0 + 1e-12), "seed {seed} s {s}: {lhs} > {rhs}");
        }
    }
}

/// Increment of `[u]²_{H^r}` between successive refinements, which scales as
/// `2^{2(r−s)}` for a field with `|û(k)| = |k|^{-(s+3/2)}`.
fn refinement_ratio(s_target: f64, r: f64) -> f64 {
    let sq: Vec<f64> = [16, 32, 64]
        .iter()
        .map(|&n| hs_seminorm(&synth_regularity(grid(n), s_target, 5).unwrap(), r).powi(2))
        .collect();
    (sq[2] - sq[1]) / (sq[1] - sq[0])
}

#[test]
fn synth_regularity_threshold() {
    for (s0, below, above) in [(0.5, 0.4, 0.6), (5.0 / 6.0, 0.73, 0.93)] {
        let lo = refinement_ratio(s0, below);
        let hi = refinement_ratio(s0, above);
        assert!(lo < 0.95, "s0={s0} r={below}: ratio {lo}");
        assert!(hi > 1.05, "s0={s0} r={above}: ratio {hi}");
        assert!((lo - 2f64.powf(2.0 * (below - s0))).abs() < 0.06);
        assert!((hi - 2f64.powf(2.0 * (above - s0))).abs() < 0.06);
    }
}

#[test]
fn synth_is_reproducible_and_grid_consistent() {
    let a = synth_regularity(grid(16), 0.5, 42).unwrap();
    let b = synth_regularity(grid(16), 0.5, 42).unwrap();
    assert_eq!(a.components(), b.components());
    let c = synth_regularity(grid(16), 0.5, 43).unwrap();
    assert_ne!(a.components(), c.components());

    let big = synth_regularity(grid(32), 0.5, 42).unwrap();
    for k in [[1, 0, 0], [3, -2, 5], [-7, 7, 1]] {
        for comp in 0..3 {
            assert_eq!(a.coeff(comp, k), big.coeff(comp, k));
        }
    }
    assert!(a.hermitian_defect() == 0.0);
    assert!(divergence_residual(&a).unwrap() < 1e-15);
    assert_eq!(a.mean(), vec![Complex64::default(); 3]);
}

#[test]
fn helical_beltrami_constructors() {
    let g = grid(8);
    let u = make_helical_beltrami(g, 1, Sign::Plus, 0).unwrap();
    assert!(rel_diff(&curl(&u).unwrap(), &u, 1.0) < 1e-12);
    let u = make_helical_beltrami(g, 4, Sign::Minus, 1).unwrap();
    assert!(rel_diff(&curl(&u).unwrap(), &u, -2.0) < 1e-12);
    let u = make_helical_beltrami(g, 6, Sign::Plus, 7).unwrap();
    assert!(rel_diff(&curl(&u).unwrap(), &u, 6f64.sqrt()) < 1e-12);
    // unit rms speed
    assert!((l2_norm(&u).powi(2) / VOLUME - 1.0).abs() < 1e-12);
    assert!(u.hermitian_defect() == 0.0);
    assert!(matches!(
        make_helical_beltrami(g, 7, Sign::Plus, 0),
        Err(SpectralError::EmptyShell(7))
    ));
}

#[test]
fn gagliardo_quadrature_converges() {
    let f = |n| RealField::from_fn(grid(n), 1, |x| vec![(x[0] + x[1]).cos()]);
    let a = gagliardo_seminorm(&f(8), 0.5, 2.0, 16).unwrap();
    let b = gagliardo_seminorm(&f(16), 0.5, 2.0, 16).unwrap();
    assert!(((a - b) / b).abs() < 0.05, "n=8: {a}, n=16: {b}");
}
