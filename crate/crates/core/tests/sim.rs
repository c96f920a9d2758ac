use num_complex::Complex64;
use onsager::sim::{
    beltrami_residual, flux_term, flux_terms, helicity, lamb_identity_residual, lamb_work, rhs,
    run, step, write_csv, EulerOperator, SimConfig, SimError, SimSummary, State,
};
use onsager::spectral::{
    l2_norm, make_abc, make_helical_beltrami, random_band_limited, transform, Grid, RealField,
    Sign, SpectralField,
};

fn grid(n: usize) -> Grid {
    Grid::new(n).unwrap()
}

fn norm2(u: &SpectralField) -> f64 {
    l2_norm(u).powi(2)
}

#[test]
fn rhs_of_zero_is_zero() {
    let u = SpectralField::zeros(grid(8), 3);
    assert_eq!(rhs(&u, 0.3).unwrap().max_abs_coeff(), 0.0);
    assert_eq!(flux_term(&u, 0.9).unwrap(), 0.0);
    assert_eq!(lamb_identity_residual(&u).unwrap(), 0.0);
}

#[test]
fn beltrami_fields_are_steady() {
    let u = make_abc(grid(32), 1.0, 1.0, 1.0);
    assert!(l2_norm(&rhs(&u, 0.0).unwrap()) / norm2(&u) < 1e-10);
    let h = make_helical_beltrami(grid(16), 3, Sign::Minus, 5).unwrap();
    assert!(l2_norm(&rhs(&h, 0.0).unwrap()) / norm2(&h) < 1e-10);
    assert!(beltrami_residual(&h).unwrap() < 1e-12);
}

#[test]
fn single_mode_decays_linearly() {
    // u = (0, sin x₁, 0), |k|² = 1
    let g = grid(16);
    let u = transform(&RealField::from_fn(g, 3, |x| vec![0.0, x[0].sin(), 0.0])).unwrap();
    let nu = 0.05;
    let r = rhs(&u, nu).unwrap();
    assert!(l2_norm(&r.axpy(nu, &u).unwrap()) < 1e-14 * l2_norm(&u));

    let mut cfg = SimConfig::new(16, 1e-2, 1.0);
    cfg.nu = nu;
    cfg.output_every = 10;
    let out = run(&cfg, &u).unwrap();
    let e0 = out.rows[0].energy;
    for row in &out.rows {
        let exact = e0 * (-2.0 * nu * row.t).exp();
        assert!((row.energy - exact).abs() < 1e-6 * exact);
    }
    assert_eq!(out.rows.last().unwrap().t, 1.0);
}

#[test]
fn abc_run_is_stationary() {
    let u0 = make_abc(grid(16), 1.0, 0.8, 0.6);
    let mut cfg = SimConfig::new(16, 1e-3, 0.2);
    cfg.output_every = 50;
    let out = run(&cfg, &u0).unwrap();
    let s = SimSummary::from_rows(&cfg, &out.rows).unwrap();
    assert!(s.max_energy_drift < 1e-6);
    assert!(s.max_beltrami_residual < 1e-6);
    let du = l2_norm(&out.final_state.u.axpy(-1.0, &u0).unwrap()) / l2_norm(&u0);
    assert!(du < 1e-4);
    assert_eq!(out.rows.len(), 5);
}

#[test]
fn random_data_conserves_energy_and_helicity() {
    let u0 = random_band_limited(grid(32), 4.0, 11).unwrap();
    let mut cfg = SimConfig::new(32, 5e-3, 0.5);
    cfg.output_every = 20;
    cfg.s_list = vec![0.0, 1.0];
    let out = run(&cfg, &u0).unwrap();
    let s = SimSummary::from_rows(&cfg, &out.rows).unwrap();
    assert!(s.max_energy_drift < 1e-4, "{s:?}");
    assert!(s.max_helicity_drift < 1e-4, "{s:?}");
    for r in &out.rows {
        assert!(r.div_residual < 1e-12);
        assert!(r.lamb_residual < 1e-10);
        // zero mean: ‖u‖²_{H⁰} = ‖u‖² + [u]²_{H⁰} = 4E
        assert!((r.hs_norms[0].powi(2) - 4.0 * r.energy).abs() < 1e-12 * r.energy);
    }
    // energy moves to higher modes
    assert!(out.rows.last().unwrap().hs_norms[1] > out.rows[0].hs_norms[1]);
}

#[test]
fn lamb_identity_holds() {
    let u = random_band_limited(grid(16), 6.0, 3).unwrap();
    assert!(lamb_identity_residual(&u).unwrap() < 1e-10);
    // a field with energy up to the Nyquist band is still handled exactly
    let v = random_band_limited(grid(16), 12.0, 4).unwrap();
    assert!(lamb_identity_residual(&v).unwrap() < 1e-10);
    let abc = make_abc(grid(16), 1.0, 1.0, 1.0);
    assert!(lamb_work(&abc).unwrap().abs() < 1e-12);
    assert!(lamb_work(&u).unwrap().abs() < 1e-12);
}

#[test]
fn helicity_of_helical_modes() {
    let g = grid(16);
    for (sign, want) in [(Sign::Plus, 2.0), (Sign::Minus, -2.0)] {
        let h = make_helical_beltrami(g, 2, sign, 1).unwrap();
        let k = 2.0f64.sqrt();
        let ratio = helicity(&h).unwrap() / norm2(&h);
        assert!((ratio - want / k).abs() < 1e-12, "{ratio}");
    }
}

#[test]
fn flux_is_quadrature_of_the_integrand() {
    // oracle: assemble R_ε and ∇u_ε as physical fields and sum pointwise
    use onsager::mollify::{commutator, mollify};
    use onsager::spectral::{gradient, inverse_transform, VOLUME};
    let g = grid(16);
    let u = random_band_limited(g, 4.0, 9).unwrap();
    let eps = 0.6;
    let r = commutator(&u, eps).unwrap();
    let ue = mollify(&u, eps).unwrap();
    let mut acc = 0.0;
    for i in 0..3 {
        let ui = SpectralField::from_components(g, vec![ue.component(i).to_vec()]).unwrap();
        let grad = inverse_transform(&gradient(&ui).unwrap());
        for j in 0..3 {
            let rij = r.component(3 * i + j);
            acc += rij.iter().zip(grad.component(j)).map(|(a, b)| a * b).sum::<f64>();
        }
    }
    let direct = acc * VOLUME / g.len() as f64;
    let flux = flux_term(&u, eps).unwrap();
    assert!((flux - direct).abs() < 1e-12 * norm2(&u), "{flux} vs {direct}");
    assert!(flux.abs() > 1e-8);
}

#[test]
fn flux_of_single_shell_fields_vanishes() {
    // mollification acts as a scalar on one shell, so the flux reduces to
    // ∫ u⊗u : ∇u = 0
    let u = make_abc(grid(16), 1.0, 1.0, 1.0);
    for f in flux_terms(&u, &[1.0, 0.7, 0.5]).unwrap() {
        assert!(f.abs() < 1e-13);
    }
}

#[test]
fn cfl_and_config_guards() {
    let u = random_band_limited(grid(16), 4.0, 1).unwrap().scaled(100.0);
    let cfg = SimConfig::new(16, 0.1, 1.0);
    assert!(matches!(run(&cfg, &u), Err(SimError::CflViolation { .. })));

    let v = transform(&RealField::from_fn(grid(16), 3, |x| vec![x[0].sin(), 0.0, 0.0])).unwrap();
    let cfg = SimConfig::new(16, 1e-3, 1e-2);
    assert!(matches!(run(&cfg, &v), Err(SimError::NotSolenoidal(_))));
    let cfg = SimConfig::new(8, 1e-3, 1e-2);
    assert!(run(&cfg, &u).is_err());
}

#[test]
fn blow_up_is_reported() {
    let g = grid(8);
    let mut u = SpectralField::zeros(g, 3);
    let i = g.index_of([1, 0, 0]).unwrap();
    u.component_mut(1)[i] = Complex64::new(f64::INFINITY, 0.0);
    let state = State { t: 0.5, u };
    let err = step(&state, &SimConfig::new(8, 1e-3, 1.0)).unwrap_err();
    assert!(matches!(err, SimError::Instability { t } if t == 0.5));
}

#[test]
fn aliased_operator_differs_only_by_truncation() {
    let g = grid(16);
    let u = random_band_limited(g, 3.0, 2).unwrap();
    // with |k| ≤ 3 the masked modes |k_i| = 6 come only from k paired with
    // itself, and u×(k×u) = k|u|² is a gradient
    let a = EulerOperator::new(g, true).rhs(&u, 0.0).unwrap();
    let b = EulerOperator::new(g, false).rhs(&u, 0.0).unwrap();
    assert!(l2_norm(&a.axpy(-1.0, &b).unwrap()) < 1e-13 * norm2(&u));
}

#[test]
fn csv_layout() {
    let u0 = make_abc(grid(16), 1.0, 1.0, 1.0);
    let mut cfg = SimConfig::new(16, 1e-2, 0.02);
    cfg.s_list = vec![0.5];
    cfg.eps_list = vec![0.8];
    let out = run(&cfg, &u0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("d.csv");
    write_csv(&p, &cfg, &out.rows).unwrap();
    let text = std::fs::read_to_string(&p).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t,E,H0.5,flux0.8,beltrami_res,lamb_res,div_res"
    );
    assert_eq!(lines.count(), 3);
}
