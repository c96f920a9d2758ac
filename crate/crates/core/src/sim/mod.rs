//! Pseudo-spectral integration of the incompressible Euler and
//! Navier–Stokes equations on the 2π-torus.
//!
//! The nonlinearity is taken in rotational form,
//! `∂ₜû = −P[(ω×u)^] − ν|k|²û`, where the Leray projection `P` removes the
//! Bernoulli gradient together with the pressure. Time stepping is classical
//! RK4 with a fixed step.

mod config;
mod diagnostics;

pub use config::{parse_real, SimConfig};
pub use diagnostics::{
    beltrami_residual, diagnose, flux_term, flux_terms, helicity, lamb_identity_residual,
    lamb_work, write_csv, write_summary, csv_header, DiagnosticsRow, SimSummary,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::mollify::MollifyError;
use crate::spectral::{
    divergence_residual, fft, inverse_transform, kd_vectors, leray_project, Grid, SpectralError,
    SpectralField, SOLENOIDAL_TOL, TWO_PI,
};

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Mollify(#[from] MollifyError),
    #[error("config: {0}")]
    Config(String),
    #[error("CFL number {courant:.3} at t = {t} exceeds 0.5")]
    CflViolation { t: f64, courant: f64 },
    #[error("non-finite state at t = {t}")]
    Instability { t: f64 },
    #[error("initial field is not solenoidal (relative divergence {0:e})")]
    NotSolenoidal(f64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Largest accepted `dt·max|u|·n/(2π)`.
pub const CFL_LIMIT: f64 = 0.5;

/// Grid-dependent tables for the right-hand side.
pub struct EulerOperator {
    grid: Grid,
    kd: Vec<[f64; 3]>,
    k2: Vec<f64>,
    /// Modes kept in products; the 2/3 rule when dealiasing.
    keep: Vec<bool>,
}

impl EulerOperator {
    pub fn new(grid: Grid, dealias: bool) -> Self {
        let n = grid.n() as i64;
        let kd = kd_vectors(&grid);
        let k2 = kd.iter().map(|k| k[0] * k[0] + k[1] * k[1] + k[2] * k[2]).collect();
        let keep = (0..grid.len())
            .map(|idx| {
                let k = grid.wavevector(idx);
                if dealias {
                    k.iter().all(|&c| 3 * c.abs() < n)
                } else {
                    !grid.is_nyquist(idx)
                }
            })
            .collect();
        EulerOperator { grid, kd, k2, keep }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    /// `(ω×u)^` on the retained modes.
    pub fn lamb_vector(&self, u: &SpectralField) -> Result<Vec<Vec<Complex64>>, SimError> {
        self.grid.check_same(&u.grid())?;
        if u.ncomp() != 3 {
            return Err(SpectralError::ComponentMismatch {
                expected: 3,
                got: u.ncomp(),
            }
            .into());
        }
        let n = self.grid.n();
        let len = self.grid.len();
        let src = u.components();
        let mut uc = vec![vec![Complex64::default(); len]; 3];
        let mut wc = vec![vec![Complex64::default(); len]; 3];
        let i = Complex64::new(0.0, 1.0);
        for idx in 0..len {
            if !self.keep[idx] {
                continue;
            }
            let k = self.kd[idx];
            let (a, b, c) = (src[0][idx], src[1][idx], src[2][idx]);
            uc[0][idx] = a;
            uc[1][idx] = b;
            uc[2][idx] = c;
            wc[0][idx] = i * (k[1] * c - k[2] * b);
            wc[1][idx] = i * (k[2] * a - k[0] * c);
            wc[2][idx] = i * (k[0] * b - k[1] * a);
        }
        let (u0, u1) = fft::inverse_pair(&uc[0], &uc[1], n);
        let (u2, w0) = fft::inverse_pair(&uc[2], &wc[0], n);
        let (w1, w2) = fft::inverse_pair(&wc[1], &wc[2], n);
        let mut l0 = vec![0.0; len];
        let mut l1 = vec![0.0; len];
        let mut l2 = vec![0.0; len];
        for p in 0..len {
            l0[p] = w1[p] * u2[p] - w2[p] * u1[p];
            l1[p] = w2[p] * u0[p] - w0[p] * u2[p];
            l2[p] = w0[p] * u1[p] - w1[p] * u0[p];
        }
        let (mut a, mut b) = fft::forward_pair(&l0, &l1, n);
        let mut c = fft::forward_real(&l2, n);
        for idx in 0..len {
            if !self.keep[idx] {
                a[idx] = Complex64::default();
                b[idx] = Complex64::default();
                c[idx] = Complex64::default();
            }
        }
        Ok(vec![a, b, c])
    }

    /// `−P[(ω×u)^] − ν|k|²û`.
    pub fn rhs(&self, u: &SpectralField, nu: f64) -> Result<SpectralField, SimError> {
        let mut l = self.lamb_vector(u)?;
        let src = u.components();
        for idx in 0..self.grid.len() {
            let k = self.kd[idx];
            let k2 = self.k2[idx];
            let v = [l[0][idx], l[1][idx], l[2][idx]];
            let d = if k2 > 0.0 {
                (k[0] * v[0] + k[1] * v[1] + k[2] * v[2]) / k2
            } else {
                Complex64::default()
            };
            for c in 0..3 {
                let z = -(v[c] - d * k[c]) - src[c][idx] * (nu * k2);
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(SimError::Instability { t: f64::NAN });
                }
                l[c][idx] = z;
            }
        }
        Ok(SpectralField::from_components(self.grid, l)?)
    }

    /// One classical RK4 step followed by re-projection.
    pub fn step(&self, state: &State, dt: f64, nu: f64) -> Result<State, SimError> {
        let at = |e: SimError| match e {
            SimError::Instability { .. } => SimError::Instability { t: state.t },
            e => e,
        };
        let u = &state.u;
        let k1 = self.rhs(u, nu).map_err(at)?;
        let k2 = self.rhs(&u.axpy(0.5 * dt, &k1)?, nu).map_err(at)?;
        let k3 = self.rhs(&u.axpy(0.5 * dt, &k2)?, nu).map_err(at)?;
        let k4 = self.rhs(&u.axpy(dt, &k3)?, nu).map_err(at)?;
        let mut next = u.clone().into_components();
        for (c, out) in next.iter_mut().enumerate() {
            let (a, b, d, e) = (k1.component(c), k2.component(c), k3.component(c), k4.component(c));
            for (idx, z) in out.iter_mut().enumerate() {
                *z += (a[idx] + (b[idx] + d[idx]) * 2.0 + e[idx]) * (dt / 6.0);
            }
        }
        let u = leray_project(&SpectralField::from_components(self.grid, next)?)?;
        if u
            .components()
            .iter()
            .flatten()
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(SimError::Instability { t: state.t + dt });
        }
        Ok(State {
            t: state.t + dt,
            u,
        })
    }
}

/// Right-hand side with the 2/3 rule applied to the product.
pub fn rhs(u: &SpectralField, nu: f64) -> Result<SpectralField, SimError> {
    EulerOperator::new(u.grid(), true).rhs(u, nu)
}

#[derive(Debug, Clone)]
pub struct State {
    pub t: f64,
    pub u: SpectralField,
}

/// One RK4 step with the parameters of `config`.
pub fn step(state: &State, config: &SimConfig) -> Result<State, SimError> {
    EulerOperator::new(state.u.grid(), config.dealias).step(state, config.dt, config.nu)
}

/// `dt·max|u|·n/(2π)`.
pub fn courant_number(u: &SpectralField, dt: f64) -> f64 {
    let umax = inverse_transform(u).magnitude().into_iter().fold(0.0, f64::max);
    dt * umax * u.grid().n() as f64 / TWO_PI
}

fn check_cfl(u: &SpectralField, t: f64, dt: f64) -> Result<(), SimError> {
    let courant = courant_number(u, dt);
    if !(courant < CFL_LIMIT) {
        return Err(SimError::CflViolation { t, courant });
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub rows: Vec<DiagnosticsRow>,
    pub final_state: State,
}

/// Integrates from `u0` to `config.t_end`, handing a diagnostics row to
/// `on_row` at `t = 0`, every `output_every` steps and at the final time.
/// The CFL number is checked at every row.
pub fn run_with(
    config: &SimConfig,
    u0: &SpectralField,
    mut on_row: impl FnMut(&DiagnosticsRow) -> Result<(), SimError>,
) -> Result<State, SimError> {
    config.validate()?;
    let grid = config.grid()?;
    grid.check_same(&u0.grid())?;
    let div = divergence_residual(u0)?;
    if div > SOLENOIDAL_TOL {
        return Err(SimError::NotSolenoidal(div));
    }
    let op = EulerOperator::new(grid, config.dealias);
    let steps = config.steps();
    let mut state = State {
        t: 0.0,
        u: leray_project(u0)?,
    };
    for j in 0..=steps {
        if j % config.output_every == 0 || j == steps {
            check_cfl(&state.u, state.t, config.dt)?;
            on_row(&diagnose(&state, config)?)?;
        }
        if j < steps {
            state = op.step(&state, config.dt, config.nu)?;
            // fixed step: avoid accumulating round-off in t
            state.t = (j + 1) as f64 * config.dt;
        }
    }
    Ok(state)
}

pub fn run(config: &SimConfig, u0: &SpectralField) -> Result<RunOutput, SimError> {
    let mut rows = Vec::new();
    let final_state = run_with(config, u0, |r| {
        rows.push(r.clone());
        Ok(())
    })?;
    Ok(RunOutput { rows, final_state })
}
