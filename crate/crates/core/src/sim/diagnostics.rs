use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use super::{SimConfig, SimError, State};
use crate::mollify::{CommutatorEngine, MollifyError, ENTRIES};
use crate::spectral::pad::Padding;
use crate::spectral::{
    curl, divergence_residual, hs_norm, inverse_transform, kd_vectors, l2_norm, SpectralField,
    VOLUME,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsRow {
    pub t: f64,
    /// `½‖u‖²_{L²}`.
    pub energy: f64,
    /// `‖u‖_{H^s}` per entry of `s_list`.
    pub hs_norms: Vec<f64>,
    /// [`flux_term`] per entry of `eps_list`.
    pub flux: Vec<f64>,
    pub beltrami_residual: f64,
    pub lamb_residual: f64,
    pub div_residual: f64,
    /// `⟨u, ω⟩`; not part of the CSV columns.
    pub helicity: f64,
}

/// `⟨u, curl u⟩`.
pub fn helicity(u: &SpectralField) -> Result<f64, SimError> {
    Ok(u.inner(&curl(u)?)?)
}

/// `‖ω − λ̂u‖/‖ω‖` with the Rayleigh quotient `λ̂ = ⟨ω,u⟩/‖u‖²`; zero for
/// an irrotational field.
pub fn beltrami_residual(u: &SpectralField) -> Result<f64, SimError> {
    let w = curl(u)?;
    let wn = l2_norm(&w);
    if wn == 0.0 {
        return Ok(0.0);
    }
    let un = l2_norm(u);
    let lambda = w.inner(u)? / (un * un);
    Ok(l2_norm(&w.axpy(-lambda, u)?) / wn)
}

/// `∫ R_ε : ∇u_ε dx` with `R_ε = (u⊗u)_ε − u_ε⊗u_ε`, for each scale.
pub fn flux_terms(u: &SpectralField, eps: &[f64]) -> Result<Vec<f64>, MollifyError> {
    if eps.is_empty() {
        return Ok(Vec::new());
    }
    let engine = CommutatorEngine::new(u)?;
    let kd = kd_vectors(&u.grid());
    eps.iter()
        .map(|&e| {
            let (r, ue) = engine.at_with_mollified(e)?;
            let v = ue.components();
            let mut acc = 0.0;
            for &(a, b) in &ENTRIES {
                let rab = r.entry(a, b);
                for (idx, k) in kd.iter().enumerate() {
                    // symmetric R pairs with ∂_b u_a + ∂_a u_b off the diagonal
                    let g = if a == b {
                        I * k[b] * v[a][idx]
                    } else {
                        I * (k[b] * v[a][idx] + k[a] * v[b][idx])
                    };
                    acc += (rab[idx] * g.conj()).re;
                }
            }
            Ok(VOLUME * acc)
        })
        .collect()
}

pub fn flux_term(u: &SpectralField, eps: f64) -> Result<f64, MollifyError> {
    Ok(flux_terms(u, &[eps])?[0])
}

/// `‖(u·∇)u − (ω×u + ½∇|u|²)‖_{L²}/‖u‖²_{L²}` with both sides assembled
/// separately from products on the padded grid.
pub fn lamb_identity_residual(u: &SpectralField) -> Result<f64, SimError> {
    let un = l2_norm(u);
    if un == 0.0 {
        return Ok(0.0);
    }
    let grid = u.grid();
    let pad = Padding::new(&grid);
    let kd = kd_vectors(&grid);
    let src = u.components();
    let uphys = pad.physical3(src);

    // convective form: u_j ∂_j u_i
    let mut conv: [Vec<f64>; 3] = Default::default();
    for i in 0..3 {
        let d: Vec<Vec<Complex64>> = (0..3)
            .map(|j| kd.iter().zip(&src[i]).map(|(k, z)| I * k[j] * z).collect())
            .collect();
        let g = pad.physical3(&d);
        conv[i] = (0..uphys[0].len())
            .map(|p| uphys[0][p] * g[0][p] + uphys[1][p] * g[1][p] + uphys[2][p] * g[2][p])
            .collect();
    }
    let lhs = pad.truncated3(&conv);

    // rotational form: ω×u + ½∇|u|²
    let w = pad.physical3(curl(u)?.components());
    let len = uphys[0].len();
    let mut lamb: [Vec<f64>; 3] = Default::default();
    for (i, out) in lamb.iter_mut().enumerate() {
        let (a, b) = ((i + 1) % 3, (i + 2) % 3);
        *out = (0..len)
            .map(|p| w[a][p] * uphys[b][p] - w[b][p] * uphys[a][p])
            .collect();
    }
    let q: Vec<f64> = (0..len)
        .map(|p| 0.5 * (uphys[0][p].powi(2) + uphys[1][p].powi(2) + uphys[2][p].powi(2)))
        .collect();
    let mut rhs = pad.truncated3(&lamb);
    let qh = pad.truncated(&q);
    for (i, comp) in rhs.iter_mut().enumerate() {
        for (idx, z) in comp.iter_mut().enumerate() {
            *z += I * kd[idx][i] * qh[idx];
        }
    }

    let mut acc = 0.0;
    for (a, b) in lhs.iter().zip(&rhs) {
        acc += a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>();
    }
    Ok((VOLUME * acc).sqrt() / (un * un))
}

/// `∫ (ω×u)·u dx` by lattice quadrature; zero pointwise for any field.
pub fn lamb_work(u: &SpectralField) -> Result<f64, SimError> {
    let up = inverse_transform(u);
    let wp = inverse_transform(&curl(u)?);
    let (uc, wc) = (up.components(), wp.components());
    let mut acc = 0.0;
    for p in 0..uc[0].len() {
        for i in 0..3 {
            let (a, b) = ((i + 1) % 3, (i + 2) % 3);
            acc += (wc[a][p] * uc[b][p] - wc[b][p] * uc[a][p]) * uc[i][p];
        }
    }
    Ok(acc * VOLUME / uc[0].len() as f64)
}

pub fn diagnose(state: &State, config: &SimConfig) -> Result<DiagnosticsRow, SimError> {
    let u = &state.u;
    let un = l2_norm(u);
    Ok(DiagnosticsRow {
        t: state.t,
        energy: 0.5 * un * un,
        hs_norms: config.s_list.iter().map(|&s| hs_norm(u, s)).collect(),
        flux: flux_terms(u, &config.eps_list)?,
        beltrami_residual: beltrami_residual(u)?,
        lamb_residual: lamb_identity_residual(u)?,
        div_residual: divergence_residual(u)?,
        helicity: helicity(u)?,
    })
}

/// Fixed CSV header for a configuration.
pub fn csv_header(config: &SimConfig) -> String {
    let mut cols = vec!["t".to_string(), "E".to_string()];
    cols.extend(config.s_list.iter().map(|s| format!("H{s}")));
    cols.extend(config.eps_list.iter().map(|e| format!("flux{e}")));
    cols.extend(["beltrami_res", "lamb_res", "div_res"].map(String::from));
    cols.join(",")
}

pub fn write_csv(path: &Path, config: &SimConfig, rows: &[DiagnosticsRow]) -> Result<(), SimError> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "{}", csv_header(config))?;
    for r in rows {
        let mut vals = vec![r.t, r.energy];
        vals.extend(&r.hs_norms);
        vals.extend(&r.flux);
        vals.extend([r.beltrami_residual, r.lamb_residual, r.div_residual]);
        let line: Vec<String> = vals.iter().map(|v| format!("{v:e}")).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimSummary {
    pub config: SimConfig,
    pub steps: usize,
    pub rows: usize,
    pub t_final: f64,
    pub energy_initial: f64,
    pub energy_final: f64,
    /// `max |E(t) − E(0)|/E(0)` over the rows.
    pub max_energy_drift: f64,
    pub helicity_initial: f64,
    pub helicity_final: f64,
    /// `max |H(t) − H(0)|/|H(0)|`, absolute when `H(0) = 0`.
    pub max_helicity_drift: f64,
    pub max_beltrami_residual: f64,
    pub max_lamb_residual: f64,
    pub max_div_residual: f64,
}

impl SimSummary {
    /// `None` when there are no rows.
    pub fn from_rows(config: &SimConfig, rows: &[DiagnosticsRow]) -> Option<SimSummary> {
        let (first, last) = (rows.first()?, rows.last()?);
        let max = |f: &dyn Fn(&DiagnosticsRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
        let e0 = first.energy;
        let rel = |x: f64| if e0 > 0.0 { x / e0 } else { x };
        let h0 = first.helicity;
        let hscale = if h0 != 0.0 { h0.abs() } else { 1.0 };
        Some(SimSummary {
            config: config.clone(),
            steps: config.steps(),
            rows: rows.len(),
            t_final: last.t,
            energy_initial: e0,
            energy_final: last.energy,
            max_energy_drift: rel(max(&|r| (r.energy - e0).abs())),
            helicity_initial: first.helicity,
            helicity_final: last.helicity,
            max_helicity_drift: max(&|r| (r.helicity - h0).abs()) / hscale,
            max_beltrami_residual: max(&|r| r.beltrami_residual),
            max_lamb_residual: max(&|r| r.lamb_residual),
            max_div_residual: max(&|r| r.div_residual),
        })
    }
}

pub fn write_summary(path: &Path, summary: &SimSummary) -> Result<(), SimError> {
    let text = serde_json::to_string_pretty(summary).expect("summary serializes");
    std::fs::write(path, text + "\n")?;
    Ok(())
}
