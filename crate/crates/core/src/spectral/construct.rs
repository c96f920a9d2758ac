use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Grid, SpectralError, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "+" | "plus" | "+1" | "1" => Ok(Sign::Plus),
            "-" | "minus" | "-1" => Ok(Sign::Minus),
            _ => Err(format!("expected + or -, got {s:?}")),
        }
    }
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn normalized(a: [f64; 3]) -> [f64; 3] {
    let r = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    [a[0] / r, a[1] / r, a[2] / r]
}

/// Curl eigenvector at a single wavevector: `ik × h = sign·|k|·h`,
/// `k·h = 0`, `|h| = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct HelicalMode {
    pub k: [i64; 3],
    pub sign: Sign,
    pub h: [Complex64; 3],
}

impl HelicalMode {
    pub fn new(k: [i64; 3], sign: Sign) -> Result<Self, SpectralError> {
        if k == [0, 0, 0] {
            return Err(SpectralError::InvalidArgument(
                "helical mode needs k != 0".into(),
            ));
        }
        let kf = normalized([k[0] as f64, k[1] as f64, k[2] as f64]);
        // cross with the axis least aligned with k
        let mut axis = 0;
        for d in 1..3 {
            if kf[d].abs() < kf[axis].abs() {
                axis = d;
            }
        }
        let mut a = [0.0; 3];
        a[axis] = 1.0;
        let e1 = normalized(cross(kf, a));
        let e2 = cross(kf, e1);
        let s = sign.as_f64();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let h = [0, 1, 2].map(|d| Complex64::new(e1[d] * r, s * e2[d] * r));
        Ok(HelicalMode { k, sign, h })
    }

    pub fn eigenvalue(&self) -> f64 {
        let k2: i64 = self.k.iter().map(|c| c * c).sum();
        self.sign.as_f64() * (k2 as f64).sqrt()
    }
}

fn is_canonical(k: [i64; 3]) -> bool {
    for c in k {
        if c != 0 {
            return c > 0;
        }
    }
    false
}

/// Writes `v` at `k` and `conj(v)` at `-k`.
fn set_pair(comps: &mut [Vec<Complex64>], grid: &Grid, k: [i64; 3], v: [Complex64; 3]) {
    let i = grid.index_of(k).expect("k inside band");
    let j = grid.index_of([-k[0], -k[1], -k[2]]).expect("-k inside band");
    for c in 0..3 {
        comps[c][i] = v[c];
        comps[c][j] = v[c].conj();
    }
}

/// Canonical half (first non-zero component positive) of the non-Nyquist
/// wavevectors of `grid`.
fn canonical_modes(grid: &Grid) -> impl Iterator<Item = [i64; 3]> + '_ {
    (0..grid.len()).filter_map(move |idx| {
        if grid.is_nyquist(idx) {
            return None;
        }
        let k = grid.wavevector(idx);
        is_canonical(k).then_some(k)
    })
}

/// `u = (A sin x₃ + C cos x₂, B sin x₁ + A cos x₃, C sin x₂ + B cos x₁)`,
/// a curl eigenfield with eigenvalue 1.
pub fn make_abc(grid: Grid, a: f64, b: f64, c: f64) -> SpectralField {
    let mut comps = SpectralField::zeros(grid, 3).into_components();
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    set_pair(&mut comps, &grid, [1, 0, 0], [re(0.0), im(-b / 2.0), re(b / 2.0)]);
    set_pair(&mut comps, &grid, [0, 1, 0], [re(c / 2.0), re(0.0), im(-c / 2.0)]);
    set_pair(&mut comps, &grid, [0, 0, 1], [im(-a / 2.0), re(a / 2.0), re(0.0)]);
    SpectralField::from_components(grid, comps)
        .expect("shape")
        .with_flag(true)
}

/// Every non-Nyquist wavevector of `grid` with `|k|² = shell`.
pub fn shell_wavevectors(grid: &Grid, shell: u64) -> Vec<[i64; 3]> {
    let h = (grid.n() / 2) as i64;
    let mut out = Vec::new();
    for a in -h + 1..h {
        for b in -h + 1..h {
            for c in -h + 1..h {
                if (a * a + b * b + c * c) as u64 == shell {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

fn uniform_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// Random superposition of same-sign helical modes on the sphere
/// `|k|² = shell`, normalized to unit rms speed. Satisfies
/// `curl u = sign·√shell·u`.
pub fn make_helical_beltrami(
    grid: Grid,
    shell: u64,
    sign: Sign,
    seed: u64,
) -> Result<SpectralField, SpectralError> {
    let ks: Vec<_> = shell_wavevectors(&grid, shell)
        .into_iter()
        .filter(|&k| is_canonical(k))
        .collect();
    if shell == 0 || ks.is_empty() {
        return Err(SpectralError::EmptyShell(shell));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comps = SpectralField::zeros(grid, 3).into_components();
    let mut energy = 0.0;
    for k in ks {
        let mode = HelicalMode::new(k, sign)?;
        let a = uniform_complex(&mut rng);
        energy += 2.0 * a.norm_sqr();
        set_pair(&mut comps, &grid, k, mode.h.map(|h| h * a));
    }
    let scale = 1.0 / energy.sqrt();
    let f = SpectralField::from_components(grid, comps)?.scaled(scale);
    Ok(f.with_flag(true))
}

fn mode_rng(seed: u64, k: [i64; 3]) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let enc = |c: i64| (c + (1 << 20)) as u64 & ((1 << 21) - 1);
    rng.set_stream((enc(k[0]) << 42) | (enc(k[1]) << 21) | enc(k[2]));
    rng
}

/// Solenoidal field with `|û(k)| = |k|^{-(s+3/2)}` on every non-Nyquist
/// mode, so that `[u]_{H^r}` stays bounded under refinement for `r < s` and
/// grows like `n^{r-s}` for `r > s`.
///
/// Phases and the split between the two helicities are drawn per
/// wavevector from a stream keyed by `(seed, k)`, so the same seed gives
/// the same coefficients on every grid that contains `k`.
pub fn synth_regularity(
    grid: Grid,
    s_target: f64,
    seed: u64,
) -> Result<SpectralField, SpectralError> {
    if !(s_target > 0.0 && s_target.is_finite()) {
        return Err(SpectralError::InvalidArgument(format!(
            "s_target must be positive, got {s_target}"
        )));
    }
    let tau = std::f64::consts::TAU;
    let mut comps = SpectralField::zeros(grid, 3).into_components();
    for k in canonical_modes(&grid).collect::<Vec<_>>() {
        let mut rng = mode_rng(seed, k);
        let chi = rng.gen_range(0.0..tau);
        let pp = Complex64::from_polar(chi.cos(), rng.gen_range(0.0..tau));
        let pm = Complex64::from_polar(chi.sin(), rng.gen_range(0.0..tau));
        let hp = HelicalMode::new(k, Sign::Plus)?.h;
        let hm = HelicalMode::new(k, Sign::Minus)?.h;
        let k2: i64 = k.iter().map(|c| c * c).sum();
        let amp = (k2 as f64).powf(-(s_target + 1.5) / 2.0);
        let v = [0, 1, 2].map(|d| (hp[d] * pp + hm[d] * pm) * amp);
        set_pair(&mut comps, &grid, k, v);
    }
    Ok(SpectralField::from_components(grid, comps)?.with_flag(true))
}

/// Smooth random solenoidal field supported on `|k| <= kmax`, unit rms
/// speed.
pub fn random_band_limited(
    grid: Grid,
    kmax: f64,
    seed: u64,
) -> Result<SpectralField, SpectralError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comps = SpectralField::zeros(grid, 3).into_components();
    let mut energy = 0.0;
    for k in canonical_modes(&grid).collect::<Vec<_>>() {
        let k2 = (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64;
        if k2 > kmax * kmax {
            continue;
        }
        let mut v = [0; 3].map(|_| uniform_complex(&mut rng) / (1.0 + k2));
        let d = (0..3).map(|c| v[c] * k[c] as f64).sum::<Complex64>() / k2;
        for c in 0..3 {
            v[c] -= d * k[c] as f64;
        }
        energy += 2.0 * v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        set_pair(&mut comps, &grid, k, v);
    }
    if energy == 0.0 {
        return Err(SpectralError::InvalidArgument(format!(
            "no modes with 0 < |k| <= {kmax}"
        )));
    }
    let f = SpectralField::from_components(grid, comps)?.scaled(1.0 / energy.sqrt());
    Ok(f.with_flag(true))
}
