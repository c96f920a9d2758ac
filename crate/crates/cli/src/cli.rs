use std::path::PathBuf;

use clap::{Parser, Subcommand};
use onsager::spectral::Sign;
use onsager::{ExtRat, Rat};

/// Exact energy-conservation criteria for 3D Euler and the numerical
/// probes behind them.
///
/// Rational arguments are read exactly: `5/6`, `-1/2`, `0.25`. Negative
/// values may need the `--flag=-1/2` form. Exit status: 0 success, 2 when a
/// verdict is `no_verdict`, 1 on any error (a JSON error object is written
/// to stderr).
#[derive(Debug, Parser)]
#[command(name = "onsager", version)]
pub struct Cli {
    /// Print machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,

    /// Write the run manifest here. Commands that produce files write one
    /// beside their outputs regardless.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide the mixed-norm criterion for u in L^q(0,T; H^s).
    Criterion {
        /// Time exponent, a rational >= 1 or `inf`.
        #[arg(long)]
        q: ExtRat,
        #[arg(long, allow_hyphen_values = true)]
        s: Rat,
        /// The endpoint s itself is attained (default: every s' < s).
        #[arg(long)]
        attained: bool,
    },
    /// Is H^s1 · H^s2 ⊂ H^s on the 3-torus?
    Product {
        #[arg(long, allow_hyphen_values = true)]
        s1: Rat,
        #[arg(long, allow_hyphen_values = true)]
        s2: Rat,
        #[arg(long, allow_hyphen_values = true)]
        s: Rat,
    },
    /// Lebesgue and interpolation exponents attached to s.
    Embed {
        #[arg(long, allow_hyphen_values = true)]
        s: Rat,
    },
    /// Regularity bootstrap for a Beltrami field with λ in L^β(H^τ).
    Bootstrap {
        #[arg(long)]
        tau: Rat,
        #[arg(long)]
        beta: Rat,
    },
    /// Closed-form verdict for λ in L^β(H^τ).
    BeltramiVerdict {
        #[arg(long)]
        tau: Rat,
        #[arg(long)]
        beta: Rat,
    },
    /// Verdict for a Beltrami field whose multiplier depends on time only.
    LambdaConst {
        /// Time exponent of λ, a rational >= 1 or `inf`.
        #[arg(long)]
        p: ExtRat,
    },
    /// L², H^s and homogeneous H^s norms of a field file.
    Norms {
        #[arg(long)]
        field: PathBuf,
        /// Comma-separated exponents.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        s_list: Vec<Rat>,
    },
    /// Gagliardo seminorm by double-lattice quadrature (small grids only).
    Gagliardo {
        #[arg(long)]
        field: PathBuf,
        #[arg(long)]
        alpha: Rat,
        #[arg(long, default_value = "2")]
        p: Rat,
        /// Largest grid accepted; the cost grows as n⁶.
        #[arg(long, default_value_t = onsager::spectral::DEFAULT_GAGLIARDO_MAX_N)]
        max_n: usize,
    },
    /// Gradient, commutator and vanishing rates for a field of regularity α.
    MollifyRates {
        #[arg(long)]
        alpha: Rat,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        eps0: Rat,
        /// Number of halvings of ε², clipped by the resolution floor.
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Directory for the per-ε CSV tables.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Build a test field and write it as PFLD1 with a metadata sidecar.
    MakeField {
        #[command(subcommand)]
        kind: FieldKind,
    },
    /// Integrate Euler/Navier–Stokes from a key=value config file.
    ///
    /// Keys: n, dt, t_end (required); nu, dealias, s_list, eps_list,
    /// output_every. The initial field is chosen by init.kind:
    ///   abc      init.a, init.b, init.c (default 1)
    ///   helical  init.shell, init.sign (+/-), init.seed
    ///   synth    init.s, init.seed
    ///   random   init.kmax, init.seed
    ///   file     init.path (a spectral PFLD1 file)
    /// and may be rescaled with init.amplitude.
    #[command(verbatim_doc_comment)]
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Re-run a manifest and compare the outputs.
    Replay {
        #[arg(value_name = "MANIFEST")]
        path: PathBuf,
        /// Relative tolerance for floating-point outputs.
        #[arg(long, default_value_t = 1e-9)]
        rtol: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum FieldKind {
    /// A sin z + C cos y, B sin x + A cos z, C sin y + B cos x.
    Abc {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a: Rat,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        b: Rat,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        c: Rat,
        #[arg(long)]
        out: PathBuf,
    },
    /// Curl eigenfield on the shell |k|² = shell.
    Helical {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        shell: u64,
        #[arg(long, default_value = "+", allow_hyphen_values = true)]
        sign: Sign,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random field with |û(k)| ∝ |k|^-(s+3/2).
    Synth {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: Rat,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}
