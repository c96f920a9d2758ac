//! Exact decision procedures for the fractional-Sobolev exponent relations
//! behind the energy-conservation criteria.
//!
//! Everything here is a pure function over [`Rat`]. "For every sufficiently
//! small ε > 0" is carried by the `attained` flag of [`RegularityIndex`]
//! rather than by a numerical margin, so that every threshold is decided
//! exactly.

mod bootstrap;
mod criterion;
mod embedding;
mod product;

pub use bootstrap::{beltrami_verdict, bootstrap_trace, BootstrapStep, BootstrapTrace};
pub use criterion::{check_energy_criterion, constant_lambda_verdict};
pub use embedding::{
    commutator_lebesgue_exponent, commutator_smoothness, critical_lebesgue_exponent,
    dual_gradient_exponent, embedding_exponents, gradient_lebesgue_exponent, interpolation_theta,
    EmbeddingExponents,
};
pub use product::{
    best_product_exponent, product_admissible, ConditionId, ProductQuery, ProductResult,
    ProductRule,
};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rat::{ExtRat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExponentError {
    #[error("time exponent q = {0} must be at least 1")]
    TimeExponentBelowOne(ExtRat),
    #[error("{quantity} is defined for {range}, got {value}")]
    OutOfRange {
        quantity: &'static str,
        value: Rat,
        range: &'static str,
    },
    #[error("no admissible product target for s1 = {s1}, s2 = {s2}")]
    NoAdmissibleTarget { s1: Box<Rat>, s2: Box<Rat> },
    #[error("unsupported: {0}")]
    Unsupported(&'static str),
}

/// A Sobolev smoothness order together with whether it is reached.
///
/// `(v, attained)` grants every `s' <= v`; `(v, open)` grants every `s' < v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegularityIndex {
    pub value: Rat,
    pub attained: bool,
}

impl RegularityIndex {
    pub fn attained(value: Rat) -> Self {
        RegularityIndex {
            value,
            attained: true,
        }
    }

    pub fn open(value: Rat) -> Self {
        RegularityIndex {
            value,
            attained: false,
        }
    }

    pub fn grants(&self, s: &Rat) -> bool {
        if self.attained {
            s <= &self.value
        } else {
            s < &self.value
        }
    }

    /// True if every order granted by `other` is granted by `self`.
    pub fn dominates(&self, other: &RegularityIndex) -> bool {
        match self.value.cmp(&other.value) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => self.attained || !other.attained,
        }
    }

    pub fn shifted(&self, by: &Rat) -> Self {
        RegularityIndex {
            value: &self.value + by,
            attained: self.attained,
        }
    }
}

impl fmt::Display for RegularityIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.attained {
            write!(f, "{}", self.value)
        } else {
            write!(f, "{}-", self.value)
        }
    }
}

/// The membership claim `u ∈ L^q(0,T; H^s(T³))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MixedNorm {
    pub q: ExtRat,
    pub s: RegularityIndex,
}

impl MixedNorm {
    pub fn new(q: impl Into<ExtRat>, s: RegularityIndex) -> Self {
        MixedNorm { q: q.into(), s }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Kinetic energy is conserved.
    Conserves,
    /// The solution is classical (and therefore conserves energy).
    Classical,
    /// The sufficient criterion is not met. Never a dissipation claim.
    NoVerdict,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Conserves => "conserves",
            Outcome::Classical => "classical",
            Outcome::NoVerdict => "no_verdict",
        })
    }
}

/// Which sufficient condition a verdict was decided under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// `u ∈ L^{5/(2s)}(0,T; H^s)`, `5/6 <= s < 5/2`.
    FractionalSobolev,
    /// `H^s ⊂ W^{1,∞}` for `s > 5/2`: Beale–Kato–Majda continuation.
    BealeKatoMajda,
    /// Beltrami field with `λ ∈ L^β(0,T; H^τ)`.
    BeltramiMultiplier,
    /// Beltrami field with time-only `λ ∈ L^p(0,T)`.
    TimeOnlyMultiplier,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::FractionalSobolev => "fractional-sobolev",
            Basis::BealeKatoMajda => "beale-kato-majda",
            Basis::BeltramiMultiplier => "beltrami-multiplier",
            Basis::TimeOnlyMultiplier => "time-only-multiplier",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub outcome: Outcome,
    #[serde(rename = "theorem")]
    pub basis: Basis,
    pub reason: String,
    /// The smoothness order that witnesses a positive outcome.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Rat>,
}

impl Verdict {
    pub fn is_positive(&self) -> bool {
        self.outcome != Outcome::NoVerdict
    }
}

pub(crate) fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}
