//! Lebesgue and interpolation exponents used in the commutator and
//! nonlinear-term estimates of the fractional-Sobolev energy argument.

use serde::Serialize;

use super::{rat, ExponentError};
use crate::rat::Rat;

fn check_range(
    quantity: &'static str,
    s: &Rat,
    lo: Option<&Rat>,
    hi: &Rat,
    range: &'static str,
) -> Result<(), ExponentError> {
    let above = lo.is_none_or(|lo| s >= lo);
    if above && s < hi {
        Ok(())
    } else {
        Err(ExponentError::OutOfRange {
            quantity,
            value: s.clone(),
            range,
        })
    }
}

/// `p = (5-2s)/(5-4s)` for `5/6 <= s < 1`: the Lebesgue exponent on which the
/// commutator is estimated.
pub fn commutator_lebesgue_exponent(s: &Rat) -> Result<Rat, ExponentError> {
    check_range(
        "p_commutator",
        s,
        Some(&rat(5, 6)),
        &Rat::one(),
        "5/6 <= s < 1",
    )?;
    Ok((rat(5, 1) - Rat::int(2) * s) / (rat(5, 1) - Rat::int(4) * s))
}

/// `α = (3 - 3p + 2ps)/(2p)`, the smoothness lost when `H^s` is embedded in
/// `W^{α,2p}`, for `5/6 <= s < 1` with `p` the commutator exponent.
pub fn commutator_smoothness(s: &Rat) -> Result<Rat, ExponentError> {
    check_range("alpha", s, Some(&rat(5, 6)), &Rat::one(), "5/6 <= s < 1")?;
    let p = commutator_lebesgue_exponent(s)?;
    let two_p = Rat::int(2) * &p;
    Ok((Rat::int(3) - Rat::int(3) * &p + &two_p * s) / two_p)
}

/// `θ = (5-2s)/(4s)`.
pub fn interpolation_theta(s: &Rat) -> Result<Rat, ExponentError> {
    check_range("theta", s, Some(&rat(5, 6)), &rat(5, 2), "5/6 <= s < 5/2")?;
    Ok((Rat::int(5) - Rat::int(2) * s) / (Rat::int(4) * s))
}

/// `p = 6/(5-2s)` for `1 <= s < 3/2`, the exponent of `∇u` in the
/// nonlinear term.
pub fn gradient_lebesgue_exponent(s: &Rat) -> Result<Rat, ExponentError> {
    check_range("p", s, Some(&Rat::one()), &rat(3, 2), "1 <= s < 3/2")?;
    Ok(Rat::int(6) / (Rat::int(5) - Rat::int(2) * s))
}

/// Hölder dual of [`gradient_lebesgue_exponent`], `6/(1+2s)`.
pub fn dual_gradient_exponent(s: &Rat) -> Result<Rat, ExponentError> {
    check_range("p_dual", s, Some(&Rat::one()), &rat(3, 2), "1 <= s < 3/2")?;
    Ok(Rat::int(6) / (Rat::one() + Rat::int(2) * s))
}

/// Sobolev exponent `p* = 6/(3-2s)` of `H^s ⊂ L^{p*}` for `s < 3/2`.
pub fn critical_lebesgue_exponent(s: &Rat) -> Result<Rat, ExponentError> {
    check_range("p_star", s, None, &rat(3, 2), "s < 3/2")?;
    Ok(Rat::int(6) / (Rat::int(3) - Rat::int(2) * s))
}

/// Every exponent defined at `s`. Fields outside their range are `None`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingExponents {
    pub s: Rat,
    pub p_commutator: Option<Rat>,
    pub theta: Option<Rat>,
    pub alpha: Option<Rat>,
    pub p: Option<Rat>,
    pub p_dual: Option<Rat>,
    pub p_star: Option<Rat>,
}

/// Errors only if no exponent at all is defined at `s`.
pub fn embedding_exponents(s: &Rat) -> Result<EmbeddingExponents, ExponentError> {
    // θ is reported on the narrower range where the rest of the chain lives
    let theta = if s < &rat(3, 2) {
        interpolation_theta(s).ok()
    } else {
        None
    };
    let e = EmbeddingExponents {
        s: s.clone(),
        p_commutator: commutator_lebesgue_exponent(s).ok(),
        theta,
        alpha: commutator_smoothness(s).ok(),
        p: gradient_lebesgue_exponent(s).ok(),
        p_dual: dual_gradient_exponent(s).ok(),
        p_star: critical_lebesgue_exponent(s).ok(),
    };
    if e.p_commutator.is_none() && e.theta.is_none() && e.p.is_none() && e.p_star.is_none() {
        return Err(ExponentError::OutOfRange {
            quantity: "embedding exponents",
            value: s.clone(),
            range: "s < 3/2",
        });
    }
    Ok(e)
}
