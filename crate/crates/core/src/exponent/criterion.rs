use super::{rat, Basis, ExponentError, MixedNorm, Outcome, Verdict};
use crate::rat::{ExtRat, Rat};

/// Decides whether `u ∈ L^q(0,T; H^s)` meets the fractional-Sobolev energy
/// criterion.
///
/// `Conserves` iff some granted `s'` with `5/6 <= s' < 5/2` has
/// `q >= 5/(2s')`; `Classical` iff some granted `s' > 5/2` (the
/// Beale–Kato–Majda regime, any `q >= 1`). When both hold, `Classical` is
/// reported since it is the stronger conclusion.
pub fn check_energy_criterion(m: &MixedNorm) -> Result<Verdict, ExponentError> {
    let one = ExtRat::Finite(Rat::one());
    if m.q < one {
        return Err(ExponentError::TimeExponentBelowOne(m.q.clone()));
    }
    let five_halves = rat(5, 2);
    let five_sixths = rat(5, 6);
    let v = &m.s.value;

    if v > &five_halves {
        return Ok(Verdict {
            outcome: Outcome::Classical,
            basis: Basis::BealeKatoMajda,
            reason: format!(
                "H^{} grants s' > 5/2, so H^s' embeds in W^(1,inf) and L^{} in time is integrable",
                m.s, m.q
            ),
            witness: None,
        });
    }

    // Usable orders: granted ∩ [5/6, 5/2) ∩ [5/(2q), ∞). The lower end is
    // always closed, so `lo` itself is the witness whenever the set is
    // non-empty.
    let need = rat(5, 2) * m.q.recip();
    let lo = five_sixths.clone().max(need);
    let sup_included = m.s.attained && v < &five_halves;
    let ok = &lo < v || (&lo == v && sup_included);

    if ok {
        return Ok(Verdict {
            outcome: Outcome::Conserves,
            basis: Basis::FractionalSobolev,
            reason: format!(
                "s' = {lo} is granted by H^{}, 5/6 <= s' < 5/2 and q = {} >= 5/(2s') = {}",
                m.s,
                m.q,
                rat(5, 2) / &lo
            ),
            witness: Some(lo),
        });
    }

    let reason = if !m.s.grants(&five_sixths) {
        format!("regularity H^{} does not reach 5/6", m.s)
    } else {
        format!(
            "q = {} but 5/(2s') > q for every granted s' (need q {} 5/(2*{}) = {})",
            m.q,
            if sup_included { ">=" } else { ">" },
            v,
            rat(5, 2) / v
        )
    };
    Ok(Verdict {
        outcome: Outcome::NoVerdict,
        basis: Basis::FractionalSobolev,
        reason,
        witness: None,
    })
}

/// Beltrami field with a multiplier depending on time only, `λ ∈ L^p(0,T)`.
///
/// Two elliptic iterations lift `ω ∈ L^p(L²)` to `ω ∈ L^{p/3}(H²) ⊂
/// L^{p/3}(L^∞)`; for `p >= 3` that is time-integrable vorticity, hence a
/// classical solution.
pub fn constant_lambda_verdict(
    p: &ExtRat,
    lambda_space_dependent: bool,
) -> Result<Verdict, ExponentError> {
    if lambda_space_dependent {
        return Err(ExponentError::Unsupported(
            "space-dependent multiplier; use the Beltrami multiplier verdict",
        ));
    }
    if p < &ExtRat::Finite(Rat::one()) {
        return Err(ExponentError::TimeExponentBelowOne(p.clone()));
    }
    let three = ExtRat::Finite(Rat::int(3));
    let vorticity_time = match p {
        ExtRat::Finite(r) => ExtRat::Finite(r / Rat::int(3)),
        ExtRat::Infinity => ExtRat::Infinity,
    };
    let chain = format!(
        "omega in L^{p}(H^0) -> u in L^{p}(H^1) -> ... -> omega in L^{vorticity_time}(H^2) in L^{vorticity_time}(L^inf)"
    );
    if p >= &three {
        Ok(Verdict {
            outcome: Outcome::Classical,
            basis: Basis::TimeOnlyMultiplier,
            reason: format!("{chain}; p/3 >= 1 closes the Beale-Kato-Majda criterion"),
            witness: None,
        })
    } else {
        Ok(Verdict {
            outcome: Outcome::NoVerdict,
            basis: Basis::TimeOnlyMultiplier,
            reason: format!("{chain}; p/3 < 1, vorticity not integrable in time"),
            witness: None,
        })
    }
}
