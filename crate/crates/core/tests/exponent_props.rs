use onsager::exponent::{
    beltrami_verdict, best_product_exponent, bootstrap_trace, check_energy_criterion,
    commutator_lebesgue_exponent, commutator_smoothness, interpolation_theta, product_admissible,
    MixedNorm, Outcome, ProductQuery, RegularityIndex,
};
use onsager::{ExtRat, Rat};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn rat_in(lo: i64, hi: i64, den: i64) -> impl Strategy<Value = Rat> {
    (lo * den..=hi * den).prop_map(move |n| Rat::new(n, den))
}

/// Supremum of admissible targets found by scanning a lattice finer than the
/// inputs; independent of the closed-form supremum.
fn scanned_sup(s1: &Rat, s2: &Rat, step: &Rat) -> Option<RegularityIndex> {
    let lo = Rat::int(-6);
    let hi = Rat::int(6);
    let mut s = lo;
    let mut best: Option<Rat> = None;
    while s <= hi {
        if product_admissible(&ProductQuery::new(s1.clone(), s2.clone(), s.clone())).admissible {
            best = Some(s.clone());
        }
        s = &s + step;
    }
    let v = best?;
    let next_up = &v + step;
    let attained_at_next =
        product_admissible(&ProductQuery::new(s1.clone(), s2.clone(), next_up.clone())).admissible;
    assert!(!attained_at_next);
    // `v` is the last admissible lattice point. If `v + step` is the true
    // supremum and open, `v` is a step below it.
    let open_above = {
        let probe = &v + &(step / Rat::int(2));
        product_admissible(&ProductQuery::new(s1.clone(), s2.clone(), probe)).admissible
    };
    Some(if open_above {
        RegularityIndex::open(next_up)
    } else {
        RegularityIndex::attained(v)
    })
}

#[test]
fn best_product_matches_lattice_scan() {
    let step = r(1, 48);
    for a in -12..=30 {
        for b in a..=30 {
            let s1 = r(a, 12);
            let s2 = r(b, 12);
            let scanned = scanned_sup(&s1, &s2, &step);
            match best_product_exponent(&s1, &s2) {
                Ok(sup) => assert_eq!(Some(sup), scanned, "s1={s1} s2={s2}"),
                Err(_) => assert_eq!(scanned, None, "s1={s1} s2={s2}"),
            }
        }
    }
}

proptest! {
    #[test]
    fn product_is_symmetric(s1 in rat_in(-3, 4, 12), s2 in rat_in(-3, 4, 12), s in rat_in(-4, 4, 12)) {
        let q = ProductQuery::new(s1, s2, s);
        let a = product_admissible(&q);
        let b = product_admissible(&q.swapped());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn admissible_iff_no_violations(s1 in rat_in(-3, 4, 6), s2 in rat_in(-3, 4, 6), s in rat_in(-4, 4, 6)) {
        let res = product_admissible(&ProductQuery::new(s1, s2, s));
        prop_assert_eq!(res.admissible, res.violated_conditions.is_empty());
    }

    #[test]
    fn bootstrap_closed_forms(tau_n in 51i64..=150, beta in rat_in(1, 100, 7)) {
        let tau = r(tau_n, 100);
        let t = bootstrap_trace(&tau, &beta).unwrap();
        let gain = &tau - r(1, 2);
        for step in &t.steps {
            let n = Rat::from(step.n as i64);
            prop_assert_eq!(&step.beta_n, &(&beta / &n));
            prop_assert_eq!(&step.sigma_n, &RegularityIndex::open(&gain * &n));
        }
        let n0 = t.n0.unwrap() as i64;
        prop_assert!(&gain * Rat::from(n0) <= r(5, 6));
        prop_assert!(&gain * Rat::from(n0 + 1) > r(5, 6));
        prop_assert_eq!(t.verdict.outcome, beltrami_verdict(&tau, &beta).unwrap().outcome);
    }

    /// Each bootstrap step is the product estimate with `λ ∈ H^τ` followed
    /// by one derivative gained from inverting the curl.
    #[test]
    fn bootstrap_step_is_product_plus_one(tau_n in 51i64..=150) {
        let tau = r(tau_n, 100);
        let t = bootstrap_trace(&tau, &Rat::int(10)).unwrap();
        for w in t.steps.windows(2) {
            let prod = best_product_exponent(&w[0].sigma_n.value, &tau).unwrap();
            prop_assert_eq!(&(prod.value + Rat::one()), &w[1].sigma_n.value);
        }
    }

    #[test]
    fn alpha_theta_identity(num in 0i64..1000) {
        // s uniformly on the 1/6000 lattice of [5/6, 1)
        let s = r(5000 + num, 6000);
        let a = commutator_smoothness(&s).unwrap();
        let th = interpolation_theta(&s).unwrap();
        prop_assert_eq!(Rat::int(2) * &a * &th, Rat::one() - &s);
        let p = commutator_lebesgue_exponent(&s).unwrap();
        prop_assert_eq!(r(1, 2) - &s / Rat::int(3), Rat::one() / (Rat::int(2) * p) - a / Rat::int(3));
    }

    #[test]
    fn criterion_monotone(
        q in rat_in(1, 10, 4),
        dq in rat_in(0, 5, 4),
        s in rat_in(0, 3, 12),
        ds in rat_in(0, 2, 12),
        att in any::<bool>(),
        att2 in any::<bool>(),
    ) {
        let base = check_energy_criterion(&MixedNorm::new(q.clone(), RegularityIndex { value: s.clone(), attained: att })).unwrap();
        let s2 = RegularityIndex { value: &s + &ds, attained: att2 };
        let weaker = RegularityIndex { value: s.clone(), attained: att };
        prop_assume!(s2.dominates(&weaker) && s2.value < r(5, 2));
        if base.outcome == Outcome::Conserves {
            let up = check_energy_criterion(&MixedNorm::new(&q + &dq, s2.clone())).unwrap();
            prop_assert_eq!(up.outcome, Outcome::Conserves);
            let inf = check_energy_criterion(&MixedNorm { q: ExtRat::Infinity, s: s2 }).unwrap();
            prop_assert_eq!(inf.outcome, Outcome::Conserves);
        }
    }
}
