//! Continuity of pointwise multiplication `H^{s1} × H^{s2} → H^s` on the
//! three-torus.
//!
//! Three rules cover the whole parameter space and never overlap:
//!
//! | rule       | regime                 | conditions                                   |
//! |------------|------------------------|----------------------------------------------|
//! | `nonneg`   | `min(s1,s2) >= 0, s >= 0` | (1) `s >= 0`, (2) `s_i >= s`, (3) `s1+s2-s > 3/2` |
//! | `neg-main` | `min(s1,s2) < 0`        | (1) `s_i >= s`, (2) `min < 0`, (3) `s1+s2 >= 0`, (4) `s1+s2-s > 3/2` |
//! | `neg-alt`  | `min(s1,s2) >= 0, s < 0`  | (1) `s_i >= s`, (5) `min >= 0, s < 0`, (3') `s1+s2 > 0`, (4) `s1+s2-s > 3/2` |
//!
//! For `nonneg` with `s ∈ ℕ₀` the strictness of (2) and (3) may be swapped:
//! `s_i > s` together with `s1+s2-s >= 3/2` is accepted as well.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{rat, ExponentError, RegularityIndex};
use crate::rat::Rat;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProductQuery {
    pub s1: Rat,
    pub s2: Rat,
    pub s: Rat,
}

impl ProductQuery {
    pub fn new(s1: Rat, s2: Rat, s: Rat) -> Self {
        ProductQuery { s1, s2, s }
    }

    pub fn swapped(&self) -> Self {
        ProductQuery {
            s1: self.s2.clone(),
            s2: self.s1.clone(),
            s: self.s.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductRule {
    Nonneg,
    NegMain,
    NegAlt,
}

impl fmt::Display for ProductRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProductRule::Nonneg => "nonneg",
            ProductRule::NegMain => "neg-main",
            ProductRule::NegAlt => "neg-alt",
        })
    }
}

/// A numbered condition of one of the product rules, shown as `nonneg(2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConditionId {
    pub rule: ProductRule,
    pub index: u8,
}

impl ConditionId {
    const fn new(rule: ProductRule, index: u8) -> Self {
        ConditionId { rule, index }
    }
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.rule, self.index)
    }
}

impl Serialize for ConditionId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductResult {
    pub admissible: bool,
    pub rule: ProductRule,
    pub violated_conditions: Vec<ConditionId>,
}

fn rule_for(q: &ProductQuery) -> ProductRule {
    let m = (&q.s1).min(&q.s2);
    if m.is_negative() {
        ProductRule::NegMain
    } else if q.s.is_negative() {
        ProductRule::NegAlt
    } else {
        ProductRule::Nonneg
    }
}

pub fn product_admissible(q: &ProductQuery) -> ProductResult {
    let three_halves = rat(3, 2);
    let sum = &q.s1 + &q.s2;
    let gap = &sum - &q.s;
    let min = q.s1.clone().min(q.s2.clone());
    let rule = rule_for(q);
    let c = |i| ConditionId::new(rule, i);
    let mut violated = Vec::new();

    match rule {
        ProductRule::Nonneg => {
            if q.s.is_negative() {
                violated.push(c(1));
            }
            let dominated = min >= q.s;
            let gap_strict = gap > three_halves;
            let standard = dominated && gap_strict;
            let interchanged = q.s.is_natural() && min > q.s && gap >= three_halves;
            if !standard && !interchanged {
                if !dominated {
                    violated.push(c(2));
                }
                if !gap_strict {
                    violated.push(c(3));
                }
            }
        }
        ProductRule::NegMain => {
            if min < q.s {
                violated.push(c(1));
            }
            if !min.is_negative() {
                violated.push(c(2));
            }
            if sum.is_negative() {
                violated.push(c(3));
            }
            if gap <= three_halves {
                violated.push(c(4));
            }
        }
        ProductRule::NegAlt => {
            if min < q.s {
                violated.push(c(1));
            }
            if min.is_negative() || !q.s.is_negative() {
                violated.push(c(5));
            }
            if sum <= Rat::zero() {
                violated.push(c(3));
            }
            if gap <= three_halves {
                violated.push(c(4));
            }
        }
    }

    ProductResult {
        admissible: violated.is_empty(),
        rule,
        violated_conditions: violated,
    }
}

fn better(a: Option<RegularityIndex>, b: RegularityIndex) -> Option<RegularityIndex> {
    match a {
        None => Some(b),
        Some(a) => Some(if b.dominates(&a) { b } else { a }),
    }
}

/// Supremum of the admissible targets `s` for the product `H^{s1} × H^{s2}`.
///
/// `attained` is true when the binding constraint is `s <= min(s1, s2)` (or
/// an integer endpoint reached through the strictness interchange), false
/// when it is the strict gap `s1 + s2 - s > 3/2` or the strict sign
/// condition of the alternate negative rule.
pub fn best_product_exponent(s1: &Rat, s2: &Rat) -> Result<RegularityIndex, ExponentError> {
    let min = s1.clone().min(s2.clone());
    let sum = s1 + s2;
    let gap_bound = &sum - rat(3, 2);
    let mut best: Option<RegularityIndex> = None;

    if min.is_negative() {
        if !sum.is_negative() {
            best = better(
                best,
                if min < gap_bound {
                    RegularityIndex::attained(min.clone())
                } else {
                    RegularityIndex::open(gap_bound.clone())
                },
            );
        }
    } else {
        // alternate negative rule: s < 0, s < gap_bound, s1 + s2 > 0
        if sum > Rat::zero() {
            best = better(
                best,
                RegularityIndex::open(Rat::zero().min(gap_bound.clone())),
            );
        }
        // non-negative rule: 0 <= s <= min, s < gap_bound
        if gap_bound > Rat::zero() {
            best = better(
                best,
                if min < gap_bound {
                    RegularityIndex::attained(min.clone())
                } else {
                    RegularityIndex::open(gap_bound.clone())
                },
            );
        }
        // integer targets: k < min and k <= gap_bound
        let cap = gap_bound.floor();
        let below_min = if min.is_integer() {
            &min - Rat::one()
        } else {
            min.floor()
        };
        let k = cap.min(below_min);
        if !k.is_negative() {
            best = better(best, RegularityIndex::attained(k));
        }
    }

    best.ok_or_else(|| ExponentError::NoAdmissibleTarget {
        s1: Box::new(s1.clone()),
        s2: Box::new(s2.clone()),
    })
}
