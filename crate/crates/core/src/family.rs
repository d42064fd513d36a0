//! Finite monotone families of sequences.
//!
//! Only finite, explicitly listed families are representable. A family may
//! carry a closed-form rule tag, in which case its componentwise limit is
//! known exactly rather than read off the last term.

use serde::{Deserialize, Serialize};

use crate::ecseq::EcSeq;
use crate::scalar::Scalar;
use crate::zseq::ZSeq;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Decreasing,
    Increasing,
}

/// Closed-form generators for the standard families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyRule {
    /// Term `n` is `1` at every index `>= n`, zero elsewhere.
    OnesFromIndexN,
    /// Term `n` is the unit vector `e_n` on ℕ, or on ℤ the bump with `1` at
    /// `n` and `-1` at `n+1`.
    BumpAtN,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "terms", rename_all = "snake_case")]
pub enum Terms {
    Ec(Vec<EcSeq>),
    Z(Vec<ZSeq>),
}

impl Terms {
    pub fn len(&self) -> usize {
        match self {
            Terms::Ec(t) => t.len(),
            Terms::Z(t) => t.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonotoneFamily {
    pub terms: Terms,
    pub direction: Direction,
    pub rule: Option<FamilyRule>,
}

/// Index of a component, in ℕ for sequences on ℕ and in ℤ otherwise.
pub type Component = i64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    /// 1-based positions of the offending consecutive terms.
    pub terms: (usize, usize),
    pub component: Component,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentwiseLimit {
    /// Exact limit from the closed-form rule.
    Exact { limit: Terms },
    /// The last term of a finite monotone family: its componentwise bound.
    FiniteStage { bound: Terms },
    /// Non-monotone family without a rule.
    Divergent { violation: Violation },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub monotone: bool,
    pub violation: Option<Violation>,
    pub limit: ComponentwiseLimit,
}

impl MonotoneFamily {
    pub fn ec(terms: Vec<EcSeq>, direction: Direction) -> Self {
        MonotoneFamily {
            terms: Terms::Ec(terms),
            direction,
            rule: None,
        }
    }

    pub fn z(terms: Vec<ZSeq>, direction: Direction) -> Self {
        MonotoneFamily {
            terms: Terms::Z(terms),
            direction,
            rule: None,
        }
    }

    /// Terms `1..=count` of a rule on ℕ.
    pub fn ec_rule(rule: FamilyRule, count: usize, direction: Direction) -> Self {
        let terms = (1..=count)
            .map(|n| match rule {
                FamilyRule::OnesFromIndexN => EcSeq::ones_from(n),
                FamilyRule::BumpAtN => EcSeq::unit(n),
            })
            .collect();
        MonotoneFamily {
            terms: Terms::Ec(terms),
            direction,
            rule: Some(rule),
        }
    }

    /// Terms `1..=count` of a rule on ℤ.
    pub fn z_rule(rule: FamilyRule, count: usize, direction: Direction) -> Self {
        let terms = (1..=count as i64)
            .map(|n| match rule {
                FamilyRule::OnesFromIndexN => ZSeq::ones_from(n),
                FamilyRule::BumpAtN => ZSeq::bump(n),
            })
            .collect();
        MonotoneFamily {
            terms: Terms::Z(terms),
            direction,
            rule: Some(rule),
        }
    }
}

fn ordered(a: &Scalar, b: &Scalar, dir: Direction) -> bool {
    match dir {
        Direction::Decreasing => b <= a,
        Direction::Increasing => a <= b,
    }
}

fn ec_step_violation(a: &EcSeq, b: &EcSeq, dir: Direction) -> Option<Component> {
    let m = a.stable_after().max(b.stable_after());
    (1..=m + 1)
        .find(|&n| !ordered(a.get(n), b.get(n), dir))
        .map(|n| n as Component)
}

fn z_step_violation(a: &ZSeq, b: &ZSeq, dir: Direction) -> Option<Component> {
    let (lo, hi) = ZSeq::span([a, b]);
    (lo - 1..=hi).find(|&i| !ordered(a.get(i), b.get(i), dir))
}

/// Checks the declared direction on every consecutive pair and reports the
/// componentwise limit.
///
/// # Panics
/// On an empty family.
pub fn family_check(f: &MonotoneFamily) -> FamilyReport {
    assert!(!f.terms.is_empty(), "family must be nonempty");
    let violation = match &f.terms {
        Terms::Ec(t) => t.windows(2).enumerate().find_map(|(k, w)| {
            ec_step_violation(&w[0], &w[1], f.direction).map(|c| Violation {
                terms: (k + 1, k + 2),
                component: c,
            })
        }),
        Terms::Z(t) => t.windows(2).enumerate().find_map(|(k, w)| {
            z_step_violation(&w[0], &w[1], f.direction).map(|c| Violation {
                terms: (k + 1, k + 2),
                component: c,
            })
        }),
    };
    let limit = match (f.rule, &violation) {
        // Both rules send every fixed component to 0.
        (Some(_), _) => ComponentwiseLimit::Exact {
            limit: match &f.terms {
                Terms::Ec(_) => Terms::Ec(vec![EcSeq::zero()]),
                Terms::Z(_) => Terms::Z(vec![ZSeq::zero()]),
            },
        },
        (None, None) => ComponentwiseLimit::FiniteStage {
            bound: match &f.terms {
                Terms::Ec(t) => Terms::Ec(vec![t[t.len() - 1].clone()]),
                Terms::Z(t) => Terms::Z(vec![t[t.len() - 1].clone()]),
            },
        },
        (None, Some(v)) => ComponentwiseLimit::Divergent {
            violation: v.clone(),
        },
    };
    FamilyReport {
        monotone: violation.is_none(),
        violation,
        limit,
    }
}
