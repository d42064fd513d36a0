//! The difference operator from eventually constant sequences on ℕ into
//! sequences on ℤ, and a refuter for candidate dominating families.
//!
//! `Y` holds the bounded sequences with a limit at `+∞`; every [`ZSeq`] is in
//! `Y`. `Z ⊆ Y` is cut out by `Σ_{k>=1} z_{-k}/2^k = lim z`. The operator
//! `T(x)_n = x_n - x_{n-1}` (with `x_k = 0` off ℕ) maps into `Z`, while its
//! parts `T₁(x)_n = x_n` and `T₂(x)_n = x_{n-1}` only map into `Y`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::ecseq::EcSeq;
use crate::opmatrix::gop::{BoundedSeq, ColumnRule, GOperator, RowMode};
use crate::opmatrix::tail::Tail;
use crate::report::Report;
use crate::scalar::Scalar;
use crate::zseq::{z_in_z, ZSeq};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    T,
    T1,
    T2,
}

pub fn t_apply(x: &EcSeq, which: Which) -> ZSeq {
    let t1 = || ZSeq::from_ec(x);
    let t2 = || ZSeq::new(2, x.prefix().to_vec(), Scalar::zero(), x.tail().clone());
    match which {
        Which::T1 => t1(),
        Which::T2 => t2(),
        Which::T => t1().sub(&t2()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Y,
    Z,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub limit: Scalar,
    pub weighted_sum: Scalar,
}

pub fn check_membership(z: &ZSeq, space: Space) -> Membership {
    let weighted_sum = z.weighted_negative_sum();
    let limit = z.limit().clone();
    let member = match space {
        Space::Y => true,
        Space::Z => weighted_sum == limit,
    };
    Membership {
        member,
        limit,
        weighted_sum,
    }
}

/// `ω` with `ω_{-j} = δ`, `ω_{-j-1} = -2δ` and zero elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionWitness {
    pub j: u64,
    pub delta: Scalar,
    pub omega: ZSeq,
}

impl ObstructionWitness {
    pub fn new(j: u64, delta: Scalar) -> Self {
        let j_ = j as i64;
        let omega = ZSeq::finite([(-j_, delta.clone()), (-j_ - 1, Scalar::from_int(-2) * &delta)]);
        ObstructionWitness { j, delta, omega }
    }

    /// `ω ∈ Z`, `ω ≰ 0` and `ω <= z` for every presented `z`.
    pub fn holds_for(&self, family: &[ZSeq]) -> bool {
        *self == ObstructionWitness::new(self.j, self.delta.clone())
            && self.delta.is_positive()
            && z_in_z(&self.omega)
            && !self.omega.leq(&ZSeq::zero())
            && family.iter().all(|z| self.omega.leq(z))
    }
}

/// The first check a candidate family fails. Terms are numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum FailedCheck {
    /// (1) `z^(n) ∉ Z`.
    NotInZ {
        term: usize,
        weighted_sum: Scalar,
        limit: Scalar,
    },
    /// (2) `z^(n)(index) < x^(n)(index)`.
    NotDominating { term: usize, index: i64 },
    /// (3) `z^(n+1)(index) > z^(n)(index)`.
    NotDecreasing { terms: (usize, usize), index: i64 },
    /// (4) `z^(n)(m) < 1` for some `n <= m <= horizon`, or `lim z^(n) < 1`.
    BelowForcedBound {
        term: usize,
        index: Option<i64>,
        value: Scalar,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RefuterOutcome {
    Rejected { failed: FailedCheck },
    Obstruction { witness: ObstructionWitness },
    /// Checks (1) to (4) pass but no `j` yields a valid `ω`.
    Unrefuted { reason: String },
}

impl RefuterOutcome {
    pub fn is_refuted(&self) -> bool {
        !matches!(self, RefuterOutcome::Unrefuted { .. })
    }

    pub fn summary(&self) -> String {
        match self {
            RefuterOutcome::Rejected { failed } => match failed {
                FailedCheck::NotInZ {
                    term,
                    weighted_sum,
                    limit,
                } => format!("(1) z^({term}) not in Z: weighted sum {weighted_sum} != limit {limit}"),
                FailedCheck::NotDominating { term, index } => {
                    format!("(2) z^({term}) < x^({term}) at index {index}")
                }
                FailedCheck::NotDecreasing { terms, index } => format!(
                    "(3) z^({}) > z^({}) at index {index}",
                    terms.1, terms.0
                ),
                FailedCheck::BelowForcedBound { term, index, value } => match index {
                    Some(m) => format!("(4) z^({term})({m}) = {value} < 1"),
                    None => format!("(4) lim z^({term}) = {value} < 1"),
                },
            },
            RefuterOutcome::Obstruction { witness } => format!(
                "(5) ω with ω(-{}) = {}, ω(-{}) = {} is in Z, not <= 0, and below every term",
                witness.j,
                witness.delta,
                witness.j + 1,
                Scalar::from_int(-2) * &witness.delta
            ),
            RefuterOutcome::Unrefuted { reason } => format!("unrefuted: {reason}"),
        }
    }
}

/// Runs the checks in order against the family `z^(1), z^(2), ...` meant
/// to witness `x^(n) → 0` in `Z`.
///
/// # Panics
/// On an empty family.
pub fn refute_oconvergence(family: &[ZSeq], horizon: Option<u64>) -> RefuterOutcome {
    assert!(!family.is_empty(), "family must be nonempty");
    let horizon = horizon.unwrap_or(2 * family.len() as u64) as i64;
    let rejected = |failed| RefuterOutcome::Rejected { failed };

    for (k, z) in family.iter().enumerate() {
        let m = check_membership(z, Space::Z);
        if !m.member {
            return rejected(FailedCheck::NotInZ {
                term: k + 1,
                weighted_sum: m.weighted_sum,
                limit: m.limit,
            });
        }
    }
    for (k, z) in family.iter().enumerate() {
        let x = ZSeq::bump(k as i64 + 1);
        if let Some(index) = x.first_violation_leq(z) {
            return rejected(FailedCheck::NotDominating { term: k + 1, index });
        }
    }
    for (k, w) in family.windows(2).enumerate() {
        if let Some(index) = w[1].first_violation_leq(&w[0]) {
            return rejected(FailedCheck::NotDecreasing {
                terms: (k + 1, k + 2),
                index,
            });
        }
    }
    let one = Scalar::one();
    for (k, z) in family.iter().enumerate() {
        let n = k as i64 + 1;
        for m in n..=horizon {
            if *z.get(m) < one {
                return rejected(FailedCheck::BelowForcedBound {
                    term: k + 1,
                    index: Some(m),
                    value: z.get(m).clone(),
                });
            }
        }
        if *z.limit() < one {
            return rejected(FailedCheck::BelowForcedBound {
                term: k + 1,
                index: None,
                value: z.limit().clone(),
            });
        }
    }

    // every j left of the cores, plus one inside the common left tail
    let reach = family.iter().map(|z| (-z.start()).max(0)).max().unwrap_or(0) as u64 + 1;
    let min_at = |i: i64| family.iter().map(|z| z.get(i).clone()).min().expect("nonempty");
    for j in 1..=reach {
        let j_ = j as i64;
        let delta = min_at(-j_);
        if delta.is_positive() && min_at(-j_ - 1) >= Scalar::from_int(-2) * &delta {
            let witness = ObstructionWitness::new(j, delta);
            debug_assert!(witness.holds_for(family));
            return RefuterOutcome::Obstruction { witness };
        }
    }
    RefuterOutcome::Unrefuted {
        reason: format!("no j <= {reach} has min_n z^(n)(-j) > 0 with room for -2δ at -j-1"),
    }
}

fn zs(entries: &[(i64, i64)], left: i64, right: i64) -> ZSeq {
    let core: BTreeMap<i64, Scalar> = entries.iter().map(|&(i, v)| (i, Scalar::from_int(v))).collect();
    ZSeq::from_core(&core, Scalar::from_int(left), Scalar::from_int(right))
}

/// `right` from index `n` on, zeros on `1..n`, and the given left part.
fn ones_after(n: i64, left_core: &[(i64, i64)], left: i64, right: i64) -> ZSeq {
    let mut core: Vec<(i64, i64)> = left_core.to_vec();
    core.extend((1..n).map(|k| (k, 0)));
    core.push((n, right));
    zs(&core, left, right)
}

/// Scripted candidate families, each meant to be rejected.
pub fn scripted_families(len: i64) -> Vec<(String, Vec<ZSeq>)> {
    let fam = |f: &dyn Fn(i64) -> ZSeq| (1..=len).map(f).collect::<Vec<_>>();
    vec![
        ("the bumps x^(n) themselves".into(), fam(&|n| ZSeq::bump(n))),
        ("ones from n, nothing on the left".into(), fam(&|n| ZSeq::ones_from(n))),
        ("ones from n, left tail 1".into(), fam(&|n| ones_after(n, &[(0, 1)], 1, 1))),
        ("ones from n, 2 at -1".into(), fam(&|n| ones_after(n, &[(-1, 2), (0, 0)], 0, 1))),
        ("ones from n, 8 at -3".into(), fam(&|n| ones_after(n, &[(-3, 8), (-2, 0), (-1, 0), (0, 0)], 0, 1))),
        ("constant 2".into(), fam(&|_| ZSeq::constant(Scalar::from_int(2)))),
        (
            "left tail 1, increasing order".into(),
            (1..=len).rev().map(|n| ones_after(n, &[(0, 1)], 1, 1)).collect(),
        ),
        (
            "left tail 1, a hole at n".into(),
            fam(&|n| {
                let mut core: Vec<(i64, i64)> = (0..=n + 1).map(|k| (k, 1)).collect();
                core[n as usize] = (n, 0);
                zs(&core, 1, 1)
            }),
        ),
        (
            "indicator of [n, len+1]".into(),
            fam(&|n| zs(&(n..=len + 1).map(|k| (k, 1)).collect::<Vec<_>>(), 0, 0)),
        ),
        ("2 from n, 2 at -1, 4 at -2".into(), fam(&|n| ones_after(n, &[(-2, 4), (-1, 2), (0, 0)], 0, 2))),
        ("ones from n, 4 at -1, -4 at -2".into(), fam(&|n| ones_after(n, &[(-2, -4), (-1, 4), (0, 0)], 0, 1))),
        ("ones from n, 1 at -1, 2 at -2".into(), fam(&|n| ones_after(n, &[(-2, 2), (-1, 1), (0, 0)], 0, 1))),
        (
            "ones from n, 4 at -3, 8 at -4".into(),
            fam(&|n| ones_after(n, &[(-4, 8), (-3, 4), (-2, 0), (-1, 0), (0, 0)], 0, 1)),
        ),
    ]
}

/// `T₁` or `T₂` restricted to positions `>= 1`, where both are supported.
pub fn shift_operator(which: Which) -> GOperator {
    match which {
        Which::T1 => GOperator {
            img_one: BoundedSeq::ec(EcSeq::ones()),
            img_e: vec![],
            rule: Some(ColumnRule::Block {
                first_row: 1,
                tail: Tail::Identity,
            }),
        },
        Which::T2 => GOperator {
            img_one: BoundedSeq::ec(EcSeq::from_ints(&[0], 1)),
            img_e: vec![],
            rule: Some(ColumnRule::Block {
                first_row: 2,
                tail: Tail::Identity,
            }),
        },
        Which::T => panic!("T is not positive"),
    }
}

/// A random eventually constant sequence with small rational entries.
pub fn random_ec(rng: &mut impl Rng) -> EcSeq {
    let n = rng.gen_range(0..8);
    let mut s = || Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=4));
    let prefix = (0..n).map(|_| s()).collect();
    EcSeq::new(prefix, s())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operator {
    Difference,
    /// `T₁ - T₁ = 0`.
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Example18Config {
    pub operator: Operator,
    pub horizon: Option<u64>,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Example18Config {
    fn default() -> Self {
        Example18Config {
            operator: Operator::Difference,
            horizon: None,
            samples: 200,
            seed: 18,
        }
    }
}

pub fn run_example18(cfg: &Example18Config) -> Report {
    let mut r = Report::new("example 18", "T = T₁ - T₂ is order continuous into Y but not into Z");
    let image = |x: &EcSeq| match cfg.operator {
        Operator::Difference => t_apply(x, Which::T),
        Operator::Zero => t_apply(x, Which::T1).sub(&t_apply(x, Which::T1)),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sample: Vec<EcSeq> = (0..cfg.samples).map(|_| random_ec(&mut rng)).collect();
    let split = sample
        .iter()
        .all(|x| t_apply(x, Which::T) == t_apply(x, Which::T1).sub(&t_apply(x, Which::T2)));
    let in_z = sample.iter().all(|x| z_in_z(&image(x)));
    r.step(
        "T(x) = T₁(x) - T₂(x) and T(x) ∈ Z on a random sample",
        split && in_z,
        vec![format!("{} sequences, seed {}", cfg.samples, cfg.seed)],
        json!({ "samples": cfg.samples, "seed": cfg.seed }),
    );

    let bumps = (1..=100).all(|n| image(&EcSeq::unit(n as usize)) == expected_bump(cfg.operator, n));
    r.step(
        "T(e^(n)) = x^(n) for n <= 100",
        bumps,
        vec![format!("T(1) = {}", image(&EcSeq::ones()))],
        json!({ "n": 100 }),
    );

    let mut lines = Vec::new();
    let mut ok = true;
    for (which, name) in [(Which::T1, "T₁"), (Which::T2, "T₂")] {
        let g = shift_operator(which);
        let pos = g.rowwise_check(RowMode::Positive).expect("decidable");
        let oc = g.rowwise_check(RowMode::OrderContinuous).expect("decidable");
        let agrees = sample
            .iter()
            .all(|x| (1..=12).all(|p| g.apply_at(x, p) == *t_apply(x, which).get(p as i64)));
        let vanishes_left = sample.iter().all(|x| (-5..=0).all(|p| t_apply(x, which).get(p).is_zero()));
        // componentwise decrease of the images of y^(n) = ones from n
        let ys: Vec<ZSeq> = (1..=11).map(|n| t_apply(&EcSeq::ones_from(n), which)).collect();
        let decreasing = ys.windows(2).all(|w| w[1].leq(&w[0]));
        let to_zero = (-3..=10).all(|k| ys[ys.len() - 1].get(k).is_zero());
        let outside_z = !z_in_z(&t_apply(&EcSeq::ones(), which));
        ok &= pos.holds && oc.holds && agrees && vanishes_left && decreasing && to_zero && outside_z;
        lines.push(format!(
            "{name}: positive {}, rows balance {}, {name}(y^(n)) decreasing to 0 on [-3, 10] {}, {name}(1) ∉ Z {}",
            pos.holds,
            oc.holds,
            decreasing && to_zero,
            outside_z
        ));
    }
    r.step("T₁ and T₂ are positive and order continuous into Y", ok, lines, json!({ "window": [-3, 10] }));

    if cfg.operator == Operator::Zero {
        r.step(
            "T(e^(n)) = 0: nothing to refute",
            true,
            vec!["the zero operator is order continuous".into()],
            json!(null),
        );
        r.verdict = if r.all_passed() {
            "zero operator: trivially order continuous, refuter not triggered".into()
        } else {
            failed_verdict(&r)
        };
        return r;
    }

    let mut lines = Vec::new();
    let mut data = Vec::new();
    let mut all = true;
    for (name, fam) in scripted_families(8) {
        let out = refute_oconvergence(&fam, cfg.horizon);
        let valid = match &out {
            RefuterOutcome::Obstruction { witness } => witness.holds_for(&fam),
            other => other.is_refuted(),
        };
        all &= valid;
        lines.push(format!("{name}: {}", out.summary()));
        data.push(json!({ "family": name, "outcome": out }));
    }
    r.step(
        "every scripted family z^(n) >= x^(n) fails to decrease to 0 in Z",
        all,
        lines,
        json!({ "horizon": cfg.horizon, "families": data }),
    );

    r.verdict = if r.all_passed() {
        "T ∈ L_oc(X, Y) evidence passes; T ∉ L_oc(X, Z) obstruction reproduced".into()
    } else {
        failed_verdict(&r)
    };
    r
}

fn expected_bump(op: Operator, n: i64) -> ZSeq {
    match op {
        Operator::Difference => ZSeq::bump(n),
        Operator::Zero => ZSeq::zero(),
    }
}

fn failed_verdict(r: &Report) -> String {
    format!("check failed: {}", r.failed_step().map(|s| s.name.as_str()).unwrap_or(""))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn images_of_basis_elements() {
        assert_eq!(t_apply(&EcSeq::unit(3), Which::T), ZSeq::bump(3));
        assert_eq!(t_apply(&EcSeq::ones(), Which::T), ZSeq::finite([(1, Scalar::one())]));
        assert!(t_apply(&EcSeq::zero(), Which::T).is_zero());
    }

    #[test]
    fn memberships() {
        let t1e1 = t_apply(&EcSeq::unit(1), Which::T1);
        assert!(check_membership(&t1e1, Space::Z).member);
        assert!(check_membership(&ZSeq::constant(Scalar::one()), Space::Z).member);
        assert!(!check_membership(&ZSeq::ones_from(1), Space::Z).member);
        assert!(check_membership(&ZSeq::ones_from(1), Space::Y).member);
    }

    #[test]
    fn scripted_outcomes() {
        let fams = scripted_families(8);
        let outs: Vec<RefuterOutcome> = fams.iter().map(|(_, f)| refute_oconvergence(f, None)).collect();
        assert!(matches!(
            outs[0],
            RefuterOutcome::Rejected {
                failed: FailedCheck::NotDecreasing { .. }
            }
        ));
        assert!(matches!(
            outs[1],
            RefuterOutcome::Rejected {
                failed: FailedCheck::NotInZ { .. }
            }
        ));
        let RefuterOutcome::Obstruction { witness } = &outs[2] else {
            panic!("{:?}", outs[2])
        };
        assert_eq!((witness.j, witness.delta.clone()), (1, Scalar::one()));
        assert!(matches!(
            outs[10],
            RefuterOutcome::Rejected {
                failed: FailedCheck::NotDominating { index: -2, .. }
            }
        ));
        let RefuterOutcome::Obstruction { witness } = &outs[12] else {
            panic!("{:?}", outs[12])
        };
        assert_eq!((witness.j, witness.delta.clone()), (3, Scalar::from_int(4)));
        for ((_, f), o) in fams.iter().zip(&outs) {
            assert!(o.is_refuted(), "{o:?}");
            if let RefuterOutcome::Obstruction { witness } = o {
                assert!(witness.holds_for(f));
            }
        }
    }

    #[test]
    fn horizon_does_not_change_the_verdict() {
        let a = run_example18(&Example18Config {
            horizon: Some(5),
            ..Default::default()
        });
        let b = run_example18(&Example18Config {
            horizon: Some(50),
            ..Default::default()
        });
        assert!(a.all_passed() && b.all_passed());
        assert_eq!(a.verdict, b.verdict);
    }

    #[test]
    fn zero_operator_is_not_refuted() {
        let r = run_example18(&Example18Config {
            operator: Operator::Zero,
            ..Default::default()
        });
        assert!(r.all_passed(), "{}", r.to_text(true));
        assert!(r.verdict.starts_with("zero operator"));
    }
}
