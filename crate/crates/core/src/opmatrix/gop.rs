//! Operators from eventually constant sequences into bounded sequences,
//! given by their values on the basis `{1} ∪ {e_i}`.
//!
//! Output rows are positions `p >= 1` of the image sequences. Row `p` of the
//! operator is the functional `x ↦ T(x)(p)`; positivity and order
//! continuity are decided one row at a time, and the infinitely many rows
//! are covered by enumerating every row pattern that occurs.

use num_integer::{Integer, Roots};
use serde::{Deserialize, Serialize};

use super::lmatrix::LMatrix;
use super::tail::Tail;
use crate::ecseq::EcSeq;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Positions checked explicitly before the decision gives up.
const MAX_ROWS: u64 = 2_000_000;

/// `t_k = k(k+1)/2`.
pub fn triangular(k: u64) -> u64 {
    k * (k + 1) / 2
}

/// Block `k >= 1` and slot `1 <= s <= k` of position `p >= 1` in the
/// partition of ℕ into consecutive blocks of lengths `1, 2, 3, ...`.
pub fn block_and_slot(p: u64) -> (u64, u64) {
    assert!(p >= 1, "positions start at 1");
    let mut k = ((8 * p + 1).sqrt() - 1) / 2;
    while triangular(k) < p {
        k += 1;
    }
    while k > 0 && triangular(k - 1) >= p {
        k -= 1;
    }
    (k, p - triangular(k - 1))
}

/// A bounded sequence on ℕ with exact pointwise values and limit data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundedSeq {
    EventuallyConstant { seq: EcSeq },
    /// `prefix` followed by `period` repeated forever.
    EventuallyPeriodic {
        prefix: Vec<Scalar>,
        period: Vec<Scalar>,
    },
    /// Indicator of `{ t_{k-1} + i : k >= i }`: slot `i` of every block
    /// long enough to have one.
    TriSlot { slot: u64 },
}

impl BoundedSeq {
    pub fn ec(seq: EcSeq) -> Self {
        BoundedSeq::EventuallyConstant { seq }
    }

    pub fn periodic(prefix: Vec<Scalar>, period: Vec<Scalar>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Invalid("empty period".into()));
        }
        Ok(BoundedSeq::EventuallyPeriodic { prefix, period })
    }

    pub fn get(&self, p: u64) -> Scalar {
        assert!(p >= 1, "positions start at 1");
        match self {
            BoundedSeq::EventuallyConstant { seq } => seq.get(p as usize).clone(),
            BoundedSeq::EventuallyPeriodic { prefix, period } => {
                let idx = (p - 1) as usize;
                match prefix.get(idx) {
                    Some(v) => v.clone(),
                    None => period[(idx - prefix.len()) % period.len()].clone(),
                }
            }
            BoundedSeq::TriSlot { slot } => {
                if block_and_slot(p).1 == *slot {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }
        }
    }

    pub fn limsup(&self) -> Scalar {
        match self {
            BoundedSeq::EventuallyConstant { seq } => seq.limit().clone(),
            BoundedSeq::EventuallyPeriodic { period, .. } => period.iter().max().cloned().unwrap_or_default(),
            BoundedSeq::TriSlot { .. } => Scalar::one(),
        }
    }

    pub fn liminf(&self) -> Scalar {
        match self {
            BoundedSeq::EventuallyConstant { seq } => seq.limit().clone(),
            BoundedSeq::EventuallyPeriodic { period, .. } => period.iter().min().cloned().unwrap_or_default(),
            BoundedSeq::TriSlot { .. } => Scalar::zero(),
        }
    }

    /// `sup_p |x(p)|`.
    pub fn sup_abs(&self) -> Scalar {
        match self {
            BoundedSeq::EventuallyConstant { seq } => seq
                .prefix()
                .iter()
                .chain(std::iter::once(seq.tail()))
                .map(Scalar::abs)
                .max()
                .unwrap_or_default(),
            BoundedSeq::EventuallyPeriodic { prefix, period } => {
                prefix.iter().chain(period).map(Scalar::abs).max().unwrap_or_default()
            }
            BoundedSeq::TriSlot { .. } => Scalar::one(),
        }
    }

    /// Positions after which the value depends only on `p mod period()` (and
    /// for `TriSlot` on the slot of `p`).
    fn settled_after(&self) -> u64 {
        match self {
            BoundedSeq::EventuallyConstant { seq } => seq.stable_after() as u64,
            BoundedSeq::EventuallyPeriodic { prefix, .. } => prefix.len() as u64,
            BoundedSeq::TriSlot { .. } => 0,
        }
    }

    fn period(&self) -> u64 {
        match self {
            BoundedSeq::EventuallyPeriodic { period, .. } => period.len() as u64,
            _ => 1,
        }
    }

    fn slot(&self) -> Option<u64> {
        match self {
            BoundedSeq::TriSlot { slot } => Some(*slot),
            _ => None,
        }
    }
}

/// How `T(e_i)` is defined for every `i` past the explicit list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnRule {
    /// `T(e_i) = TriSlot(i)`.
    TriSlot,
    /// Block-diagonal continuation: with `m` explicit columns, column
    /// `m+1+kq+c` is nonzero only at positions `first_row+kq+r`, where it
    /// equals `tail.entry(r, c)` and `q = tail.period()`.
    Block { first_row: u64, tail: Tail },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GOperator {
    pub img_one: BoundedSeq,
    /// `T(e_1), ..., T(e_m)`.
    pub img_e: Vec<BoundedSeq>,
    pub rule: Option<ColumnRule>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowMode {
    Positive,
    OrderContinuous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RowWitness {
    NegativeEntry { row: u64, column: u64, value: Scalar },
    /// `Σ_i T(e_i)(row) > T(1)(row)`.
    Excess { row: u64, sum: Scalar, one: Scalar },
    /// `T(1)(row) - Σ_i T(e_i)(row) != 0`.
    Imbalance { row: u64, residual: Scalar },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCheck {
    pub holds: bool,
    /// Positions `1..=rows_checked` were examined; every row pattern occurs
    /// among them.
    pub rows_checked: u64,
    pub witness: Option<RowWitness>,
}

impl GOperator {
    pub fn explicit_count(&self) -> u64 {
        self.img_e.len() as u64
    }

    /// `T(e_i)(p)`.
    pub fn e_value(&self, i: u64, p: u64) -> Scalar {
        assert!(i >= 1, "basis index starts at 1");
        let m = self.explicit_count();
        if i <= m {
            return self.img_e[(i - 1) as usize].get(p);
        }
        match &self.rule {
            None => Scalar::zero(),
            Some(ColumnRule::TriSlot) => BoundedSeq::TriSlot { slot: i }.get(p),
            Some(ColumnRule::Block { first_row, tail }) => {
                let q = tail.period() as u64;
                let (k, c) = ((i - m - 1) / q, (i - m - 1) % q);
                let row_start = first_row + k * q;
                if p >= row_start && p < row_start + q {
                    tail.entry((p - row_start) as usize, c as usize)
                } else {
                    Scalar::zero()
                }
            }
        }
    }

    /// The image of `e_i` as a sequence, when it has a finite description.
    pub fn image_e(&self, i: u64) -> BoundedSeq {
        let m = self.explicit_count();
        if i <= m {
            return self.img_e[(i - 1) as usize].clone();
        }
        match &self.rule {
            None => BoundedSeq::ec(EcSeq::zero()),
            Some(ColumnRule::TriSlot) => BoundedSeq::TriSlot { slot: i },
            Some(ColumnRule::Block { first_row, tail }) => {
                let q = tail.period() as u64;
                let (k, c) = ((i - m - 1) / q, (i - m - 1) % q);
                let row_start = first_row + k * q;
                let mut prefix = vec![Scalar::zero(); (row_start - 1 + q) as usize];
                for r in 0..q {
                    prefix[(row_start - 1 + r) as usize] = tail.entry(r as usize, c as usize);
                }
                BoundedSeq::ec(EcSeq::new(prefix, Scalar::zero()))
            }
        }
    }

    /// Nonzero `T(e_i)(p)` over all `i`, ascending in `i`.
    pub fn row(&self, p: u64) -> Vec<(u64, Scalar)> {
        let m = self.explicit_count();
        let mut out: Vec<(u64, Scalar)> = (1..=m)
            .filter_map(|i| {
                let v = self.img_e[(i - 1) as usize].get(p);
                (!v.is_zero()).then_some((i, v))
            })
            .collect();
        match &self.rule {
            None => {}
            Some(ColumnRule::TriSlot) => {
                let (_, s) = block_and_slot(p);
                if s > m {
                    out.push((s, Scalar::one()));
                }
            }
            Some(ColumnRule::Block { first_row, tail }) => {
                if p >= *first_row {
                    let q = tail.period() as u64;
                    let (k, r) = ((p - first_row) / q, ((p - first_row) % q) as usize);
                    for c in 0..q {
                        let v = tail.entry(r, c as usize);
                        if !v.is_zero() {
                            out.push((m + 1 + k * q + c, v));
                        }
                    }
                }
            }
        }
        out
    }

    /// `T(x)(p)` for `x = λ0·1 + Σ λi·e_i`.
    pub fn apply_at(&self, x: &EcSeq, p: u64) -> Scalar {
        let b = x.to_basis();
        let mut v = &b.lambda0 * &self.img_one.get(p);
        for (i, l) in &b.lambdas {
            v += &(l * &self.e_value(*i, p));
        }
        v
    }

    /// Number of leading positions whose inspection covers every row
    /// pattern.
    pub fn decision_horizon(&self) -> Result<u64> {
        let m = self.explicit_count();
        let seqs = std::iter::once(&self.img_one).chain(&self.img_e);
        let mut settled = seqs.clone().map(BoundedSeq::settled_after).max().unwrap_or(0);
        let mut period = seqs.clone().map(BoundedSeq::period).fold(1u64, |a, b| a.lcm(&b));
        let mut slot_cap = seqs.filter_map(BoundedSeq::slot).max();
        match &self.rule {
            None => {}
            Some(ColumnRule::TriSlot) => slot_cap = Some(slot_cap.unwrap_or(0).max(m)),
            Some(ColumnRule::Block { first_row, tail }) => {
                settled = settled.max(first_row.saturating_sub(1));
                period = period.lcm(&(tail.period() as u64));
            }
        }
        let horizon = match slot_cap {
            None => settled + period,
            Some(cap) => {
                // blocks K .. K+2L-1 realise every (k mod 2L, slot class) pair
                let mut k = cap + period + 1;
                while triangular(k - 1) < settled {
                    k += 1;
                }
                triangular(k + 2 * period - 1)
            }
        };
        if horizon > MAX_ROWS {
            return Err(Error::Undecidable(format!(
                "row patterns repeat only after {horizon} positions"
            )));
        }
        Ok(horizon.max(1))
    }

    /// Positive mode: `T(e_i)(p) >= 0` and `Σ_i T(e_i)(p) <= T(1)(p)` for every
    /// row. Order-continuous mode: `Σ_i T(e_i)(p) = T(1)(p)` for every row.
    pub fn rowwise_check(&self, mode: RowMode) -> Result<RowCheck> {
        let horizon = self.decision_horizon()?;
        for p in 1..=horizon {
            let row = self.row(p);
            let one = self.img_one.get(p);
            let sum: Scalar = row.iter().map(|(_, v)| v).sum();
            let witness = match mode {
                RowMode::Positive => row
                    .iter()
                    .find(|(_, v)| v.is_negative())
                    .map(|(i, v)| RowWitness::NegativeEntry {
                        row: p,
                        column: *i,
                        value: v.clone(),
                    })
                    .or_else(|| {
                        (sum > one).then(|| RowWitness::Excess {
                            row: p,
                            sum: sum.clone(),
                            one: one.clone(),
                        })
                    }),
                RowMode::OrderContinuous => (sum != one).then(|| RowWitness::Imbalance {
                    row: p,
                    residual: &one - &sum,
                }),
            };
            if witness.is_some() {
                return Ok(RowCheck {
                    holds: false,
                    rows_checked: p,
                    witness,
                });
            }
        }
        Ok(RowCheck {
            holds: true,
            rows_checked: horizon,
            witness: None,
        })
    }

    /// The operator `Â` of a matrix, viewed with range in bounded sequences.
    pub fn from_lmatrix(a: &LMatrix) -> GOperator {
        let img_one = BoundedSeq::ec(a.apply(&EcSeq::ones()));
        let img_e = (1..=a.cols() as usize)
            .map(|j| BoundedSeq::ec(a.apply(&EcSeq::unit(j))))
            .collect();
        let rule = (!a.tail().is_zero()).then(|| ColumnRule::Block {
            first_row: a.rows() + 1,
            tail: a.tail().clone(),
        });
        GOperator { img_one, img_e, rule }
    }

    /// Keeps `T(1)` and `T(e_1), ..., T(e_n)`; every later `e_i` maps to 0.
    pub fn truncated(&self, n: u64) -> GOperator {
        GOperator {
            img_one: self.img_one.clone(),
            img_e: (1..=n).map(|i| self.image_e(i)).collect(),
            rule: None,
        }
    }
}

/// The operator with `T(1) = 1` and `T(e_i) = TriSlot(i)`: every position
/// belongs to exactly one `e_i`, and each `T(e_i)` is `1` infinitely often.
pub fn build_t_example21() -> GOperator {
    GOperator {
        img_one: BoundedSeq::ec(EcSeq::ones()),
        img_e: Vec::new(),
        rule: Some(ColumnRule::TriSlot),
    }
}

pub fn gop_rowwise_check(t: &GOperator, mode: RowMode) -> Result<RowCheck> {
    t.rowwise_check(mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn slots_of_first_positions() {
        let got: Vec<_> = (1..=7).map(block_and_slot).collect();
        assert_eq!(got, vec![(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3), (4, 1)]);
        assert_eq!(block_and_slot(triangular(1000)), (1000, 1000));
        assert_eq!(block_and_slot(triangular(1000) + 1), (1001, 1));
    }

    #[test]
    fn trislot_one_pattern() {
        let t = build_t_example21();
        let v: Vec<i64> = (1..=7).map(|p| t.e_value(1, p).to_i64().unwrap()).collect();
        assert_eq!(v, vec![1, 1, 0, 1, 0, 0, 1]);
        assert_eq!(t.img_one.get(12345), s(1));
    }

    #[test]
    fn first_three_columns_cover_first_six_positions() {
        let t = build_t_example21();
        for p in 1..=6 {
            let total: Scalar = (1..=3).map(|i| t.e_value(i, p)).sum();
            assert_eq!(total, s(1), "position {p}");
        }
    }

    #[test]
    fn example21_operator_checks() {
        let t = build_t_example21();
        assert!(t.rowwise_check(RowMode::Positive).unwrap().holds);
        assert!(t.rowwise_check(RowMode::OrderContinuous).unwrap().holds);
    }

    #[test]
    fn doubled_one_breaks_balance_only() {
        let mut t = build_t_example21();
        t.img_one = BoundedSeq::ec(EcSeq::constant(s(2)));
        assert!(t.rowwise_check(RowMode::Positive).unwrap().holds);
        let oc = t.rowwise_check(RowMode::OrderContinuous).unwrap();
        assert_eq!(
            oc.witness,
            Some(RowWitness::Imbalance {
                row: 1,
                residual: s(1)
            })
        );
    }

    #[test]
    fn zero_operator_passes_both() {
        let t = GOperator {
            img_one: BoundedSeq::ec(EcSeq::zero()),
            img_e: vec![],
            rule: None,
        };
        assert!(t.rowwise_check(RowMode::Positive).unwrap().holds);
        assert!(t.rowwise_check(RowMode::OrderContinuous).unwrap().holds);
    }

    #[test]
    fn periodic_column_with_slots_is_decided() {
        // T(e_1) alternates 1, 0 while the rule fills slots >= 2: an odd
        // position outside slot 1 sums to 2 > T(1) = 1.
        let t = GOperator {
            img_one: BoundedSeq::ec(EcSeq::ones()),
            img_e: vec![BoundedSeq::periodic(vec![], vec![s(1), s(0)]).unwrap()],
            rule: Some(ColumnRule::TriSlot),
        };
        let pos = t.rowwise_check(RowMode::Positive).unwrap();
        assert!(!pos.holds);
        assert!(matches!(pos.witness, Some(RowWitness::Excess { .. })));
        let oc = t.rowwise_check(RowMode::OrderContinuous).unwrap();
        assert!(!oc.holds);
    }

    #[test]
    fn negative_entry_is_reported() {
        let t = GOperator {
            img_one: BoundedSeq::ec(EcSeq::ones()),
            img_e: vec![BoundedSeq::ec(EcSeq::from_ints(&[0, 0, -1], 0))],
            rule: None,
        };
        let v = t.rowwise_check(RowMode::Positive).unwrap();
        assert_eq!(
            v.witness,
            Some(RowWitness::NegativeEntry {
                row: 3,
                column: 1,
                value: s(-1)
            })
        );
    }

    #[test]
    fn huge_periods_are_reported_undecidable() {
        let long: Vec<Scalar> = (0..3000).map(|k| s(k % 2)).collect();
        let t = GOperator {
            img_one: BoundedSeq::periodic(vec![], long).unwrap(),
            img_e: vec![],
            rule: Some(ColumnRule::TriSlot),
        };
        assert!(matches!(
            t.rowwise_check(RowMode::Positive),
            Err(Error::Undecidable(_))
        ));
    }

    #[test]
    fn block_rule_matches_matrix_columns() {
        let q = super::super::lmatrix::paper_q();
        let t = GOperator::from_lmatrix(&q);
        for j in 1..12u64 {
            let col = q.apply(&EcSeq::unit(j as usize));
            for p in 1..20u64 {
                assert_eq!(t.e_value(j, p), *col.get(p as usize), "e_{j} at {p}");
            }
        }
    }
}
