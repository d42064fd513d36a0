//! Column-finite matrices `A = (a_ij)_{i,j >= 0}` representing operators on
//! eventually constant sequences.
//!
//! Column 0 holds the coordinates of the image of `1`, column `j >= 1` those
//! of the image of `e_j`, all in the basis coordinates `(λ0, λ1, ...)`.
//! A matrix is an explicit window `[0, R] × [0, C]` plus a [`Tail`]; entries
//! outside both are zero. Every row is therefore finitely supported, which
//! makes all row sums exact.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::kvec::KVector;
use super::tail::{align, Tail, Windowed};
use crate::ecseq::EcSeq;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LMatrix {
    rows: u64,
    cols: u64,
    #[serde(with = "crate::opmatrix::tail::triplets")]
    explicit: BTreeMap<(u64, u64), Scalar>,
    tail: Tail,
}

/// Which rows share a row pattern: an explicit row, or tail row class `r`
/// (rows `R+1+r+kp`, `k >= 0`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum RowClass {
    Explicit(u64),
    Tail(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum PositivityWitness {
    /// `a_0j + a_ij < 0`.
    Alpha { row: u64, col: u64, value: Scalar },
    /// `a_00 + a_i0 < Σ_{j>=1} (a_0j + a_ij)`.
    Beta { row: u64, lhs: Scalar, rhs: Scalar },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    pub positive: bool,
    pub witness: Option<PositivityWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityVerdict {
    pub regular: bool,
    /// Exact supremum of the absolute row sums.
    pub sup: Scalar,
    /// A row attaining the supremum.
    pub attained_at: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderContinuityVerdict {
    pub order_continuous: bool,
    /// First row `i >= 1` with nonzero `a_00 + a_i0 - Σ_{j>=1}(a_ij + a_0j)`.
    pub witness: Option<(u64, Scalar)>,
}

impl LMatrix {
    /// Entries must lie in `[0, rows] × [0, cols]`; zeros are dropped.
    pub fn new(
        rows: u64,
        cols: u64,
        entries: impl IntoIterator<Item = ((u64, u64), Scalar)>,
        tail: Tail,
    ) -> Result<Self> {
        let mut explicit = BTreeMap::new();
        for ((i, j), v) in entries {
            if i > rows || j > cols {
                return Err(Error::Invalid(format!(
                    "entry ({i},{j}) outside window [0,{rows}]x[0,{cols}]"
                )));
            }
            if !v.is_zero() {
                explicit.insert((i, j), v);
            }
        }
        Ok(LMatrix {
            rows,
            cols,
            explicit,
            tail,
        })
    }

    pub fn from_ints(rows: u64, cols: u64, entries: &[(u64, u64, i64)], tail: Tail) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&(i, j, v)| ((i, j), Scalar::from_int(v))),
            tail,
        )
    }

    pub fn zero() -> Self {
        LMatrix::new(0, 0, [], Tail::Zero).expect("empty window")
    }

    pub fn identity() -> Self {
        LMatrix::from_ints(0, 0, &[(0, 0, 1)], Tail::Identity).expect("valid")
    }

    /// The operator `x ↦ (lim x)·1`: only `a_00 = 1`.
    pub fn limit_functional() -> Self {
        LMatrix::from_ints(0, 0, &[(0, 0, 1)], Tail::Zero).expect("valid")
    }

    pub fn rows(&self) -> u64 {
        self.rows
    }

    pub fn cols(&self) -> u64 {
        self.cols
    }

    pub fn explicit(&self) -> &BTreeMap<(u64, u64), Scalar> {
        &self.explicit
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    pub fn period(&self) -> usize {
        self.tail.period()
    }

    pub fn entry(&self, i: u64, j: u64) -> Scalar {
        if i <= self.rows && j <= self.cols {
            return self.explicit.get(&(i, j)).cloned().unwrap_or_default();
        }
        if i > self.rows && j > self.cols {
            let p = self.period() as u64;
            let (di, dj) = (i - self.rows - 1, j - self.cols - 1);
            if di / p == dj / p {
                return self.tail.entry((di % p) as usize, (dj % p) as usize);
            }
        }
        Scalar::zero()
    }

    pub fn class_of(&self, i: u64) -> RowClass {
        if i <= self.rows {
            RowClass::Explicit(i)
        } else {
            RowClass::Tail(((i - self.rows - 1) % self.period() as u64) as usize)
        }
    }

    /// First row index carrying the given class.
    pub fn representative(&self, class: RowClass) -> u64 {
        match class {
            RowClass::Explicit(i) => i,
            RowClass::Tail(r) => self.rows + 1 + r as u64,
        }
    }

    /// Rows `1..=R` followed by the tail classes. Covers every row `i >= 1`.
    pub fn nonzero_row_classes(&self) -> Vec<RowClass> {
        (1..=self.rows)
            .map(RowClass::Explicit)
            .chain((0..self.period()).map(RowClass::Tail))
            .collect()
    }

    /// Nonzero entries `(j, a_ij)` of row `i`, ascending in `j`.
    pub fn row(&self, i: u64) -> Vec<(u64, Scalar)> {
        if i <= self.rows {
            return self
                .explicit
                .range((i, 0)..=(i, self.cols))
                .map(|(&(_, j), v)| (j, v.clone()))
                .collect();
        }
        let p = self.period() as u64;
        let di = i - self.rows - 1;
        let (k, r) = (di / p, (di % p) as usize);
        (0..p)
            .filter_map(|c| {
                let v = self.tail.entry(r, c as usize);
                (!v.is_zero()).then(|| (self.cols + 1 + k * p + c, v))
            })
            .collect()
    }

    /// Nonzero entries `(i, a_ij)` of column `j`, ascending in `i`.
    pub fn column(&self, j: u64) -> Vec<(u64, Scalar)> {
        if j <= self.cols {
            return self
                .explicit
                .iter()
                .filter(|((_, jj), _)| *jj == j)
                .map(|(&(i, _), v)| (i, v.clone()))
                .collect();
        }
        let p = self.period() as u64;
        let dj = j - self.cols - 1;
        let (k, c) = (dj / p, (dj % p) as usize);
        (0..p)
            .filter_map(|r| {
                let v = self.tail.entry(r as usize, c);
                (!v.is_zero()).then(|| (self.rows + 1 + k * p + r, v))
            })
            .collect()
    }

    /// `Σ_{j>=1} a_ij`.
    pub fn row_sum_from_one(&self, i: u64) -> Scalar {
        self.row(i)
            .into_iter()
            .filter(|(j, _)| *j >= 1)
            .map(|(_, v)| v)
            .sum()
    }

    pub fn abs_row_sum(&self, i: u64) -> Scalar {
        self.row(i).into_iter().map(|(_, v)| v.abs()).sum()
    }

    pub fn scale(&self, c: &Scalar) -> LMatrix {
        LMatrix::new(
            self.rows,
            self.cols,
            self.explicit.iter().map(|(k, v)| (*k, v * c)),
            self.tail.map(|v| v * c),
        )
        .expect("same window")
    }

    fn zip(&self, other: &LMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<LMatrix> {
        let (a, b) = align(self, other)?;
        let keys: std::collections::BTreeSet<_> =
            a.explicit.keys().chain(b.explicit.keys()).copied().collect();
        LMatrix::new(
            a.rows,
            a.cols,
            keys.into_iter().map(|(i, j)| ((i, j), f(&a.entry(i, j), &b.entry(i, j)))),
            a.tail.map2(&b.tail, &f),
        )
    }

    pub fn add(&self, other: &LMatrix) -> Result<LMatrix> {
        self.zip(other, |x, y| x + y)
    }

    pub fn sub(&self, other: &LMatrix) -> Result<LMatrix> {
        self.zip(other, |x, y| x - y)
    }

    /// Entrywise equality, independent of how the two are windowed.
    pub fn same_entries(&self, other: &LMatrix) -> bool {
        let bound = comparison_bound(
            (self.rows, self.cols, self.period()),
            (other.rows, other.cols, other.period()),
        );
        (0..=bound).all(|i| (0..=bound).all(|j| self.entry(i, j) == other.entry(i, j)))
    }

    /// `Â(x)` computed in basis coordinates.
    pub fn apply(&self, x: &EcSeq) -> EcSeq {
        let c = KVector::from_ec(x);
        let mut y: BTreeMap<u64, Scalar> = BTreeMap::new();
        for (j, cj) in c.coords() {
            for (i, a) in self.column(*j) {
                *y.entry(i).or_default() += &(&a * cj);
            }
        }
        KVector::new(y).to_ec()
    }

    pub fn is_positive(&self) -> PositivityVerdict {
        let a00 = self.entry(0, 0);
        let row0: BTreeMap<u64, Scalar> = self.row(0).into_iter().filter(|(j, _)| *j >= 1).collect();
        let s0: Scalar = row0.values().sum();
        for class in self.nonzero_row_classes() {
            let i = self.representative(class);
            let row: BTreeMap<u64, Scalar> = self.row(i).into_iter().collect();
            let cols: std::collections::BTreeSet<u64> = row0
                .keys()
                .chain(row.keys().filter(|j| **j >= 1))
                .copied()
                .collect();
            for j in cols {
                let v = row0.get(&j).cloned().unwrap_or_default()
                    + row.get(&j).cloned().unwrap_or_default();
                if v.is_negative() {
                    return PositivityVerdict {
                        positive: false,
                        witness: Some(PositivityWitness::Alpha {
                            row: i,
                            col: j,
                            value: v,
                        }),
                    };
                }
            }
            let lhs = &a00 + &row.get(&0).cloned().unwrap_or_default();
            let rhs = &s0 + &self.row_sum_from_one(i);
            if lhs < rhs {
                return PositivityVerdict {
                    positive: false,
                    witness: Some(PositivityWitness::Beta { row: i, lhs, rhs }),
                };
            }
        }
        PositivityVerdict {
            positive: true,
            witness: None,
        }
    }

    /// Always regular in this representation; reports the exact supremum.
    pub fn is_regular(&self) -> RegularityVerdict {
        let mut best = (Scalar::zero(), 0u64);
        let classes = std::iter::once(RowClass::Explicit(0)).chain(self.nonzero_row_classes());
        for class in classes {
            let i = self.representative(class);
            let s = self.abs_row_sum(i);
            if s > best.0 {
                best = (s, i);
            }
        }
        RegularityVerdict {
            regular: true,
            sup: best.0,
            attained_at: best.1,
        }
    }

    /// Row balance `Σ_{j>=1}(a_ij + a_0j) = a_00 + a_i0` for every `i >= 1`.
    pub fn is_order_continuous(&self) -> OrderContinuityVerdict {
        let a00 = self.entry(0, 0);
        let s0 = self.row_sum_from_one(0);
        for class in self.nonzero_row_classes() {
            let i = self.representative(class);
            let residual = &a00 + &self.entry(i, 0) - &s0 - self.row_sum_from_one(i);
            if !residual.is_zero() {
                return OrderContinuityVerdict {
                    order_continuous: false,
                    witness: Some((i, residual)),
                };
            }
        }
        OrderContinuityVerdict {
            order_continuous: true,
            witness: None,
        }
    }
}

/// Rows and columns `0..=bound` determine two windowed matrices: past it,
/// both are invariant under the diagonal shift by the common period.
pub(crate) fn comparison_bound(a: (u64, u64, usize), b: (u64, u64, usize)) -> u64 {
    let l = num_integer::lcm(a.2, b.2) as u64;
    let reach = a.0.max(a.1).max(b.0).max(b.1);
    let offset = (a.0 as i128 - a.1 as i128).unsigned_abs().max((b.0 as i128 - b.1 as i128).unsigned_abs()) as u64;
    reach + offset + 3 * l + 2
}

impl Windowed for LMatrix {
    fn window(&self) -> (u64, u64) {
        (self.rows, self.cols)
    }

    fn tail(&self) -> &Tail {
        &self.tail
    }

    fn absorb_block(&self) -> Self {
        let p = self.period() as u64;
        let mut explicit = self.explicit.clone();
        for r in 0..p {
            for c in 0..p {
                let v = self.tail.entry(r as usize, c as usize);
                if !v.is_zero() {
                    explicit.insert((self.rows + 1 + r, self.cols + 1 + c), v);
                }
            }
        }
        LMatrix {
            rows: self.rows + p,
            cols: self.cols + p,
            explicit,
            tail: self.tail.clone(),
        }
    }

    fn grow_zero_tail(&self, rows: u64, cols: u64) -> Self {
        assert!(self.tail.is_zero());
        LMatrix {
            rows: rows.max(self.rows),
            cols: cols.max(self.cols),
            explicit: self.explicit.clone(),
            tail: Tail::Zero,
        }
    }

    fn with_period(&self, period: usize) -> Self {
        LMatrix {
            tail: self.tail.with_period(period),
            ..self.clone()
        }
    }
}

impl std::fmt::Debug for LMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// The matrix `P`: row 0 is `(2, 1, 0, ...)`, rows `i >= 1` are `e_i`.
pub fn paper_p() -> LMatrix {
    LMatrix::from_ints(1, 1, &[(0, 0, 2), (0, 1, 1), (1, 1, 1)], Tail::Identity).expect("valid")
}

/// The matrix `Q`: row 0 is `(2, 1, 0, ...)`, row 1 is `e_1`, and rows
/// `2k, 2k+1` both equal `e_{2k+1}`.
pub fn paper_q() -> LMatrix {
    LMatrix::from_ints(
        1,
        1,
        &[(0, 0, 2), (0, 1, 1), (1, 1, 1)],
        Tail::block_from_ints(&[&[0, 1], &[0, 1]]).expect("square"),
    )
    .expect("valid")
}

pub fn k_member(x: &KVector) -> bool {
    x.in_cone()
}

pub fn lmat_apply(a: &LMatrix, x: &EcSeq) -> EcSeq {
    a.apply(x)
}

pub fn lmat_is_positive(a: &LMatrix) -> PositivityVerdict {
    a.is_positive()
}

pub fn lmat_is_regular(a: &LMatrix) -> RegularityVerdict {
    a.is_regular()
}

pub fn lmat_is_order_continuous(a: &LMatrix) -> OrderContinuityVerdict {
    a.is_order_continuous()
}
