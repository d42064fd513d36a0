//! Matrices `B = (b_ij)` with rows `i >= 1` and columns `j >= 0` whose
//! columns `j >= 1` are eventually constant, with finitely many nonzero
//! column limits, a bounded 0th column and bounded absolute row sums.
//!
//! Layout: explicit window `[1, R] × [0, C]`; every row `i > R` reads the
//! column limit `β_j` in columns `1..=C`, a tail block entry in columns
//! `> C`, and `col0[(i-R-1) mod p]` in column 0. Rows `<= R` are zero past
//! column `C`.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::ecseq::LatticeOp;
use crate::error::{Error, Result};
use crate::opmatrix::lmatrix::{comparison_bound, RowClass};
use crate::opmatrix::tail::{align, Tail, Windowed};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverMatrix {
    rows: u64,
    cols: u64,
    #[serde(with = "crate::opmatrix::tail::triplets")]
    explicit: BTreeMap<(u64, u64), Scalar>,
    limits: BTreeMap<u64, Scalar>,
    tail: Tail,
    col0: Vec<Scalar>,
}

/// The four membership conditions, each with the data that decides it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverConditions {
    /// Columns `j >= 1` are constant from row `R+1` on (plus tail blocks,
    /// which vanish in every column eventually).
    pub columns_eventually_constant: bool,
    pub limits_abs_sum: Scalar,
    pub col0_bound: Scalar,
    pub row_abs_sum_bound: Scalar,
}

impl CoverMatrix {
    /// `col0` lists the 0th-column values of the tail row classes; its
    /// length and the tail period are reconciled to a common period.
    pub fn new(
        rows: u64,
        cols: u64,
        entries: impl IntoIterator<Item = ((u64, u64), Scalar)>,
        limits: impl IntoIterator<Item = (u64, Scalar)>,
        tail: Tail,
        col0: Vec<Scalar>,
    ) -> Result<Self> {
        let mut explicit = BTreeMap::new();
        for ((i, j), v) in entries {
            if i == 0 || i > rows || j > cols {
                return Err(Error::Invalid(format!(
                    "entry ({i},{j}) outside window [1,{rows}]x[0,{cols}]"
                )));
            }
            if !v.is_zero() {
                explicit.insert((i, j), v);
            }
        }
        let mut lim = BTreeMap::new();
        for (j, v) in limits {
            if j == 0 || j > cols {
                return Err(Error::Invalid(format!(
                    "column limit for column {j} outside 1..={cols}"
                )));
            }
            if !v.is_zero() {
                lim.insert(j, v);
            }
        }
        let col0 = if col0.is_empty() {
            vec![Scalar::zero(); tail.period()]
        } else {
            col0
        };
        let (tail, col0) = reconcile(tail, col0);
        Ok(CoverMatrix {
            rows,
            cols,
            explicit,
            limits: lim,
            tail,
            col0,
        })
    }

    pub fn from_ints(
        rows: u64,
        cols: u64,
        entries: &[(u64, u64, i64)],
        limits: &[(u64, i64)],
        tail: Tail,
        col0: &[i64],
    ) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&(i, j, v)| ((i, j), Scalar::from_int(v))),
            limits.iter().map(|&(j, v)| (j, Scalar::from_int(v))),
            tail,
            col0.iter().map(|&v| Scalar::from_int(v)).collect(),
        )
    }

    pub fn zero() -> Self {
        CoverMatrix::new(0, 0, [], [], Tail::Zero, vec![]).expect("valid")
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

    pub fn limits(&self) -> &BTreeMap<u64, Scalar> {
        &self.limits
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// 0th-column values of the tail row classes.
    pub fn col0_tail(&self) -> &[Scalar] {
        &self.col0
    }

    pub fn period(&self) -> usize {
        self.col0.len()
    }

    pub fn limit(&self, j: u64) -> Scalar {
        self.limits.get(&j).cloned().unwrap_or_default()
    }

    pub fn entry(&self, i: u64, j: u64) -> Scalar {
        assert!(i >= 1, "cover matrix rows start at 1");
        if i <= self.rows {
            if j <= self.cols {
                return self.explicit.get(&(i, j)).cloned().unwrap_or_default();
            }
            return Scalar::zero();
        }
        let p = self.period() as u64;
        let di = i - self.rows - 1;
        if j == 0 {
            return self.col0[(di % p) as usize].clone();
        }
        if j <= self.cols {
            return self.limit(j);
        }
        let dj = j - self.cols - 1;
        if di / p == dj / p {
            self.tail.entry((di % p) as usize, (dj % p) as usize)
        } else {
            Scalar::zero()
        }
    }

    pub fn class_of(&self, i: u64) -> RowClass {
        if i <= self.rows {
            RowClass::Explicit(i)
        } else {
            RowClass::Tail(((i - self.rows - 1) % self.period() as u64) as usize)
        }
    }

    pub fn representative(&self, class: RowClass) -> u64 {
        match class {
            RowClass::Explicit(i) => i,
            RowClass::Tail(r) => self.rows + 1 + r as u64,
        }
    }

    pub fn row_classes(&self) -> Vec<RowClass> {
        (1..=self.rows)
            .map(RowClass::Explicit)
            .chain((0..self.period()).map(RowClass::Tail))
            .collect()
    }

    /// Nonzero entries `(j, b_ij)` of row `i`, ascending in `j`.
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
        let mut out = Vec::new();
        if !self.col0[r].is_zero() {
            out.push((0, self.col0[r].clone()));
        }
        out.extend(self.limits.iter().map(|(j, v)| (*j, v.clone())));
        for c in 0..p {
            let v = self.tail.entry(r, c as usize);
            if !v.is_zero() {
                out.push((self.cols + 1 + k * p + c, v));
            }
        }
        out
    }

    /// `Σ_{j>=1} b_ij`.
    pub fn row_sum_from_one(&self, i: u64) -> Scalar {
        self.row(i).into_iter().filter(|(j, _)| *j >= 1).map(|(_, v)| v).sum()
    }

    pub fn conditions(&self) -> CoverConditions {
        let col0_bound = self
            .explicit
            .iter()
            .filter(|((_, j), _)| *j == 0)
            .map(|(_, v)| v.abs())
            .chain(self.col0.iter().map(Scalar::abs))
            .max()
            .unwrap_or_default();
        let row_abs_sum_bound = self
            .row_classes()
            .into_iter()
            .map(|c| {
                self.row(self.representative(c))
                    .into_iter()
                    .filter(|(j, _)| *j >= 1)
                    .map(|(_, v)| v.abs())
                    .sum::<Scalar>()
            })
            .max()
            .unwrap_or_default();
        CoverConditions {
            columns_eventually_constant: true,
            limits_abs_sum: self.limits.values().map(Scalar::abs).sum(),
            col0_bound,
            row_abs_sum_bound,
        }
    }

    /// Whether the 0th column vanishes; `Err(i)` names the first row where
    /// it does not.
    pub fn zero_col0(&self) -> std::result::Result<(), u64> {
        for class in self.row_classes() {
            let i = self.representative(class);
            if !self.entry(i, 0).is_zero() {
                return Err(i);
            }
        }
        Ok(())
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> CoverMatrix {
        self.zip(self, |a, _| f(a)).expect("self-aligned")
    }

    pub fn abs(&self) -> CoverMatrix {
        self.map(Scalar::abs)
    }

    pub fn scale(&self, c: &Scalar) -> CoverMatrix {
        self.map(|v| v * c)
    }

    /// Entrywise `f(a, b)`; `f(0, 0)` must be `0`.
    pub fn zip(&self, other: &CoverMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<CoverMatrix> {
        let (a, b) = align(self, other)?;
        let mut keys: BTreeSet<(u64, u64)> = a.explicit.keys().chain(b.explicit.keys()).copied().collect();
        // a window cell that is zero on both sides maps to f(0, 0) = 0
        keys.retain(|&(i, j)| i >= 1 && i <= a.rows && j <= a.cols);
        let lim_keys: BTreeSet<u64> = a.limits.keys().chain(b.limits.keys()).copied().collect();
        let col0 = a.col0.iter().zip(&b.col0).map(|(x, y)| f(x, y)).collect();
        let tail = tail_zip(&a.tail, &b.tail, &f);
        CoverMatrix::new(
            a.rows,
            a.cols,
            keys.into_iter().map(|(i, j)| ((i, j), f(&a.entry(i, j), &b.entry(i, j)))),
            lim_keys.into_iter().map(|j| (j, f(&a.limit(j), &b.limit(j)))),
            tail,
            col0,
        )
    }

    pub fn add(&self, other: &CoverMatrix) -> Result<CoverMatrix> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &CoverMatrix) -> Result<CoverMatrix> {
        self.zip(other, |a, b| a - b)
    }

    /// Pointwise meet or join.
    pub fn lattice(&self, other: &CoverMatrix, op: LatticeOp) -> Result<CoverMatrix> {
        match op {
            LatticeOp::Meet => self.zip(other, Scalar::min),
            LatticeOp::Join => self.zip(other, Scalar::max),
        }
    }

    fn comparison_bound(&self, other: &CoverMatrix) -> u64 {
        comparison_bound(
            (self.rows, self.cols, self.period()),
            (other.rows, other.cols, other.period()),
        )
    }

    /// First `(i, j)` with `self(i,j) > other(i,j)`.
    pub fn first_violation_leq(&self, other: &CoverMatrix) -> Option<(u64, u64)> {
        let bound = self.comparison_bound(other);
        (1..=bound)
            .flat_map(|i| (0..=bound).map(move |j| (i, j)))
            .find(|&(i, j)| self.entry(i, j) > other.entry(i, j))
    }

    pub fn leq(&self, other: &CoverMatrix) -> bool {
        self.first_violation_leq(other).is_none()
    }

    pub fn same_entries(&self, other: &CoverMatrix) -> bool {
        self.leq(other) && other.leq(self)
    }

    /// Window rows `1..=rows` by columns `0..=cols` as a dense array.
    pub fn dense(&self, rows: u64, cols: u64) -> Vec<Vec<Scalar>> {
        (1..=rows)
            .map(|i| (0..=cols).map(|j| self.entry(i, j)).collect())
            .collect()
    }
}

fn tail_zip(a: &Tail, b: &Tail, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Tail {
    let p = a.period().lcm(&b.period());
    let (a, b) = (a.with_period(p), b.with_period(p));
    let block = (0..p)
        .map(|r| (0..p).map(|c| f(&a.entry(r, c), &b.entry(r, c))).collect())
        .collect();
    Tail::Block { size: p, block }.simplified()
}

/// Common period of the tail blocks and the 0th-column pattern.
fn reconcile(tail: Tail, col0: Vec<Scalar>) -> (Tail, Vec<Scalar>) {
    let n = col0.len();
    let q = (1..=n)
        .find(|d| n % d == 0 && (0..n).all(|r| col0[r] == col0[r % d]))
        .unwrap_or(n);
    let p = tail.period();
    let l = p.lcm(&q);
    let col0 = (0..l).map(|r| col0[r % q].clone()).collect();
    let tail = if l == p { tail } else { tail.with_period(l) };
    (tail, col0)
}

impl Windowed for CoverMatrix {
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
            let i = self.rows + 1 + r;
            for (j, v) in self.row(i) {
                explicit.insert((i, j), v);
            }
        }
        let mut limits = self.limits.clone();
        limits.retain(|_, v| !v.is_zero());
        CoverMatrix {
            rows: self.rows + p,
            cols: self.cols + p,
            explicit,
            limits,
            tail: self.tail.clone(),
            col0: self.col0.clone(),
        }
    }

    fn grow_zero_tail(&self, rows: u64, cols: u64) -> Self {
        assert!(self.tail.is_zero());
        let mut m = self.clone();
        // rows moved into the window keep their column-0 and limit values
        while m.rows < rows {
            let i = m.rows + 1;
            for (j, v) in m.row(i) {
                m.explicit.insert((i, j), v);
            }
            m.rows = i;
            m.col0.rotate_left(1);
        }
        m.cols = m.cols.max(cols);
        m
    }

    fn with_period(&self, period: usize) -> Self {
        let col0 = (0..period).map(|r| self.col0[r % self.col0.len()].clone()).collect();
        CoverMatrix {
            tail: self.tail.with_period(period),
            col0,
            ..self.clone()
        }
    }
}

impl std::fmt::Debug for CoverMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_limits_below_window() {
        let b = CoverMatrix::from_ints(1, 1, &[(1, 1, 2)], &[(1, 1)], Tail::Identity, &[]).unwrap();
        assert_eq!(b.entry(1, 1), Scalar::from_int(2));
        assert_eq!(b.entry(7, 1), Scalar::one());
        assert_eq!(b.entry(7, 7), Scalar::one());
        assert_eq!(b.entry(7, 6), Scalar::zero());
        assert_eq!(b.entry(1, 5), Scalar::zero());
    }

    #[test]
    fn col0_pattern_sets_the_period() {
        let b = CoverMatrix::from_ints(0, 0, &[], &[], Tail::Identity, &[1, 2]).unwrap();
        assert_eq!(b.period(), 2);
        assert_eq!(b.entry(1, 0), Scalar::one());
        assert_eq!(b.entry(2, 0), Scalar::from_int(2));
        assert_eq!(b.entry(5, 5), Scalar::one());
        let c = CoverMatrix::from_ints(0, 0, &[], &[], Tail::Zero, &[3, 3, 3]).unwrap();
        assert_eq!(c.period(), 1);
    }

    #[test]
    fn rejects_row_zero_and_bad_limits() {
        assert!(CoverMatrix::from_ints(1, 1, &[(0, 0, 1)], &[], Tail::Zero, &[]).is_err());
        assert!(CoverMatrix::from_ints(1, 1, &[], &[(2, 1)], Tail::Zero, &[]).is_err());
        assert!(CoverMatrix::from_ints(1, 1, &[], &[(0, 1)], Tail::Zero, &[]).is_err());
    }

    #[test]
    fn growing_a_zero_tail_keeps_entries() {
        let b = CoverMatrix::from_ints(1, 1, &[(1, 0, 4)], &[(1, 3)], Tail::Zero, &[5]).unwrap();
        let g = b.grow_zero_tail(4, 3);
        assert!(g.same_entries(&b));
        assert_eq!(g.window(), (4, 3));
    }

    #[test]
    fn meet_and_join_are_pointwise() {
        let a = CoverMatrix::from_ints(1, 1, &[(1, 1, 2), (1, 0, -1)], &[(1, 1)], Tail::Identity, &[0]).unwrap();
        let b = CoverMatrix::from_ints(2, 2, &[(1, 1, 3), (2, 2, 5)], &[(2, 1)], Tail::Zero, &[1]).unwrap();
        let m = a.lattice(&b, LatticeOp::Meet).unwrap();
        let j = a.lattice(&b, LatticeOp::Join).unwrap();
        for i in 1..12 {
            for c in 0..12 {
                assert_eq!(m.entry(i, c), Scalar::min(&a.entry(i, c), &b.entry(i, c)), "({i},{c})");
                assert_eq!(j.entry(i, c), Scalar::max(&a.entry(i, c), &b.entry(i, c)), "({i},{c})");
            }
        }
    }
}
