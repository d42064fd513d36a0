//! The embedding `F` of regular matrices into the cover, as three row
//! operations, and its inversion.
//!
//! (I) add row 0 to every other row, (II) drop row 0, (III) replace each
//! entry `(i, 0)` by itself minus the row sum over `j >= 1`. Inverting runs
//! (III) backwards, then recovers row 0 from the column limits, which are
//! forced because the columns of a preimage must vanish eventually.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matrix::CoverMatrix;
use crate::error::{Error, Result};
use crate::opmatrix::lmatrix::LMatrix;
use crate::opmatrix::tail::Tail;
use crate::scalar::Scalar;

type Row = BTreeMap<u64, Scalar>;

/// Rows of a matrix in the middle of the three steps.
///
/// `explicit` holds rows `0..=R` (or `1..=R` once row 0 is gone) with
/// columns `<= C`; `tail_fixed[r]` is the part in columns `<= C` shared by
/// every tail row of class `r`, which also carries the tail block.
#[derive(Clone, Debug)]
struct Staged {
    rows: u64,
    cols: u64,
    explicit: BTreeMap<u64, Row>,
    tail_fixed: Vec<Row>,
    tail: Tail,
}

fn add_into(target: &mut Row, src: &Row) {
    for (j, v) in src {
        let e = target.entry(*j).or_default();
        *e += v;
    }
    target.retain(|_, v| !v.is_zero());
}

impl Staged {
    fn from_lmatrix(a: &LMatrix) -> Staged {
        let mut explicit: BTreeMap<u64, Row> = (0..=a.rows()).map(|i| (i, Row::new())).collect();
        for ((i, j), v) in a.explicit() {
            explicit.get_mut(i).expect("row in window").insert(*j, v.clone());
        }
        Staged {
            rows: a.rows(),
            cols: a.cols(),
            explicit,
            tail_fixed: vec![Row::new(); a.period()],
            tail: a.tail().clone(),
        }
    }

    fn from_cover(b: &CoverMatrix) -> Staged {
        let mut explicit: BTreeMap<u64, Row> = (1..=b.rows()).map(|i| (i, Row::new())).collect();
        for ((i, j), v) in b.explicit() {
            explicit.get_mut(i).expect("row in window").insert(*j, v.clone());
        }
        let tail_fixed = b
            .col0_tail()
            .iter()
            .map(|c0| {
                let mut r: Row = b.limits().clone();
                if !c0.is_zero() {
                    r.insert(0, c0.clone());
                }
                r
            })
            .collect();
        Staged {
            rows: b.rows(),
            cols: b.cols(),
            explicit,
            tail_fixed,
            tail: b.tail().clone(),
        }
    }

    /// (I)
    fn add_row_zero(&mut self) {
        let row0 = self.explicit[&0].clone();
        for (i, row) in self.explicit.iter_mut() {
            if *i > 0 {
                add_into(row, &row0);
            }
        }
        for row in &mut self.tail_fixed {
            add_into(row, &row0);
        }
    }

    /// (II)
    fn drop_row_zero(&mut self) -> Row {
        self.explicit.remove(&0).unwrap_or_default()
    }

    /// Row sum over `j >= 1` of each explicit row and tail class.
    fn sums(&self) -> (BTreeMap<u64, Scalar>, Vec<Scalar>) {
        let explicit = self
            .explicit
            .iter()
            .map(|(i, row)| (*i, row.range(1..).map(|(_, v)| v).sum()))
            .collect();
        let tail = self
            .tail_fixed
            .iter()
            .enumerate()
            .map(|(r, row)| row.range(1..).map(|(_, v)| v).sum::<Scalar>() + self.tail.row_sum(r))
            .collect();
        (explicit, tail)
    }

    /// (III) with `sign = -1`; its reversal with `sign = +1`.
    fn shift_col0(&mut self, negate: bool) {
        let (explicit, tail) = self.sums();
        let apply = |row: &mut Row, s: &Scalar| {
            let d = if negate { -s.clone() } else { s.clone() };
            add_into(row, &BTreeMap::from([(0, d)]));
        };
        for (i, row) in self.explicit.iter_mut() {
            apply(row, &explicit[i]);
        }
        for (row, s) in self.tail_fixed.iter_mut().zip(&tail) {
            apply(row, s);
        }
    }

    fn into_cover(self) -> CoverMatrix {
        let limits: Row = self.tail_fixed[0].range(1..).map(|(j, v)| (*j, v.clone())).collect();
        debug_assert!(self
            .tail_fixed
            .iter()
            .all(|r| r.range(1..).eq(limits.iter())));
        let col0 = self
            .tail_fixed
            .iter()
            .map(|r| r.get(&0).cloned().unwrap_or_default())
            .collect();
        let entries = self
            .explicit
            .iter()
            .flat_map(|(i, row)| row.iter().map(move |(j, v)| ((*i, *j), v.clone())));
        CoverMatrix::new(self.rows, self.cols, entries, limits, self.tail, col0).expect("window preserved")
    }
}

/// `F(A)`, computed by the three row operations.
pub fn embed_f(a: &LMatrix) -> Result<CoverMatrix> {
    let reg = a.is_regular();
    if !reg.regular {
        return Err(Error::NotRegular { row: reg.attained_at });
    }
    let mut s = Staged::from_lmatrix(a);
    s.add_row_zero();
    s.drop_row_zero();
    s.shift_col0(true);
    Ok(s.into_cover())
}

/// Reverses step (III): the rows `i >= 1` of `M₁`, with `b_i0` replaced by
/// `b_i0 + Σ_{j>=1} b_ij`.
pub fn undo_row_sums(b: &CoverMatrix) -> CoverMatrix {
    let mut s = Staged::from_cover(b);
    s.shift_col0(false);
    s.into_cover()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PreimageCertificate {
    Preimage {
        matrix: LMatrix,
    },
    /// Rows `N` and `N+1` of `M₁` force different values onto the same
    /// row-0 entry of any preimage.
    Inconsistent {
        column: u64,
        witness_rows: (u64, u64),
        values: (Scalar, Scalar),
    },
}

impl PreimageCertificate {
    pub fn preimage(&self) -> Option<&LMatrix> {
        match self {
            PreimageCertificate::Preimage { matrix } => Some(matrix),
            PreimageCertificate::Inconsistent { .. } => None,
        }
    }

    pub fn is_inconsistent(&self) -> bool {
        matches!(self, PreimageCertificate::Inconsistent { .. })
    }
}

/// Solves `F(A) = B` for `A`, or shows no column-finite `A` exists.
pub fn preimage_solve(b: &CoverMatrix) -> PreimageCertificate {
    let m1 = undo_row_sums(b);
    // Tail rows agree in every column >= 1 within the window; column 0 is
    // the only one that can fail to settle.
    let vals = m1.col0_tail();
    let p = vals.len();
    if let Some(r) = (0..p).find(|&r| vals[r] > vals[(r + 1) % p]) {
        let n = m1.rows() + 1 + r as u64;
        return PreimageCertificate::Inconsistent {
            column: 0,
            witness_rows: (n, n + 1),
            values: (vals[r].clone(), vals[(r + 1) % p].clone()),
        };
    }
    // all tail values equal: row 0 of A is the column limit
    let a00 = vals[0].clone();
    let mut entries: Vec<((u64, u64), Scalar)> = Vec::new();
    entries.push(((0, 0), a00.clone()));
    for (j, v) in m1.limits() {
        entries.push(((0, *j), v.clone()));
    }
    for i in 1..=m1.rows() {
        for j in 0..=m1.cols() {
            let m0j = if j == 0 { a00.clone() } else { m1.limit(j) };
            entries.push(((i, j), &m1.entry(i, j) - &m0j));
        }
    }
    let a = LMatrix::new(m1.rows(), m1.cols(), entries, m1.tail().clone()).expect("window preserved");
    let back = embed_f(&a).expect("finite descriptors are regular");
    assert!(back.same_entries(b), "reconstructed preimage does not map back");
    PreimageCertificate::Preimage { matrix: a }
}
