//! The band of cover matrices with zero 0th column and the ideal generated
//! there by the order continuous matrices.

use serde::{Deserialize, Serialize};

use super::embed::{embed_f, preimage_solve};
use super::matrix::CoverMatrix;
use crate::opmatrix::lmatrix::LMatrix;
use crate::opmatrix::tail::{Tail, Windowed};
use crate::scalar::Scalar;

/// Whether every `b_i0` is zero.
pub fn in_band_b(b: &CoverMatrix) -> bool {
    b.zero_col0().is_ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum YocVerdict {
    /// `|B| <= F(witness)` with `witness` order continuous.
    Member { witness: LMatrix },
    /// `b_i0 != 0` at `row`, so `B` is not even in the band.
    NotMember { row: u64 },
    Unknown { reason: String },
}

impl YocVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, YocVerdict::Member { .. })
    }
}

/// Checks `|B| <= F(A)` with `A` order continuous.
pub fn dominated_by(b: &CoverMatrix, a: &LMatrix) -> Result<(), String> {
    let oc = a.is_order_continuous();
    if let Some((row, residual)) = oc.witness {
        return Err(format!("witness is not order continuous: row {row} has residual {residual}"));
    }
    let fa = embed_f(a).map_err(|e| e.to_string())?;
    match b.abs().first_violation_leq(&fa) {
        None => Ok(()),
        Some((i, j)) => Err(format!("|B|({i},{j}) > F(A)({i},{j})")),
    }
}

/// `|B|` topped up on a diagonal so that every row sums to the largest
/// absolute row sum. Its preimage has balanced rows, hence is order
/// continuous, and it dominates `|B|` entrywise.
fn balanced_majorant(b: &CoverMatrix) -> CoverMatrix {
    let mut d = b.abs();
    if d.cols() == 0 {
        d = if d.tail().is_zero() { d.grow_zero_tail(d.rows(), 1) } else { d.absorb_block() };
    }
    let classes = d.row_classes();
    let sums: Vec<Scalar> = classes.iter().map(|c| d.row_sum_from_one(d.representative(*c))).collect();
    let top = sums.iter().max().cloned().unwrap_or_default();

    let p = d.period();
    let mut block: Vec<Vec<Scalar>> = (0..p).map(|r| d.tail().block_row(r)).collect();
    let mut entries = d.explicit().clone();
    for (c, s) in classes.iter().zip(&sums) {
        let gap = &top - s;
        match c {
            crate::opmatrix::lmatrix::RowClass::Explicit(i) => {
                let e = entries.entry((*i, 1)).or_default();
                *e += &gap;
            }
            crate::opmatrix::lmatrix::RowClass::Tail(r) => block[*r][*r] += &gap,
        }
    }
    CoverMatrix::new(
        d.rows(),
        d.cols(),
        entries,
        d.limits().clone(),
        Tail::Block { size: p, block }.simplified(),
        vec![Scalar::zero(); p],
    )
    .expect("same window")
}

/// Semi-decides membership in the ideal: a supplied witness is checked as
/// given; otherwise a dominating order continuous matrix is constructed.
/// Failure of either is reported as unknown, never as non-membership,
/// unless the 0th column is nonzero.
pub fn in_yoc(b: &CoverMatrix, witness: Option<&LMatrix>) -> YocVerdict {
    if let Err(row) = b.zero_col0() {
        return YocVerdict::NotMember { row };
    }
    if let Some(a) = witness {
        return match dominated_by(b, a) {
            Ok(()) => YocVerdict::Member { witness: a.clone() },
            Err(reason) => YocVerdict::Unknown { reason },
        };
    }
    let d = balanced_majorant(b);
    let Some(a) = preimage_solve(&d).preimage().cloned() else {
        return YocVerdict::Unknown {
            reason: "balanced majorant has no preimage".into(),
        };
    };
    match dominated_by(b, &a) {
        Ok(()) => YocVerdict::Member { witness: a },
        Err(reason) => YocVerdict::Unknown { reason },
    }
}
