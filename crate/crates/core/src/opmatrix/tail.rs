//! Periodic block-diagonal tails shared by operator and cover matrices.
//!
//! A tail occupies the rows after the explicit window and the columns after
//! it. Block `k` covers rows `R+1+kp .. R+(k+1)p` and columns
//! `C+1+kp .. C+(k+1)p`; everything else in that region is zero.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Tail {
    Zero,
    Identity,
    Block { size: usize, block: Vec<Vec<Scalar>> },
}

impl Tail {
    pub fn block(block: Vec<Vec<Scalar>>) -> Result<Tail> {
        let size = block.len();
        if size == 0 || block.iter().any(|r| r.len() != size) {
            return Err(Error::Invalid("tail block must be a nonempty square array".into()));
        }
        Ok(Tail::Block { size, block })
    }

    pub fn block_from_ints(rows: &[&[i64]]) -> Result<Tail> {
        Tail::block(
            rows.iter()
                .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn period(&self) -> usize {
        match self {
            Tail::Zero | Tail::Identity => 1,
            Tail::Block { size, .. } => *size,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Tail::Zero => true,
            Tail::Identity => false,
            Tail::Block { block, .. } => block.iter().flatten().all(Scalar::is_zero),
        }
    }

    /// Entry `(r, c)` of the repeating block, `r, c < period()`.
    pub fn entry(&self, r: usize, c: usize) -> Scalar {
        match self {
            Tail::Zero => Scalar::zero(),
            Tail::Identity => {
                if r == c {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }
            Tail::Block { block, .. } => block[r][c].clone(),
        }
    }

    pub fn block_row(&self, r: usize) -> Vec<Scalar> {
        (0..self.period()).map(|c| self.entry(r, c)).collect()
    }

    pub fn row_sum(&self, r: usize) -> Scalar {
        self.block_row(r).iter().sum()
    }

    pub fn abs_row_sum(&self, r: usize) -> Scalar {
        self.block_row(r).iter().map(Scalar::abs).sum()
    }

    /// The same tail seen with blocks of size `period`, a multiple of the
    /// current one.
    pub fn with_period(&self, period: usize) -> Tail {
        let p = self.period();
        assert!(period % p == 0, "new period must be a multiple of {p}");
        if period == p {
            return self.clone();
        }
        let block = (0..period)
            .map(|r| {
                (0..period)
                    .map(|c| {
                        if r / p == c / p {
                            self.entry(r % p, c % p)
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Tail::Block {
            size: period,
            block,
        }
    }

    pub fn map2(&self, other: &Tail, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Tail {
        let p = self.period().lcm(&other.period());
        let (a, b) = (self.with_period(p), other.with_period(p));
        let block = (0..p)
            .map(|r| (0..p).map(|c| f(&a.entry(r, c), &b.entry(r, c))).collect())
            .collect();
        Tail::Block { size: p, block }.simplified()
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Tail {
        let p = self.period();
        let block = (0..p)
            .map(|r| (0..p).map(|c| f(&self.entry(r, c))).collect())
            .collect();
        Tail::Block { size: p, block }.simplified()
    }

    /// Collapses to `Zero` or `Identity` when the block is one of those.
    pub fn simplified(self) -> Tail {
        if self.is_zero() {
            return Tail::Zero;
        }
        if let Tail::Block { size, .. } = &self {
            let p = *size;
            let is_identity = (0..p).all(|r| {
                (0..p).all(|c| self.entry(r, c) == if r == c { Scalar::one() } else { Scalar::zero() })
            });
            if is_identity {
                return Tail::Identity;
            }
        }
        self
    }
}

/// A matrix with an explicit window `[r0, R] × [0, C]` and a [`Tail`] below
/// and to the right of it.
pub trait Windowed: Sized + Clone {
    fn window(&self) -> (u64, u64);
    fn tail(&self) -> &Tail;
    /// Move the first tail block into the explicit window.
    fn absorb_block(&self) -> Self;
    /// Grow the window when the tail is zero.
    fn grow_zero_tail(&self, rows: u64, cols: u64) -> Self;
    /// Re-express the tail with a larger block size.
    fn with_period(&self, period: usize) -> Self;
}

/// Brings two windowed matrices onto the same window and block size.
pub fn align<M: Windowed>(a: &M, b: &M) -> Result<(M, M)> {
    let (ra, ca) = a.window();
    let (rb, cb) = b.window();
    match (a.tail().is_zero(), b.tail().is_zero()) {
        (true, true) => {
            let (r, c) = (ra.max(rb), ca.max(cb));
            Ok(common_period(a.grow_zero_tail(r, c), b.grow_zero_tail(r, c)))
        }
        (true, false) => {
            let (b2, a2) = align_zero_to(b, a)?;
            Ok((a2, b2))
        }
        (false, true) => align_zero_to(a, b),
        (false, false) => {
            if ra as i128 - ca as i128 != rb as i128 - cb as i128 {
                return Err(Error::Representation(
                    "tails lie on different diagonals".into(),
                ));
            }
            let (pa, pb) = (a.tail().period() as u64, b.tail().period() as u64);
            // smallest common start reachable by whole blocks on both sides
            let mut a2 = a.clone();
            let mut b2 = b.clone();
            let limit = ra.max(rb) + pa * pb + 1;
            loop {
                let (r1, _) = a2.window();
                let (r2, _) = b2.window();
                if r1 == r2 {
                    break;
                }
                if r1.max(r2) > limit {
                    return Err(Error::Representation(
                        "tail blocks cannot be aligned".into(),
                    ));
                }
                if r1 < r2 {
                    a2 = a2.absorb_block();
                } else {
                    b2 = b2.absorb_block();
                }
            }
            Ok(common_period(a2, b2))
        }
    }
}

fn common_period<M: Windowed>(a: M, b: M) -> (M, M) {
    let p = a.tail().period().lcm(&b.tail().period());
    (a.with_period(p), b.with_period(p))
}

/// `nz` has a nonzero tail, `z` a zero one.
fn align_zero_to<M: Windowed>(nz: &M, z: &M) -> Result<(M, M)> {
    let (rz, cz) = z.window();
    let mut nz2 = nz.clone();
    loop {
        let (r, c) = nz2.window();
        if r >= rz && c >= cz {
            break;
        }
        nz2 = nz2.absorb_block();
    }
    let (r, c) = nz2.window();
    Ok(common_period(nz2, z.grow_zero_tail(r, c)))
}

/// Sparse entries as `[i, j, value]` triples, since JSON keys are strings.
pub(crate) mod triplets {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalar::Scalar;

    pub fn serialize<S: Serializer>(m: &BTreeMap<(u64, u64), Scalar>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(u64, u64, &Scalar)> = m.iter().map(|((i, j), x)| (*i, *j, x)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(u64, u64), Scalar>, D::Error> {
        let v: Vec<(u64, u64, Scalar)> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|(i, j, x)| ((i, j), x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_upsized_is_block_identity() {
        let t = Tail::Identity.with_period(3);
        assert_eq!(t.period(), 3);
        assert_eq!(t.clone().simplified(), Tail::Identity);
        assert_eq!(t.entry(1, 1), Scalar::one());
        assert_eq!(t.entry(0, 1), Scalar::zero());
    }

    #[test]
    fn meet_of_identity_and_shifted_block() {
        let q = Tail::block_from_ints(&[&[0, 1], &[0, 1]]).unwrap();
        let m = Tail::Identity.map2(&q, Scalar::min);
        assert_eq!(m, Tail::block_from_ints(&[&[0, 0], &[0, 1]]).unwrap());
    }

    #[test]
    fn rejects_ragged_blocks() {
        assert!(Tail::block_from_ints(&[&[1, 0], &[0]]).is_err());
        assert!(Tail::block(vec![]).is_err());
    }
}
