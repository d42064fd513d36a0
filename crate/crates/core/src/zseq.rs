//! Two-tailed sequences indexed by ℤ.
//!
//! A [`ZSeq`] equals `left` below its window, the window values inside it and
//! `right` from the end of the window on. Such a sequence is bounded and has
//! a limit at `+∞`, so it always lies in the space of bounded ℤ-sequences
//! with a right limit.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ecseq::{EcSeq, LatticeOp};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZSeq {
    start: i64,
    window: Vec<Scalar>,
    left: Scalar,
    right: Scalar,
}

impl ZSeq {
    /// Window values at `start, start+1, ...`.
    ///
    /// With an empty window the sequence jumps from `left` to `right` at
    /// `start`.
    pub fn new(start: i64, window: Vec<Scalar>, left: Scalar, right: Scalar) -> Self {
        let mut z = ZSeq {
            start,
            window,
            left,
            right,
        };
        z.canonicalize();
        z
    }

    /// From a sparse core; indices inside `[min key, max key]` that are
    /// missing from the map read as zero.
    pub fn from_core(core: &BTreeMap<i64, Scalar>, left: Scalar, right: Scalar) -> Self {
        match (core.keys().next(), core.keys().next_back()) {
            (Some(&lo), Some(&hi)) => {
                let window = (lo..=hi)
                    .map(|i| core.get(&i).cloned().unwrap_or_default())
                    .collect();
                ZSeq::new(lo, window, left, right)
            }
            _ => ZSeq::new(0, Vec::new(), left, right),
        }
    }

    pub fn zero() -> Self {
        Self::constant(Scalar::zero())
    }

    pub fn constant(c: Scalar) -> Self {
        ZSeq::new(0, Vec::new(), c.clone(), c)
    }

    /// Finitely supported sequence with the given nonzero entries.
    pub fn finite(entries: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let core: BTreeMap<i64, Scalar> = entries.into_iter().collect();
        ZSeq::from_core(&core, Scalar::zero(), Scalar::zero())
    }

    /// The bump `1` at `n`, `-1` at `n+1`, zero elsewhere.
    pub fn bump(n: i64) -> Self {
        ZSeq::finite([(n, Scalar::one()), (n + 1, -Scalar::one())])
    }

    /// `1` at every index `k >= n`, zero before.
    pub fn ones_from(n: i64) -> Self {
        ZSeq::new(n, Vec::new(), Scalar::zero(), Scalar::one())
    }

    /// Embeds `x` with the convention `x_k = 0` for `k <= 0`.
    pub fn from_ec(x: &EcSeq) -> Self {
        ZSeq::new(1, x.prefix().to_vec(), Scalar::zero(), x.tail().clone())
    }

    pub fn canonicalize(&mut self) {
        while self.window.last() == Some(&self.right) {
            self.window.pop();
        }
        let lead = self.window.iter().take_while(|v| **v == self.left).count();
        if lead > 0 {
            self.window.drain(..lead);
            self.start += lead as i64;
        }
        if self.window.is_empty() && self.left == self.right {
            self.start = 0;
        }
    }

    pub fn is_canonical(&self) -> bool {
        let mut c = self.clone();
        c.canonicalize();
        c == *self
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// One past the last window index; `right` applies from here on.
    pub fn end(&self) -> i64 {
        self.start + self.window.len() as i64
    }

    pub fn window(&self) -> &[Scalar] {
        &self.window
    }

    pub fn left_tail(&self) -> &Scalar {
        &self.left
    }

    pub fn right_tail(&self) -> &Scalar {
        &self.right
    }

    /// The core as a sparse map. Empty when the sequence is a single constant.
    pub fn core(&self) -> BTreeMap<i64, Scalar> {
        if self.window.is_empty() && self.left != self.right {
            return BTreeMap::from([(self.start, self.right.clone())]);
        }
        self.window
            .iter()
            .enumerate()
            .map(|(k, v)| (self.start + k as i64, v.clone()))
            .collect()
    }

    pub fn get(&self, i: i64) -> &Scalar {
        if i < self.start {
            &self.left
        } else if i >= self.end() {
            &self.right
        } else {
            &self.window[(i - self.start) as usize]
        }
    }

    /// `lim_{i→∞}`.
    pub fn limit(&self) -> &Scalar {
        &self.right
    }

    pub fn is_zero(&self) -> bool {
        self.window.is_empty() && self.left.is_zero() && self.right.is_zero()
    }

    /// Exact value of `Σ_{k>=1} z_{-k} / 2^k`.
    ///
    /// Indices `-k < start` carry the left tail, whose geometric remainder
    /// after `K = max(0, -start)` terms is `left · 2^-K`.
    pub fn weighted_negative_sum(&self) -> Scalar {
        let explicit_terms = (-self.start).max(0) as u32;
        let mut total: Scalar = (1..=explicit_terms)
            .map(|k| self.get(-(k as i64)) * &Scalar::pow2_inv(k))
            .sum();
        total += &(&self.left * &Scalar::pow2_inv(explicit_terms));
        total
    }

    fn zip_with(&self, other: &ZSeq, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> ZSeq {
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        let window = (lo..hi).map(|i| f(self.get(i), other.get(i))).collect();
        ZSeq::new(lo, window, f(&self.left, &other.left), f(&self.right, &other.right))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> ZSeq {
        ZSeq::new(
            self.start,
            self.window.iter().map(&f).collect(),
            f(&self.left),
            f(&self.right),
        )
    }

    pub fn add(&self, other: &ZSeq) -> ZSeq {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ZSeq) -> ZSeq {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> ZSeq {
        self.map(|v| v * c)
    }

    pub fn abs(&self) -> ZSeq {
        self.map(Scalar::abs)
    }

    pub fn lattice(&self, other: &ZSeq, op: LatticeOp) -> ZSeq {
        match op {
            LatticeOp::Meet => self.zip_with(other, Scalar::min),
            LatticeOp::Join => self.zip_with(other, Scalar::max),
        }
    }

    pub fn leq(&self, other: &ZSeq) -> bool {
        self.first_violation_leq(other).is_none()
    }

    /// Some index `i` with `self(i) > other(i)`, preferring window indices.
    pub fn first_violation_leq(&self, other: &ZSeq) -> Option<i64> {
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        (lo..hi)
            .find(|&i| self.get(i) > other.get(i))
            .or_else(|| (self.left > other.left).then_some(lo - 1))
            .or_else(|| (self.right > other.right).then_some(hi))
    }

    /// Smallest index where any of the given sequences leaves its left tail,
    /// and one past the largest where any is still inside its window.
    pub fn span<'a>(seqs: impl IntoIterator<Item = &'a ZSeq>) -> (i64, i64) {
        seqs.into_iter()
            .fold(None, |acc: Option<(i64, i64)>, z| {
                Some(match acc {
                    None => (z.start, z.end()),
                    Some((lo, hi)) => (lo.min(z.start), hi.max(z.end())),
                })
            })
            .unwrap_or((0, 0))
    }
}

impl std::fmt::Debug for ZSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// Membership in the subspace where the weighted negative-side sum equals
/// the limit at `+∞`.
pub fn z_in_z(z: &ZSeq) -> bool {
    z.weighted_negative_sum() == *z.limit()
}
