//! Eventually constant sequences indexed by `1, 2, 3, ...`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// An eventually constant sequence: explicit values at indices `1..=m`
/// followed by a constant tail.
///
/// Canonical: the last prefix entry (if any) differs from the tail, so
/// derived equality is pointwise equality.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EcSeq {
    prefix: Vec<Scalar>,
    tail: Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeOp {
    Meet,
    Join,
}

/// Result of comparing two sequences in the pointwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderRelation {
    pub leq: bool,
    pub geq: bool,
}

impl EcSeq {
    pub fn new(prefix: Vec<Scalar>, tail: Scalar) -> Self {
        let mut s = EcSeq { prefix, tail };
        s.canonicalize();
        s
    }

    pub fn constant(c: Scalar) -> Self {
        EcSeq {
            prefix: Vec::new(),
            tail: c,
        }
    }

    pub fn zero() -> Self {
        Self::constant(Scalar::zero())
    }

    /// The constant-one sequence.
    pub fn ones() -> Self {
        Self::constant(Scalar::one())
    }

    /// The unit vector `e_n` (n >= 1).
    pub fn unit(n: usize) -> Self {
        assert!(n >= 1, "sequence indices start at 1");
        let mut prefix = vec![Scalar::zero(); n];
        prefix[n - 1] = Scalar::one();
        EcSeq::new(prefix, Scalar::zero())
    }

    /// `1` at every index `k >= n`, `0` before.
    pub fn ones_from(n: usize) -> Self {
        assert!(n >= 1, "sequence indices start at 1");
        EcSeq::new(vec![Scalar::zero(); n - 1], Scalar::one())
    }

    pub fn from_ints(prefix: &[i64], tail: i64) -> Self {
        EcSeq::new(prefix.iter().map(|&v| Scalar::from_int(v)).collect(), tail.into())
    }

    pub fn prefix(&self) -> &[Scalar] {
        &self.prefix
    }

    pub fn tail(&self) -> &Scalar {
        &self.tail
    }

    /// Index after which the sequence is constant.
    pub fn stable_after(&self) -> usize {
        self.prefix.len()
    }

    pub fn canonicalize(&mut self) {
        while self.prefix.last() == Some(&self.tail) {
            self.prefix.pop();
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.prefix.last() != Some(&self.tail)
    }

    /// Value at index `n >= 1`.
    pub fn get(&self, n: usize) -> &Scalar {
        assert!(n >= 1, "sequence indices start at 1");
        self.prefix.get(n - 1).unwrap_or(&self.tail)
    }

    /// Limit at infinity (the tail value).
    pub fn limit(&self) -> &Scalar {
        &self.tail
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.tail.is_zero()
    }

    fn zip_with(&self, other: &EcSeq, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> EcSeq {
        let m = self.prefix.len().max(other.prefix.len());
        let prefix = (1..=m).map(|n| f(self.get(n), other.get(n))).collect();
        EcSeq::new(prefix, f(&self.tail, &other.tail))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> EcSeq {
        EcSeq::new(self.prefix.iter().map(&f).collect(), f(&self.tail))
    }

    pub fn add(&self, other: &EcSeq) -> EcSeq {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &EcSeq) -> EcSeq {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Scalar) -> EcSeq {
        self.map(|v| v * c)
    }

    pub fn neg(&self) -> EcSeq {
        self.map(|v| -v)
    }

    pub fn abs(&self) -> EcSeq {
        self.map(Scalar::abs)
    }

    pub fn lattice(&self, other: &EcSeq, op: LatticeOp) -> EcSeq {
        match op {
            LatticeOp::Meet => self.meet(other),
            LatticeOp::Join => self.join(other),
        }
    }

    pub fn meet(&self, other: &EcSeq) -> EcSeq {
        self.zip_with(other, Scalar::min)
    }

    pub fn join(&self, other: &EcSeq) -> EcSeq {
        self.zip_with(other, Scalar::max)
    }

    /// Pointwise `self <= other`, decided on the prefixes and the tails.
    pub fn leq(&self, other: &EcSeq) -> bool {
        self.first_violation_leq(other).is_none()
    }

    /// First index `n` with `self(n) > other(n)`, if any.
    pub fn first_violation_leq(&self, other: &EcSeq) -> Option<usize> {
        let m = self.prefix.len().max(other.prefix.len());
        (1..=m)
            .find(|&n| self.get(n) > other.get(n))
            .or_else(|| (self.tail > other.tail).then_some(m + 1))
    }

    pub fn compare(&self, other: &EcSeq) -> OrderRelation {
        OrderRelation {
            leq: self.leq(other),
            geq: other.leq(self),
        }
    }

    /// `|a| ∧ |b| = 0`.
    pub fn disjoint(&self, other: &EcSeq) -> bool {
        self.abs().meet(&other.abs()).is_zero()
    }

    /// Compares the upper-bound sets of `{a+b, -(a+b)}` and `{a-b, -(a-b)}`.
    ///
    /// The upper bounds of `{v, -v}` are exactly the `u >= |v|`, so the two
    /// sets coincide iff `|a+b| = |a-b|`.
    pub fn disjoint_by_upper_sets(&self, other: &EcSeq) -> bool {
        self.add(other).abs() == self.sub(other).abs()
    }

    pub fn to_basis(&self) -> BasisCoords {
        let lambdas = self
            .prefix
            .iter()
            .enumerate()
            .filter_map(|(k, v)| {
                let d = v - &self.tail;
                (!d.is_zero()).then(|| (k as u64 + 1, d))
            })
            .collect();
        BasisCoords {
            lambda0: self.tail.clone(),
            lambdas,
        }
    }

    pub fn from_basis(c: &BasisCoords) -> EcSeq {
        let m = c.lambdas.keys().next_back().copied().unwrap_or(0) as usize;
        let prefix = (1..=m as u64)
            .map(|i| match c.lambdas.get(&i) {
                Some(l) => &c.lambda0 + l,
                None => c.lambda0.clone(),
            })
            .collect();
        EcSeq::new(prefix, c.lambda0.clone())
    }
}

impl std::fmt::Debug for EcSeq {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self}")
    }
}

/// Coordinates in the algebraic basis `{1} ∪ {e_i}`: `x = λ0·1 + Σ λi·e_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisCoords {
    pub lambda0: Scalar,
    /// Finite support; zero coefficients are never stored.
    pub lambdas: BTreeMap<u64, Scalar>,
}

impl BasisCoords {
    pub fn new(lambda0: Scalar, lambdas: impl IntoIterator<Item = (u64, Scalar)>) -> Self {
        let lambdas = lambdas
            .into_iter()
            .filter(|(i, v)| {
                assert!(*i >= 1, "basis index starts at 1");
                !v.is_zero()
            })
            .collect();
        BasisCoords { lambda0, lambdas }
    }
}

pub fn ec_compare(a: &EcSeq, b: &EcSeq) -> OrderRelation {
    a.compare(b)
}

pub fn ec_lattice(a: &EcSeq, b: &EcSeq, op: LatticeOp) -> EcSeq {
    a.lattice(b, op)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: i64) -> Scalar {
        Scalar::from_int(v)
    }

    #[test]
    fn canonical_trims_tail_copies() {
        let x = EcSeq::from_ints(&[1, 2, 2, 2], 2);
        assert_eq!(x.prefix(), &[s(1)]);
        assert!(x.is_canonical());
        assert_eq!(x, EcSeq::from_ints(&[1], 2));
    }

    #[test]
    fn compare_examples() {
        let r = EcSeq::zero().compare(&EcSeq::ones());
        assert!(r.leq && !r.geq);
        let x = EcSeq::from_ints(&[3, -1, 4], 1);
        let r = x.compare(&x);
        assert!(r.leq && r.geq);
        // ones from index 2 versus ones from index 1
        let r = EcSeq::ones_from(2).compare(&EcSeq::ones_from(1));
        assert!(r.leq && !r.geq);
    }

    #[test]
    fn lattice_examples() {
        let x = EcSeq::from_ints(&[5, -2], 3);
        assert_eq!(x.meet(&x), x);
        assert_eq!(EcSeq::unit(1).meet(&EcSeq::unit(2)), EcSeq::zero());
        let j = EcSeq::from_ints(&[1, 0, 0], 0).join(&EcSeq::from_ints(&[0, 1, 0], 0));
        assert_eq!(j, EcSeq::from_ints(&[1, 1], 0));
    }

    #[test]
    fn basis_examples() {
        let one = EcSeq::ones().to_basis();
        assert_eq!(one.lambda0, s(1));
        assert!(one.lambdas.is_empty());
        let e1 = EcSeq::unit(1).to_basis();
        assert_eq!(e1, BasisCoords::new(s(0), [(1, s(1))]));
        let x = EcSeq::from_ints(&[3, 2, 2, 2], 2).to_basis();
        assert_eq!(x, BasisCoords::new(s(2), [(1, s(1))]));
        assert_eq!(EcSeq::from_basis(&x), EcSeq::from_ints(&[3], 2));
    }

    #[test]
    fn disjointness_examples() {
        assert!(EcSeq::unit(1).disjoint(&EcSeq::unit(2)));
        assert!(!EcSeq::ones().disjoint(&EcSeq::unit(1)));
        assert!(!EcSeq::ones().disjoint_by_upper_sets(&EcSeq::unit(1)));
        let x = EcSeq::from_ints(&[4, -7], 2);
        assert!(x.disjoint(&EcSeq::zero()));
        assert!(x.disjoint_by_upper_sets(&EcSeq::zero()));
    }

    #[test]
    fn violation_in_tail_is_reported_past_prefix() {
        let a = EcSeq::from_ints(&[0, 0], 2);
        let b = EcSeq::from_ints(&[5], 1);
        assert_eq!(a.first_violation_leq(&b), Some(3));
    }
}
