use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::ecseq::{BasisCoords, EcSeq};
use crate::scalar::Scalar;

/// A finitely supported vector on ℕ₀ in basis coordinates: index 0 is the
/// coefficient of `1`, index `i >= 1` that of `e_i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KVector {
    coords: BTreeMap<u64, Scalar>,
}

impl KVector {
    pub fn new(coords: BTreeMap<u64, Scalar>) -> Self {
        KVector {
            coords: coords.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    pub fn from_ints(coords: &[(u64, i64)]) -> Self {
        KVector::new(coords.iter().map(|&(i, v)| (i, Scalar::from_int(v))).collect())
    }

    pub fn coords(&self) -> &BTreeMap<u64, Scalar> {
        &self.coords
    }

    pub fn get(&self, i: u64) -> Scalar {
        self.coords.get(&i).cloned().unwrap_or_default()
    }

    /// `x0 >= 0` and `x0 + xi >= 0` for all `i >= 1`. Outside the support the
    /// second condition reduces to the first.
    pub fn in_cone(&self) -> bool {
        let x0 = self.get(0);
        !x0.is_negative()
            && self
                .coords
                .range(1..)
                .all(|(_, v)| !(&x0 + v).is_negative())
    }

    pub fn from_ec(x: &EcSeq) -> Self {
        let b = x.to_basis();
        let mut coords = b.lambdas;
        if !b.lambda0.is_zero() {
            coords.insert(0, b.lambda0);
        }
        KVector { coords }
    }

    pub fn to_ec(&self) -> EcSeq {
        EcSeq::from_basis(&BasisCoords::new(
            self.get(0),
            self.coords.range(1..).map(|(i, v)| (*i, v.clone())),
        ))
    }
}
