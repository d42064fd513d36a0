#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use preriesz::opmatrix::{LMatrix, Tail};
use preriesz::{EcSeq, Scalar, ZSeq};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_scalar() -> impl Strategy<Value = Scalar> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Scalar::ratio(n, d))
}

pub fn ec_seq() -> impl Strategy<Value = EcSeq> {
    (prop::collection::vec(small_scalar(), 0..6), small_scalar()).prop_map(|(p, t)| EcSeq::new(p, t))
}

pub fn zseq() -> impl Strategy<Value = ZSeq> {
    (-4i64..4, prop::collection::vec(small_scalar(), 0..6), small_scalar(), small_scalar())
        .prop_map(|(s, w, l, r)| ZSeq::new(s, w, l, r))
}

/// Random member of `Z`: free entries on `[-4, 4]` and a right tail, with
/// the entry at `-5` solving `Σ z_{-k}/2^k = lim z`.
pub fn z_member() -> impl Strategy<Value = ZSeq> {
    (prop::collection::vec(small_scalar(), 9), small_scalar()).prop_map(|(vals, r)| z_member_from(&vals, r))
}

pub fn z_member_from(vals: &[Scalar], right: Scalar) -> ZSeq {
    let mut core: BTreeMap<i64, Scalar> = (-4..=4).zip(vals.iter().cloned()).collect();
    let s: Scalar = (1..=4u32).map(|k| &core[&-(k as i64)] * &Scalar::pow2_inv(k)).sum();
    core.insert(-5, Scalar::from_int(32) * &(&right - &s));
    ZSeq::from_core(&core, Scalar::zero(), right)
}

pub fn rand_scalar(rng: &mut impl Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

pub fn rand_ec(rng: &mut impl Rng) -> EcSeq {
    let n = rng.gen_range(0..7);
    let prefix = (0..n).map(|_| rand_scalar(rng)).collect();
    EcSeq::new(prefix, rand_scalar(rng))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mix {
    /// Entries anywhere in `[-5, 5]`.
    Signed,
    /// Nonnegative entries and a large `a_00`, with an occasional sign flip.
    MostlyPositive,
    /// Rows rebalanced so that the matrix is order continuous.
    Balanced,
}

fn rand_tail(rng: &mut impl Rng, nonneg: bool) -> Tail {
    match rng.gen_range(0..4) {
        0 => Tail::Zero,
        1 => Tail::Identity,
        _ => {
            let p = rng.gen_range(1..=3);
            let block = (0..p)
                .map(|_| {
                    (0..p)
                        .map(|_| {
                            if rng.gen_bool(0.5) {
                                Scalar::zero()
                            } else if nonneg {
                                Scalar::ratio(rng.gen_range(0..=5), rng.gen_range(1..=3))
                            } else {
                                rand_scalar(rng)
                            }
                        })
                        .collect()
                })
                .collect();
            Tail::block(block).unwrap()
        }
    }
}

/// A random matrix with window at most `8 × 8` and entries in `[-5, 5] ∩ ℚ`
/// (except `a_00` under [`Mix::MostlyPositive`] and [`Mix::Balanced`]).
pub fn rand_lmatrix(rng: &mut impl Rng, mix: Mix) -> LMatrix {
    let rows = rng.gen_range(0..8u64);
    let cols = rng.gen_range(0..8u64);
    rand_lmatrix_shaped(rng, mix, rows, cols)
}

/// As [`rand_lmatrix`] on the window `[0, rows] × [0, cols]`.
pub fn rand_lmatrix_shaped(rng: &mut impl Rng, mix: Mix, rows: u64, cols: u64) -> LMatrix {
    let nonneg = mix != Mix::Signed;
    let mut entries = BTreeMap::new();
    for i in 0..=rows {
        for j in 0..=cols {
            if rng.gen_bool(0.35) {
                let v = if nonneg {
                    Scalar::ratio(rng.gen_range(0..=5), rng.gen_range(1..=3))
                } else {
                    rand_scalar(rng)
                };
                entries.insert((i, j), v);
            }
        }
    }
    let tail = rand_tail(rng, nonneg);
    if mix == Mix::MostlyPositive {
        entries.insert((0, 0), Scalar::from_int(rng.gen_range(20..=80)));
        if rng.gen_bool(0.3) {
            let i = rng.gen_range(0..=rows);
            let j = rng.gen_range(0..=cols);
            entries.insert((i, j), -Scalar::ratio(rng.gen_range(1..=5), rng.gen_range(1..=3)));
        }
    }
    let a = LMatrix::new(rows, cols, entries.clone(), tail.clone()).unwrap();
    if mix != Mix::Balanced {
        return a;
    }
    // put each explicit row's residual into column 0
    let a00 = a.entry(0, 0);
    let s0 = a.row_sum_from_one(0);
    for i in 1..=rows {
        let want = &(&s0 + &a.row_sum_from_one(i)) - &a00;
        entries.insert((i, 0), want);
    }
    // tail rows have zero column 0, so row 0 must carry their balance
    if (0..a.period()).any(|r| tail.row_sum(r) != tail.row_sum(0)) {
        return LMatrix::new(rows, cols, entries, Tail::Zero)
            .map(rebalance_row0)
            .unwrap();
    }
    let b = LMatrix::new(rows, cols, entries, tail).unwrap();
    rebalance_row0(b)
}

/// Sets `a_00 = Σ_{j>=1} a_0j + (tail row sum)` and recomputes column 0.
fn rebalance_row0(a: LMatrix) -> LMatrix {
    let tail_sum = a.tail().row_sum(0);
    let s0 = a.row_sum_from_one(0);
    let a00 = &s0 + &tail_sum;
    let mut entries: BTreeMap<(u64, u64), Scalar> = a.explicit().clone();
    entries.insert((0, 0), a00.clone());
    for i in 1..=a.rows() {
        let rest: Scalar = a.row(i).into_iter().filter(|(j, _)| *j >= 1).map(|(_, v)| v).sum();
        entries.insert((i, 0), &(&s0 + &rest) - &a00);
    }
    LMatrix::new(a.rows(), a.cols(), entries, a.tail().clone()).unwrap()
}

pub fn lmatrix(mix: Mix) -> impl Strategy<Value = LMatrix> {
    any::<u64>().prop_map(move |s| rand_lmatrix(&mut rng(s), mix))
}

/// Two matrices on one window, so that their tails can be added.
pub fn lmatrix_pair(mix: Mix) -> impl Strategy<Value = (LMatrix, LMatrix)> {
    (any::<u64>(), 0..8u64, 0..8u64).prop_map(move |(s, r, c)| {
        let mut g = rng(s);
        (rand_lmatrix_shaped(&mut g, mix, r, c), rand_lmatrix_shaped(&mut g, mix, r, c))
    })
}

/// Positivity by brute force: applies `A` to the generators `e_j` and
/// `1 - (e_1 + ... + e_{n-1})` of the positive cone, reading dense entries,
/// and checks every output position and the output limit.
pub fn positivity_oracle(a: &LMatrix) -> bool {
    let p = a.period() as u64;
    let max_row = a.rows() + 3 * p + 1;
    let max_col = a.cols() + 3 * p + 2;
    let col = |j: u64| -> Vec<Scalar> { (0..=max_row).map(|i| a.entry(i, j)).collect() };
    let nonneg_image = |c: &[Scalar]| c[0] >= Scalar::zero() && (1..c.len()).all(|i| &c[0] + &c[i] >= Scalar::zero());
    for j in 1..=max_col {
        if !nonneg_image(&col(j)) {
            return false;
        }
    }
    let mut c = col(0);
    for n in 1..=max_col + 1 {
        if !nonneg_image(&c) {
            return false;
        }
        for (ci, v) in c.iter_mut().zip(col(n)) {
            *ci -= &v;
        }
    }
    true
}

/// Exact rows of a dense window, for comparisons against printed tables.
pub fn dense_rows(f: impl Fn(u64, u64) -> Scalar, rows: std::ops::RangeInclusive<u64>, cols: u64) -> Vec<Vec<i64>> {
    rows.map(|i| (0..cols).map(|j| f(i, j).to_i64().expect("integer entry")).collect())
        .collect()
}
