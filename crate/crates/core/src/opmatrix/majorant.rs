//! Refuting matrix majorants of an operator into bounded sequences.
//!
//! If `T <= S` with `S` a matrix operator, then `S >= 0`, so for every `n`
//!
//! ```text
//! Σ_{i<=n} limsup T(e_i) <= Σ_{i<=n} lim S(e_i) <= lim S(1).
//! ```
//!
//! Choosing `n` with the left side above `lim S(1)` breaks one of the links,
//! and each broken link names a positive element and a position where
//! `S(x)(p) < T(x)(p)`.

use serde::{Deserialize, Serialize};

use super::gop::{build_t_example21, triangular, BoundedSeq, GOperator, RowCheck, RowMode};
use super::lmatrix::LMatrix;
use super::tail::Tail;
use crate::ecseq::EcSeq;
use crate::error::Result;
use crate::report::Report;
use crate::scalar::Scalar;

/// Largest `n` tried when looking for a chain that breaks.
const MAX_CHAIN: u64 = 100_000;

/// A positive element of ℓ₀^∞ used to probe domination.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "n", rename_all = "snake_case")]
pub enum Probe {
    One,
    Unit(u64),
    /// `1 - (e_1 + ... + e_n)`.
    OneMinusUnits(u64),
}

impl Probe {
    pub fn element(&self) -> EcSeq {
        match self {
            Probe::One => EcSeq::ones(),
            Probe::Unit(i) => EcSeq::unit(*i as usize),
            Probe::OneMinusUnits(n) => EcSeq::ones_from(*n as usize + 1),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Probe::One => "1".into(),
            Probe::Unit(i) => format!("e_{i}"),
            Probe::OneMinusUnits(n) => format!("1 - (e_1 + ... + e_{n})"),
        }
    }
}

/// `S(x)(position) < T(x)(position)` for the positive element `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DominationWitness {
    pub probe: Probe,
    pub position: u64,
    pub s_value: Scalar,
    pub t_value: Scalar,
}

impl DominationWitness {
    /// Recomputes both sides.
    pub fn verify(&self, t: &GOperator, s: &LMatrix) -> bool {
        let x = self.probe.element();
        let sv = s.apply(&x).get(self.position as usize).clone();
        let tv = t.apply_at(&x, self.position);
        sv == self.s_value && tv == self.t_value && sv < tv
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub statement: String,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub holds: bool,
}

impl ChainLink {
    fn leq(statement: String, lhs: Scalar, rhs: Scalar) -> Self {
        let holds = lhs <= rhs;
        ChainLink {
            statement,
            lhs,
            rhs,
            holds,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MajorizationCertificate {
    pub n: u64,
    /// `limsup T(e_i) <= lim S(e_i)` for `i = 1..=n`, then
    /// `Σ lim S(e_i) <= lim S(1)`.
    pub chain: Vec<ChainLink>,
    /// `Σ_{i<=n} limsup T(e_i)`: any majorant needs `lim S(1)` at least this.
    pub conclusion: Scalar,
    pub lim_s_one: Scalar,
    /// Concrete failure of domination behind the first broken link.
    pub witness: DominationWitness,
}

impl MajorizationCertificate {
    /// Re-evaluates every link and the witness.
    pub fn verify(&self, t: &GOperator, s: &LMatrix) -> bool {
        let fresh = chain_for(t, s, self.n);
        fresh == self.chain
            && self.chain.iter().any(|l| !l.holds)
            && self.conclusion > self.lim_s_one
            && self.witness.verify(t, s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MajorantRefutation {
    /// `S >= T` already fails on a basis element inside the explicit range.
    NotDominating { witness: DominationWitness },
    Chain { certificate: MajorizationCertificate },
    /// `Σ limsup T(e_i)` stays below `lim S(1)` for every `n` tried.
    Inconclusive { reason: String },
}

impl MajorantRefutation {
    pub fn is_refuted(&self) -> bool {
        !matches!(self, MajorantRefutation::Inconclusive { .. })
    }

    pub fn verify(&self, t: &GOperator, s: &LMatrix) -> bool {
        match self {
            MajorantRefutation::NotDominating { witness } => witness.verify(t, s),
            MajorantRefutation::Chain { certificate } => certificate.verify(t, s),
            MajorantRefutation::Inconclusive { .. } => false,
        }
    }
}

fn chain_for(t: &GOperator, s: &LMatrix, n: u64) -> Vec<ChainLink> {
    let mut chain = Vec::new();
    let mut sum = Scalar::zero();
    for i in 1..=n {
        let lim = s.apply(&EcSeq::unit(i as usize)).limit().clone();
        chain.push(ChainLink::leq(
            format!("limsup T(e_{i}) <= lim S(e_{i})"),
            t.image_e(i).limsup(),
            lim.clone(),
        ));
        sum += &lim;
    }
    let lim_one = s.apply(&EcSeq::ones()).limit().clone();
    chain.push(ChainLink::leq(
        format!("lim S(e_1) + ... + lim S(e_{n}) <= lim S(1)"),
        sum,
        lim_one,
    ));
    chain
}

/// A position `p > after` with `seq(p) = limsup seq`.
fn limsup_position(seq: &BoundedSeq, after: u64) -> u64 {
    let target = seq.limsup();
    let mut p = after + 1;
    loop {
        if seq.get(p) == target {
            return p;
        }
        p += 1;
    }
}

/// Finds a witness that `S` does not majorize `T`.
pub fn refute_majorant(t: &GOperator, s: &LMatrix) -> MajorantRefutation {
    let lim_one = s.apply(&EcSeq::ones()).limit().clone();
    let mut total = Scalar::zero();
    let mut n = 0;
    while total <= lim_one {
        n += 1;
        if n > MAX_CHAIN {
            return MajorantRefutation::Inconclusive {
                reason: format!("Σ limsup T(e_i) stays <= lim S(1) = {lim_one} for n <= {MAX_CHAIN}"),
            };
        }
        total += &t.image_e(n).limsup();
    }

    // explicit part of S: positions inside the prefixes of S(b)
    let probes: Vec<Probe> = std::iter::once(Probe::One).chain((1..=n).map(Probe::Unit)).collect();
    let images: Vec<EcSeq> = probes.iter().map(|b| s.apply(&b.element())).collect();
    let reach = images.iter().map(|y| y.prefix().len() as u64).max().unwrap_or(0);
    for (b, y) in probes.iter().zip(&images) {
        let x = b.element();
        for p in 1..=reach {
            let tv = t.apply_at(&x, p);
            if *y.get(p as usize) < tv {
                return MajorantRefutation::NotDominating {
                    witness: DominationWitness {
                        probe: b.clone(),
                        position: p,
                        s_value: y.get(p as usize).clone(),
                        t_value: tv,
                    },
                };
            }
        }
    }

    let chain = chain_for(t, s, n);
    let broken = chain.iter().position(|l| !l.holds).expect("the chain cannot hold");
    let witness = if broken < n as usize {
        let i = broken as u64 + 1;
        let y = &images[broken + 1];
        let p = limsup_position(&t.image_e(i), y.prefix().len() as u64);
        DominationWitness {
            probe: Probe::Unit(i),
            position: p,
            s_value: y.get(p as usize).clone(),
            t_value: t.e_value(i, p),
        }
    } else {
        let probe = Probe::OneMinusUnits(n);
        let x = probe.element();
        let y = s.apply(&x);
        let p = y.prefix().len() as u64 + 1;
        DominationWitness {
            probe,
            position: p,
            s_value: y.get(p as usize).clone(),
            t_value: t.apply_at(&x, p),
        }
    };
    MajorantRefutation::Chain {
        certificate: MajorizationCertificate {
            n,
            chain,
            conclusion: total,
            lim_s_one: lim_one,
            witness,
        },
    }
}

/// The chain for a symbolic majorant `S`: only facts about `T` are checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalCertificate {
    pub n: u64,
    pub limsups: Vec<Scalar>,
    /// `T(e_1) + ... + T(e_n) <= T(1)` row by row, with nonnegative entries.
    pub partial_sum: RowCheck,
    /// `lim S(1)` of any majorant is at least this.
    pub lower_bound: Scalar,
    pub chain: Vec<String>,
    pub valid: bool,
}

pub fn universal_certificate(t: &GOperator, n: u64) -> Result<UniversalCertificate> {
    let limsups: Vec<Scalar> = (1..=n).map(|i| t.image_e(i).limsup()).collect();
    let partial_sum = t.truncated(n).rowwise_check(RowMode::Positive)?;
    let lower_bound: Scalar = limsups.iter().sum();
    let mut chain: Vec<String> = limsups
        .iter()
        .enumerate()
        .map(|(i, l)| format!("{l} = limsup T(e_{}) <= lim S(e_{})", i + 1, i + 1))
        .collect();
    chain.push(format!(
        "e_1 + ... + e_{n} <= 1 and S >= 0 give lim S(e_1) + ... + lim S(e_{n}) <= lim S(1)"
    ));
    chain.push(format!("hence lim S(1) >= {lower_bound}"));
    let valid = partial_sum.holds && lower_bound >= Scalar::from_int(n as i64);
    Ok(UniversalCertificate {
        n,
        limsups,
        partial_sum,
        lower_bound,
        chain,
        valid,
    })
}

/// Stock majorant candidates for the built-in `T`.
pub fn candidate_majorants() -> Vec<(String, LMatrix)> {
    let lim = LMatrix::limit_functional();
    let mut out = vec![
        ("identity".to_string(), LMatrix::identity()),
        ("zero".to_string(), LMatrix::zero()),
        ("5 * limit".to_string(), lim.scale(&Scalar::from_int(5))),
        ("limit".to_string(), lim.clone()),
        ("P".to_string(), super::lmatrix::paper_p()),
        ("Q".to_string(), super::lmatrix::paper_q()),
        ("identity + 3 * limit".to_string(), LMatrix::identity().add(&lim.scale(&Scalar::from_int(3))).expect("aligned")),
    ];
    // all of e_1..e_k sent to 1
    for k in [1u64, 4, 9] {
        let entries = (1..=k).map(|j| ((0, j), Scalar::one()));
        let a = LMatrix::new(0, k, std::iter::once(((0, 0), Scalar::from_int(k as i64))).chain(entries), Tail::Zero)
            .expect("window");
        out.push((format!("e_1..e_{k} to 1"), a));
    }
    out
}

pub fn run_example21() -> Report {
    let t = build_t_example21();
    let mut r = Report::new("example 21", "operators on ℓ₀^∞ do not majorize T: ℓ₀^∞ → ℓ^∞");

    let blocks = 50u64;
    let horizon = triangular(blocks);
    let mut partition = true;
    for p in 1..=horizon {
        let hits = t.row(p);
        partition &= hits.len() == 1 && hits[0].1 == Scalar::one();
    }
    r.step(
        "each position of blocks 1..50 lies in exactly one T(e_i)",
        partition,
        vec![format!("positions 1..={horizon} checked")],
        serde_json::json!({ "blocks": blocks, "positions": horizon }),
    );

    let limsup_ok = (1..=blocks).all(|i| t.image_e(i).limsup() == Scalar::one() && t.e_value(i, triangular(blocks) + i) == Scalar::one());
    r.step(
        "limsup T(e_i) = 1 for i <= 50",
        limsup_ok,
        vec!["T(e_i) is 1 in slot i of every block k >= i".into()],
        serde_json::json!({ "checked": blocks }),
    );

    let pos = t.rowwise_check(RowMode::Positive).expect("decidable");
    r.step(
        "T is positive",
        pos.holds,
        vec![
            "T(e_i)(p) >= 0 and Σ_i T(e_i)(p) <= T(1)(p) for every row p".into(),
            format!("row patterns exhausted after {} positions", pos.rows_checked),
        ],
        &pos,
    );

    let mut all_valid = true;
    let mut bounds = Vec::new();
    for n in 1..=blocks {
        let c = universal_certificate(&t, n).expect("decidable");
        all_valid &= c.valid;
        bounds.push(c.lower_bound);
    }
    let sample = universal_certificate(&t, 3).expect("decidable");
    r.step(
        "universal chain for n = 1..50",
        all_valid,
        sample.chain.clone(),
        serde_json::json!({ "n": [1, blocks], "lower_bounds_hold": all_valid, "sample": sample }),
    );

    let mut refuted = true;
    let mut lines = Vec::new();
    let mut data = Vec::new();
    for (name, s) in candidate_majorants() {
        let out = refute_majorant(&t, &s);
        let ok = out.is_refuted() && out.verify(&t, &s);
        refuted &= ok;
        lines.push(format!("{name}: {}", describe(&out)));
        data.push(serde_json::json!({ "candidate": name, "refutation": out }));
    }
    r.step("every candidate majorant fails", refuted, lines, data);

    r.verdict = if r.all_passed() {
        "T is positive and has no majorant in L_r(ℓ₀^∞)".into()
    } else {
        format!("check failed: {}", r.failed_step().map(|s| s.name.as_str()).unwrap_or(""))
    };
    r
}

/// One-line summary of a refutation.
pub fn describe(out: &MajorantRefutation) -> String {
    match out {
        MajorantRefutation::NotDominating { witness: w } => format!(
            "S({})({}) = {} < {} = T({})({})",
            w.probe.label(),
            w.position,
            w.s_value,
            w.t_value,
            w.probe.label(),
            w.position
        ),
        MajorantRefutation::Chain { certificate: c } => {
            let broken = c.chain.iter().find(|l| !l.holds).expect("broken link");
            format!(
                "n = {}: {} fails ({} > {}), lim S(1) = {} < {}",
                c.n, broken.statement, broken.lhs, broken.rhs, c.lim_s_one, c.conclusion
            )
        }
        MajorantRefutation::Inconclusive { reason } => format!("inconclusive: {reason}"),
    }
}

pub fn run_example23() -> Report {
    let t = build_t_example21();
    let mut r = Report::new("example 23", "T is order continuous but has no order continuous majorant");

    let oc = t.rowwise_check(RowMode::OrderContinuous).expect("decidable");
    r.step(
        "row balance Σ_i T(e_i)(p) = T(1)(p)",
        oc.holds,
        vec![format!("row patterns exhausted after {} positions", oc.rows_checked)],
        &oc,
    );

    // T(x)(p) = λ0 + λ_k = x(k) with k the slot of p
    let horizon = triangular(12);
    let family: Vec<EcSeq> = (1..=8).map(EcSeq::ones_from).collect();
    let mut reads_one_coordinate = true;
    let mut decreasing = true;
    for p in 1..=horizon {
        let (_, k) = super::gop::block_and_slot(p);
        let mut prev: Option<Scalar> = None;
        for y in &family {
            let v = t.apply_at(y, p);
            reads_one_coordinate &= v == *y.get(k as usize);
            if let Some(pv) = &prev {
                decreasing &= v <= *pv;
            }
            prev = Some(v);
        }
    }
    let last = &family[family.len() - 1];
    let tail_zero = (1..=horizon).all(|p| {
        let (_, k) = super::gop::block_and_slot(p);
        k >= 8 || t.apply_at(last, p).is_zero()
    });
    r.step(
        "T(y^(n)) decreases to 0 componentwise",
        reads_one_coordinate && decreasing && tail_zero,
        vec![
            "component p of T(x) is x(k) with k the slot of p, independent of x".into(),
            format!("y^(1), ..., y^(8) checked at positions 1..={horizon}"),
        ],
        serde_json::json!({ "family": "ones-from-index-n", "terms": 8, "positions": horizon }),
    );

    let s = LMatrix::identity();
    let out = refute_majorant(&t, &s);
    r.step(
        "no majorant in L_r(ℓ₀^∞), hence none that is order continuous",
        out.is_refuted() && out.verify(&t, &s),
        vec![format!("identity: {}", describe(&out))],
        &out,
    );

    r.verdict = if r.all_passed() {
        "T is order continuous; order continuous matrix operators are not majorizing".into()
    } else {
        format!("check failed: {}", r.failed_step().map(|s| s.name.as_str()).unwrap_or(""))
    };
    r
}
