//! One pass/fail line per acceptance criterion. Runs without the test
//! harness so the lines always reach the console.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::Rng;

use common::*;
use preriesz::cli::main_with;
use preriesz::cover::{embed_f, in_band_b, preimage_solve, undo_row_sums, CoverMatrix, PreimageCertificate};
use preriesz::example18::{
    check_membership, refute_oconvergence, scripted_families, t_apply, ObstructionWitness, RefuterOutcome, Space,
    Which,
};
use preriesz::opmatrix::majorant::candidate_majorants;
use preriesz::opmatrix::{
    build_t_example21, gop_rowwise_check, lmat_is_positive, paper_p, paper_q, refute_majorant, universal_certificate,
    RowMode,
};
use preriesz::zseq::z_in_z;
use preriesz::{EcSeq, LatticeOp, Scalar, ZSeq};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cover_rows(b: &CoverMatrix, rows: std::ops::RangeInclusive<u64>, cols: u64) -> Vec<Vec<i64>> {
    dense_rows(|i, j| b.entry(i, j), rows, cols)
}

// Rows 1..5 and columns 0..5 of the matrices printed with the meet example.
const PRINTED_FP: [[i64; 6]; 5] = [
    [0, 2, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 0],
    [0, 1, 0, 0, 1, 0],
    [0, 1, 0, 0, 0, 1],
];
const PRINTED_FQ: [[i64; 6]; 5] = [
    [0, 2, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 0],
    [0, 1, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 1],
    [0, 1, 0, 0, 0, 1],
];
const PRINTED_M2: [[i64; 6]; 5] = [
    [0, 2, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 1],
];
const PRINTED_M1: [[i64; 6]; 5] = [
    [2, 2, 0, 0, 0, 0],
    [1, 1, 0, 0, 0, 0],
    [2, 1, 0, 1, 0, 0],
    [1, 1, 0, 0, 0, 0],
    [2, 1, 0, 0, 0, 1],
];

fn criterion_1() -> Outcome {
    let fp = embed_f(&paper_p()).map_err(|e| e.to_string())?;
    let fq = embed_f(&paper_q()).map_err(|e| e.to_string())?;
    let m2 = fp.lattice(&fq, LatticeOp::Meet).map_err(|e| e.to_string())?;
    for (name, b, printed) in [("F(P)", &fp, PRINTED_FP), ("F(Q)", &fq, PRINTED_FQ), ("M2", &m2, PRINTED_M2)] {
        ensure(cover_rows(b, 1..=5, 6) == printed, || format!("{name} differs from the printed window"))?;
    }
    ensure(cover_rows(&undo_row_sums(&m2), 1..=5, 6) == PRINTED_M1, || "M1 differs".into())?;

    // beyond the window: rows i >= 2 of F(P) are e_1 + e_i, of F(Q) are
    // e_1 + e_{2⌊i/2⌋+1}, and M2 keeps the second 1 only on odd rows
    for i in 2..=60u64 {
        for j in 0..=70u64 {
            let fp_want = i64::from(j == 1) + i64::from(j == i);
            let fq_want = i64::from(j == 1) + i64::from(j == 2 * (i / 2) + 1);
            let m2_want = i64::from(j == 1) + i64::from(j == i && i % 2 == 1);
            let got = |b: &CoverMatrix| b.entry(i, j).to_i64();
            ensure(got(&fp) == Some(fp_want), || format!("F(P)({i},{j})"))?;
            ensure(got(&fq) == Some(fq_want), || format!("F(Q)({i},{j})"))?;
            ensure(got(&m2) == Some(m2_want), || format!("M2({i},{j})"))?;
        }
    }
    match preimage_solve(&m2) {
        PreimageCertificate::Inconsistent { column: 0, values, .. }
            if values == (Scalar::from_int(2), Scalar::from_int(1)) =>
        {
            Ok("F(P), F(Q), M2, M1 match on rows 1..5 and rows up to 60; column 0 alternates 2, 1".into())
        }
        other => Err(format!("unexpected certificate {other:?}")),
    }
}

fn criterion_2() -> Outcome {
    let mut g = rng(2);
    for k in 0..500 {
        let mix = if k % 2 == 0 { Mix::Signed } else { Mix::Balanced };
        let a = rand_lmatrix(&mut g, mix);
        let f = embed_f(&a).map_err(|e| e.to_string())?;
        let back = preimage_solve(&f);
        let m = back.preimage().ok_or_else(|| format!("no preimage for\n{a}"))?;
        ensure(m.same_entries(&a), || format!("round trip changed\n{a}"))?;
    }
    Ok("500 random matrices".into())
}

fn criterion_3() -> Outcome {
    let mut g = rng(3);
    let mut positive = 0;
    for k in 0..200 {
        let mix = if k % 2 == 0 { Mix::Signed } else { Mix::MostlyPositive };
        let a = rand_lmatrix(&mut g, mix);
        let got = lmat_is_positive(&a).positive;
        ensure(got == positivity_oracle(&a), || format!("disagreement on\n{a}"))?;
        positive += usize::from(got);
    }
    Ok(format!("200 random matrices, {positive} positive, 0 disagreements"))
}

fn criterion_4() -> Outcome {
    let mut g = rng(4);
    let mut oc = 0;
    for k in 0..500 {
        let mix = if k % 2 == 0 { Mix::Signed } else { Mix::Balanced };
        let a = rand_lmatrix(&mut g, mix);
        let f = embed_f(&a).map_err(|e| e.to_string())?;
        let is_oc = a.is_order_continuous().order_continuous;
        let rows = a.rows() + 3 * a.period() as u64 + 1;
        let zero_col0 = (1..=rows).all(|i| f.entry(i, 0).is_zero());
        ensure(is_oc == in_band_b(&f) && is_oc == zero_col0, || format!("disagreement on\n{a}"))?;
        oc += usize::from(is_oc);
    }
    Ok(format!("500 random matrices, {oc} order continuous, 0 disagreements"))
}

fn criterion_5() -> Outcome {
    let t = build_t_example21();
    let blocks = 50u64;
    let positions = blocks * (blocks + 1) / 2;
    // slot of p, by walking the blocks
    let mut slot = Vec::with_capacity(positions as usize + 1);
    slot.push(0);
    for k in 1..=blocks {
        slot.extend(1..=k);
    }
    for p in 1..=positions {
        let ones: Vec<u64> = (1..=blocks).filter(|&i| t.e_value(i, p) == Scalar::one()).collect();
        ensure(ones == [slot[p as usize]], || format!("position {p} covered by {ones:?}"))?;
        ensure((1..=blocks).all(|i| t.e_value(i, p) >= Scalar::zero()), || format!("sign at {p}"))?;
        let partial: Scalar = (1..=blocks).map(|i| t.e_value(i, p)).sum();
        ensure(partial <= t.img_one.get(p), || format!("partial sum at {p}"))?;
    }
    for i in 1..=blocks {
        ensure(t.image_e(i).limsup() == Scalar::one(), || format!("limsup T(e_{i})"))?;
    }
    let pos = gop_rowwise_check(&t, RowMode::Positive).map_err(|e| e.to_string())?;
    let oc = gop_rowwise_check(&t, RowMode::OrderContinuous).map_err(|e| e.to_string())?;
    ensure(pos.holds && oc.holds, || "rowwise checks".into())?;

    let mut candidates = candidate_majorants();
    let mut g = rng(5);
    while candidates.len() < 24 {
        let a = rand_lmatrix(&mut g, Mix::MostlyPositive);
        if lmat_is_positive(&a).positive {
            let c = Scalar::from_int(g.gen_range(1..=4));
            candidates.push((format!("random #{}", candidates.len()), a.scale(&c)));
        }
    }
    for (name, s) in &candidates {
        let out = refute_majorant(&t, s);
        ensure(out.is_refuted() && out.verify(&t, s), || format!("{name} not refuted: {out:?}"))?;
    }
    for n in 1..=50 {
        let u = universal_certificate(&t, n).map_err(|e| e.to_string())?;
        ensure(u.valid, || format!("universal certificate n = {n}"))?;
    }
    Ok(format!("{positions} positions, {} candidates refuted and re-verified", candidates.len()))
}

fn manual_weighted_sum(z: &ZSeq) -> Scalar {
    let k = (-z.start()).max(0) as u32 + 1;
    let explicit: Scalar = (1..=k).map(|i| z.get(-(i as i64)) * &Scalar::pow2_inv(i)).sum();
    explicit + z.left_tail() * &Scalar::pow2_inv(k)
}

fn criterion_6() -> Outcome {
    for n in 1..=100i64 {
        let x = t_apply(&EcSeq::unit(n as usize), Which::T);
        let want = (-2..=n + 3).all(|i| {
            let v = if i == n { 1 } else if i == n + 1 { -1 } else { 0 };
            *x.get(i) == Scalar::from_int(v)
        });
        ensure(want && x.limit().is_zero(), || format!("T(e^({n})) = {x}"))?;
    }
    let mut g = rng(6);
    for _ in 0..1000 {
        let x = rand_ec(&mut g);
        let z = t_apply(&x, Which::T);
        ensure(z_in_z(&z) && manual_weighted_sum(&z) == *z.limit(), || format!("T({x}) not in Z"))?;
    }
    let families = scripted_families(8);
    let mut obstructions = 0;
    for (name, fam) in &families {
        match refute_oconvergence(fam, None) {
            RefuterOutcome::Obstruction { witness } => {
                let w = ObstructionWitness::new(witness.j, witness.delta.clone());
                let ok = witness.holds_for(fam)
                    && w == witness
                    && witness.delta.is_positive()
                    && check_membership(&w.omega, Space::Z).member
                    && manual_weighted_sum(&w.omega) == *w.omega.limit()
                    && fam.iter().all(|z| w.omega.leq(z));
                ensure(ok, || format!("{name}: witness fails"))?;
                obstructions += 1;
            }
            RefuterOutcome::Rejected { failed } => {
                ensure(rejection_holds(fam, &failed), || format!("{name}: rejection {failed:?} not confirmed"))?;
            }
            RefuterOutcome::Unrefuted { reason } => return Err(format!("{name}: {reason}")),
        }
    }
    Ok(format!("{} families refuted, {obstructions} by an ω witness", families.len()))
}

fn rejection_holds(fam: &[ZSeq], failed: &preriesz::example18::FailedCheck) -> bool {
    use preriesz::example18::FailedCheck::*;
    match failed {
        NotInZ { term, .. } => manual_weighted_sum(&fam[term - 1]) != *fam[term - 1].limit(),
        NotDominating { term, index } => fam[term - 1].get(*index) < ZSeq::bump(*term as i64).get(*index),
        NotDecreasing { terms: (a, b), index } => fam[b - 1].get(*index) > fam[a - 1].get(*index),
        BelowForcedBound { term, index, .. } => match index {
            Some(m) => *fam[term - 1].get(*m) < Scalar::one(),
            None => *fam[term - 1].limit() < Scalar::one(),
        },
    }
}

fn criterion_7() -> Outcome {
    let mut g = rng(7);
    let cases = 1000;
    let val = |s: &EcSeq, n: usize| s.get(n).clone();
    for _ in 0..cases {
        let (a, b, c) = (rand_ec(&mut g), rand_ec(&mut g), rand_ec(&mut g));
        let m = |x: &EcSeq, y: &EcSeq| x.lattice(y, LatticeOp::Meet);
        let j = |x: &EcSeq, y: &EcSeq| x.lattice(y, LatticeOp::Join);
        let laws = m(&a, &b) == m(&b, &a)
            && j(&a, &b) == j(&b, &a)
            && m(&m(&a, &b), &c) == m(&a, &m(&b, &c))
            && j(&j(&a, &b), &c) == j(&a, &j(&b, &c))
            && m(&a, &j(&a, &b)) == a
            && j(&a, &m(&a, &b)) == a
            && m(&a, &j(&b, &c)) == j(&m(&a, &b), &m(&a, &c));
        ensure(laws, || format!("lattice laws fail for {a}, {b}, {c}"))?;
        let leq = (1..=8).all(|n| val(&a, n) <= val(&b, n));
        ensure(
            a.leq(&b) == leq && (m(&a, &b) == a) == leq && (j(&a, &b) == b) == leq,
            || format!("order mismatch for {a}, {b}"),
        )?;
        // force a disjoint pair half the time
        let (x, y) = if g.gen_bool(0.5) {
            (a.clone(), b.clone())
        } else {
            let cut = g.gen_range(1..=8);
            let xs = (1..=8).map(|n| if n < cut { val(&a, n) } else { Scalar::zero() }).collect();
            let ys = (1..=8).map(|n| if n < cut { Scalar::zero() } else { val(&b, n) }).collect();
            (EcSeq::new(xs, Scalar::zero()), EcSeq::new(ys, b.tail().clone()))
        };
        let pointwise = (1..=9).all(|n| val(&x, n).is_zero() || val(&y, n).is_zero());
        ensure(
            x.disjoint(&y) == pointwise && x.disjoint_by_upper_sets(&y) == pointwise,
            || format!("disjointness mismatch for {x}, {y}"),
        )?;
        ensure(EcSeq::from_basis(&a.to_basis()) == a, || format!("basis round trip for {a}"))?;
    }
    Ok(format!("{cases} random cases per law"))
}

fn criterion_8() -> Outcome {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden");
    for id in ["18", "21", "22", "23"] {
        let (code, out, err) = main_with(["preriesz", "--format", "json", "example", id]);
        ensure(code == 0, || format!("example {id} exited {code}: {err}"))?;
        let golden = std::fs::read_to_string(format!("{dir}/example_{id}.json")).map_err(|e| e.to_string())?;
        ensure(out == golden, || format!("example {id} differs from tests/golden/example_{id}.json"))?;
    }
    Ok("examples 18, 21, 22, 23 byte-identical to the committed JSON".into())
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 8] = [
        (1, "meet counterexample reproduced exactly", Duration::from_secs(1), criterion_1),
        (2, "preimage of F(A) recovers A", Duration::from_secs(30), criterion_2),
        (3, "positivity agrees with the cone-generator oracle", Duration::from_secs(30), criterion_3),
        (4, "order continuity iff zero 0th column of F(A)", Duration::from_secs(30), criterion_4),
        (5, "operator without majorant", Duration::from_secs(10), criterion_5),
        (6, "difference operator and refuter", Duration::from_secs(10), criterion_6),
        (7, "lattice and disjointness laws", Duration::from_secs(60), criterion_7),
        (8, "CLI golden output", Duration::from_secs(30), criterion_8),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let took = start.elapsed();
        let res = match res {
            Ok(_) if took > limit => Err(format!("took {took:.2?}, limit {limit:?}")),
            r => r,
        };
        match res {
            Ok(detail) => println!("criterion {n}: PASS  {name}: {detail} ({took:.2?})"),
            Err(e) => {
                failed += 1;
                println!("criterion {n}: FAIL  {name}: {e} ({took:.2?})");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
