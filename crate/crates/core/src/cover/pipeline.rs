//! The meet pipeline: embed two order continuous matrices, take the
//! pointwise meet of the images and try to pull it back.

use serde_json::json;

use super::embed::{embed_f, preimage_solve, undo_row_sums, PreimageCertificate};
use super::matrix::CoverMatrix;
use super::yoc::{in_band_b, in_yoc};
use crate::ecseq::LatticeOp;
use crate::opmatrix::lmatrix::{paper_p, paper_q, LMatrix};
use crate::report::Report;

/// Rows `1..=rows` and columns `0..=cols` followed by an ellipsis.
pub fn dense_lines(b: &CoverMatrix, rows: u64, cols: u64) -> Vec<String> {
    b.dense(rows, cols)
        .into_iter()
        .map(|r| {
            let mut s: Vec<String> = r.iter().map(ToString::to_string).collect();
            s.push("...".into());
            s.join(" ")
        })
        .collect()
}

fn lmatrix_lines(a: &LMatrix, rows: u64, cols: u64) -> Vec<String> {
    (0..rows)
        .map(|i| {
            let mut s: Vec<String> = (0..=cols).map(|j| a.entry(i, j).to_string()).collect();
            s.push("...".into());
            s.join(" ")
        })
        .collect()
}

fn with_heading(heading: String, mut lines: Vec<String>) -> Vec<String> {
    lines.insert(0, heading);
    lines
}

pub fn run_meet_counterexample(p: &LMatrix, q: &LMatrix) -> Report {
    let mut r = Report::new("example 22", "the order continuous matrices do not form a vector lattice");

    for (name, a) in [("P", p), ("Q", q)] {
        let oc = a.is_order_continuous();
        let reg = a.is_regular();
        let mut lines = lmatrix_lines(a, 6, 5);
        lines.push(format!("regular with sup of absolute row sums {}", reg.sup));
        lines.push(match &oc.witness {
            None => "rows balance: Σ_j (a_ij + a_0j) = a_00 + a_i0 for all i >= 1".into(),
            Some((i, res)) => format!("row {i} is off balance by {res}"),
        });
        r.step(
            format!("{name} is order continuous"),
            oc.order_continuous && reg.regular,
            lines,
            json!({ "matrix": a.to_string(), "order_continuity": oc, "regularity": reg }),
        );
    }
    if !r.all_passed() {
        r.verdict = "inputs are not both order continuous".into();
        return r;
    }

    let fp = embed_f(p).expect("regular");
    let fq = embed_f(q).expect("regular");
    for (name, f) in [("F(P)", &fp), ("F(Q)", &fq)] {
        r.step(
            format!("{name} lies in the band (zero 0th column)"),
            in_band_b(f),
            with_heading(format!("{name} ="), dense_lines(f, 5, 5)),
            json!({ "matrix": f.to_string() }),
        );
    }

    let m2 = match fp.lattice(&fq, LatticeOp::Meet) {
        Ok(m) => m,
        Err(e) => {
            r.step("pointwise meet", false, vec![e.to_string()], json!(null));
            r.verdict = "the images cannot be put on a common descriptor".into();
            return r;
        }
    };
    let ideal = in_yoc(&m2, Some(p));
    let ideal = if ideal.is_member() { ideal } else { in_yoc(&m2, None) };
    r.step(
        "M2 = F(P) ∧ F(Q), computed pointwise",
        in_band_b(&m2) && ideal.is_member(),
        with_heading("M2 =".into(), dense_lines(&m2, 5, 5)),
        json!({ "matrix": m2.to_string(), "ideal": ideal }),
    );

    r.step(
        "a meet in the order continuous matrices would map to M2",
        true,
        vec![
            "F is a bipositive embedding into the ideal, whose lattice operations are pointwise".into(),
            "if M = P ∧ Q existed, then F(M) = F(P ∧ Q) = F(P) ∧ F(Q) = M2".into(),
        ],
        json!({ "justification": "F(M) = F(P ∧ Q) = F(P) ∧ F(Q) = M2" }),
    );

    let m1 = undo_row_sums(&m2);
    let col0: Vec<String> = (1..=6).map(|i| m1.entry(i, 0).to_string()).collect();
    r.step(
        "undo the row-sum step; prepend an undetermined row 0",
        true,
        with_heading("M1 (rows >= 1) =".into(), dense_lines(&m1, 5, 5))
            .into_iter()
            .chain([format!("0th column of M1: {}, ...", col0.join(", "))])
            .collect(),
        json!({ "matrix": m1.to_string() }),
    );

    let cert = preimage_solve(&m2);
    let lines = match &cert {
        PreimageCertificate::Inconsistent {
            column,
            witness_rows: (n, n1),
            values: (v, w),
        } => vec![
            format!("column {column} of M1 does not settle: rows {n} and {n1} read {v} and {w}"),
            format!("a preimage M needs m_00 + m_{n}0 = {v} and m_00 + m_{n1}0 = {w}"),
            format!("column 0 of M vanishes eventually, so m_00 = {v} and m_00 = {w} at the next such pair"),
        ],
        PreimageCertificate::Preimage { matrix } => {
            with_heading("preimage M =".into(), lmatrix_lines(matrix, 6, 5))
        }
    };
    r.step("solve F(M) = M2", true, lines, &cert);

    r.verdict = if cert.is_inconsistent() {
        "𝓝 is not a vector lattice".into()
    } else {
        "no obstruction found for this pair".into()
    };
    r
}

pub fn run_example22() -> Report {
    run_meet_counterexample(&paper_p(), &paper_q())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn default_run_finds_the_obstruction() {
        let r = run_example22();
        assert!(r.all_passed(), "{}", r.to_text(true));
        assert_eq!(r.verdict, "𝓝 is not a vector lattice");
    }

    #[test]
    fn equal_inputs_have_no_obstruction() {
        let p = paper_p();
        assert_eq!(run_meet_counterexample(&p, &p).verdict, "no obstruction found for this pair");
        let p2 = p.scale(&Scalar::from_int(2));
        assert_eq!(run_meet_counterexample(&p, &p2).verdict, "no obstruction found for this pair");
    }

    #[test]
    fn identity_against_q_still_alternates() {
        let r = run_meet_counterexample(&LMatrix::identity(), &paper_q());
        assert!(r.all_passed());
        assert_eq!(r.verdict, "𝓝 is not a vector lattice");
    }
}
