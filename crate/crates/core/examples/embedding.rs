//! The cover embedding F and its inversion.

use preriesz::cover::{embed_f, preimage_solve, undo_row_sums};
use preriesz::cover::pipeline::dense_lines;
use preriesz::opmatrix::{paper_p, paper_q};
use preriesz::LatticeOp;

fn main() {
    let fp = embed_f(&paper_p()).unwrap();
    let fq = embed_f(&paper_q()).unwrap();
    println!("F(P):");
    for l in dense_lines(&fp, 5, 5) {
        println!("  {l}");
    }
    let back = preimage_solve(&fp);
    println!("preimage of F(P) is P: {}", back.preimage().unwrap().same_entries(&paper_p()));

    let m2 = fp.lattice(&fq, LatticeOp::Meet).unwrap();
    println!("M1 = M2 with the row sums undone:");
    for l in dense_lines(&undo_row_sums(&m2), 6, 5) {
        println!("  {l}");
    }
    println!("{:?}", preimage_solve(&m2));
}
