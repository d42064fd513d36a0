//! An order continuous operator into ℓ^∞ with no matrix majorant, and a
//! refutation for a user-chosen candidate.

use preriesz::opmatrix::majorant::{describe, run_example21, run_example23};
use preriesz::opmatrix::{build_t_example21, refute_majorant, LMatrix};
use preriesz::Scalar;

fn main() {
    print!("{}", run_example21().to_text(false));
    print!("{}", run_example23().to_text(false));

    let t = build_t_example21();
    let s = LMatrix::limit_functional().scale(&Scalar::from_int(7));
    let out = refute_majorant(&t, &s);
    println!("7 · limit: {}", describe(&out));
    assert!(out.verify(&t, &s));
}
