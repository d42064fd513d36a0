//! Lattice operations on eventually constant sequences, their basis
//! coordinates, and membership of sequences on ℤ in the subspace `Z`.

use preriesz::zseq::z_in_z;
use preriesz::{EcSeq, LatticeOp, Scalar, ZSeq};

fn main() {
    let x = EcSeq::from_ints(&[3, -1, 2], 1);
    let y = EcSeq::from_ints(&[0, 4], -2);
    println!("x      = {x}");
    println!("y      = {y}");
    println!("x ∨ y  = {}", x.lattice(&y, LatticeOp::Join));
    println!("x ∧ y  = {}", x.lattice(&y, LatticeOp::Meet));
    println!("|x|    = {}", x.abs());

    let c = x.to_basis();
    println!("x in the basis (1, e_1, e_2, ...): {c:?}");
    assert_eq!(EcSeq::from_basis(&c), x);

    let u = EcSeq::unit(2);
    let v = EcSeq::ones_from(3);
    println!("e_2 ⊥ 1 - (e_1 + e_2): {}", u.disjoint(&v));

    let z = ZSeq::finite([(-1, Scalar::from_int(2)), (-2, Scalar::from_int(-4))]);
    println!("{z} in Z: {}", z_in_z(&z));
    println!("{} in Z: {}", ZSeq::ones_from(1), z_in_z(&ZSeq::ones_from(1)));
}
