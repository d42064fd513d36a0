//! Positivity, regularity and order continuity of a few matrices.

use preriesz::opmatrix::{paper_p, paper_q, LMatrix, Tail};

fn main() {
    let shift = LMatrix::from_ints(0, 1, &[(0, 1, 1)], Tail::Identity).unwrap();
    let dip = LMatrix::from_ints(1, 1, &[(0, 0, 1), (1, 1, -1)], Tail::Zero).unwrap();
    for (name, a) in [
        ("P", paper_p()),
        ("Q", paper_q()),
        ("limit", LMatrix::limit_functional()),
        ("shifted identity", shift),
        ("negative entry", dip),
    ] {
        let pos = a.is_positive();
        let reg = a.is_regular();
        let oc = a.is_order_continuous();
        println!(
            "{name}: positive {} {:?}, regular {} (sup {}), order continuous {} {:?}",
            pos.positive, pos.witness, reg.regular, reg.sup, oc.order_continuous, oc.witness
        );
    }
}
