//! Prints a bundled matrix in the exchange format, then parses it back.
//!
//! ```text
//! cargo run --example exchange_format -- p|q|fp|fq|m2|m1|t
//! ```

use preriesz::cover::{embed_f, undo_row_sums};
use preriesz::format::parse_document;
use preriesz::opmatrix::{build_t_example21, paper_p, paper_q};
use preriesz::LatticeOp;

fn main() {
    let which = std::env::args().nth(1).unwrap_or_else(|| "p".into());
    let fp = || embed_f(&paper_p()).unwrap();
    let fq = || embed_f(&paper_q()).unwrap();
    let m2 = || fp().lattice(&fq(), LatticeOp::Meet).unwrap();
    let text = match which.as_str() {
        "p" => paper_p().to_string(),
        "q" => paper_q().to_string(),
        "fp" => fp().to_string(),
        "fq" => fq().to_string(),
        "m2" => m2().to_string(),
        "m1" => format!("# rows >= 1 only; row 0 of a preimage is undetermined\n{}", undo_row_sums(&m2())),
        "t" => build_t_example21().to_string(),
        other => {
            eprintln!("unknown matrix {other}");
            std::process::exit(2);
        }
    };
    print!("{text}");
    let doc = parse_document(&text).expect("printed text parses");
    eprintln!("parsed back as {}", doc.kind());
}
