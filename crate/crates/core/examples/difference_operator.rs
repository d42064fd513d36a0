//! `T(x)_n = x_n - x_{n-1}` and the refuter for dominating families.

use preriesz::example18::{refute_oconvergence, run_example18, scripted_families, Example18Config};

fn main() {
    let horizon = std::env::args().nth(1).and_then(|s| s.parse().ok());
    for (name, fam) in scripted_families(6) {
        println!("{name}: {}", refute_oconvergence(&fam, horizon).summary());
    }
    let report = run_example18(&Example18Config {
        horizon,
        ..Default::default()
    });
    println!("{}", report.verdict);
}
