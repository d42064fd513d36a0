//! The meet of P and Q in the cover has no preimage.
//!
//! Set `PRERIESZ_VERBOSE=0` to hide the matrices.

use preriesz::cli::verbose_from_env;
use preriesz::cover::run_example22;

fn main() {
    print!("{}", run_example22().to_text(verbose_from_env()));
}
