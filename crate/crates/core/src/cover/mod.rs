//! The lattice cover of the regular matrices and the embedding into it.

pub mod embed;
pub mod matrix;
pub mod pipeline;
pub mod yoc;

pub use embed::{embed_f, preimage_solve, undo_row_sums, PreimageCertificate};
pub use matrix::{CoverConditions, CoverMatrix};
pub use pipeline::{run_example22, run_meet_counterexample};
pub use yoc::{in_band_b, in_yoc, YocVerdict};
