//! Exact computations with operators on eventually constant sequences.

pub mod cli;
pub mod cover;
pub mod ecseq;
pub mod error;
pub mod example18;
pub mod family;
pub mod format;
pub mod opmatrix;
pub mod report;
pub mod scalar;
pub mod zseq;

pub use ecseq::{EcSeq, LatticeOp};
pub use error::{Error, Result};
pub use scalar::Scalar;
pub use zseq::ZSeq;
