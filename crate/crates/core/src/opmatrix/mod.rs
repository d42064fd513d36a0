//! Operator matrices on ℓ₀^∞ and operators into ℓ^∞.

pub mod gop;
pub mod kvec;
pub mod lmatrix;
pub mod majorant;
pub mod tail;

pub use gop::{build_t_example21, gop_rowwise_check, BoundedSeq, ColumnRule, GOperator, RowCheck, RowMode, RowWitness};
pub use kvec::KVector;
pub use lmatrix::{
    k_member, lmat_apply, lmat_is_order_continuous, lmat_is_positive, lmat_is_regular, paper_p, paper_q, LMatrix,
    OrderContinuityVerdict, PositivityVerdict, PositivityWitness, RegularityVerdict, RowClass,
};
pub use majorant::{refute_majorant, universal_certificate, MajorantRefutation, MajorizationCertificate};
pub use tail::Tail;
