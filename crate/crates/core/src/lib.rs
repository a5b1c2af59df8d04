//! Riemann–Liouville differintegration of complex scalar order and of
//! square-matrix order.
//!
//! Functions live on the closed basis of power-log terms
//! `c·(x−a)^p·ln^m(x−a)`, on which every operation here (differintegration,
//! order-derivatives, integer derivatives, products) has an exact closed
//! form. Matrix orders are realized through spectral projectors for
//! diagonalizable matrices and through Jordan chains for defective ones.
//! A Grünwald–Letnikov / weakly-singular-quadrature oracle provides the
//! independent numerical cross-check.

pub mod linalg;
pub mod operator;
pub mod oracle;
pub mod scalar;
pub mod special;
pub mod symbolic;

pub use scalar::{c64, ComplexScalar};
