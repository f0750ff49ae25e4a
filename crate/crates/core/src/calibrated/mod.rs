//! Linear algebra of calibrated geometry in real dimension 4 and 8.

pub mod cayley;
pub mod hodge;
pub mod lattice;
pub mod star4;
pub mod surd;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CalibratedError {
    #[error("bad shape: {0}")]
    Shape(String),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("metric is not positive definite")]
    NotPositiveDefinite,
    #[error("spanning vectors have rank {0}, expected 4")]
    DegeneratePlane(usize),
    #[error("form has determinant {0}, expected ±1")]
    NotUnimodular(String),
    #[error("form is not definite")]
    NotDefinite,
    #[error("no orthonormal basis of norm-one vectors found")]
    NotFound,
}
