//! Exact verification toolkit for curved cyclic A∞-algebras over a truncated
//! Novikov ring, plus the calibrated linear algebra of 4-dimensional models.

#![allow(clippy::needless_range_loop)]

pub mod ainfty;
pub mod calibrated;
pub mod corpus;
pub mod cyclic;
pub mod graded;
pub mod linalg;
pub mod maurer_cartan;
pub mod novikov;
pub mod poly;
pub mod rational;
