//! Command dispatch, spec files and reports for the `ainf` verifier.

pub mod fixtures;
pub mod report;
pub mod run;
pub mod spec_file;
