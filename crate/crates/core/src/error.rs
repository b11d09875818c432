use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arma::Violation;
use crate::estimation::FittedModel;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors produced by the modelling routines.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("insufficient data: {what} needs at least {needed} observations, got {got}")]
    InsufficientData {
        what: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite value at position {index}")]
    NonFinite { index: usize },

    #[error("time index must increase by exactly 1 (position {index})")]
    IrregularTimes { index: usize },

    #[error("{what} out of range: {detail}")]
    Range { what: &'static str, detail: String },

    #[error("parameters are not admissible: {violations:?}")]
    Inadmissible { violations: Vec<Violation> },

    #[error("numerical degeneracy: {0}")]
    NumericalDegeneracy(&'static str),

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("optimizer did not converge for order ({}, {}, {})", .best.order.p, .best.order.d, .best.order.q)]
    NonConvergence { best: Box<FittedModel> },

    #[error("no candidate model could be fitted ({attempted} attempted)")]
    NoCandidate { attempted: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("series are not aligned: {0}")]
    Alignment(String),
}
