use thiserror::Error;

use crate::boxworld::SignallingViolation;

/// Errors raised by the workbench. Every variant is an input-side failure;
/// internal invariant breaks panic instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polyhedron is unbounded along coordinate {coordinate}")]
    Unbounded { coordinate: usize },
    #[error("polytope is empty")]
    Empty,
    #[error("constraint {index} has zero normal and is trivially infeasible")]
    TriviallyInfeasible { index: usize },
    #[error("not a vertex: {0}")]
    NotAVertex(String),
    #[error("table is signalling: {0}")]
    Signalling(SignallingViolation),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
