use thiserror::Error;

use crate::io::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("polyhedron is unbounded")]
    UnboundedInput,
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("center is not an interior point")]
    NotInterior,
    #[error("polytope is not full-dimensional")]
    NotFullDim,
    #[error("size limit exceeded: {what} ({size} > {cap})")]
    SizeLimit { what: String, size: u128, cap: u128 },
    #[error("point violates the affine hull equation {0}")]
    AffineHullViolation(String),
    #[error("lifted system is unbounded in the projected coordinates")]
    UnboundedLift,
    #[error("negative slack: row {row} is violated by point {col}")]
    NegativeSlack { row: usize, col: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("malformed formula: {0}")]
    MalformedInput(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn size_limit(what: impl Into<String>, size: u128, cap: u128) -> Self {
        Error::SizeLimit { what: what.into(), size, cap }
    }
}
