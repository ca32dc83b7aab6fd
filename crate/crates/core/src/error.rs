use thiserror::Error;

use crate::geometry::Site;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("box side length {0} is too small (need at least 3)")]
    InvalidSize(usize),

    #[error("site ({}, {}) lies outside the box of side {side}", site.i, site.j)]
    OutsideBox { site: Site, side: usize },

    #[error("site ({}, {}) is not an interior site", .0.i, .0.j)]
    NotInterior(Site),

    #[error("no active walkers left to step")]
    NoActiveWalkers,

    #[error("event cap of {cap} exceeded before all walkers were absorbed")]
    Runaway { cap: u64 },

    #[error("boundary votes do not follow the two-arc convention: {0}")]
    InvalidBoundary(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("class is empty")]
    EmptyClass,

    #[error("unknown class id {0}")]
    UnknownClass(usize),

    #[error("problem size {size} exceeds the configured cap {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("linear solve did not converge: residual {residual:e} after {iterations} iterations")]
    NotConverged { residual: f64, iterations: usize },

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("degenerate regression design: {0}")]
    Rank(String),
}

pub type Result<T> = std::result::Result<T, Error>;
