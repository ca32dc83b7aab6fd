//! Stationary voter model and its `(p, q)` relatives on rhombic boxes of the
//! triangular lattice, sampled through the dual system of coalescing random
//! walks.
//!
//! * [`geometry`]: the box, its boundary arcs and the planar embedding.
//! * [`engine`]: the walker system and the sampler.
//! * [`interface`]: the exploration path between the 0- and 1-clusters.
//! * [`classes`]: statistics of the coalescing classes.
//! * [`oracle`]: exact small-box computations.
//! * [`stats`]: scaling-exponent estimators.

pub mod classes;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod interface;
mod linalg;
pub mod oracle;
pub mod stats;
mod unionfind;

pub use engine::{
    init_system, sample, sample_with, ClassId, HatlessWalks, ModelParams, SampleOutcome,
    SamplerOptions, WalkerSystem,
};
pub use error::{Error, Result};
pub use geometry::{build_box, BoxGeometry, Configuration, PlanarPoint, Site};
