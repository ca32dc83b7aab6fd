//! Exact small-box computations used to validate the sampler.

mod harmonic;
mod pair;
mod stationary;

pub use harmonic::{harmonic_measure, HarmonicField, FIELD_TOLERANCE};
pub use pair::{
    expected_class_size_exact, joint_vote_cov_exact, pair_coalescence_prob, PairChain,
    PairChainResult, DEFAULT_PAIR_CAP, IDENTITY_TOLERANCE,
};
pub use stationary::{
    exact_stationary, exact_stationary_with_cap, ExactStationary, DEFAULT_STATIONARY_CAP,
};
