//! Haar-random resource states and the predicates that gate the
//! equivalence results.

pub mod distinctness;
pub mod sampler;

pub use distinctness::{
    is_distinct, is_strongly_distinct_fast, make_collision_state, strong_distinct_oracle, BlockWeightTable, FastVerdict,
    StrongDistinctness, DEFAULT_TIE_TOLERANCE,
};
pub use sampler::{sample_haar_qr, sample_haar_rayleigh, HaarMethod, HaarSampler};
