//! Register shapes, states, permutations and the measurement pipelines.

pub mod measurement;
pub mod permutation;
pub mod shape;
pub mod state;

pub use measurement::{
    build_input_state, deferred_equivalence_check, measure_then_permute_distribution, outcome_bits, output_distribution,
    sample_outcome, OutcomeSampler,
};
pub use permutation::{compose, invert, transposition, Permutation};
pub use shape::RegisterShape;
pub use state::{Backend, InputState, Masses, OutcomeDistribution, ResourceState};
