//! Cost models for permutations and their aggregation over classes.

pub mod aggregate;
pub mod aggregator;
pub mod compiler;
pub mod model;
pub mod sampling_alg;
pub mod stars_and_bars;
pub mod vector;

pub use aggregate::{aggregate_cost, AggregateCostReport, ClassCost, MinimizationMode};
pub use aggregator::{Aggregator, AggregatorKind};
pub use compiler::{compile_permutation, compile_transposition, transposition_gate_bound, Gate, GateList};
pub use model::{gate_count_cost, transposition_count, transposition_count_cost, CostModelKind};
pub use sampling_alg::{
    aggregate_cost_samp_alg, build_tilde_p, samp_alg_from_primary, secondary_class_key, BlockCombine, SampAlgCostReport,
    SecondaryPartition, TildePermutation,
};
pub use stars_and_bars::{
    all_targets, brute_force_class_count, prepare_from_counts, prepare_stars_and_bars, scaling_experiment, ScalingRow,
    ScalingTable,
};
pub use vector::CostVector;
