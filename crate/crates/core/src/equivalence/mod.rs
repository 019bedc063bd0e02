//! Equivalence classes of output-register permutations.

pub mod contingency;
pub mod groups;
pub mod key;
pub mod lemma5;
pub mod nfl;
pub mod partition;

pub use contingency::{count_classes, enumerate_class_keys, enumerate_class_keys_capped, DEFAULT_TABLE_CAP};
pub use groups::{BlockGroupSpec, GroupKind};
pub use key::{double_coset_oracle, multiplicity_key, same_multiplicative_class, MultiplicityMatrix, DOUBLE_COSET_SEARCH_CAP};
pub use lemma5::{lemma5_positions, lemma5_witness};
pub use nfl::{nfl_compare, CostComparison, NflOptions, NflReport, NflVerdict, SecondaryComparison, StateVerdict};
pub use partition::{
    distribution_class_partition, multiplicative_class_partition, ClassPartitionReport, DistributionClass, ScanMode,
};
