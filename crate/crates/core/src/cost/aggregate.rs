//! Aggregate cost of a class partition: cheapest member per class, then an
//! aggregator over the per-class minima.

use std::cmp::Ordering;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cost::aggregator::Aggregator;
use crate::cost::model::CostModelKind;
use crate::cost::vector::CostVector;
use crate::equivalence::key::MultiplicityMatrix;
use crate::equivalence::partition::ClassPartitionReport;
use crate::error::{NflError, Result};
use crate::model::Permutation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum MinimizationMode {
    /// Every scanned member of each class.
    Exhaustive,
    /// Best of `k` members drawn per class; the result is an upper bound.
    BestOfSampled { k: usize, seed: u64 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassCost {
    pub class: usize,
    pub key: MultiplicityMatrix,
    pub cost: CostVector,
    /// Cheapest member, smallest rank among ties.
    pub witness: Permutation,
}

#[derive(Debug, Clone, Serialize)]
pub struct AggregateCostReport {
    pub model: CostModelKind,
    pub aggregator: Aggregator,
    pub value: CostVector,
    pub per_class: Vec<ClassCost>,
    /// Set when the minima were not taken over whole classes.
    pub upper_bound: bool,
}

impl AggregateCostReport {
    pub fn minima(&self) -> Vec<CostVector> {
        self.per_class.iter().map(|c| c.cost.clone()).collect()
    }

    /// Re-aggregates the same minima under another aggregator.
    pub fn with_aggregator(&self, aggregator: Aggregator) -> Result<AggregateCostReport> {
        Ok(AggregateCostReport { value: aggregator.apply(&self.minima())?, aggregator, ..self.clone() })
    }
}

fn tie_key(p: &Permutation, fallback: usize) -> u64 {
    p.rank().unwrap_or(fallback as u64)
}

/// Minimum cost per class of `partition`, aggregated.
pub fn aggregate_cost(
    partition: &ClassPartitionReport,
    model: CostModelKind,
    aggregator: &Aggregator,
    mode: MinimizationMode,
) -> Result<AggregateCostReport> {
    let members = partition.class_members();
    let per_class = members
        .par_iter()
        .enumerate()
        .map(|(class, idx)| {
            if idx.is_empty() {
                return Err(NflError::Internal(format!("class {class} has no members")));
            }
            let candidates: Vec<usize> = match mode {
                MinimizationMode::Exhaustive => idx.clone(),
                MinimizationMode::BestOfSampled { k, seed } => {
                    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ (class as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                    (0..k.max(1)).map(|_| *idx.choose(&mut rng).expect("non-empty")).collect()
                }
            };
            let mut best: Option<(CostVector, u64, usize)> = None;
            for &i in &candidates {
                let p = &partition.members[i];
                let cost = model.cost(p)?;
                let rank = tie_key(p, i);
                let better = match &best {
                    None => true,
                    Some((c, r, _)) => match cost.lex_cmp(c) {
                        Ordering::Less => true,
                        Ordering::Equal => rank < *r,
                        Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((cost, rank, i));
                }
            }
            let (cost, _, i) = best.expect("non-empty");
            Ok(ClassCost { class, key: partition.classes[class].key.clone(), cost, witness: partition.members[i].clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    let minima: Vec<CostVector> = per_class.iter().map(|c| c.cost.clone()).collect();
    Ok(AggregateCostReport {
        model,
        aggregator: aggregator.clone(),
        value: aggregator.apply(&minima)?,
        per_class,
        upper_bound: !partition.is_exhaustive() || !matches!(mode, MinimizationMode::Exhaustive),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::partition::{distribution_class_partition, ScanMode};
    use crate::model::{RegisterShape, ResourceState};

    fn s1_partition() -> ClassPartitionReport {
        let shape = RegisterShape::new(1, 1, 1, 1).unwrap();
        let state = ResourceState::from_ratios(&[(16, 25), (9, 25)]).unwrap();
        distribution_class_partition(&state, &shape, ScanMode::Exhaustive, 0.0).unwrap()
    }

    #[test]
    fn s1_transposition_aggregates() {
        let part = s1_partition();
        let avg =
            aggregate_cost(&part, CostModelKind::Transpositions, &Aggregator::Average, MinimizationMode::Exhaustive).unwrap();
        let mut minima: Vec<f64> = avg.per_class.iter().map(|c| c.cost.primary()).collect();
        minima.sort_by(f64::total_cmp);
        assert_eq!(minima, vec![0.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 3.0, 4.0]);
        assert_eq!(avg.value.primary(), 2.0);
        assert!(!avg.upper_bound);
        assert_eq!(avg.with_aggregator(Aggregator::Max).unwrap().value.primary(), 4.0);
        let budget = Aggregator::NegCountWithinBudget(CostModelKind::Transpositions.budget(1.0));
        assert_eq!(avg.with_aggregator(budget).unwrap().value.primary(), -3.0);
        assert!(avg.per_class[0].witness.is_identity());
    }

    #[test]
    fn sampled_minima_are_upper_bounds() {
        let part = s1_partition();
        let exact =
            aggregate_cost(&part, CostModelKind::Transpositions, &Aggregator::Average, MinimizationMode::Exhaustive).unwrap();
        let mode = MinimizationMode::BestOfSampled { k: 20, seed: 3 };
        let sampled = aggregate_cost(&part, CostModelKind::Transpositions, &Aggregator::Average, mode).unwrap();
        assert!(sampled.upper_bound);
        for (s, e) in sampled.per_class.iter().zip(&exact.per_class) {
            assert!(s.cost.primary() >= e.cost.primary());
        }
        let again = aggregate_cost(&part, CostModelKind::Transpositions, &Aggregator::Average, mode).unwrap();
        assert_eq!(again.value, sampled.value);
    }

    #[test]
    fn gate_model_minima() {
        let part = s1_partition();
        let rep = aggregate_cost(&part, CostModelKind::Gates, &Aggregator::Max, MinimizationMode::Exhaustive).unwrap();
        assert_eq!(rep.per_class.len(), 9);
        assert_eq!(rep.per_class[0].cost.primary(), 0.0);
        assert!(rep.value.primary() > 0.0);
    }
}
