//! Sampling algorithms: one permutation per classical input `x`, arranged
//! block-diagonally.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cost::aggregate::{aggregate_cost, AggregateCostReport, MinimizationMode};
use crate::cost::aggregator::Aggregator;
use crate::cost::model::CostModelKind;
use crate::cost::vector::CostVector;
use crate::equivalence::key::{multiplicity_key, MultiplicityMatrix};
use crate::equivalence::partition::ClassPartitionReport;
use crate::error::{shape_err, NflError, Result};
use crate::model::{Permutation, RegisterShape};

/// Largest number of secondary classes enumerated explicitly.
pub const MAX_SECONDARY_CLASSES: u128 = 10_000_000;

/// `P̃ = Σ_x P_x ⊗ |x⟩⟨x|`, stored as its blocks `P_x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildePermutation {
    blocks: Vec<Permutation>,
}

impl TildePermutation {
    pub fn blocks(&self) -> &[Permutation] {
        &self.blocks
    }

    pub fn nx(&self) -> u32 {
        self.blocks.len().trailing_zeros()
    }

    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }

    /// The full permutation on `N * 2^nx` points, index `k * 2^nx + x`.
    pub fn to_permutation(&self) -> Permutation {
        let nb = self.blocks.len();
        let mut image = vec![0; self.block_size() * nb];
        for (x, b) in self.blocks.iter().enumerate() {
            for k in 0..b.len() {
                image[k * nb + x] = b.apply(k) * nb + x;
            }
        }
        Permutation::new(image).expect("block-diagonal image is a bijection")
    }
}

pub fn build_tilde_p(blocks: Vec<Permutation>) -> Result<TildePermutation> {
    if blocks.is_empty() || !blocks.len().is_power_of_two() {
        return shape_err(format!("need a power-of-two number of blocks, got {}", blocks.len()));
    }
    let size = blocks[0].len();
    if blocks.iter().any(|b| b.len() != size) {
        return shape_err("blocks of P̃ have different sizes");
    }
    Ok(TildePermutation { blocks })
}

/// Ordered per-block multiplicity keys.
pub fn secondary_class_key(tp: &TildePermutation, shape: &RegisterShape) -> Result<Vec<MultiplicityMatrix>> {
    if tp.nx() != shape.nx() {
        return shape_err(format!("P̃ has {} blocks but shape has nx = {}", tp.blocks.len(), shape.nx()));
    }
    tp.blocks.iter().map(|b| multiplicity_key(b, shape)).collect()
}

/// How the single cost of `P̃` combines its block costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockCombine {
    #[default]
    Sum,
    Max,
}

impl BlockCombine {
    pub fn combine(self, costs: &[CostVector]) -> Result<CostVector> {
        let mut acc = costs.first().cloned().ok_or_else(|| NflError::Internal("no blocks".into()))?;
        for c in &costs[1..] {
            acc = match self {
                BlockCombine::Sum => acc.checked_add(c)?,
                BlockCombine::Max => {
                    if c.lex_cmp(&acc).is_gt() {
                        c.clone()
                    } else {
                        acc
                    }
                }
            };
        }
        Ok(acc)
    }
}

impl fmt::Display for BlockCombine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockCombine::Sum => "sum",
            BlockCombine::Max => "max",
        })
    }
}

impl FromStr for BlockCombine {
    type Err = NflError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" => Ok(BlockCombine::Sum),
            "max" => Ok(BlockCombine::Max),
            _ => Err(NflError::Validation(format!("unknown block combine {s:?}"))),
        }
    }
}

/// Secondary classes of sampling algorithms: ordered tuples of `2^nx`
/// primary distribution classes, one per input.
#[derive(Debug, Clone)]
pub struct SecondaryPartition<'a> {
    pub nx: u32,
    pub primary: &'a ClassPartitionReport,
}

impl<'a> SecondaryPartition<'a> {
    pub fn new(primary: &'a ClassPartitionReport, nx: u32) -> Result<Self> {
        if nx > 16 {
            return shape_err(format!("nx = {nx} is too large"));
        }
        Ok(SecondaryPartition { nx, primary })
    }

    pub fn blocks(&self) -> u32 {
        1 << self.nx
    }

    /// `M^(2^nx)`, or `None` on overflow.
    pub fn class_count(&self) -> Option<u128> {
        (self.primary.m() as u128).checked_pow(self.blocks())
    }

    /// Secondary class of `tp` as the tuple of primary class indices.
    pub fn class_of(&self, tp: &TildePermutation) -> Result<Vec<usize>> {
        if tp.blocks.len() != self.blocks() as usize {
            return shape_err("block count does not match nx");
        }
        let index: std::collections::HashMap<&Permutation, usize> =
            self.primary.members.iter().zip(&self.primary.assignment).map(|(p, &c)| (p, c as usize)).collect();
        tp.blocks
            .iter()
            .map(|b| index.get(b).copied().ok_or_else(|| NflError::Validation("block was not scanned".into())))
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SampAlgCostReport {
    pub nx: u32,
    pub combine: BlockCombine,
    pub class_count: u128,
    pub value: CostVector,
    pub upper_bound: bool,
}

/// Aggregate cost over secondary classes. For a monotone combine the
/// cheapest `P̃` in a class picks the cheapest member of each block's
/// primary class independently, so the per-class minimum is the combine of
/// the primary minima.
pub fn aggregate_cost_samp_alg(
    secondary: &SecondaryPartition<'_>,
    model: CostModelKind,
    aggregator: &Aggregator,
    mode: MinimizationMode,
    combine: BlockCombine,
) -> Result<SampAlgCostReport> {
    let primary = aggregate_cost(secondary.primary, model, aggregator, mode)?;
    samp_alg_from_primary(&primary, secondary.nx, aggregator, combine)
}

/// As [`aggregate_cost_samp_alg`], reusing already computed primary minima.
pub fn samp_alg_from_primary(
    primary: &AggregateCostReport,
    nx: u32,
    aggregator: &Aggregator,
    combine: BlockCombine,
) -> Result<SampAlgCostReport> {
    let minima = primary.minima();
    let m = minima.len();
    let blocks = 1u32 << nx;
    let count = (m as u128)
        .checked_pow(blocks)
        .filter(|&c| c <= MAX_SECONDARY_CLASSES)
        .ok_or_else(|| NflError::ResourceLimit(format!("{m}^{blocks} secondary classes exceed {MAX_SECONDARY_CLASSES}")))?;
    let mut tuple = vec![0usize; blocks as usize];
    let mut costs = Vec::with_capacity(count as usize);
    loop {
        let parts: Vec<CostVector> = tuple.iter().map(|&c| minima[c].clone()).collect();
        costs.push(combine.combine(&parts)?);
        // odometer over class tuples
        let mut pos = tuple.len();
        loop {
            if pos == 0 {
                return Ok(SampAlgCostReport {
                    nx,
                    combine,
                    class_count: count,
                    value: aggregator.apply(&costs)?,
                    upper_bound: primary.upper_bound,
                });
            }
            pos -= 1;
            tuple[pos] += 1;
            if tuple[pos] < m {
                break;
            }
            tuple[pos] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    use crate::equivalence::partition::{distribution_class_partition, ScanMode};
    use crate::model::ResourceState;

    fn s1() -> RegisterShape {
        RegisterShape::new(1, 1, 1, 1).unwrap()
    }

    fn s1_partition() -> ClassPartitionReport {
        let state = ResourceState::from_ratios(&[(16, 25), (9, 25)]).unwrap();
        distribution_class_partition(&state, &s1(), ScanMode::Exhaustive, 0.0).unwrap()
    }

    #[test]
    fn keys_respect_block_order() {
        let shape = s1().with_nx(1).unwrap();
        let id = Permutation::identity(8);
        let t = Permutation::transposition(0, 4, 8).unwrap();
        let a = build_tilde_p(vec![id.clone(), id.clone()]).unwrap();
        assert_eq!(secondary_class_key(&a, &shape).unwrap(), secondary_class_key(&a.clone(), &shape).unwrap());
        let b = build_tilde_p(vec![id.clone(), t.clone()]).unwrap();
        let c = build_tilde_p(vec![t, id.clone()]).unwrap();
        assert_ne!(secondary_class_key(&b, &shape).unwrap(), secondary_class_key(&c, &shape).unwrap());
        assert!(build_tilde_p(vec![id.clone(), id.clone(), id]).is_err());
        assert!(secondary_class_key(&b, &s1()).is_err());
    }

    #[test]
    fn full_permutation_costs_add_up() {
        let b0 = Permutation::new(vec![1, 2, 0, 3]).unwrap();
        let b1 = Permutation::transposition(0, 3, 4).unwrap();
        let tp = build_tilde_p(vec![b0.clone(), b1.clone()]).unwrap();
        let full = tp.to_permutation();
        assert_eq!(full.len(), 8);
        let cost = |p: &Permutation| p.len() - p.cycle_count();
        assert_eq!(cost(&full), cost(&b0) + cost(&b1));
    }

    #[test]
    fn s1_with_one_input_bit() {
        let part = s1_partition();
        let sec = SecondaryPartition::new(&part, 1).unwrap();
        assert_eq!(sec.class_count(), Some(81));
        let avg = aggregate_cost_samp_alg(
            &sec,
            CostModelKind::Transpositions,
            &Aggregator::Average,
            MinimizationMode::Exhaustive,
            BlockCombine::Sum,
        )
        .unwrap();
        assert_eq!(avg.class_count, 81);
        assert_eq!(avg.value.primary(), 4.0);
        let max = aggregate_cost_samp_alg(
            &sec,
            CostModelKind::Transpositions,
            &Aggregator::Max,
            MinimizationMode::Exhaustive,
            BlockCombine::Sum,
        )
        .unwrap();
        assert_eq!(max.value.primary(), 8.0);
    }

    #[test]
    fn no_input_bits_matches_generative_cost() {
        let part = s1_partition();
        let sec = SecondaryPartition::new(&part, 0).unwrap();
        for model in CostModelKind::ALL {
            for agg in [Aggregator::Average, Aggregator::Max, Aggregator::NegCountWithinBudget(model.budget(2.0))] {
                let gen = aggregate_cost(&part, model, &agg, MinimizationMode::Exhaustive).unwrap();
                let samp = aggregate_cost_samp_alg(&sec, model, &agg, MinimizationMode::Exhaustive, BlockCombine::Sum).unwrap();
                assert_eq!(gen.value, samp.value);
                assert_eq!(samp.class_count, part.m() as u128);
            }
        }
    }

    #[test]
    fn separable_minimum_matches_brute_force() {
        // N = 4: all 24^2 block pairs, grouped by secondary class directly
        let shape = RegisterShape::new(1, 1, 0, 1).unwrap();
        let state = ResourceState::from_ratios(&[(1, 1)]).unwrap();
        let part = distribution_class_partition(&state, &shape, ScanMode::Exhaustive, 0.0).unwrap();
        let sec = SecondaryPartition::new(&part, 1).unwrap();
        for combine in [BlockCombine::Sum, BlockCombine::Max] {
            let mut best: HashMap<Vec<usize>, f64> = HashMap::new();
            for a in &part.members {
                for b in &part.members {
                    let tp = build_tilde_p(vec![a.clone(), b.clone()]).unwrap();
                    let key = sec.class_of(&tp).unwrap();
                    let costs: Vec<CostVector> = tp.blocks().iter().map(crate::cost::model::transposition_count_cost).collect();
                    let c = combine.combine(&costs).unwrap().primary();
                    let e = best.entry(key).or_insert(f64::INFINITY);
                    *e = e.min(c);
                }
            }
            assert_eq!(best.len() as u128, sec.class_count().unwrap());
            let brute: Vec<CostVector> = best.values().map(|&v| CostVector::scalar("transpositions", v)).collect();
            for agg in [Aggregator::Average, Aggregator::Max] {
                let fast =
                    aggregate_cost_samp_alg(&sec, CostModelKind::Transpositions, &agg, MinimizationMode::Exhaustive, combine)
                        .unwrap();
                assert_eq!(fast.value, agg.apply(&brute).unwrap(), "{combine} {agg}");
            }
        }
    }
}
