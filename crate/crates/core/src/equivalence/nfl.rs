//! Side-by-side comparison of two resource states: same class partition and
//! same aggregate costs whenever both states are distinct and strongly
//! distinct.

use serde::Serialize;

use crate::cost::{
    aggregate_cost, samp_alg_from_primary, AggregatorKind, BlockCombine, CostModelKind, CostVector, MinimizationMode,
};
use crate::equivalence::contingency::count_classes;
use crate::equivalence::partition::{distribution_class_partition, ClassPartitionReport, ScanMode, DEFAULT_GROUPING_TOLERANCE};
use crate::error::Result;
use crate::haar::{is_distinct, FastVerdict, StrongDistinctness, DEFAULT_TIE_TOLERANCE};
use crate::model::{RegisterShape, ResourceState};

#[derive(Debug, Clone, Serialize)]
pub struct NflOptions {
    pub models: Vec<CostModelKind>,
    pub aggregators: Vec<AggregatorKind>,
    /// Primary-cost limit for the budget aggregator.
    pub budget: f64,
    pub mode: ScanMode,
    pub minimization: MinimizationMode,
    /// Per-entry merge tolerance for float distributions.
    pub tolerance: f64,
    /// Tie tolerance for the distinctness predicates.
    pub distinct_tolerance: f64,
    /// Input bits of a sampling algorithm; 0 compares generative models only.
    pub nx: u32,
    pub combine: BlockCombine,
}

impl Default for NflOptions {
    fn default() -> Self {
        NflOptions {
            models: CostModelKind::ALL.to_vec(),
            aggregators: AggregatorKind::ALL.to_vec(),
            budget: 1.0,
            mode: ScanMode::Exhaustive,
            minimization: MinimizationMode::Exhaustive,
            tolerance: DEFAULT_GROUPING_TOLERANCE,
            distinct_tolerance: DEFAULT_TIE_TOLERANCE,
            nx: 0,
            combine: BlockCombine::Sum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NflVerdict {
    Equal,
    Unequal,
    PreconditionViolation,
}

#[derive(Debug, Clone, Serialize)]
pub struct StateVerdict {
    pub distinct: bool,
    pub strongly_distinct_fast: FastVerdict,
    pub strongly_distinct: bool,
    /// Number of distribution classes found.
    pub m: usize,
}

impl StateVerdict {
    pub fn passes(&self) -> bool {
        self.distinct && self.strongly_distinct
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CostComparison {
    pub model: CostModelKind,
    pub aggregator: AggregatorKind,
    pub a: CostVector,
    pub b: CostVector,
    pub equal: bool,
    pub upper_bound: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SecondaryComparison {
    pub nx: u32,
    pub combine: BlockCombine,
    pub classes_a: u128,
    pub classes_b: u128,
    pub costs: Vec<CostComparison>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NflReport {
    pub verdict: NflVerdict,
    pub m_star: usize,
    pub states: [StateVerdict; 2],
    pub partitions_identical: bool,
    pub costs: Vec<CostComparison>,
    pub secondary: Option<SecondaryComparison>,
    pub violations: Vec<String>,
}

fn state_verdict(state: &ResourceState, shape: &RegisterShape, part: &ClassPartitionReport, tol: f64) -> Result<StateVerdict> {
    let checker = StrongDistinctness { tolerance: tol, ..StrongDistinctness::default() };
    let fast = checker.fast(state, shape)?;
    let strongly = match fast {
        FastVerdict::Yes => true,
        FastVerdict::Inconclusive => checker.oracle(state, shape)?,
    };
    Ok(StateVerdict { distinct: is_distinct(state, tol), strongly_distinct_fast: fast, strongly_distinct: strongly, m: part.m() })
}

/// Compares the class partitions and aggregate costs prepared from two
/// states. A state failing either predicate yields a
/// `PreconditionViolation` report rather than an error.
pub fn nfl_compare(a: &ResourceState, b: &ResourceState, shape: &RegisterShape, options: &NflOptions) -> Result<NflReport> {
    let m_star = count_classes(shape)?;
    let part_a = distribution_class_partition(a, shape, options.mode, options.tolerance)?;
    let part_b = distribution_class_partition(b, shape, options.mode, options.tolerance)?;
    let states = [
        state_verdict(a, shape, &part_a, options.distinct_tolerance)?,
        state_verdict(b, shape, &part_b, options.distinct_tolerance)?,
    ];
    let partitions_identical = part_a.same_partition(&part_b);

    let mut violations = Vec::new();
    for (label, s) in ["A", "B"].iter().zip(&states) {
        if !s.distinct {
            violations.push(format!("state {label} is not distinct"));
        }
        if !s.strongly_distinct {
            violations.push(format!("state {label} is not strongly distinct"));
        }
        if !s.passes() && part_a.is_exhaustive() && s.m < m_star {
            violations.push(format!("state {label}: M = {} < M* = {m_star}", s.m));
        }
    }
    if !violations.is_empty() {
        return Ok(NflReport {
            verdict: NflVerdict::PreconditionViolation,
            m_star,
            states,
            partitions_identical,
            costs: Vec::new(),
            secondary: None,
            violations,
        });
    }

    let mut costs = Vec::new();
    let mut secondary_costs = Vec::new();
    for &model in &options.models {
        let base_a = aggregate_cost(&part_a, model, &crate::cost::Aggregator::Average, options.minimization)?;
        let base_b = aggregate_cost(&part_b, model, &crate::cost::Aggregator::Average, options.minimization)?;
        for &kind in &options.aggregators {
            let agg = kind.resolve(model, options.budget);
            let ra = base_a.with_aggregator(agg.clone())?;
            let rb = base_b.with_aggregator(agg.clone())?;
            costs.push(CostComparison {
                model,
                aggregator: kind,
                equal: ra.value == rb.value,
                upper_bound: ra.upper_bound || rb.upper_bound,
                a: ra.value,
                b: rb.value,
            });
            if options.nx > 0 {
                let sa = samp_alg_from_primary(&base_a, options.nx, &agg, options.combine)?;
                let sb = samp_alg_from_primary(&base_b, options.nx, &agg, options.combine)?;
                secondary_costs.push((
                    sa.class_count,
                    sb.class_count,
                    CostComparison {
                        model,
                        aggregator: kind,
                        equal: sa.value == sb.value,
                        upper_bound: sa.upper_bound || sb.upper_bound,
                        a: sa.value,
                        b: sb.value,
                    },
                ));
            }
        }
    }
    let secondary = (options.nx > 0).then(|| {
        let (ca, cb) = secondary_costs.first().map(|(a, b, _)| (*a, *b)).unwrap_or_else(|| {
            let blocks = 1u32 << options.nx;
            ((part_a.m() as u128).saturating_pow(blocks), (part_b.m() as u128).saturating_pow(blocks))
        });
        SecondaryComparison {
            nx: options.nx,
            combine: options.combine,
            classes_a: ca,
            classes_b: cb,
            costs: secondary_costs.into_iter().map(|(_, _, c)| c).collect(),
        }
    });

    let all_equal = partitions_identical
        && costs.iter().all(|c| c.equal)
        && secondary.as_ref().is_none_or(|s| s.classes_a == s.classes_b && s.costs.iter().all(|c| c.equal));
    Ok(NflReport {
        verdict: if all_equal { NflVerdict::Equal } else { NflVerdict::Unequal },
        m_star,
        states,
        partitions_identical,
        costs,
        secondary,
        violations,
    })
}
