use std::fmt;

use serde::{Serialize, Serializer};

use crate::cost::model::CostModelKind;
use crate::cost::vector::CostVector;
use crate::error::{shape_err, NflError, Result};

/// Order-independent functional of the per-class costs.
#[derive(Debug, Clone, PartialEq)]
pub enum Aggregator {
    Average,
    Max,
    /// Minus the number of classes whose cost is entry-wise within budget.
    NegCountWithinBudget(CostVector),
}

impl Aggregator {
    pub fn name(&self) -> &'static str {
        match self {
            Aggregator::Average => "average",
            Aggregator::Max => "max",
            Aggregator::NegCountWithinBudget(_) => "budget",
        }
    }

    pub fn apply(&self, costs: &[CostVector]) -> Result<CostVector> {
        let Some(first) = costs.first() else {
            return Err(NflError::Internal("aggregating an empty cost tuple".into()));
        };
        if costs.iter().any(|c| !c.same_layout(first)) {
            return shape_err("cost vectors with different layouts");
        }
        Ok(match self {
            Aggregator::Average => {
                let values = (0..first.values().len())
                    .map(|i| {
                        // summing in sorted order makes the result independent of input order
                        let mut column: Vec<f64> = costs.iter().map(|c| c.values()[i]).collect();
                        column.sort_by(f64::total_cmp);
                        column.iter().sum::<f64>() / costs.len() as f64
                    })
                    .collect();
                CostVector::from_parts(first.names().to_vec(), values)
            }
            Aggregator::Max => costs.iter().max_by(|a, b| a.lex_cmp(b)).cloned().expect("non-empty"),
            Aggregator::NegCountWithinBudget(budget) => {
                if !budget.same_layout(first) {
                    return shape_err(format!("budget layout {:?} does not match costs {:?}", budget.names(), first.names()));
                }
                let within = costs.iter().filter(|c| c.dominated_by(budget)).count();
                CostVector::scalar("neg_count_within_budget", -(within as f64))
            }
        })
    }
}

impl fmt::Display for Aggregator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Aggregator::NegCountWithinBudget(b) => write!(f, "budget{b}"),
            other => f.write_str(other.name()),
        }
    }
}

impl Serialize for Aggregator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Aggregator choice before a cost model fixes the budget layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregatorKind {
    Average,
    Max,
    Budget,
}

impl AggregatorKind {
    pub const ALL: [AggregatorKind; 3] = [AggregatorKind::Average, AggregatorKind::Max, AggregatorKind::Budget];

    pub fn resolve(self, model: CostModelKind, budget: f64) -> Aggregator {
        match self {
            AggregatorKind::Average => Aggregator::Average,
            AggregatorKind::Max => Aggregator::Max,
            AggregatorKind::Budget => Aggregator::NegCountWithinBudget(model.budget(budget)),
        }
    }
}

impl std::str::FromStr for AggregatorKind {
    type Err = NflError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "average" => Ok(AggregatorKind::Average),
            "max" => Ok(AggregatorKind::Max),
            "budget" => Ok(AggregatorKind::Budget),
            _ => Err(NflError::Validation(format!("unknown aggregator {s:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(v: &[f64]) -> Vec<CostVector> {
        v.iter().map(|&x| CostVector::scalar("transpositions", x)).collect()
    }

    #[test]
    fn s1_minima_examples() {
        let minima = t(&[0.0, 1.0, 1.0, 2.0, 2.0, 2.0, 3.0, 3.0, 4.0]);
        assert_eq!(Aggregator::Average.apply(&minima).unwrap().primary(), 2.0);
        assert_eq!(Aggregator::Max.apply(&minima).unwrap().primary(), 4.0);
        let budget = Aggregator::NegCountWithinBudget(CostVector::scalar("transpositions", 1.0));
        assert_eq!(budget.apply(&minima).unwrap().primary(), -3.0);
        assert!(Aggregator::Average.apply(&[]).is_err());
        let wrong = Aggregator::NegCountWithinBudget(CostVector::scalar("gates", 1.0));
        assert!(wrong.apply(&minima).is_err());
    }

    proptest! {
        #[test]
        fn aggregators_ignore_order(
            values in prop::collection::vec((0u32..1000, 0u32..5), 1..40),
            seed in any::<u64>(),
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let costs: Vec<CostVector> = values
                .iter()
                .map(|&(g, a)| CostVector::new(vec![("gates", g as f64 * 0.37), ("ancillas", a as f64)]))
                .collect();
            let mut shuffled = costs.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let budget = CostVector::new(vec![("gates", 200.0), ("ancillas", 2.0)]);
            for agg in [Aggregator::Average, Aggregator::Max, Aggregator::NegCountWithinBudget(budget)] {
                prop_assert_eq!(agg.apply(&costs).unwrap(), agg.apply(&shuffled).unwrap());
            }
        }
    }
}
