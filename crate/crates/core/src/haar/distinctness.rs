//! Distinctness and strong distinctness of resource states.
//!
//! Strong distinctness is decided on multiplicity vectors: a block of `B`
//! input positions is summarized by how many copies of each value class it
//! holds, and a partition of the input values into `2^ny` blocks is a
//! multiset of such vectors. A state is strongly distinct when no two
//! different partitions produce the same multiset of block sums.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::combinatorics::bounded_compositions;
use crate::error::{NflError, Result};
use crate::model::shape::RegisterShape;
use crate::model::state::{Masses, ResourceState};

/// Default absolute tie tolerance on squared magnitudes for float states.
pub const DEFAULT_TIE_TOLERANCE: f64 = 1e-12;
/// Default cap on enumerated multiplicity vectors and on partitions.
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// True iff every pair of squared magnitudes differs by more than
/// `tolerance`. On exact states the comparison is exact.
pub fn is_distinct(state: &ResourceState, tolerance: f64) -> bool {
    match state.masses() {
        Masses::Exact(v) => {
            let tol = BigRational::from_float(tolerance.max(0.0)).unwrap_or_default();
            let mut sorted: Vec<&BigRational> = v.iter().collect();
            sorted.sort();
            sorted.windows(2).all(|w| (w[1] - w[0]).abs() > tol)
        }
        Masses::Float(v) => {
            let mut sorted = v.clone();
            sorted.sort_by(f64::total_cmp);
            sorted.windows(2).all(|w| (w[1] - w[0]).abs() > tolerance)
        }
    }
}

/// Per-copy values of the input vector with their multiplicity caps.
#[derive(Debug, Clone)]
pub struct BlockWeightTable {
    /// One entry per value class; the last one is the zero class.
    pub values: Masses,
    pub caps: Vec<usize>,
    pub block_size: usize,
}

impl BlockWeightTable {
    pub fn new(state: &ResourceState, shape: &RegisterShape) -> Result<Self> {
        state.check_shape(shape)?;
        let copies = shape.copies() as f64;
        let values = match state.masses() {
            Masses::Exact(v) => {
                let div = BigRational::from_integer(shape.copies().into());
                let mut vals: Vec<BigRational> = v.iter().map(|x| x / &div).collect();
                vals.push(BigRational::default());
                Masses::Exact(vals)
            }
            Masses::Float(v) => {
                let mut vals: Vec<f64> = v.iter().map(|x| x / copies).collect();
                vals.push(0.0);
                Masses::Float(vals)
            }
        };
        Ok(BlockWeightTable { values, caps: shape.value_class_sizes(), block_size: shape.bin_size() })
    }

    /// Every multiplicity vector summing to `block_size` within the caps, in
    /// lexicographic order.
    pub fn feasible_vectors(&self, cap: usize) -> Result<Vec<Vec<usize>>> {
        bounded_compositions(&self.caps, self.block_size, cap)
    }

    fn weights(&self, vectors: &[Vec<usize>]) -> Weights {
        match &self.values {
            Masses::Exact(vals) => Weights::Exact(
                vectors.iter().map(|m| m.iter().zip(vals).map(|(&c, v)| v * BigRational::from_integer(c.into())).sum()).collect(),
            ),
            Masses::Float(vals) => {
                Weights::Float(vectors.iter().map(|m| m.iter().zip(vals).map(|(&c, v)| c as f64 * v).sum()).collect())
            }
        }
    }
}

enum Weights {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Outcome of the sufficient test; it never certifies failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FastVerdict {
    Yes,
    Inconclusive,
}

/// Tolerances and enumeration caps for the strong-distinctness checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StrongDistinctness {
    pub tolerance: f64,
    pub max_vectors: usize,
    pub max_partitions: usize,
}

impl Default for StrongDistinctness {
    fn default() -> Self {
        StrongDistinctness {
            tolerance: DEFAULT_TIE_TOLERANCE,
            max_vectors: DEFAULT_ENUMERATION_CAP,
            max_partitions: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl StrongDistinctness {
    /// `Yes` when the block weight is injective on feasible multiplicity
    /// vectors: equal sum-multisets then force equal vector multisets.
    pub fn fast(&self, state: &ResourceState, shape: &RegisterShape) -> Result<FastVerdict> {
        let table = BlockWeightTable::new(state, shape)?;
        let vectors = table.feasible_vectors(self.max_vectors)?;
        let injective = match table.weights(&vectors) {
            Weights::Exact(mut w) => {
                w.sort();
                w.windows(2).all(|p| p[0] != p[1])
            }
            Weights::Float(mut w) => {
                w.sort_by(f64::total_cmp);
                w.windows(2).all(|p| p[1] - p[0] > self.tolerance)
            }
        };
        Ok(if injective { FastVerdict::Yes } else { FastVerdict::Inconclusive })
    }

    /// Definitional check: enumerate every partition (multiset of feasible
    /// multiplicity vectors covering each value class exactly) and look for
    /// two with the same multiset of block sums.
    pub fn oracle(&self, state: &ResourceState, shape: &RegisterShape) -> Result<bool> {
        let table = BlockWeightTable::new(state, shape)?;
        let vectors = table.feasible_vectors(self.max_vectors)?;
        let lookup: HashMap<&[usize], usize> = vectors.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
        let blocks = shape.num_bins();
        let mut partitions: Vec<Vec<usize>> = Vec::new();
        let mut chosen = Vec::with_capacity(blocks);
        let mut remaining = table.caps.clone();
        collect_partitions(&vectors, &lookup, blocks, 0, &mut remaining, &mut chosen, &mut partitions, self.max_partitions)?;

        let weights = table.weights(&vectors);
        Ok(match weights {
            Weights::Exact(w) => {
                let mut seen = std::collections::HashSet::with_capacity(partitions.len());
                partitions.iter().all(|part| {
                    let mut sums: Vec<&BigRational> = part.iter().map(|&i| &w[i]).collect();
                    sums.sort();
                    seen.insert(sums)
                })
            }
            Weights::Float(w) => {
                let mut keyed: Vec<Vec<f64>> = partitions
                    .iter()
                    .map(|part| {
                        let mut sums: Vec<f64> = part.iter().map(|&i| w[i]).collect();
                        sums.sort_by(f64::total_cmp);
                        sums
                    })
                    .collect();
                keyed.sort_by(|a, b| lex_cmp(a, b));
                !has_close_pair(&keyed, self.tolerance)
            }
        })
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

/// Sorted input; any pair within `tol` entry-wise has first entries within
/// `tol`, so a forward window on the first entry finds every such pair.
fn has_close_pair(sorted: &[Vec<f64>], tol: f64) -> bool {
    for i in 0..sorted.len() {
        for j in i + 1..sorted.len() {
            if sorted[j][0] - sorted[i][0] > tol {
                break;
            }
            if sorted[i].iter().zip(&sorted[j]).all(|(a, b)| (a - b).abs() <= tol) {
                return true;
            }
        }
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn collect_partitions(
    vectors: &[Vec<usize>],
    lookup: &HashMap<&[usize], usize>,
    blocks: usize,
    min_index: usize,
    remaining: &mut Vec<usize>,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
) -> Result<()> {
    if chosen.len() + 1 == blocks {
        // the last block is whatever is left
        if let Some(&idx) = lookup.get(remaining.as_slice()) {
            if idx >= min_index {
                if out.len() >= cap {
                    return Err(NflError::ResourceLimit(format!("more than {cap} partitions")));
                }
                let mut part = chosen.clone();
                part.push(idx);
                out.push(part);
            }
        }
        return Ok(());
    }
    for idx in min_index..vectors.len() {
        let v = &vectors[idx];
        if v.iter().zip(remaining.iter()).any(|(a, r)| a > r) {
            continue;
        }
        remaining.iter_mut().zip(v).for_each(|(r, a)| *r -= a);
        chosen.push(idx);
        let res = collect_partitions(vectors, lookup, blocks, idx, remaining, chosen, out, cap);
        chosen.pop();
        remaining.iter_mut().zip(v).for_each(|(r, a)| *r += a);
        res?;
    }
    Ok(())
}

pub fn is_strongly_distinct_fast(state: &ResourceState, shape: &RegisterShape) -> Result<FastVerdict> {
    StrongDistinctness::default().fast(state, shape)
}

pub fn strong_distinct_oracle(state: &ResourceState, shape: &RegisterShape) -> Result<bool> {
    StrongDistinctness::default().oracle(state, shape)
}

/// Distinct but not strongly distinct: squared magnitudes
/// `(1, 2, 3, 4, 5, 6, 7, 12) / 40` on shape `(0, 0, 3, 1)`, where the
/// blocks `{1, 3, 4, 12}` and `{1, 2, 5, 12}` both weigh `20/40`.
pub fn make_collision_state() -> (ResourceState, RegisterShape) {
    let ratios: Vec<(i64, i64)> = [1, 2, 3, 4, 5, 6, 7, 12].iter().map(|&k| (k, 40)).collect();
    let state = ResourceState::from_ratios(&ratios).expect("fixture sums to one");
    let shape = RegisterShape::new(0, 0, 3, 1).expect("fixture shape is valid");
    (state, shape)
}

/// Approximate smallest gap between feasible block weights, useful for
/// reporting how far a float state is from a tie.
pub fn min_weight_gap(state: &ResourceState, shape: &RegisterShape, cap: usize) -> Result<Option<f64>> {
    let table = BlockWeightTable::new(state, shape)?;
    let vectors = table.feasible_vectors(cap)?;
    let mut w: Vec<f64> = match table.weights(&vectors) {
        Weights::Exact(w) => w.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect(),
        Weights::Float(w) => w,
    };
    w.sort_by(f64::total_cmp);
    Ok(w.windows(2).map(|p| p[1] - p[0]).min_by(f64::total_cmp))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1() -> RegisterShape {
        RegisterShape::new(1, 1, 1, 1).unwrap()
    }

    #[test]
    fn distinct_examples() {
        assert!(!is_distinct(&ResourceState::from_ratios(&[(1, 2), (1, 2)]).unwrap(), 0.0));
        assert!(is_distinct(&ResourceState::from_ratios(&[(16, 25), (9, 25)]).unwrap(), 0.0));
        assert!(is_distinct(&ResourceState::from_f64(vec![0.5 + 1e-9, 0.5 - 1e-9]).unwrap(), 1e-12));
        assert!(!is_distinct(&ResourceState::from_f64(vec![0.5 + 1e-13, 0.5 - 1e-13]).unwrap(), 1e-12));
    }

    #[test]
    fn s1_feasible_vectors() {
        let state = ResourceState::from_ratios(&[(16, 25), (9, 25)]).unwrap();
        let table = BlockWeightTable::new(&state, &s1()).unwrap();
        let v = table.feasible_vectors(100).unwrap();
        assert_eq!(v.len(), 9);
        assert!(v.iter().all(|m| m.iter().sum::<usize>() == 4 && m[0] <= 2 && m[1] <= 2));
        assert_eq!(is_strongly_distinct_fast(&state, &s1()).unwrap(), FastVerdict::Yes);
        assert!(strong_distinct_oracle(&state, &s1()).unwrap());
    }

    #[test]
    fn collision_fixture() {
        let (state, shape) = make_collision_state();
        assert!(is_distinct(&state, 0.0));
        assert_eq!(is_strongly_distinct_fast(&state, &shape).unwrap(), FastVerdict::Inconclusive);
        assert!(!strong_distinct_oracle(&state, &shape).unwrap());
        let total: f64 = state.masses().to_f64().iter().sum();
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_state_fails_oracle() {
        let state = ResourceState::uniform(1).unwrap();
        assert!(!strong_distinct_oracle(&state, &s1()).unwrap());
        assert_eq!(is_strongly_distinct_fast(&state, &s1()).unwrap(), FastVerdict::Inconclusive);
    }

    #[test]
    fn singleton_bins_are_always_strongly_distinct() {
        let shape = RegisterShape::new(0, 0, 2, 2).unwrap();
        let state = ResourceState::from_ratios(&[(1, 10), (2, 10), (3, 10), (4, 10)]).unwrap();
        assert_eq!(is_strongly_distinct_fast(&state, &shape).unwrap(), FastVerdict::Yes);
        assert!(strong_distinct_oracle(&state, &shape).unwrap());
    }

    #[test]
    fn enumeration_cap() {
        let state = ResourceState::from_ratios(&[(16, 25), (9, 25)]).unwrap();
        let tight = StrongDistinctness { max_vectors: 3, ..Default::default() };
        assert!(matches!(tight.fast(&state, &s1()), Err(NflError::ResourceLimit(_))));
        let tight = StrongDistinctness { max_partitions: 2, ..Default::default() };
        assert!(matches!(tight.oracle(&state, &s1()), Err(NflError::ResourceLimit(_))));
    }
}
