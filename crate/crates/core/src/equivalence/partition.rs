//! Grouping permutations by the distribution they prepare.

use std::collections::HashMap;
use std::hash::Hash;

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::equivalence::key::{multiplicity_key, MultiplicityMatrix};
use crate::error::{NflError, Result};
use crate::model::permutation::factorial;
use crate::model::{
    build_input_state, output_distribution, Masses, OutcomeDistribution, Permutation, RegisterShape, ResourceState,
};

/// Largest `N` for exhaustive scans (8! = 40,320 permutations).
pub const MAX_EXHAUSTIVE_SIZE: usize = 8;
/// Default per-entry merge tolerance for float distributions.
pub const DEFAULT_GROUPING_TOLERANCE: f64 = 1e-9;
/// Ranks per worker chunk in exhaustive scans.
const CHUNK: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ScanMode {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub struct DistributionClass {
    pub distribution: OutcomeDistribution,
    /// Lexicographically first member seen (smallest rank when exhaustive).
    pub representative: Permutation,
    pub key: MultiplicityMatrix,
    pub count: u64,
}

/// Permutations grouped by prepared distribution. Classes are numbered in
/// order of their first member, so two reports over the same member list
/// describe the same partition iff their `assignment` vectors agree.
#[derive(Debug, Clone)]
pub struct ClassPartitionReport {
    pub mode: ScanMode,
    pub shape: RegisterShape,
    pub classes: Vec<DistributionClass>,
    /// Scanned permutations; in exhaustive mode `members[r]` has rank `r`.
    pub members: Vec<Permutation>,
    /// Class index of each member.
    pub assignment: Vec<u32>,
}

impl ClassPartitionReport {
    /// Number of distinct distributions found.
    pub fn m(&self) -> usize {
        self.classes.len()
    }

    pub fn is_exhaustive(&self) -> bool {
        matches!(self.mode, ScanMode::Exhaustive)
    }

    /// Member indices of each class.
    pub fn class_members(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.classes.len()];
        for (i, &c) in self.assignment.iter().enumerate() {
            out[c as usize].push(i);
        }
        out
    }

    /// Same member list and same grouping.
    pub fn same_partition(&self, other: &ClassPartitionReport) -> bool {
        self.members == other.members && self.assignment == other.assignment
    }

    /// Whether grouping the members by multiplicity key gives exactly this
    /// partition.
    pub fn coincides_with_multiplicity_classes(&self) -> Result<bool> {
        let keys = self.members.par_iter().map(|p| multiplicity_key(p, &self.shape)).collect::<Result<Vec<_>>>()?;
        let (by_key, _) = group_exact(&keys);
        Ok(by_key == self.assignment)
    }
}

/// Labels equal keys by order of first appearance.
pub(crate) fn group_exact<K: Hash + Eq + Clone>(keys: &[K]) -> (Vec<u32>, Vec<usize>) {
    let mut index: HashMap<&K, u32> = HashMap::new();
    let mut firsts = Vec::new();
    let assignment = keys
        .iter()
        .enumerate()
        .map(|(i, k)| {
            *index.entry(k).or_insert_with(|| {
                firsts.push(i);
                (firsts.len() - 1) as u32
            })
        })
        .collect();
    (assignment, firsts)
}

/// Float grouping: identical bit patterns first, then distinct vectors
/// within `tolerance` per entry are merged (transitively).
fn group_float(dists: &[Vec<f64>], tolerance: f64) -> (Vec<u32>, Vec<usize>) {
    let bits: Vec<Vec<u64>> = dists.iter().map(|d| d.iter().map(|x| x.to_bits()).collect()).collect();
    let (coarse, firsts) = group_exact(&bits);
    let reps: Vec<&Vec<f64>> = firsts.iter().map(|&i| &dists[i]).collect();
    let mut order: Vec<usize> = (0..reps.len()).collect();
    order.sort_by(|&a, &b| {
        reps[a].iter().zip(reps[b]).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut parent: Vec<usize> = (0..reps.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (oi, &a) in order.iter().enumerate() {
        for &b in &order[oi + 1..] {
            if reps[b][0] - reps[a][0] > tolerance {
                break;
            }
            if reps[a].iter().zip(reps[b]).all(|(x, y)| (x - y).abs() <= tolerance) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                // keep the earliest-appearing coarse class as root
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                parent[hi] = lo;
            }
        }
    }
    let roots: Vec<usize> = (0..reps.len()).map(|c| find(&mut parent, c)).collect();
    let merged: Vec<usize> = coarse.iter().map(|&c| roots[c as usize]).collect();
    group_exact(&merged)
}

fn exhaustive_members(n: usize) -> Result<Vec<Permutation>> {
    if n > MAX_EXHAUSTIVE_SIZE {
        return Err(NflError::ResourceLimit(format!("exhaustive scans need N <= {MAX_EXHAUSTIVE_SIZE}, got N = {n}")));
    }
    let total = factorial(n);
    let starts: Vec<u64> = (0..total).step_by(CHUNK as usize).collect();
    let chunks = starts
        .into_par_iter()
        .map(|start| {
            let end = (start + CHUNK).min(total);
            let mut p = Permutation::from_rank(start, n)?;
            let mut out = Vec::with_capacity((end - start) as usize);
            for _ in start..end {
                out.push(p.clone());
                p.next_lexicographic();
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

fn sampled_members(n: usize, samples: usize, seed: u64) -> Vec<Permutation> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..samples).map(|_| Permutation::random(n, &mut rng)).collect()
}

/// The members a scan in `mode` visits for this shape.
pub fn scan_members(shape: &RegisterShape, mode: ScanMode) -> Result<Vec<Permutation>> {
    match mode {
        ScanMode::Exhaustive => exhaustive_members(shape.size()),
        ScanMode::Sampled { samples, seed } => Ok(sampled_members(shape.size(), samples, seed)),
    }
}

/// Groups the scanned permutations by the distribution they prepare from
/// `state`. Exact states are grouped by exact equality; float states merge
/// distributions within `tolerance` per entry.
pub fn distribution_class_partition(
    state: &ResourceState,
    shape: &RegisterShape,
    mode: ScanMode,
    tolerance: f64,
) -> Result<ClassPartitionReport> {
    let input = build_input_state(shape, state)?;
    let members = scan_members(shape, mode)?;
    let dists = members.par_iter().map(|p| output_distribution(&input, p)).collect::<Result<Vec<_>>>()?;

    let (assignment, firsts) = match input.masses() {
        Masses::Exact(_) => {
            let keys: Vec<&[BigRational]> = dists
                .iter()
                .map(|d| match d.masses() {
                    Masses::Exact(v) => v.as_slice(),
                    Masses::Float(_) => unreachable!("exact input gives exact outputs"),
                })
                .collect();
            group_exact(&keys)
        }
        Masses::Float(_) => {
            let keys: Vec<Vec<f64>> = dists.iter().map(|d| d.masses().to_f64()).collect();
            group_float(&keys, tolerance)
        }
    };

    let mut counts = vec![0u64; firsts.len()];
    for &c in &assignment {
        counts[c as usize] += 1;
    }
    let classes = firsts
        .iter()
        .zip(counts)
        .map(|(&i, count)| {
            Ok(DistributionClass {
                distribution: dists[i].clone(),
                representative: members[i].clone(),
                key: multiplicity_key(&members[i], shape)?,
                count,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassPartitionReport { mode, shape: *shape, classes, members, assignment })
}

/// Groups the scanned permutations by multiplicity key alone; the result
/// does not depend on any state.
pub fn multiplicative_class_partition(shape: &RegisterShape, mode: ScanMode) -> Result<(Vec<MultiplicityMatrix>, Vec<u32>)> {
    let members = scan_members(shape, mode)?;
    let keys = members.par_iter().map(|p| multiplicity_key(p, shape)).collect::<Result<Vec<_>>>()?;
    let (assignment, firsts) = group_exact(&keys);
    Ok((firsts.into_iter().map(|i| keys[i].clone()).collect(), assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::contingency::count_classes;
    use crate::haar::make_collision_state;

    fn s1() -> RegisterShape {
        RegisterShape::new(1, 1, 1, 1).unwrap()
    }

    #[test]
    fn exhaustive_s1_fixture() {
        let state = ResourceState::from_ratios(&[(16, 25), (9, 25)]).unwrap();
        let report = distribution_class_partition(&state, &s1(), ScanMode::Exhaustive, 0.0).unwrap();
        assert_eq!(report.m(), 9);
        assert_eq!(report.m(), count_classes(&s1()).unwrap());
        assert_eq!(report.classes.iter().map(|c| c.count).sum::<u64>(), 40_320);
        assert!(report.classes[0].representative.is_identity());
        assert!(report.coincides_with_multiplicity_classes().unwrap());
        for (r, p) in report.members.iter().enumerate().step_by(997) {
            assert_eq!(p.rank().unwrap(), r as u64);
        }
    }

    #[test]
    fn collapse_examples() {
        let uniform = ResourceState::uniform(1).unwrap();
        let report = distribution_class_partition(&uniform, &s1(), ScanMode::Exhaustive, 0.0).unwrap();
        assert_eq!(report.m(), 5);
        let (state, shape) = make_collision_state();
        let report = distribution_class_partition(&state, &shape, ScanMode::Exhaustive, 0.0).unwrap();
        assert_eq!(report.m(), 21);
        assert!(!report.coincides_with_multiplicity_classes().unwrap());
    }

    #[test]
    fn float_backend_matches_exact_grouping() {
        let exact = ResourceState::from_ratios(&[(16, 25), (9, 25)]).unwrap();
        let a = distribution_class_partition(&exact, &s1(), ScanMode::Exhaustive, 0.0).unwrap();
        let b = distribution_class_partition(&exact.to_float(), &s1(), ScanMode::Exhaustive, 1e-9).unwrap();
        assert!(a.same_partition(&b));
    }

    #[test]
    fn sampled_mode_is_deterministic() {
        let state = ResourceState::from_ratios(&[(16, 25), (9, 25)]).unwrap();
        let mode = ScanMode::Sampled { samples: 500, seed: 4 };
        let a = distribution_class_partition(&state, &s1(), mode, 0.0).unwrap();
        let b = distribution_class_partition(&state, &s1(), mode, 0.0).unwrap();
        assert!(a.same_partition(&b));
        assert!(a.m() <= 9);
        assert_eq!(a.members.len(), 500);
    }

    #[test]
    fn exhaustive_guard() {
        let shape = RegisterShape::new(2, 1, 1, 1).unwrap();
        let state = ResourceState::uniform(1).unwrap();
        assert!(matches!(
            distribution_class_partition(&state, &shape, ScanMode::Exhaustive, 0.0),
            Err(NflError::ResourceLimit(_))
        ));
    }

    #[test]
    fn float_merge_is_transitive() {
        let d = vec![vec![0.0], vec![0.6e-9], vec![1.2e-9], vec![5.0]];
        let (a, f) = group_float(&d, 1e-9);
        assert_eq!(a, vec![0, 0, 0, 1]);
        assert_eq!(f, vec![0, 3]);
    }
}
