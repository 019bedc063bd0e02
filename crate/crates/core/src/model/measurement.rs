//! The two measurement pipelines of a generative model.
//!
//! Measuring the uniform and resource registers first and then applying the
//! classical permutation gives the same outcome statistics as permuting the
//! deferred input vector and measuring the top `ny` bits at the end. Both
//! routes are computed here independently so they can be checked against
//! each other.

use num_rational::BigRational;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{shape_err, NflError, Result};
use crate::model::permutation::Permutation;
use crate::model::shape::RegisterShape;
use crate::model::state::{InputState, Mass, Masses, OutcomeDistribution, ResourceState};

/// Per-entry tolerance used when comparing float distributions.
pub const FLOAT_COMPARE_TOLERANCE: f64 = 1e-12;

/// Lays out the deferred input vector: `2^nplus` copies of each
/// `|psi_i|^2 / 2^nplus`, block by block, then zero padding up to `N`.
pub fn build_input_state(shape: &RegisterShape, psi: &ResourceState) -> Result<InputState> {
    psi.check_shape(shape)?;
    fn layout<T: Mass>(shape: &RegisterShape, psi: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(shape.size());
        for v in psi {
            let share = v.halve_times(shape.nplus);
            out.extend(std::iter::repeat_n(share, shape.copies()));
        }
        out.resize(shape.size(), T::zero());
        out
    }
    let masses = match psi.masses() {
        Masses::Exact(v) => Masses::Exact(layout(shape, v)),
        Masses::Float(v) => Masses::Float(layout(shape, v)),
    };
    Ok(InputState { shape: *shape, masses })
}

fn check_perm(input: &InputState, p: &Permutation) -> Result<()> {
    if p.len() != input.shape.size() {
        return shape_err(format!("permutation of size {} applied to input of size {}", p.len(), input.shape.size()));
    }
    Ok(())
}

/// Permute-then-measure: forms the permuted vector `P ψ̃` and sums each
/// bin. `probabilities[y] = Σ_{j ∈ bin(y)} ψ̃[p⁻¹(j)]`.
pub fn output_distribution(input: &InputState, p: &Permutation) -> Result<OutcomeDistribution> {
    check_perm(input, p)?;
    fn run<T: Mass>(shape: &RegisterShape, q: &[T], p: &Permutation) -> Vec<T> {
        let mut permuted = vec![T::zero(); q.len()];
        for (k, v) in q.iter().enumerate() {
            permuted[p.apply(k)] = v.clone();
        }
        (0..shape.num_bins())
            .map(|y| {
                let mut acc = T::zero();
                for v in &permuted[shape.bin_range(y)] {
                    acc.accumulate(v);
                }
                acc
            })
            .collect()
    }
    let masses = match &input.masses {
        Masses::Exact(q) => Masses::Exact(run(&input.shape, q, p)),
        Masses::Float(q) => Masses::Float(run(&input.shape, q, p)),
    };
    Ok(OutcomeDistribution { masses })
}

/// Measure-then-permute: each basis outcome `j` of the measured registers
/// carries mass `ψ̃[j]` to the outcome read off the top bits of `p(j)`.
pub fn measure_then_permute_distribution(input: &InputState, p: &Permutation) -> Result<OutcomeDistribution> {
    check_perm(input, p)?;
    fn run<T: Mass>(shape: &RegisterShape, q: &[T], p: &Permutation) -> Vec<T> {
        let mut out = vec![T::zero(); shape.num_bins()];
        for (j, v) in q.iter().enumerate() {
            out[shape.bin_of(p.apply(j))].accumulate(v);
        }
        out
    }
    let masses = match &input.masses {
        Masses::Exact(q) => Masses::Exact(run(&input.shape, q, p)),
        Masses::Float(q) => Masses::Float(run(&input.shape, q, p)),
    };
    Ok(OutcomeDistribution { masses })
}

/// True iff both pipelines give the same distribution (exactly on the
/// rational backend, within `1e-12` per entry on floats).
pub fn deferred_equivalence_check(input: &InputState, p: &Permutation) -> Result<bool> {
    let deferred = output_distribution(input, p)?;
    let measured = measure_then_permute_distribution(input, p)?;
    Ok(deferred.approx_eq(&measured, FLOAT_COMPARE_TOLERANCE))
}

/// Draws measured outcomes by sampling a basis index `j` of the input
/// registers and reporting the top `ny` bits of `p(j)`.
#[derive(Debug, Clone)]
pub struct OutcomeSampler {
    shape: RegisterShape,
    index: WeightedIndex<f64>,
    perm: Permutation,
}

impl OutcomeSampler {
    pub fn new(input: &InputState, p: &Permutation) -> Result<Self> {
        check_perm(input, p)?;
        input.masses.check_normalized("input state")?;
        let weights = input.masses.to_f64();
        let index = WeightedIndex::new(&weights).map_err(|e| NflError::Validation(format!("cannot sample input state: {e}")))?;
        Ok(OutcomeSampler { shape: input.shape, index, perm: p.clone() })
    }

    /// The outcome as an integer whose binary expansion is the `ny`-bit string.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let j = self.index.sample(rng);
        self.shape.bin_of(self.perm.apply(j))
    }
}

/// One measured outcome; see [`OutcomeSampler`] for repeated draws.
pub fn sample_outcome<R: Rng + ?Sized>(input: &InputState, p: &Permutation, rng: &mut R) -> Result<usize> {
    Ok(OutcomeSampler::new(input, p)?.sample(rng))
}

/// Renders an outcome as its `ny`-character bitstring, most significant first.
pub fn outcome_bits(outcome: usize, ny: u32) -> String {
    (0..ny).rev().map(|b| if outcome >> b & 1 == 1 { '1' } else { '0' }).collect()
}

/// Exact masses of an exact distribution, for callers that need arithmetic.
pub fn exact_entries(dist: &OutcomeDistribution) -> Option<&[BigRational]> {
    match &dist.masses {
        Masses::Exact(v) => Some(v),
        Masses::Float(_) => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s1() -> RegisterShape {
        RegisterShape::new(1, 1, 1, 1).unwrap()
    }

    fn s1_input() -> InputState {
        build_input_state(&s1(), &ResourceState::from_ratios(&[(16, 25), (9, 25)]).unwrap()).unwrap()
    }

    fn t(i: usize, j: usize) -> Permutation {
        Permutation::transposition(i, j, 8).unwrap()
    }

    fn exact(v: &[(i64, i64)]) -> Masses {
        Masses::Exact(v.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }

    #[test]
    fn input_layout_examples() {
        assert_eq!(s1_input().masses, exact(&[(8, 25), (8, 25), (9, 50), (9, 50), (0, 1), (0, 1), (0, 1), (0, 1)]));

        let shape = RegisterShape::new(0, 0, 2, 1).unwrap();
        let psi = ResourceState::from_ratios(&[(1, 1), (0, 1), (0, 1), (0, 1)]).unwrap();
        assert_eq!(build_input_state(&shape, &psi).unwrap().masses, exact(&[(1, 1), (0, 1), (0, 1), (0, 1)]));

        let shape = RegisterShape::new(2, 0, 0, 1).unwrap();
        let psi = ResourceState::scalar(crate::model::state::Backend::Rational);
        assert_eq!(build_input_state(&shape, &psi).unwrap().masses, exact(&[(1, 1), (0, 1), (0, 1), (0, 1)]));
    }

    #[test]
    fn input_length_mismatch() {
        let psi = ResourceState::from_ratios(&[(1, 4); 4]).unwrap();
        assert!(matches!(build_input_state(&s1(), &psi), Err(NflError::Shape(_))));
    }

    #[test]
    fn output_distribution_examples() {
        let input = s1_input();
        let id = Permutation::identity(8);
        assert_eq!(output_distribution(&input, &id).unwrap().masses, exact(&[(1, 1), (0, 1)]));
        assert_eq!(output_distribution(&input, &t(0, 4)).unwrap().masses, exact(&[(17, 25), (8, 25)]));
        let p = t(0, 4).compose(&t(2, 5)).unwrap();
        assert_eq!(output_distribution(&input, &p).unwrap().masses, exact(&[(1, 2), (1, 2)]));
        assert!(output_distribution(&input, &Permutation::identity(4)).is_err());
    }

    #[test]
    fn deferred_check_examples() {
        let input = s1_input();
        assert!(deferred_equivalence_check(&input, &Permutation::identity(8)).unwrap());
        assert!(deferred_equivalence_check(&input, &t(0, 4)).unwrap());
        assert_eq!(measure_then_permute_distribution(&input, &t(0, 4)).unwrap().masses, exact(&[(17, 25), (8, 25)]));
    }

    #[test]
    fn sampler_examples() {
        let shape = RegisterShape::new(0, 0, 3, 2).unwrap();
        let mut point = vec![(0, 1); 8];
        point[0] = (1, 1);
        let input = build_input_state(&shape, &ResourceState::from_ratios(&point).unwrap()).unwrap();
        let sampler = OutcomeSampler::new(&input, &Permutation::identity(8)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!((0..200).all(|_| sampler.sample(&mut rng) == 0));
        assert_eq!(outcome_bits(0, 2), "00");

        // Under T(0,4) outcome 1 happens exactly when index 0 is drawn.
        let input = s1_input();
        let sampler = OutcomeSampler::new(&input, &t(0, 4)).unwrap();
        let draws = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50).map(|_| sampler.sample(&mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draws(11), draws(11));
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 100_000;
        let ones = (0..n).filter(|_| sampler.sample(&mut rng) == 1).count();
        let freq = ones as f64 / n as f64;
        assert!((freq - 0.32).abs() < 4.0 * (0.32f64 * 0.68 / n as f64).sqrt(), "freq {freq}");
    }

    #[test]
    fn sampler_rejects_unnormalized() {
        let bad = InputState { shape: s1(), masses: Masses::Float(vec![0.5; 8]) };
        assert!(matches!(OutcomeSampler::new(&bad, &Permutation::identity(8)), Err(NflError::Validation(_))));
    }
}
