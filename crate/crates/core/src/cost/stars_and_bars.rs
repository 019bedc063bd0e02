//! Preparing stars-and-bars distributions (masses in multiples of `1/Ñ` on
//! `2^ñ` outcomes) and the gate-count scaling experiment.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::bounded_compositions;
use crate::cost::compiler::{compile_permutation, transposition_gate_bound};
use crate::error::{shape_err, NflError, Result};
use crate::model::{
    build_input_state, output_distribution, Masses, OutcomeDistribution, Permutation, RegisterShape, ResourceState,
};

/// Largest `ñ` accepted by the scaling experiment.
pub const MAX_SCALING_N_TILDE: u32 = 6;
/// Circuits up to this many register lines are checked by full simulation.
pub const TRUTH_TABLE_MAX_LINES: usize = 6;

fn check_shape(shape: &RegisterShape) -> Result<u32> {
    let t = shape.nplus;
    if shape.nq != 0 || shape.ny != t || shape.n0 < t {
        return shape_err(format!("stars-and-bars needs nq = 0, ny = nplus and n0 >= nplus, got {shape}"));
    }
    Ok(t)
}

/// Unit counts `t_y` (target mass `t_y / Ñ`) of a stars-and-bars target.
pub fn unit_counts(target: &OutcomeDistribution, n_tilde: u32) -> Result<Vec<usize>> {
    let units = 1usize << n_tilde;
    if target.len() != units {
        return shape_err(format!("target has {} outcomes, expected {units}", target.len()));
    }
    let counts: Vec<usize> = match target.masses() {
        Masses::Exact(v) => v
            .iter()
            .map(|m| {
                let scaled = m * BigRational::from_integer(BigInt::from(units));
                if !scaled.is_integer() || scaled < BigRational::zero() {
                    return Err(NflError::Validation(format!("mass {m} is not a multiple of 1/{units}")));
                }
                scaled.to_integer().to_usize().ok_or_else(|| NflError::Validation("mass out of range".into()))
            })
            .collect::<Result<_>>()?,
        Masses::Float(v) => v
            .iter()
            .map(|&m| {
                let scaled = m * units as f64;
                if scaled < -1e-9 || (scaled - scaled.round()).abs() > 1e-9 {
                    return Err(NflError::Validation(format!("mass {m} is not a multiple of 1/{units}")));
                }
                Ok(scaled.round() as usize)
            })
            .collect::<Result<_>>()?,
    };
    if counts.iter().sum::<usize>() != units {
        return Err(NflError::Validation(format!("target units sum to {}, expected {units}", counts.iter().sum::<usize>())));
    }
    Ok(counts)
}

/// Permutation built from at most `Ñ` transpositions that moves the `Ñ`
/// unit masses of the input into bins holding `counts[y]` units each. The
/// first `counts[0]` units stay put; unit `k` beyond them is swapped into the
/// next free slot of its bin.
pub fn prepare_from_counts(counts: &[usize], shape: &RegisterShape) -> Result<Permutation> {
    let t = check_shape(shape)?;
    let units = 1usize << t;
    if counts.len() != units || counts.iter().sum::<usize>() != units {
        return Err(NflError::Validation(format!("counts {counts:?} do not distribute {units} units over {units} bins")));
    }
    let b = shape.bin_size();
    let mut image: Vec<usize> = (0..shape.size()).collect();
    let mut k = counts[0];
    for (y, &c) in counts.iter().enumerate().skip(1) {
        for j in 0..c {
            image.swap(k, y * b + j);
            k += 1;
        }
    }
    Permutation::new(image)
}

pub fn prepare_stars_and_bars(target: &OutcomeDistribution, shape: &RegisterShape) -> Result<Permutation> {
    let t = check_shape(shape)?;
    prepare_from_counts(&unit_counts(target, t)?, shape)
}

/// Every unit-count vector for `ñ`.
pub fn all_targets(n_tilde: u32) -> Result<Vec<Vec<usize>>> {
    let units = 1usize << n_tilde;
    bounded_compositions(&vec![units; units], units, 10_000_000)
}

/// Uniform draw from the stars-and-bars targets via bar positions.
pub fn random_target(n_tilde: u32, rng: &mut ChaCha20Rng) -> Vec<usize> {
    let units = 1usize << n_tilde;
    let mut bars = sample(rng, 2 * units - 1, units - 1).into_vec();
    bars.sort_unstable();
    let mut counts = Vec::with_capacity(units);
    let mut prev = 0;
    for (i, &bar) in bars.iter().enumerate() {
        // bar i sits after (bar - i) stars
        counts.push(bar - i - prev);
        prev = bar - i;
    }
    counts.push(units - prev);
    counts
}

/// Number of distinct distributions preparable at the stars-and-bars shape
/// `(n0 = ñ, nplus = ny = ñ, nq = 0)`, by placing the `Ñ` mass positions on
/// every `Ñ`-subset of indices and evaluating the prepared distribution.
pub fn brute_force_class_count(n_tilde: u32) -> Result<usize> {
    let shape = RegisterShape::stars_and_bars(n_tilde, n_tilde)?;
    let size = shape.size();
    let units = 1usize << n_tilde;
    if size > 64 {
        return Err(NflError::ResourceLimit(format!("brute-force placement at N = {size} is too large")));
    }
    let input = build_input_state(&shape, &ResourceState::scalar(crate::model::Backend::Rational))?;
    let mut seen = HashSet::new();
    let mut subset: Vec<usize> = (0..units).collect();
    loop {
        let mut image = subset.clone();
        let chosen: HashSet<usize> = subset.iter().copied().collect();
        image.extend((0..size).filter(|i| !chosen.contains(i)));
        let p = Permutation::new(image)?;
        let dist = output_distribution(&input, &p)?;
        if let Masses::Exact(v) = dist.masses() {
            seen.insert(v.clone());
        }
        if !next_combination(&mut subset, size) {
            return Ok(seen.len());
        }
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lower-bound formula `Ñ / log2(log2 Ñ)`; undefined at `ñ = 1`.
pub fn lower_bound_formula(n_tilde: u32) -> Option<f64> {
    let big = (1u64 << n_tilde) as f64;
    let ll = (n_tilde as f64).log2();
    (ll > 0.0).then(|| big / ll)
}

/// `Ñ log2 Ñ`.
pub fn n_log_n(n_tilde: u32) -> f64 {
    (1u64 << n_tilde) as f64 * n_tilde as f64
}

/// Constant `c` with `Ñ * gates_per_transposition(2ñ) <= c Ñ log2 Ñ` for
/// every `ñ` up to 31, from the compiler's worst-case gate count.
pub fn analytic_scaling_constant() -> f64 {
    (1..=31u32).map(|t| transposition_gate_bound(2 * t as usize) as f64 / t as f64).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingRow {
    pub n_tilde: u32,
    pub big_n: usize,
    pub samples: usize,
    pub mean_gates: f64,
    pub max_gates: usize,
    pub max_transpositions: usize,
    pub bound_upper: f64,
    pub bound_lower_formula: Option<f64>,
    /// Circuits checked by full truth-table simulation.
    pub verified: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingTable {
    pub rows: Vec<ScalingRow>,
    /// Smallest `c` with every compiled gate count `<= c Ñ log2 Ñ`.
    pub fitted_c: f64,
    pub analytic_c: f64,
    pub all_within_transposition_budget: bool,
    pub all_verified_correct: bool,
}

impl ScalingTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n_tilde,N_tilde,mean_gates,bound_upper,bound_lower_formula\n");
        for r in &self.rows {
            let lower = r.bound_lower_formula.map(|v| format!("{v}")).unwrap_or_default();
            let _ = writeln!(out, "{},{},{},{},{}", r.n_tilde, r.big_n, r.mean_gates, r.bound_upper, lower);
        }
        out
    }

    pub fn is_monotone(&self) -> bool {
        self.rows.windows(2).all(|w| w[0].mean_gates <= w[1].mean_gates)
    }
}

struct Compiled {
    gates: usize,
    transpositions: usize,
    verified: Option<bool>,
    exact: bool,
}

fn compile_target(counts: &[usize], n_tilde: u32) -> Result<Compiled> {
    let shape = RegisterShape::stars_and_bars(n_tilde, n_tilde)?;
    let p = prepare_from_counts(counts, &shape)?;
    let n = shape.n() as usize;
    let circuit = compile_permutation(&p, n)?;
    let input = build_input_state(&shape, &ResourceState::scalar(crate::model::Backend::Rational))?;
    let dist = output_distribution(&input, &p)?;
    let units = 1i64 << n_tilde;
    let want = OutcomeDistribution::from_ratios(&counts.iter().map(|&c| (c as i64, units)).collect::<Vec<_>>())?;
    Ok(Compiled {
        gates: circuit.len(),
        transpositions: p.len() - p.cycle_count(),
        verified: (n <= TRUTH_TABLE_MAX_LINES).then(|| circuit.realizes(&p)),
        exact: dist.approx_eq(&want, 0.0),
    })
}

/// For each `ñ`, draws `samples` uniform targets, prepares and compiles
/// them, and tabulates gate counts next to both bound formulas.
pub fn scaling_experiment(range: RangeInclusive<u32>, samples: usize, seed: u64) -> Result<ScalingTable> {
    if *range.start() == 0 || *range.end() > MAX_SCALING_N_TILDE || range.is_empty() {
        return shape_err(format!("scaling range must lie in 1..={MAX_SCALING_N_TILDE}"));
    }
    if samples == 0 {
        return Err(NflError::Validation("need at least one sample per size".into()));
    }
    let mut raw = Vec::new();
    let mut budget_ok = true;
    let mut verified_ok = true;
    for t in range {
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let targets: Vec<Vec<usize>> = (0..samples).map(|_| random_target(t, &mut rng)).collect();
        let compiled = targets.par_iter().map(|c| compile_target(c, t)).collect::<Result<Vec<_>>>()?;
        let units = 1usize << t;
        budget_ok &= compiled.iter().all(|c| c.transpositions <= units);
        verified_ok &= compiled.iter().all(|c| c.verified != Some(false) && c.exact);
        raw.push((t, compiled));
    }
    let fitted_c = raw.iter().flat_map(|(t, cs)| cs.iter().map(move |c| c.gates as f64 / n_log_n(*t))).fold(0.0, f64::max);
    let rows = raw
        .into_iter()
        .map(|(t, cs)| ScalingRow {
            n_tilde: t,
            big_n: 1 << t,
            samples: cs.len(),
            mean_gates: cs.iter().map(|c| c.gates as f64).sum::<f64>() / cs.len() as f64,
            max_gates: cs.iter().map(|c| c.gates).max().unwrap_or(0),
            max_transpositions: cs.iter().map(|c| c.transpositions).max().unwrap_or(0),
            bound_upper: fitted_c * n_log_n(t),
            bound_lower_formula: lower_bound_formula(t),
            verified: cs.iter().filter(|c| c.verified.is_some()).count(),
        })
        .collect();
    Ok(ScalingTable {
        rows,
        fitted_c,
        analytic_c: analytic_scaling_constant(),
        all_within_transposition_budget: budget_ok,
        all_verified_correct: verified_ok,
    })
}
