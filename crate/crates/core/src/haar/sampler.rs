use std::f64::consts::PI;

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{NflError, Result};
use crate::model::shape::MAX_REGISTER_BITS;
use crate::model::state::{Masses, ResourceState};

/// Matrix dimension `2^12` is the ceiling for the QR construction.
pub const MAX_QR_QUBITS: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HaarMethod {
    /// First column of `QΛ` for a QR-decomposed Ginibre matrix.
    Qr,
    /// Normalized iid Rayleigh(σ = 1) magnitudes with uniform phases.
    Rayleigh,
}

/// Seeded Haar-state sampler. The same `(method, seed, nq)` always yields a
/// bit-identical state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaarSampler {
    pub method: HaarMethod,
    pub seed: u64,
}

impl HaarSampler {
    pub fn new(method: HaarMethod, seed: u64) -> Self {
        HaarSampler { method, seed }
    }

    pub fn sample(&self, nq: u32) -> Result<ResourceState> {
        match self.method {
            HaarMethod::Qr => sample_haar_qr(nq, self.seed),
            HaarMethod::Rayleigh => sample_haar_rayleigh(nq, self.seed),
        }
    }
}

fn normalized_state(mut squared: Vec<f64>, phases: Vec<f64>) -> Result<ResourceState> {
    let total: f64 = squared.iter().sum();
    for x in &mut squared {
        *x /= total;
    }
    ResourceState::new(Masses::Float(squared))?.with_phases(phases)
}

pub fn sample_haar_qr(nq: u32, seed: u64) -> Result<ResourceState> {
    if nq > MAX_QR_QUBITS {
        return Err(NflError::ResourceLimit(format!("QR Haar sampling supports nq <= {MAX_QR_QUBITS}, got {nq}")));
    }
    let dim = 1usize << nq;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let entries: Vec<Complex<f64>> = (0..dim * dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(re, im)
        })
        .collect();
    let a = DMatrix::from_row_slice(dim, dim, &entries);
    let qr = a.qr();
    let q = qr.q();
    let r00 = qr.r()[(0, 0)];
    let lambda = if r00.norm() > 0.0 { r00 / r00.norm() } else { Complex::new(1.0, 0.0) };
    let column: Vec<Complex<f64>> = q.column(0).iter().map(|z| z * lambda).collect();
    let squared = column.iter().map(|z| z.norm_sqr()).collect();
    let phases = column.iter().map(|z| z.arg()).collect();
    normalized_state(squared, phases)
}

pub fn sample_haar_rayleigh(nq: u32, seed: u64) -> Result<ResourceState> {
    if nq > MAX_REGISTER_BITS {
        return Err(NflError::ResourceLimit(format!("Rayleigh Haar sampling supports nq <= {MAX_REGISTER_BITS}, got {nq}")));
    }
    let dim = 1usize << nq;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    loop {
        let mut squared = Vec::with_capacity(dim);
        let mut phases = Vec::with_capacity(dim);
        for _ in 0..dim {
            let u: f64 = rng.random();
            // inverse CDF of Rayleigh(1): α² = -2 ln(1 - u)
            squared.push(-2.0 * (1.0 - u).ln());
            let phi: f64 = rng.random();
            phases.push(2.0 * PI * phi);
        }
        if squared.iter().any(|&x| x > 0.0) {
            return normalized_state(squared, phases);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total(s: &ResourceState) -> f64 {
        s.masses().to_f64().iter().sum()
    }

    #[test]
    fn zero_qubits_is_the_unit_scalar() {
        for method in [HaarMethod::Qr, HaarMethod::Rayleigh] {
            let s = HaarSampler::new(method, 9).sample(0).unwrap();
            assert_eq!(s.len(), 1);
            assert!((s.masses().get_f64(0) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn normalized_and_deterministic() {
        for method in [HaarMethod::Qr, HaarMethod::Rayleigh] {
            for seed in 0..20 {
                let a = HaarSampler::new(method, seed).sample(3).unwrap();
                let b = HaarSampler::new(method, seed).sample(3).unwrap();
                assert_eq!(a, b);
                assert!((total(&a) - 1.0).abs() < 1e-12);
                assert_eq!(a.phases().unwrap().len(), 8);
            }
        }
        let a = sample_haar_qr(2, 1).unwrap();
        let b = sample_haar_qr(2, 2).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn qr_size_guard() {
        assert!(matches!(sample_haar_qr(13, 0), Err(NflError::ResourceLimit(_))));
    }

    #[test]
    fn qr_mean_mass_is_uniform() {
        let samples: Vec<f64> = (0..10_000).map(|s| sample_haar_qr(2, s).unwrap().masses().get_f64(0)).collect();
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        assert!((mean - 0.25).abs() < 3.0 * se, "mean {mean} se {se}");
    }
}
