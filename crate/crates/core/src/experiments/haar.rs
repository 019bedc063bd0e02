use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{ExitStatus, Outcome, Report, Timer};
use crate::error::{NflError, Result};
use crate::haar::{is_distinct, FastVerdict, HaarMethod, HaarSampler, StrongDistinctness};
use crate::model::{RegisterShape, ResourceState};

/// Fraction of batch samples that must pass both predicates.
pub const BATCH_PASS_FRACTION: f64 = 0.999;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HaarConfig {
    pub nq: u32,
    pub seed: u64,
    /// Shape used for the strong-distinctness checks (its `nq` is `self.nq`).
    pub n0: u32,
    pub nplus: u32,
    pub ny: u32,
    /// Samples per method in the batch summary; 1 reports only the single state.
    pub samples: usize,
    pub tolerance: f64,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for HaarConfig {
    fn default() -> Self {
        HaarConfig { nq: 2, seed: 7, n0: 0, nplus: 0, ny: 1, samples: 1, tolerance: 1e-12, timings: false }
    }
}

struct Checked {
    distinct: bool,
    fast: FastVerdict,
    oracle: Option<bool>,
}

fn check(state: &ResourceState, shape: &RegisterShape, tol: f64) -> Result<Checked> {
    let checker = StrongDistinctness { tolerance: tol, ..StrongDistinctness::default() };
    let oracle = match checker.oracle(state, shape) {
        Ok(v) => Some(v),
        Err(NflError::ResourceLimit(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(Checked { distinct: is_distinct(state, tol), fast: checker.fast(state, shape)?, oracle })
}

fn method_name(m: HaarMethod) -> &'static str {
    match m {
        HaarMethod::Qr => "qr",
        HaarMethod::Rayleigh => "rayleigh",
    }
}

pub fn cmd_haar(config: &HaarConfig) -> Result<Outcome> {
    let shape = RegisterShape::new(config.n0, config.nplus, config.nq, config.ny)?;
    if config.samples == 0 {
        return Err(NflError::Validation("samples must be at least 1".into()));
    }
    let mut timer = Timer::new(config.timings);
    let mut results = serde_json::Map::new();
    let mut verdicts = serde_json::Map::new();
    let mut ok = true;

    for method in [HaarMethod::Qr, HaarMethod::Rayleigh] {
        let state = HaarSampler::new(method, config.seed).sample(config.nq)?;
        let masses = state.masses().to_f64();
        let sum: f64 = masses.iter().sum();
        let c = check(&state, &shape, config.tolerance)?;
        let normalized = (sum - 1.0).abs() <= 1e-12;
        ok &= normalized;
        results.insert(
            method_name(method).into(),
            json!({
                "masses": masses,
                "phases": state.phases(),
                "sum": sum,
                "distinct": c.distinct,
                "strongly_distinct_fast": c.fast,
                "strongly_distinct_oracle": c.oracle,
            }),
        );
        verdicts.insert(format!("{}_normalized", method_name(method)), json!(normalized));
        timer.lap(method_name(method));
    }

    if config.samples > 1 {
        let mut batch = serde_json::Map::new();
        for method in [HaarMethod::Qr, HaarMethod::Rayleigh] {
            let checks = (0..config.samples as u64)
                .into_par_iter()
                .map(|i| {
                    let state = HaarSampler::new(method, config.seed.wrapping_add(i)).sample(config.nq)?;
                    check(&state, &shape, config.tolerance)
                })
                .collect::<Result<Vec<_>>>()?;
            let distinct = checks.iter().filter(|c| c.distinct).count();
            let strong = checks.iter().filter(|c| c.oracle.unwrap_or(c.fast == FastVerdict::Yes)).count();
            let both = checks.iter().filter(|c| c.distinct && c.oracle.unwrap_or(c.fast == FastVerdict::Yes)).count();
            let fraction = both as f64 / config.samples as f64;
            let pass = fraction >= BATCH_PASS_FRACTION;
            ok &= pass;
            batch.insert(
                method_name(method).into(),
                json!({
                    "samples": config.samples,
                    "distinct": distinct,
                    "strongly_distinct": strong,
                    "both": both,
                    "pass_fraction": fraction,
                }),
            );
            verdicts.insert(format!("{}_batch_pass", method_name(method)), json!(pass));
            timer.lap(&format!("{}_batch", method_name(method)));
        }
        results.insert("batch".into(), Value::Object(batch));
    }

    Ok(Outcome {
        report: Report {
            config: serde_json::to_value(config).expect("config serializes"),
            results: Value::Object(results),
            verdicts: Value::Object(verdicts),
            timings: timer.finish(),
        },
        status: ExitStatus::from_checks(ok),
        csv: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_qubits() {
        let out = cmd_haar(&HaarConfig::default()).unwrap();
        assert_eq!(out.status, ExitStatus::Success);
        let qr = &out.report.results["qr"];
        assert_eq!(qr["masses"].as_array().unwrap().len(), 4);
        assert!((qr["sum"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
        assert_eq!(out.report.to_json(), cmd_haar(&HaarConfig::default()).unwrap().report.to_json());
        assert_eq!(out.report.timings.len(), 0);
    }

    #[test]
    fn zero_qubits() {
        let config = HaarConfig { nq: 0, n0: 1, ..HaarConfig::default() };
        let out = cmd_haar(&config).unwrap();
        assert_eq!(out.report.results["qr"]["masses"], json!([1.0]));
        assert_eq!(out.report.results["qr"]["distinct"], json!(true));
    }

    #[test]
    fn batch_summary() {
        let config = HaarConfig { nq: 3, samples: 20, ..HaarConfig::default() };
        let out = cmd_haar(&config).unwrap();
        assert_eq!(out.report.results["batch"]["qr"]["both"], json!(20));
    }
}
