use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{masses_json, ExitStatus, Outcome, Report, ShapeArgs, StateSource, Timer};
use crate::cost::{AggregatorKind, BlockCombine, CostModelKind, MinimizationMode};
use crate::equivalence::{nfl_compare, NflOptions, NflVerdict, ScanMode};
use crate::error::Result;
use crate::model::Backend;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NflConfig {
    pub shape: ShapeArgs,
    pub state_a: StateSource,
    pub state_b: StateSource,
    pub backend: Backend,
    pub mode: ScanMode,
    pub models: Vec<CostModelKind>,
    pub aggregators: Vec<AggregatorKind>,
    pub budget: f64,
    pub nx: u32,
    pub combine: BlockCombine,
    pub tolerance: f64,
    pub distinct_tolerance: f64,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for NflConfig {
    fn default() -> Self {
        let o = NflOptions::default();
        NflConfig {
            shape: ShapeArgs::S1,
            state_a: StateSource::Haar { seed: 1 },
            state_b: StateSource::Haar { seed: 2 },
            backend: Backend::Float,
            mode: o.mode,
            models: o.models,
            aggregators: o.aggregators,
            budget: o.budget,
            nx: 0,
            combine: o.combine,
            tolerance: o.tolerance,
            distinct_tolerance: o.distinct_tolerance,
            timings: false,
        }
    }
}

pub fn cmd_nfl(config: &NflConfig) -> Result<Outcome> {
    let shape = config.shape.shape()?;
    let a = config.state_a.build(shape.nq, config.backend)?;
    let b = config.state_b.build(shape.nq, config.backend)?;
    let mut timer = Timer::new(config.timings);
    let options = NflOptions {
        models: config.models.clone(),
        aggregators: config.aggregators.clone(),
        budget: config.budget,
        mode: config.mode,
        minimization: MinimizationMode::Exhaustive,
        tolerance: config.tolerance,
        distinct_tolerance: config.distinct_tolerance,
        nx: config.nx,
        combine: config.combine,
    };
    let report = nfl_compare(&a, &b, &shape, &options)?;
    timer.lap("compare");
    let status = match report.verdict {
        NflVerdict::Equal => ExitStatus::Success,
        NflVerdict::Unequal => ExitStatus::CheckFailed,
        NflVerdict::PreconditionViolation => ExitStatus::GuardViolation,
    };
    let verdicts = json!({
        "verdict": report.verdict,
        "partitions_identical": report.partitions_identical,
        "costs_equal": report.costs.iter().all(|c| c.equal),
        "secondary_equal": report.secondary.as_ref().map(|s| s.classes_a == s.classes_b && s.costs.iter().all(|c| c.equal)),
        "violations": report.violations,
    });
    Ok(Outcome {
        report: Report {
            config: serde_json::to_value(config).expect("config serializes"),
            results: json!({
                "shape": shape.to_string(),
                "state_a": masses_json(&a),
                "state_b": masses_json(&b),
                "comparison": report,
            }),
            verdicts,
            timings: timer.finish(),
        },
        status,
        csv: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_run_is_equal() {
        let out = cmd_nfl(&NflConfig { models: vec![CostModelKind::Transpositions], ..NflConfig::default() }).unwrap();
        assert_eq!(out.status, ExitStatus::Success);
        assert_eq!(out.report.verdicts["verdict"], json!("equal"));
    }

    #[test]
    fn uniform_state_is_rejected() {
        let config = NflConfig { state_b: StateSource::Uniform, ..NflConfig::default() };
        let out = cmd_nfl(&config).unwrap();
        assert_eq!(out.status, ExitStatus::GuardViolation);
        assert_eq!(out.report.verdicts["verdict"], json!("precondition_violation"));
    }
}
