use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{ExitStatus, Outcome, Report, Timer};
use crate::cost::scaling_experiment;
use crate::error::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScalingConfig {
    pub min_n_tilde: u32,
    pub max_n_tilde: u32,
    pub samples: usize,
    pub seed: u64,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig { min_n_tilde: 1, max_n_tilde: 5, samples: 50, seed: 0, timings: false }
    }
}

pub fn cmd_scaling(config: &ScalingConfig) -> Result<Outcome> {
    let mut timer = Timer::new(config.timings);
    let table = scaling_experiment(config.min_n_tilde..=config.max_n_tilde, config.samples, config.seed)?;
    timer.lap("experiment");
    let within_bound = table.fitted_c <= table.analytic_c;
    let ok = table.all_within_transposition_budget && table.all_verified_correct && within_bound && table.is_monotone();
    Ok(Outcome {
        report: Report {
            config: serde_json::to_value(config).expect("config serializes"),
            results: json!({
                "rows": table.rows,
                "fitted_c": table.fitted_c,
                "analytic_c": table.analytic_c,
            }),
            verdicts: json!({
                "within_transposition_budget": table.all_within_transposition_budget,
                "truth_tables_correct": table.all_verified_correct,
                "fitted_c_within_analytic": within_bound,
                "monotone_mean_gates": table.is_monotone(),
            }),
            timings: timer.finish(),
        },
        status: ExitStatus::from_checks(ok),
        csv: Some(table.to_csv()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run() {
        let config = ScalingConfig { max_n_tilde: 3, samples: 10, ..ScalingConfig::default() };
        let out = cmd_scaling(&config).unwrap();
        assert_eq!(out.status, ExitStatus::Success);
        assert_eq!(out.csv.unwrap().lines().count(), 4);
    }
}
