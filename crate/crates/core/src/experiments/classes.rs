use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{masses_json, ExitStatus, Outcome, Report, ShapeArgs, StateSource, Timer};
use crate::equivalence::{count_classes, distribution_class_partition, ScanMode};
use crate::error::Result;
use crate::haar::{is_distinct, FastVerdict, StrongDistinctness};
use crate::model::permutation::factorial;
use crate::model::Backend;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassesConfig {
    pub shape: ShapeArgs,
    pub state: StateSource,
    pub backend: Backend,
    pub mode: ScanMode,
    pub tolerance: f64,
    pub distinct_tolerance: f64,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for ClassesConfig {
    fn default() -> Self {
        ClassesConfig {
            shape: ShapeArgs::S1,
            state: StateSource::Fixture,
            backend: Backend::Rational,
            mode: ScanMode::Exhaustive,
            tolerance: crate::equivalence::partition::DEFAULT_GROUPING_TOLERANCE,
            distinct_tolerance: crate::haar::DEFAULT_TIE_TOLERANCE,
            timings: false,
        }
    }
}

pub fn cmd_classes(config: &ClassesConfig) -> Result<Outcome> {
    let shape = config.shape.shape()?;
    let state = config.state.build(shape.nq, config.backend)?;
    let mut timer = Timer::new(config.timings);
    let m_star = count_classes(&shape)?;
    timer.lap("keys");
    let report = distribution_class_partition(&state, &shape, config.mode, config.tolerance)?;
    timer.lap("scan");

    let checker = StrongDistinctness { tolerance: config.distinct_tolerance, ..StrongDistinctness::default() };
    let distinct = is_distinct(&state, config.distinct_tolerance);
    let strongly = match checker.fast(&state, &shape)? {
        FastVerdict::Yes => true,
        FastVerdict::Inconclusive => checker.oracle(&state, &shape)?,
    };
    let m = report.m();
    let total: u64 = report.classes.iter().map(|c| c.count).sum();

    let (relation, ok, coincides) = if report.is_exhaustive() {
        let coincides = report.coincides_with_multiplicity_classes()?;
        let counts_ok = total == factorial(shape.size());
        if distinct && strongly {
            ("generic", counts_ok && m == m_star && coincides, Some(coincides))
        } else {
            ("class_collapse", counts_ok && m < m_star, Some(coincides))
        }
    } else {
        ("sampled", m <= m_star, None)
    };
    timer.lap("checks");

    let classes: Vec<_> = report
        .classes
        .iter()
        .enumerate()
        .map(|(i, c)| {
            json!({
                "class": i,
                "count": c.count,
                "key": c.key.to_string(),
                "representative": c.representative,
                "distribution": c.distribution.masses().to_strings(),
            })
        })
        .collect();
    let mut csv = String::from("class,count,key,distribution\n");
    for (i, c) in report.classes.iter().enumerate() {
        let _ = writeln!(csv, "{i},{},{},{}", c.count, c.key, c.distribution.masses().to_strings().join(";"));
    }

    Ok(Outcome {
        report: Report {
            config: serde_json::to_value(config).expect("config serializes"),
            results: json!({
                "shape": shape.to_string(),
                "state": masses_json(&state),
                "m": m,
                "m_star": m_star,
                "members": total,
                "classes": classes,
            }),
            verdicts: json!({
                "distinct": distinct,
                "strongly_distinct": strongly,
                "relation": relation,
                "coincides_with_multiplicity_classes": coincides,
                "consistent": ok,
            }),
            timings: timer.finish(),
        },
        status: ExitStatus::from_checks(ok),
        csv: Some(csv),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_is_generic() {
        let out = cmd_classes(&ClassesConfig::default()).unwrap();
        assert_eq!(out.status, ExitStatus::Success);
        assert_eq!(out.report.results["m"], json!(9));
        assert_eq!(out.report.results["m_star"], json!(9));
        assert_eq!(out.report.verdicts["relation"], json!("generic"));
        assert_eq!(out.csv.unwrap().lines().count(), 10);
    }

    #[test]
    fn uniform_collapses() {
        let config = ClassesConfig { state: StateSource::Uniform, ..ClassesConfig::default() };
        let out = cmd_classes(&config).unwrap();
        assert_eq!(out.status, ExitStatus::Success);
        assert_eq!(out.report.verdicts["relation"], json!("class_collapse"));
        assert!(out.report.results["m"].as_u64().unwrap() < 9);
    }

    #[test]
    fn stars_and_bars_shape_sampled() {
        let config = ClassesConfig {
            shape: ShapeArgs { n0: 2, nplus: 2, nq: 0, ny: 2 },
            state: StateSource::Uniform,
            mode: ScanMode::Sampled { samples: 200, seed: 1 },
            ..ClassesConfig::default()
        };
        let out = cmd_classes(&config).unwrap();
        assert_eq!(out.report.results["m_star"], json!(35));
        assert_eq!(out.status, ExitStatus::Success);
    }
}
