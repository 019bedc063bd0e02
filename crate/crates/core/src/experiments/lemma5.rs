use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{parse_masses, ExitStatus, Outcome, Report, ShapeArgs, Timer};
use crate::equivalence::{lemma5_positions, lemma5_witness, same_multiplicative_class};
use crate::error::Result;
use crate::haar::is_distinct;
use crate::model::{build_input_state, output_distribution, Backend};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lemma5Config {
    pub shape: ShapeArgs,
    /// Degenerate state with two equal amplitudes.
    pub omega: String,
    /// Distinct state used as the contrast.
    pub psi: String,
    /// 1-based resource indices of the two equal amplitudes.
    pub i: usize,
    pub j: usize,
    pub backend: Backend,
    #[serde(skip)]
    pub timings: bool,
}

impl Default for Lemma5Config {
    fn default() -> Self {
        Lemma5Config {
            shape: ShapeArgs { n0: 1, nplus: 0, nq: 2, ny: 1 },
            omega: "3/10,3/10,3/20,1/4".into(),
            psi: "2/5,3/10,1/5,1/10".into(),
            i: 1,
            j: 2,
            backend: Backend::Rational,
            timings: false,
        }
    }
}

pub fn cmd_lemma5(config: &Lemma5Config) -> Result<Outcome> {
    let shape = config.shape.shape()?;
    let convert = |text: &str| {
        let s = parse_masses(text)?;
        s.check_shape(&shape)?;
        Ok::<_, crate::NflError>(match config.backend {
            Backend::Rational => s,
            Backend::Float => s.to_float(),
        })
    };
    let omega = convert(&config.omega)?;
    let psi = convert(&config.psi)?;
    let mut timer = Timer::new(config.timings);

    let (i_star, j_star) = lemma5_positions(&shape, config.i, config.j)?;
    let (p, s) = lemma5_witness(&shape, i_star, j_star)?;
    let om_in = build_input_state(&shape, &omega)?;
    let psi_in = build_input_state(&shape, &psi)?;
    let (om_p, om_s) = (output_distribution(&om_in, &p)?, output_distribution(&om_in, &s)?);
    let (psi_p, psi_s) = (output_distribution(&psi_in, &p)?, output_distribution(&psi_in, &s)?);
    let tol = match config.backend {
        Backend::Rational => 0.0,
        Backend::Float => 1e-12,
    };
    let degenerate_equal = om_p.approx_eq(&om_s, tol);
    let distinct_unequal = !psi_p.approx_eq(&psi_s, tol);
    let same_class = same_multiplicative_class(&p, &s, &shape)?;
    let omega_degenerate = !is_distinct(&omega, 1e-12);
    let psi_distinct = is_distinct(&psi, 1e-12);
    timer.lap("witness");

    let ok = degenerate_equal && distinct_unequal && !same_class;
    Ok(Outcome {
        report: Report {
            config: serde_json::to_value(config).expect("config serializes"),
            results: json!({
                "shape": shape.to_string(),
                "positions": [i_star, j_star],
                "p": p,
                "s": s,
                "degenerate": { "p": om_p.masses().to_strings(), "s": om_s.masses().to_strings() },
                "distinct": { "p": psi_p.masses().to_strings(), "s": psi_s.masses().to_strings() },
            }),
            verdicts: json!({
                "omega_degenerate": omega_degenerate,
                "psi_distinct": psi_distinct,
                "degenerate_outputs_equal": degenerate_equal,
                "distinct_outputs_differ": distinct_unequal,
                "same_multiplicative_class": same_class,
                "consistent": ok,
            }),
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
    fn default_witness() {
        let out = cmd_lemma5(&Lemma5Config::default()).unwrap();
        assert_eq!(out.status, ExitStatus::Success);
        assert_eq!(out.report.results["degenerate"]["p"], json!(["7/10", "3/10"]));
        assert_eq!(out.report.results["degenerate"]["s"], json!(["7/10", "3/10"]));
        assert_eq!(out.report.results["distinct"]["p"], json!(["7/10", "3/10"]));
        assert_eq!(out.report.results["distinct"]["s"], json!(["3/5", "2/5"]));
        assert_eq!(out.report.verdicts["same_multiplicative_class"], json!(false));
    }

    #[test]
    fn unequal_pair_fails_the_check() {
        let config = Lemma5Config { i: 1, j: 3, ..Lemma5Config::default() };
        assert_eq!(cmd_lemma5(&config).unwrap().status, ExitStatus::CheckFailed);
    }
}
