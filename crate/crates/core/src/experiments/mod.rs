//! Seeded experiments behind the `nfl-lab` binary. Each command returns a
//! [`Report`] plus an exit status; the binary only parses flags and writes
//! files.

mod classes;
mod haar;
mod lemma5;
mod nfl;
mod scaling;

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{NflError, Result};
use crate::haar::{make_collision_state, HaarMethod, HaarSampler};
use crate::model::{Backend, RegisterShape, ResourceState};

pub use classes::{cmd_classes, ClassesConfig};
pub use haar::{cmd_haar, HaarConfig};
pub use lemma5::{cmd_lemma5, Lemma5Config};
pub use nfl::{cmd_nfl, NflConfig};
pub use scaling::{cmd_scaling, ScalingConfig};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExitStatus {
    Success,
    GuardViolation,
    CheckFailed,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::GuardViolation => 2,
            ExitStatus::CheckFailed => 3,
        }
    }

    fn from_checks(ok: bool) -> Self {
        if ok {
            ExitStatus::Success
        } else {
            ExitStatus::CheckFailed
        }
    }
}

/// JSON report with the fixed top-level layout `config`, `results`,
/// `verdicts`, `timings`. Timings stay empty unless requested so repeated
/// runs are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub config: Value,
    pub results: Value,
    pub verdicts: Value,
    pub timings: BTreeMap<String, f64>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Result of one command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub status: ExitStatus,
    /// Table written next to the JSON report, if the command has one.
    pub csv: Option<String>,
}

/// Machine-readable error document for guard violations.
pub fn error_json(err: &NflError) -> String {
    let kind = match err {
        NflError::Shape(_) => "shape",
        NflError::Index { .. } => "index",
        NflError::Validation(_) => "validation",
        NflError::ResourceLimit(_) => "resource_limit",
        NflError::Internal(_) => "internal",
    };
    let mut s = serde_json::to_string_pretty(&json!({ "error": { "kind": kind, "message": err.to_string() } })).expect("json");
    s.push('\n');
    s
}

/// Exit status for an error returned by a command.
pub fn error_status(err: &NflError) -> ExitStatus {
    match err {
        NflError::Internal(_) => ExitStatus::CheckFailed,
        _ => ExitStatus::GuardViolation,
    }
}

pub(crate) struct Timer {
    enabled: bool,
    start: Instant,
    laps: BTreeMap<String, f64>,
}

impl Timer {
    pub(crate) fn new(enabled: bool) -> Self {
        Timer { enabled, start: Instant::now(), laps: BTreeMap::new() }
    }

    pub(crate) fn lap(&mut self, name: &str) {
        if self.enabled {
            let now = Instant::now();
            self.laps.insert(format!("{name}_ms"), (now - self.start).as_secs_f64() * 1e3);
            self.start = now;
        }
    }

    pub(crate) fn finish(self) -> BTreeMap<String, f64> {
        self.laps
    }
}

/// Shape flags shared by the commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeArgs {
    pub n0: u32,
    pub nplus: u32,
    pub nq: u32,
    pub ny: u32,
}

impl ShapeArgs {
    pub const S1: ShapeArgs = ShapeArgs { n0: 1, nplus: 1, nq: 1, ny: 1 };

    pub fn shape(&self) -> Result<RegisterShape> {
        RegisterShape::new(self.n0, self.nplus, self.nq, self.ny)
    }
}

/// Where a resource state comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum StateSource {
    /// Haar sample (QR method) with the given seed.
    Haar {
        seed: u64,
    },
    /// The exact two-amplitude state (16/25, 9/25).
    Fixture,
    Uniform,
    /// The eight-amplitude state (1,2,3,4,5,6,7,12)/40.
    Collision,
    /// Explicit squared magnitudes, comma separated (`16/25,9/25` or `0.3,0.7`).
    Explicit {
        masses: String,
    },
}

impl StateSource {
    pub fn parse(kind: &str, seed: u64, psi: Option<&str>) -> Result<Self> {
        if let Some(p) = psi {
            return Ok(StateSource::Explicit { masses: p.to_string() });
        }
        match kind {
            "haar" => Ok(StateSource::Haar { seed }),
            "fixture" => Ok(StateSource::Fixture),
            "uniform" => Ok(StateSource::Uniform),
            "collision" => Ok(StateSource::Collision),
            _ => Err(NflError::Validation(format!("unknown state {kind:?}"))),
        }
    }

    /// The state on `nq` qubits with masses in `backend`.
    pub fn build(&self, nq: u32, backend: Backend) -> Result<ResourceState> {
        let state = match self {
            StateSource::Haar { seed } => HaarSampler::new(HaarMethod::Qr, *seed).sample(nq)?,
            StateSource::Fixture => ResourceState::from_ratios(&[(16, 25), (9, 25)])?,
            StateSource::Uniform => ResourceState::uniform(nq)?,
            StateSource::Collision => make_collision_state().0,
            StateSource::Explicit { masses } => parse_masses(masses)?,
        };
        if state.nq() != nq {
            return Err(NflError::Shape(format!("state has nq = {} but the shape has nq = {nq}", state.nq())));
        }
        match backend {
            Backend::Rational => state.to_exact(),
            Backend::Float => Ok(state.to_float()),
        }
    }
}

/// Parses comma-separated squared magnitudes into an exact state. Entries
/// are fractions (`3/20`) or decimals (`0.15`), both read exactly.
pub fn parse_masses(text: &str) -> Result<ResourceState> {
    let values = text.split(',').map(|t| parse_rational(t.trim())).collect::<Result<Vec<_>>>()?;
    ResourceState::from_rationals(values)
}

fn parse_rational(t: &str) -> Result<BigRational> {
    let bad = || NflError::Validation(format!("cannot parse mass {t:?}"));
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (int, frac) = t.split_once('.').unwrap_or((t, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{}{frac}", if int.is_empty() { "0" } else { int }).parse().map_err(|_| bad())?;
    Ok(BigRational::new(digits, BigInt::from(10u32).pow(frac.len() as u32)))
}

pub(crate) fn masses_json(state: &ResourceState) -> Value {
    match state.backend() {
        Backend::Rational => json!(state.masses().to_strings()),
        Backend::Float => json!(state.masses().to_f64()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mass_parsing() {
        let s = parse_masses("3/10, 0.3,0.15,1/4").unwrap();
        assert_eq!(s.masses().to_strings(), vec!["3/10", "3/10", "3/20", "1/4"]);
        assert!(parse_masses("0.5,0.6").is_err());
        assert!(parse_masses("1/0").is_err());
        assert!(parse_masses("a,b").is_err());
    }

    #[test]
    fn sources() {
        let f = StateSource::parse("fixture", 0, None).unwrap().build(1, Backend::Float).unwrap();
        assert_eq!(f.masses().to_f64(), vec![0.64, 0.36]);
        assert!(StateSource::Fixture.build(2, Backend::Rational).is_err());
        assert!(StateSource::parse("bogus", 0, None).is_err());
        let h = StateSource::Haar { seed: 3 }.build(2, Backend::Rational).unwrap();
        assert_eq!(h.backend(), Backend::Rational);
    }
}
