//! Command-line front end for the seeded experiments.
//!
//! Exit codes: 0 success, 2 guard violation (bad flags, limits, unmet
//! preconditions), 3 a checked property did not hold.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nfl_core::cost::{AggregatorKind, BlockCombine, CostModelKind};
use nfl_core::equivalence::ScanMode;
use nfl_core::experiments::{
    cmd_classes, cmd_haar, cmd_lemma5, cmd_nfl, cmd_scaling, error_json, error_status, ClassesConfig, HaarConfig, Lemma5Config,
    NflConfig, Outcome, ScalingConfig, ShapeArgs, StateSource,
};
use nfl_core::model::Backend;
use nfl_core::{NflError, Result};

#[derive(Parser, Debug)]
#[command(
    name = "nfl-lab",
    version,
    about = "Equivalence classes, aggregate costs and Haar-state checks for permutation generative models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sample resource states by both methods and check the distinctness predicates.
    Haar(HaarArgs),
    /// Partition all permutations by prepared distribution and count classes.
    Classes(ClassesArgs),
    /// Compare class partitions and aggregate costs for two resource states.
    Nfl(NflArgs),
    /// Emit the explicit pair of permutations that merge under a degenerate state.
    Lemma5(Lemma5Args),
    /// Gate counts of compiled stars-and-bars preparations against the bound formulas.
    Scaling(ScalingArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Write the JSON report here (tables go next to it as .csv) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
}

#[derive(Args, Debug)]
struct ShapeFlags {
    /// Ancilla qubits [default: 1; 0 for --state collision]
    #[arg(long)]
    n0: Option<u32>,
    /// Uniform-random qubits [default: 1; 0 for --state collision]
    #[arg(long)]
    nplus: Option<u32>,
    /// Resource qubits [default: 1; 3 for --state collision]
    #[arg(long)]
    nq: Option<u32>,
    /// Measured output bits
    #[arg(long, default_value_t = 1)]
    ny: u32,
}

impl ShapeFlags {
    fn resolve(&self, base: ShapeArgs) -> ShapeArgs {
        ShapeArgs {
            n0: self.n0.unwrap_or(base.n0),
            nplus: self.nplus.unwrap_or(base.nplus),
            nq: self.nq.unwrap_or(base.nq),
            ny: self.ny,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum BackendArg {
    Rational,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Rational => Backend::Rational,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Copy, Clone, Debug, PartialEq, ValueEnum)]
enum StateArg {
    Haar,
    Fixture,
    Uniform,
    Collision,
}

impl StateArg {
    fn name(self) -> &'static str {
        match self {
            StateArg::Haar => "haar",
            StateArg::Fixture => "fixture",
            StateArg::Uniform => "uniform",
            StateArg::Collision => "collision",
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum CostArg {
    All,
    Transpositions,
    Gates,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum AggregatorArg {
    All,
    Average,
    Max,
    Budget,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum CombineArg {
    Sum,
    Max,
}

#[derive(Args, Debug)]
struct ScanFlags {
    #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
    mode: ModeArg,
    /// Permutations drawn in sampled mode
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    /// Per-entry merge tolerance for float distributions
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

impl ScanFlags {
    fn mode(&self, seed: u64) -> ScanMode {
        match self.mode {
            ModeArg::Exhaustive => ScanMode::Exhaustive,
            ModeArg::Sampled => ScanMode::Sampled { samples: self.samples, seed },
        }
    }
}

#[derive(Args, Debug)]
struct HaarArgs {
    #[arg(long, default_value_t = 2)]
    nq: u32,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Ancillas of the strong-distinctness shape [default: 1 if nq = 0, else 0]
    #[arg(long)]
    n0: Option<u32>,
    #[arg(long, default_value_t = 0)]
    nplus: u32,
    #[arg(long, default_value_t = 1)]
    ny: u32,
    /// States per method in the batch summary (seeds seed, seed+1, ...)
    #[arg(long, default_value_t = 1)]
    samples: usize,
    /// Tie tolerance of the distinctness predicates
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ClassesArgs {
    #[command(flatten)]
    shape: ShapeFlags,
    #[arg(long, value_enum, default_value_t = StateArg::Fixture)]
    state: StateArg,
    /// Explicit squared magnitudes, e.g. 16/25,9/25 (overrides --state)
    #[arg(long)]
    psi: Option<String>,
    /// Seed of the Haar state and of sampled scans
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = BackendArg::Rational)]
    backend: BackendArg,
    #[command(flatten)]
    scan: ScanFlags,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct NflArgs {
    #[command(flatten)]
    shape: ShapeFlags,
    /// Input bits of a sampling algorithm (0: generative models only)
    #[arg(long, default_value_t = 0)]
    nx: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    seed2: u64,
    #[arg(long, value_enum, default_value_t = StateArg::Haar)]
    state_a: StateArg,
    #[arg(long, value_enum, default_value_t = StateArg::Haar)]
    state_b: StateArg,
    #[arg(long, value_enum, default_value_t = BackendArg::Float)]
    backend: BackendArg,
    #[command(flatten)]
    scan: ScanFlags,
    #[arg(long, value_enum, default_value_t = CostArg::All)]
    cost: CostArg,
    #[arg(long, value_enum, default_value_t = AggregatorArg::All)]
    aggregator: AggregatorArg,
    /// Primary-cost limit of the budget aggregator
    #[arg(long, default_value_t = 1.0)]
    budget: f64,
    /// How block costs of a sampling algorithm combine
    #[arg(long, value_enum, default_value_t = CombineArg::Sum)]
    combine: CombineArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Lemma5Args {
    #[arg(long, default_value_t = 1)]
    n0: u32,
    #[arg(long, default_value_t = 0)]
    nplus: u32,
    #[arg(long, default_value_t = 2)]
    nq: u32,
    #[arg(long, default_value_t = 1)]
    ny: u32,
    /// Degenerate squared magnitudes
    #[arg(long, default_value = "3/10,3/10,3/20,1/4")]
    omega: String,
    /// Distinct squared magnitudes
    #[arg(long, default_value = "2/5,3/10,1/5,1/10")]
    psi: String,
    /// 1-based resource index of the first equal amplitude
    #[arg(long, default_value_t = 1)]
    i: usize,
    /// 1-based resource index of the second equal amplitude
    #[arg(long, default_value_t = 2)]
    j: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Rational)]
    backend: BackendArg,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ScalingArgs {
    #[arg(long, default_value_t = 1)]
    min_n_tilde: u32,
    #[arg(long, default_value_t = 5)]
    max_n_tilde: u32,
    /// Targets drawn per size
    #[arg(long, default_value_t = 50)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    common: Common,
}

fn collision_aware(state: StateArg, psi: bool) -> ShapeArgs {
    if state == StateArg::Collision && !psi {
        ShapeArgs { n0: 0, nplus: 0, nq: 3, ny: 1 }
    } else {
        ShapeArgs::S1
    }
}

fn run(cli: Cli) -> Result<(Outcome, Common)> {
    Ok(match cli.command {
        Command::Haar(a) => {
            let config = HaarConfig {
                nq: a.nq,
                seed: a.seed,
                n0: a.n0.unwrap_or(u32::from(a.nq == 0)),
                nplus: a.nplus,
                ny: a.ny,
                samples: a.samples,
                tolerance: a.tolerance,
                timings: a.common.timings,
            };
            (cmd_haar(&config)?, a.common)
        }
        Command::Classes(a) => {
            let config = ClassesConfig {
                shape: a.shape.resolve(collision_aware(a.state, a.psi.is_some())),
                state: StateSource::parse(a.state.name(), a.seed, a.psi.as_deref())?,
                backend: a.backend.into(),
                mode: a.scan.mode(a.seed),
                tolerance: a.scan.tolerance,
                timings: a.common.timings,
                ..ClassesConfig::default()
            };
            (cmd_classes(&config)?, a.common)
        }
        Command::Nfl(a) => {
            let base = if a.state_a == StateArg::Collision || a.state_b == StateArg::Collision {
                collision_aware(StateArg::Collision, false)
            } else {
                ShapeArgs::S1
            };
            let models = match a.cost {
                CostArg::All => CostModelKind::ALL.to_vec(),
                CostArg::Transpositions => vec![CostModelKind::Transpositions],
                CostArg::Gates => vec![CostModelKind::Gates],
            };
            let aggregators = match a.aggregator {
                AggregatorArg::All => AggregatorKind::ALL.to_vec(),
                AggregatorArg::Average => vec![AggregatorKind::Average],
                AggregatorArg::Max => vec![AggregatorKind::Max],
                AggregatorArg::Budget => vec![AggregatorKind::Budget],
            };
            let config = NflConfig {
                shape: a.shape.resolve(base),
                state_a: StateSource::parse(a.state_a.name(), a.seed, None)?,
                state_b: StateSource::parse(a.state_b.name(), a.seed2, None)?,
                backend: a.backend.into(),
                mode: a.scan.mode(a.seed),
                models,
                aggregators,
                budget: a.budget,
                nx: a.nx,
                combine: match a.combine {
                    CombineArg::Sum => BlockCombine::Sum,
                    CombineArg::Max => BlockCombine::Max,
                },
                tolerance: a.scan.tolerance,
                timings: a.common.timings,
                ..NflConfig::default()
            };
            (cmd_nfl(&config)?, a.common)
        }
        Command::Lemma5(a) => {
            let config = Lemma5Config {
                shape: ShapeArgs { n0: a.n0, nplus: a.nplus, nq: a.nq, ny: a.ny },
                omega: a.omega,
                psi: a.psi,
                i: a.i,
                j: a.j,
                backend: a.backend.into(),
                timings: a.common.timings,
            };
            (cmd_lemma5(&config)?, a.common)
        }
        Command::Scaling(a) => {
            let config = ScalingConfig {
                min_n_tilde: a.min_n_tilde,
                max_n_tilde: a.max_n_tilde,
                samples: a.samples,
                seed: a.seed,
                timings: a.common.timings,
            };
            (cmd_scaling(&config)?, a.common)
        }
    })
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| NflError::Validation(format!("cannot write {}: {e}", path.display())))
}

fn emit(outcome: &Outcome, common: &Common) -> Result<()> {
    let json = outcome.report.to_json();
    match &common.out {
        Some(path) => {
            write(path, &json)?;
            if let Some(csv) = &outcome.csv {
                write(&path.with_extension("csv"), csv)?;
            }
        }
        None => print!("{json}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|(outcome, common)| emit(&outcome, &common).map(|_| outcome.status));
    match result {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            print!("{}", error_json(&e));
            ExitCode::from(error_status(&e).code() as u8)
        }
    }
}
