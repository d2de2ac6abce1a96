//! Command-line front end: every subcommand renders its result as CSV or
//! JSON text, and reports whether a verification step failed so `main` can
//! pick the exit code.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;
use usd_core::bounds::{achievability_witness, certify, classify, dependence_witness};
use usd_core::sim::{
    collective_trials, pairwise_trials, PairwiseMode, SimulationRecord, StrategyResult,
};
use usd_core::symusd::verify_povm;
use usd_core::trine::{lift_closed_form, lifted_curve, multitrine_povm, trine_table};
use usd_core::UsdError;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_011_008;

/// Default tolerance for measurement verification.
pub const DEFAULT_TOL: f64 = 1e-10;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "usd",
    version,
    about = "Unambiguous discrimination of multiple copies of pure states"
)]
pub struct Cli {
    /// RNG seed for witness and simulation commands.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Verification tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; defaults to CSV for tables and JSON otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Collective,
    Pairwise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    /// States whose C-fold powers are linearly independent, as many as possible.
    Achieve,
    /// C + D distinct states whose C-fold powers are linearly dependent.
    Depend,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify whether N states spanning D dimensions are distinguishable with C copies.
    Bounds {
        #[arg(long = "n")]
        n: u64,
        #[arg(long = "c")]
        c: u64,
        #[arg(long = "d")]
        d: u64,
    },
    /// Optimal success probability of lifted trines over a lambda grid.
    LiftedCurve {
        #[arg(long, default_value_t = 201)]
        grid: usize,
        /// Keep the grid strictly uniform instead of placing a node on the peak.
        #[arg(long)]
        uniform: bool,
    },
    /// Lift parameter and optimal success for C = 1..c-max trine copies.
    TrineTable {
        #[arg(long = "c-max", default_value_t = 12)]
        c_max: usize,
    },
    /// Monte Carlo run of the collective or pairwise trine measurement.
    Simulate {
        #[arg(long = "c")]
        c: usize,
        #[arg(long = "trials", default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, value_enum, default_value_t = Strategy::Collective)]
        strategy: Strategy,
    },
    /// Build and certify a tightness witness for the copy-number bounds.
    Witness {
        #[arg(value_enum)]
        kind: WitnessKind,
        #[arg(long = "c")]
        c: usize,
        #[arg(long = "d")]
        d: usize,
    },
    /// Build the zero-error C-copy trine measurement at success p and check it.
    VerifyPovm {
        #[arg(long = "c")]
        c: usize,
        #[arg(long = "p")]
        p: f64,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<UsdError> for CliError {
    fn from(e: UsdError) -> Self {
        match e {
            UsdError::InvalidArgument(_)
            | UsdError::DimensionMismatch { .. }
            | UsdError::NotNormalized { .. }
            | UsdError::TensorTooLarge { .. }
            | UsdError::Overflow(_) => CliError::Validation(e.to_string()),
            _ => CliError::Verification(e.to_string()),
        }
    }
}

/// Rendered command output. `passed == false` means a verification check
/// failed; the text is still emitted.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    pub text: String,
    pub passed: bool,
}

impl Rendered {
    fn ok(text: String) -> Self {
        Self { text, passed: true }
    }
}

/// Full double precision, 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable output");
    s.push('\n');
    s
}

fn json_only(format: Option<Format>, command: &str) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::Validation(format!(
            "{command} only supports --format json"
        ))),
        _ => Ok(()),
    }
}

pub fn run(cli: &Cli) -> Result<Rendered, CliError> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(CliError::Validation("--tol must be positive".into()));
    }
    match &cli.command {
        Command::Bounds { n, c, d } => cmd_bounds(*n, *c, *d, cli.format),
        Command::LiftedCurve { grid, uniform } => cmd_lifted_curve(*grid, !uniform, cli.format),
        Command::TrineTable { c_max } => cmd_trine_table(*c_max, cli.format),
        Command::Simulate {
            c,
            trials,
            strategy,
        } => {
            json_only(cli.format, "simulate")?;
            cmd_simulate(*c, *trials, cli.seed, *strategy)
        }
        Command::Witness { kind, c, d } => {
            json_only(cli.format, "witness")?;
            cmd_witness(*kind, *c, *d, cli.seed)
        }
        Command::VerifyPovm { c, p } => {
            json_only(cli.format, "verify-povm")?;
            cmd_verify_povm(*c, *p, cli.tol)
        }
    }
}

pub fn cmd_bounds(n: u64, c: u64, d: u64, format: Option<Format>) -> Result<Rendered, CliError> {
    let v = classify(n, c, d)?;
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut js = serde_json::to_value(v).expect("serialisable verdict");
            js["schema"] = json!(SCHEMA_VERSION);
            to_json(&js)
        }
        Format::Csv => format!(
            "N,C,D,verdict,necessary_max,sufficient_max\n{n},{c},{d},{:?},{},{}\n",
            v.verdict, v.necessary_max, v.sufficient_max
        ),
    };
    Ok(Rendered::ok(text))
}

pub fn cmd_lifted_curve(
    grid: usize,
    snap_peak: bool,
    format: Option<Format>,
) -> Result<Rendered, CliError> {
    let rows = lifted_curve::<f64>(grid, snap_peak)?;
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("lambda,p_max\n");
            for (l, p) in &rows {
                writeln!(s, "{},{}", fmt_f64(*l), fmt_f64(*p)).expect("write to string");
            }
            s
        }
        Format::Json => {
            let rows: Vec<_> = rows
                .iter()
                .map(|(l, p)| json!({"lambda": l, "p_max": p}))
                .collect();
            to_json(&json!({"schema": SCHEMA_VERSION, "rows": rows}))
        }
    };
    Ok(Rendered::ok(text))
}

pub fn cmd_trine_table(c_max: usize, format: Option<Format>) -> Result<Rendered, CliError> {
    let rows = trine_table::<f64>(c_max)?;
    let text = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("C,L_C,p_max,pairwise_p\n");
            for r in &rows {
                writeln!(
                    s,
                    "{},{},{},{}",
                    r.copies,
                    fmt_f64(r.lift),
                    fmt_f64(r.p_max),
                    fmt_f64(r.pairwise_p)
                )
                .expect("write to string");
            }
            s
        }
        Format::Json => to_json(&json!({"schema": SCHEMA_VERSION, "rows": rows})),
    };
    Ok(Rendered::ok(text))
}

#[derive(Serialize)]
struct SimConfig {
    #[serde(rename = "C")]
    copies: usize,
    copies_used: usize,
    strategy: Strategy,
    seed: u64,
}

pub fn cmd_simulate(
    c: usize,
    trials: u64,
    seed: u64,
    strategy: Strategy,
) -> Result<Rendered, CliError> {
    let result: StrategyResult = match strategy {
        Strategy::Collective => collective_trials(c, trials, seed)?,
        Strategy::Pairwise => pairwise_trials(c, trials, seed, PairwiseMode::Exhaustive)?,
    };
    let config = SimConfig {
        copies: c,
        copies_used: result.copies_used,
        strategy,
        seed,
    };
    let record = SimulationRecord::new(config, &result.stats, result.analytic_success);
    let mut js = serde_json::to_value(&record).expect("serialisable record");
    js["schema"] = json!(SCHEMA_VERSION);
    Ok(Rendered {
        text: to_json(&js),
        passed: record.error_count == 0,
    })
}

pub fn cmd_witness(kind: WitnessKind, c: usize, d: usize, seed: u64) -> Result<Rendered, CliError> {
    if c == 0 || d == 0 {
        return Err(CliError::Validation("--c and --d must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ensemble = match kind {
        WitnessKind::Achieve => achievability_witness::<f64, _>(c, d, &mut rng)?,
        WitnessKind::Depend => dependence_witness::<f64, _>(c, d, &mut rng)?,
    };
    let check = certify(&ensemble, c)?;
    let passed = match kind {
        WitnessKind::Achieve => check.independent,
        WitnessKind::Depend => !check.independent,
    };
    let js = json!({
        "schema": SCHEMA_VERSION,
        "kind": kind,
        "C": c,
        "D": d,
        "seed": seed,
        "ensemble": ensemble,
        "verification": check,
        "passed": passed,
    });
    Ok(Rendered {
        text: to_json(&js),
        passed,
    })
}

pub fn cmd_verify_povm(c: usize, p: f64, tol: f64) -> Result<Rendered, CliError> {
    if c < 2 {
        return Err(CliError::Validation("verify-povm needs --c >= 2".into()));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(CliError::Validation(format!("--p {p} outside [0, 1]")));
    }
    let (e, m) = multitrine_povm::<f64>(c, p)?;
    let report = verify_povm(&m, &e, tol)?;
    let js = json!({
        "schema": SCHEMA_VERSION,
        "C": c,
        "p": p,
        "lift": lift_closed_form::<f64>(c)?,
        "report": report,
        "passed": report.passed,
    });
    Ok(Rendered {
        text: to_json(&js),
        passed: report.passed,
    })
}

/// Writes `r.text` to `out` or stdout.
pub fn emit(r: &Rendered, out: Option<&std::path::Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, &r.text)?,
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(r.text.as_bytes())?;
        }
    }
    Ok(())
}
