//! Command-line front end.
//!
//! Every flag has a key of the same name in the `--config` JSON file; flags
//! given on the command line win over the file. The seed resolves as
//! `--seed` (or `seed` in the config), then `HYPERFOURIER_SEED`, then
//! [`DEFAULT_SEED`]. Each report embeds the fully resolved configuration, so
//! feeding a report's `config` object back through `--config` reproduces it.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on configuration
//! or I/O errors (with a JSON error object on stderr).

mod commands;
mod output;

use std::ffi::OsString;
use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seed used when neither the flag, the config file nor the environment sets one.
pub const DEFAULT_SEED: u64 = 20_260_415;
/// Environment variable consulted for the seed.
pub const SEED_ENV: &str = "HYPERFOURIER_SEED";

#[derive(Parser, Debug)]
#[command(
    name = "hyperfourier",
    version,
    about = "Quaternion and spacetime Fourier transforms with uncertainty checks"
)]
struct Cli {
    /// JSON file with default values for any of the flags below.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    run: RunConfig,
}

#[derive(Subcommand, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Sample a Gaussian (or seeded random) field and write it to --output.
    GenGaussian,
    /// Run a transform; --compare checks the fast path against the direct sum.
    Transform,
    /// Write the split parts f₋, f₊ to --out-minus / --out-plus.
    Split,
    /// Write the two transform packets to --out-plus / --out-minus.
    Packets,
    /// Check the directional QFT uncertainty principle.
    #[command(name = "verify-2d")]
    #[serde(rename = "verify-2d")]
    Verify2d,
    /// Check the directional spacetime uncertainty principle.
    #[command(name = "verify-4d")]
    #[serde(rename = "verify-4d")]
    Verify4d,
    /// Check the component-wise principle with the right-sided QFT.
    VerifyComponent,
    /// Sweep direction angles and write angle_a, angle_b, lhs, rhs, ratio, satisfied.
    Sweep,
    /// Run the algebraic property suite.
    CheckIdentities,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    /// `c0 · exp(−Σ α_k u_k²)`.
    #[default]
    Gaussian,
    /// Seeded sum of Gaussian wave packets.
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformKind {
    Qft,
    QftRight,
    QftInverse,
    Sft,
    SftInverse,
}

#[derive(ValueEnum, Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundChoice {
    /// F₋ weighted by (a_t b_t − a⃗·b⃗)², F₊ by (a_t b_t + a⃗·b⃗)².
    #[default]
    Stated,
    /// The weights swapped to follow the wave-packet phases.
    PacketConsistent,
}

/// Every option of every command. Unset fields fall back to the config file,
/// then to per-command defaults.
#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    #[arg(skip)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,

    /// RNG seed for random fields and the identity suite.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// Report format.
    #[arg(long, value_enum, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,

    /// Report destination (stdout when absent).
    #[arg(long, global = true, value_name = "FILE")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,

    /// Field file to read instead of generating one.
    #[arg(long, global = true, value_name = "FILE")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,

    /// Field or spectrum file to write (`.csv` for CSV, binary otherwise).
    #[arg(long, short = 'o', global = true, value_name = "FILE")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,

    /// Where to write the `−` split part (split) or `−` packet (packets).
    #[arg(long, global = true, value_name = "FILE")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_minus: Option<PathBuf>,

    /// Where to write the `+` split part (split) or `+` packet (packets).
    #[arg(long, global = true, value_name = "FILE")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_plus: Option<PathBuf>,

    /// Generated field kind when no --input is given.
    #[arg(long, value_enum, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<Source>,

    /// Field dimension, 2 or 4.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,

    /// Samples per axis.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,

    /// Grid spacing on every axis.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<f64>,

    /// Gaussian decay rates: one value for all axes or one per axis.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<f64>>,

    /// Gaussian amplitude: one scalar, or all 4 (2D) / 16 (4D) coefficients.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c0: Option<Vec<f64>>,

    /// Spatial direction: `a1,a2` in 2D, `a_t,a1,a2,a3` in 4D.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,

    /// Frequency direction, same layout as --a.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,

    /// Axis (1 or 2) for verify-component.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<usize>,

    /// Relative slack on the inequality.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,

    /// Tolerance on |ratio − 1| for flagging equality.
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equality_tol: Option<f64>,

    /// Subtract directional means before taking second moments.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub recenter: Option<bool>,

    /// Energy weighting of the 4D bound.
    #[arg(long, value_enum, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<BoundChoice>,

    /// Transform to run.
    #[arg(long, value_enum, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<TransformKind>,

    /// Use the direct sum.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brute: Option<bool>,

    /// Use the FFT path (the default).
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fast: Option<bool>,

    /// Run both paths and report their largest relative deviation.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compare: Option<bool>,

    /// Angles per direction in a sweep, spread over [0, π).
    #[arg(long, global = true)]
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

macro_rules! overlay {
    ($top:expr, $base:expr; $($field:ident),* $(,)?) => {
        RunConfig { $($field: $top.$field.or($base.$field),)* }
    };
}

impl RunConfig {
    /// Fields set in `self` win; the rest come from `base`.
    pub fn overlay(self, base: RunConfig) -> RunConfig {
        overlay!(self, base; command, seed, format, report, input, output, out_minus, out_plus, source, dim,
            n, h, alpha, c0, a, b, axis, slack, equality_tol, recenter, bound, kind, brute, fast, compare, steps)
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::format(path, format!("invalid config: {e}")))
    }
}

/// How a run ended, short of an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 1,
        }
    }
}

fn resolve_seed(configured: Option<u64>, env: Option<String>) -> Result<u64> {
    if let Some(seed) = configured {
        return Ok(seed);
    }
    match env {
        Some(raw) => raw
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("{SEED_ENV}={raw:?} is not an unsigned 64-bit integer"))),
        None => Ok(DEFAULT_SEED),
    }
}

/// Parses flags, merges the config file and runs the command.
pub fn run_with_args<I, T>(args: I, env_seed: Option<String>) -> Result<Outcome>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let mut flags = cli.run;
    flags.command = cli.command;
    let merged = match &cli.config {
        Some(path) => flags.overlay(RunConfig::from_json_file(path)?),
        None => flags,
    };
    let command = merged.command.ok_or_else(|| {
        Error::InvalidArgument("no command given; pass a subcommand or set \"command\" in --config".into())
    })?;
    let seed = resolve_seed(merged.seed, env_seed)?;
    commands::run(RunConfig { command: Some(command), seed: Some(seed), ..merged })
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    kind: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorEnvelope<'a> {
    error: ErrorBody<'a>,
}

/// Entry point for the binary: returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    // help and version go to stdout with status 0, as usual
    if let Err(e) = Cli::try_parse_from(&args) {
        if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) {
            print!("{e}");
            return 0;
        }
    }
    match run_with_args(args, std::env::var(SEED_ENV).ok()) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            let body = ErrorEnvelope { error: ErrorBody { kind: e.kind(), message: e.to_string() } };
            eprintln!("{}", serde_json::to_string(&body).expect("error body serializes"));
            2
        }
    }
}
