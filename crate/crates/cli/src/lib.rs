//! Command-line front end: classify and compare symbol specs, run the
//! verification suites, and write human, JSON and CSV reports.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use ccrflow::classify::{classify_batch, decide_cocycle_conjugacy};
use ccrflow::par::{self, Execution};
use ccrflow::ToleranceConfig;
use clap::{Parser, Subcommand};

pub mod report;
pub mod spec_file;
pub mod suites;

pub use report::{ClassificationRow, ConjugacyReport, PairVerdict, Report};
pub use spec_file::{parse_spec, parse_spec_str, SpecFile};
pub use suites::{run_suite, run_suites, SuiteConfig, SuiteResult, SUITES};

pub const DEMO_SPEC: &str = include_str!("../data/demo_spec.json");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column} (field `{field}`): {message}")]
    Parse { line: usize, column: usize, field: String, message: String },
    #[error("unsupported schema version {0:?} (expected \"{ver}\")", ver = spec_file::SCHEMA_VERSION)]
    SchemaVersionUnsupported(String),
    #[error("symbol `{symbol}`: {reason}")]
    InvariantViolation { symbol: String, reason: String },
    #[error("unknown suite `{0}`; known suites: {known}, all", known = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

#[derive(Debug, Parser)]
#[command(name = "ccrflow", version, about = "Classify quasi-free CCR flows and verify their invariants")]
pub struct Cli {
    /// Write the full report as JSON.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write the conjugacy matrix as CSV.
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// Seed for the verification suites [default: 0].
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Multiplies every tolerance and suite bound [default: 1, or the spec file's option].
    #[arg(long, global = true, value_name = "X", value_parser = parse_scale, allow_negative_numbers = true)]
    pub tol_scale: Option<f64>,
    /// Run every job on the calling thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify every symbol in a spec file.
    Classify {
        #[arg(long, value_name = "PATH")]
        spec: PathBuf,
    },
    /// Decide cocycle conjugacy for every pair of symbols in a spec file.
    Compare {
        #[arg(long, value_name = "PATH")]
        spec: PathBuf,
    },
    /// Run verification suites.
    Verify {
        #[arg(long, value_name = "NAME", default_value = "all")]
        suite: String,
    },
    /// Classify and compare the bundled demo spec.
    Demo,
}

fn parse_scale(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err("must be a positive finite number".into())
    }
}

pub fn classify_command(spec: &SpecFile, tol: &ToleranceConfig, exec: Execution) -> Report {
    let rows = classify_batch(&spec.symbols, tol, exec)
        .into_iter()
        .zip(&spec.symbols)
        .map(|(r, s)| match r {
            Ok(c) => ClassificationRow { name: s.name.clone(), classification: Some(c), error: None },
            Err(e) => ClassificationRow { name: s.name.clone(), classification: None, error: Some(e.to_string()) },
        })
        .collect();
    Report { classifications: rows, ..Report::new() }
}

pub fn compare_command(spec: &SpecFile, tol: &ToleranceConfig, exec: Execution) -> Report {
    let n = spec.symbols.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let verdicts = par::map(exec, &pairs, |&(i, j)| {
        let (a, b) = (&spec.symbols[i], &spec.symbols[j]);
        let (conjugate, reason) = match decide_cocycle_conjugacy(a, b, tol) {
            Ok(v) => (Some(v.conjugate), v.reason),
            Err(e) => (None, e.to_string()),
        };
        PairVerdict { a: a.name.clone(), b: b.name.clone(), conjugate, reason }
    });
    let names = spec.symbols.iter().map(|s| s.name.clone()).collect();
    Report { conjugacy: Some(ConjugacyReport::from_pairs(names, verdicts)), ..Report::new() }
}

pub fn verify_command(suite: &str, cfg: &SuiteConfig) -> Result<Report, CliError> {
    Ok(Report { seed: Some(cfg.seed), suites: run_suites(suite, cfg)?, ..Report::new() })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn execute(cli: &Cli) -> Result<Report, CliError> {
    let exec = if cli.sequential { Execution::Sequential } else { Execution::default() };
    let load = |path: &Path| -> Result<(SpecFile, ToleranceConfig), CliError> {
        let spec = parse_spec(path)?;
        let scale = cli.tol_scale.or(spec.options.tol_scale).unwrap_or(1.0);
        let tol = spec.tolerances().scaled(scale);
        Ok((spec, tol))
    };
    let report = match &cli.command {
        Command::Classify { spec } => {
            let (spec, tol) = load(spec)?;
            classify_command(&spec, &tol, exec)
        }
        Command::Compare { spec } => {
            let (spec, tol) = load(spec)?;
            compare_command(&spec, &tol, exec)
        }
        Command::Demo => {
            let spec = parse_spec_str(DEMO_SPEC)?;
            let tol = spec.tolerances().scaled(cli.tol_scale.unwrap_or(1.0));
            let mut report = classify_command(&spec, &tol, exec);
            report.conjugacy = compare_command(&spec, &tol, exec).conjugacy;
            report
        }
        Command::Verify { suite } => {
            let cfg = SuiteConfig { seed: cli.seed.unwrap_or(0), tol_scale: cli.tol_scale.unwrap_or(1.0), exec };
            verify_command(suite, &cfg)?
        }
    };
    if let Some(path) = &cli.csv {
        let matrix = report
            .conjugacy
            .as_ref()
            .ok_or_else(|| CliError::Usage("--csv needs a conjugacy matrix (use compare or demo)".into()))?;
        write_file(path, &matrix.to_csv())?;
    }
    if let Some(path) = &cli.json {
        write_file(path, &report.to_json())?;
    }
    Ok(report)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(report) => {
            print!("{}", report.render());
            i32::from(report.failed())
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
