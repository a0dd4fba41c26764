//! Argument parsing and command dispatch.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::commands;
use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::exec::Parallel;
use crate::report::{write_atomic, write_csv_dir, Report};
use crate::suites;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "varnorm",
    version,
    about = "Norms, operators and compactness diagnostics for weighted variable-exponent spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Scenario configuration (JSON); defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Override the configured seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Export criterion curves as CSV files into this directory.
    #[arg(long, value_name = "DIR")]
    csv: Option<PathBuf>,
    /// Override the ladder pass threshold.
    #[arg(long, value_name = "X")]
    threshold: Option<f64>,
    /// Record wall time in the report (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Norms of the configured functions or sequences.
    Norm(Common),
    /// Modulars of the configured functions or sequences.
    Modular(Common),
    /// Maximal function values at the configured points.
    Maximal(Common),
    /// Compactness criteria, with the net oracle when configured.
    Compactness(Common),
    /// Greedy ε-net sizes across refinement levels.
    Net(Common),
    /// Seeded property suites; exits 1 when any suite fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// A suite name or "all".
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Lower estimate of the A_p(.) constant of the weight.
    Apx(Common),
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("varnorm: {e}");
            e.exit_code()
        }
    }
}

fn load(common: &Common) -> Result<ScenarioConfig, CliError> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            ScenarioConfig::from_json(&text)?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(t) = common.threshold {
        cfg.ladders.threshold = t;
    }
    Ok(cfg)
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let exec = Parallel::from_env()?;
    let start = Instant::now();
    let (common, mut report, code) = match &cli.command {
        Command::Norm(c) => (c, commands::norm(&load(c)?, &exec)?, EXIT_OK),
        Command::Modular(c) => (c, commands::modular(&load(c)?, &exec)?, EXIT_OK),
        Command::Maximal(c) => (c, commands::maximal_cmd(&load(c)?, &exec)?, EXIT_OK),
        Command::Compactness(c) => (c, commands::compactness(&load(c)?, &exec)?, EXIT_OK),
        Command::Net(c) => (c, commands::net(&load(c)?, &exec)?, EXIT_OK),
        Command::Apx(c) => (c, commands::apx(&load(c)?)?, EXIT_OK),
        Command::Verify { common, suite } => {
            let cfg = load(common)?;
            let threshold = cfg.ladders.resolve()?.threshold;
            let results = suites::verify(suite, cfg.seed, threshold, &exec)?;
            let passed = results.iter().all(|r| r.passed());
            let mut by_name = serde_json::Map::new();
            for r in &results {
                by_name.insert(r.name.to_string(), r.to_json());
            }
            let result = json!({
                "suite": suite,
                "seed": cfg.seed,
                "suites": Value::Object(by_name),
                "passed": passed,
            });
            let report = Report::new(
                "verify",
                serde_json::to_value(&cfg).expect("serializes"),
                result,
            );
            (
                common,
                report,
                if passed { EXIT_OK } else { EXIT_VERIFY_FAILED },
            )
        }
    };
    if common.timing {
        report.wall_time = Some(start.elapsed().as_secs_f64());
    }
    emit(common, &report)?;
    Ok(code)
}

fn emit(common: &Common, report: &Report) -> Result<(), CliError> {
    let text = report.to_json();
    match &common.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    if let Some(dir) = &common.csv {
        write_csv_dir(dir, &report.curves)?;
    }
    Ok(())
}
