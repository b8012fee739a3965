//! `catamp`: parameter sweeps over the cat generation and amplification
//! models, written as long-format tables with a run manifest.

mod axis;
mod experiments;
mod output;
mod settings;

use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, CommandFactory, FromArgMatches, Parser, ValueEnum};

use experiments::Experiment;
use settings::Settings;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

#[derive(Parser, Debug)]
#[command(
    name = "catamp",
    version,
    about = "Sweeps heralded cat-state generation and homodyne-heralded amplification",
    long_about = "Sweeps heralded cat-state generation and homodyne-heralded amplification.\n\n\
        Axis flags take a value, a comma list (1,2,3) or an inclusive range start:stop:steps. \
        Squeezing is in dB, homodyne windows in shot-noise units (a width of 0 means an ideal \
        slice at x = 0), and Wigner coordinates in absolute units with hbar = 1.\n\n\
        Output is a long-format table, one row per grid point, with a status column. \
        CSV files get a .manifest.json sidecar; JSON output carries the manifest inline.",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    experiment: Experiment,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every experiment. Unset flags fall back to `--config`,
/// then to the experiment's defaults (listed by `catamp <experiment> --help`).
#[derive(Args, Debug, Default, Clone)]
pub struct Opts {
    /// Flat TOML file of flag values (keys are the long flag names)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<String>,
    /// Squeezing magnitude in dB
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xi: Option<String>,
    /// Impurity: anti-squeezing is epsilon times the squeezing
    #[arg(long, global = true)]
    pub epsilon: Option<String>,
    /// Squeezing purity in (0, 1]; replaces --epsilon where supported
    #[arg(long, global = true)]
    pub purity: Option<String>,
    /// Transmissivity of the photon-subtraction beam splitter
    #[arg(long = "T", global = true)]
    pub t: Option<String>,
    /// Homodyne acceptance window in SNU (0 = ideal slice)
    #[arg(long, global = true)]
    pub window: Option<String>,
    /// Input cat amplitude
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Target cat amplitude (omit to optimize over it where supported)
    #[arg(long, global = true)]
    pub beta: Option<String>,
    /// Target cat parity: odd or even
    #[arg(long, global = true)]
    pub parity: Option<String>,
    /// Number of iterations (at most 12)
    #[arg(long, global = true)]
    pub k: Option<String>,
    /// Iteration seed: squeezed-photon or cat
    #[arg(long, global = true)]
    pub seed: Option<String>,
    /// Iteration closed-form exponent: doubling (2^k) or linear (2k)
    #[arg(long, global = true)]
    pub exponent: Option<String>,
    /// Phase-space grid for Wigner output, start:stop:steps (used for x and p)
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Output file (default: stdout, no manifest)
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<String>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Suppress progress and summary messages
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Also write a gnuplot script next to --out
    #[arg(long, global = true)]
    pub plot: bool,
}

fn run(cli: Cli) -> Result<(), CliError> {
    let settings = Settings::resolve(cli.experiment, &cli.opts)?;
    let plan = cli.experiment.plan(&settings)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(settings.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Usage(format!("--jobs: {e}")))?;
    if !settings.quiet {
        eprintln!("catamp {}: {} grid points", cli.experiment.name(), plan.len());
    }
    let started = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
    let clock = Instant::now();
    let table = pool.install(|| plan.run());
    let elapsed = clock.elapsed().as_secs_f64();
    let run = output::Run {
        experiment: cli.experiment.name(),
        settings: &settings,
        table: &table,
        started_unix: started,
        wall_clock_seconds: elapsed,
    };
    output::emit(&run)?;
    let counts = table.status_counts();
    if !settings.quiet {
        eprintln!(
            "done in {elapsed:.2} s: {} ok, {} underflow, {} error",
            counts.ok, counts.underflow, counts.error
        );
    }
    if counts.error > 0 {
        let first = table
            .rows
            .iter()
            .find(|r| r.status == output::Status::Error)
            .map(|r| r.note.clone())
            .unwrap_or_default();
        return Err(CliError::Numeric(format!("{} point(s) failed; first: {first}", counts.error)));
    }
    Ok(())
}

/// The command with each experiment's defaults appended to its help.
fn command() -> clap::Command {
    let mut cmd = Cli::command();
    for exp in experiments::ALL {
        let defaults: Vec<String> = exp
            .params()
            .iter()
            .map(|(key, default)| format!("  --{key} {}", default.unwrap_or("(unset)")))
            .collect();
        let text = format!("Parameters and defaults:\n{}", defaults.join("\n"));
        cmd = cmd.mut_subcommand(exp.name(), |sub| sub.after_help(text));
    }
    cmd
}

fn main() -> ExitCode {
    let matches = command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("catamp: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
