//! `schmidt`: Schmidt decomposition of discretized bipartite states.
//!
//! Exit status is 0 on success, 1 for invalid input and 2 for numerical
//! failure.

mod commands;
mod output;

use clap::{Parser, Subcommand};
use commands::{GaussianArgs, WeightSource};
use output::{Format, Report};
use schmidt_core::discretize::DEFAULT_SPAN;
use schmidt_core::{Error, LogBase};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(name = "schmidt", version, about = "Schmidt decomposition of discretized bipartite states")]
struct Cli {
    /// Logarithm base for entropies and information.
    #[arg(long, global = true, default_value = "2")]
    base: LogBase,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the main result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form Schmidt weights and K next to numeric grid values.
    Table1 {
        #[command(flatten)]
        gaussian: GaussianArgs,
        /// Grid sizes per axis, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [30usize, 50, 100])]
        grids: Vec<usize>,
        /// Half-width of the grid in standard deviations.
        #[arg(long, default_value_t = DEFAULT_SPAN)]
        span: f64,
        #[arg(long, default_value_t = 6)]
        rows: usize,
    },
    /// Analytic and numeric Schmidt modes on the grid.
    Modes {
        #[command(flatten)]
        gaussian: GaussianArgs,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SPAN)]
        span: f64,
        #[arg(long, default_value_t = 4)]
        count: usize,
    },
    /// Decompose a state read from a file.
    Decompose {
        /// State file: JSON grid header line followed by CSV samples.
        #[arg(long)]
        state: PathBuf,
        /// Symbol count used for the information summary.
        #[arg(long, default_value_t = 1)]
        symbols: u64,
        /// Write the summary record here (CSV output only).
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Write the leading modes here as CSV.
        #[arg(long)]
        modes: Option<PathBuf>,
        /// Number of modes written with --modes.
        #[arg(long, default_value_t = 4)]
        mode_count: usize,
    },
    /// Grid mutual information against the closed form.
    MutualInfo {
        #[command(flatten)]
        gaussian: GaussianArgs,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 8.0)]
        span: f64,
    },
    /// Sweep of inverse temperature, K, rho squared and entropy.
    Thermo {
        #[arg(long, default_value_t = 1e-3)]
        beta_min: f64,
        #[arg(long, default_value_t = 50.0)]
        beta_max: f64,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Monte Carlo estimate of the coincidence probability.
    Simulate {
        #[arg(
            long,
            allow_negative_numbers = true,
            conflicts_with = "weights_file",
            required_unless_present = "weights_file"
        )]
        rho: Option<f64>,
        /// Weights separated by commas or whitespace.
        #[arg(long)]
        weights_file: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Information content and coincidence probability for given K.
    Info {
        #[arg(long, conflicts_with = "rho", required_unless_present = "rho")]
        k: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        rho: Option<f64>,
        #[arg(long, default_value_t = 1)]
        symbols: u64,
    },
}

enum Failure {
    Core(Error),
    Io(io::Error, PathBuf),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn write_to(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), Failure> {
    let wrap = |e| Failure::Io(e, path.map_or_else(|| PathBuf::from("<stdout>"), Path::to_path_buf));
    match path {
        Some(p) => {
            let mut w = BufWriter::new(File::create(p).map_err(wrap)?);
            f(&mut w).and_then(|_| w.flush()).map_err(wrap)
        }
        None => {
            let mut w = io::stdout().lock();
            f(&mut w).and_then(|_| w.flush()).map_err(wrap)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let base = cli.base;
    let report = match cli.command {
        Command::Table1 { gaussian, grids, span, rows } => commands::table1(&gaussian, &grids, span, rows)?,
        Command::Modes { gaussian, n, span, count } => commands::modes(&gaussian, n, span, count)?,
        Command::Decompose { state, symbols, summary, modes, mode_count } => {
            let d = commands::decompose_file(&state, symbols, modes.as_ref().map(|_| mode_count), base)?;
            if let (Some(path), Some(table)) = (modes.as_deref(), d.modes.as_ref()) {
                write_to(Some(path), |w| table.write_csv(w))?;
            }
            if let (Some(path), Report::Spectrum { summary: record, .. }) = (summary.as_deref(), &d.report) {
                write_to(Some(path), |w| record.to_table().write_csv(w))?;
            }
            d.report
        }
        Command::MutualInfo { gaussian, n, span } => commands::mutual_info(&gaussian, n, span, base)?,
        Command::Thermo { beta_min, beta_max, points } => commands::thermo(beta_min, beta_max, points, base)?,
        Command::Simulate { rho, weights_file, n, trials, seed } => {
            let source = match (rho, weights_file) {
                (Some(r), _) => WeightSource::Rho(r),
                (None, Some(p)) => WeightSource::File(p),
                (None, None) => unreachable!("clap requires one weight source"),
            };
            commands::simulate(&source, n, trials, seed)?
        }
        Command::Info { k, rho, symbols } => {
            let k = match (k, rho) {
                (Some(k), _) => k,
                (None, Some(r)) => schmidt_core::gaussian_model::schmidt_number_from_rho(r)?,
                (None, None) => unreachable!("clap requires K or rho"),
            };
            commands::info(k, symbols, base)?
        }
    };
    write_to(cli.output.as_deref(), |w| report.render(cli.format, w))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
        Err(Failure::Io(e, path)) => {
            eprintln!("error: writing {}: {e}", path.display());
            ExitCode::from(1)
        }
    }
}
