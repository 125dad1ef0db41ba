//! Command-line front end: argument parsing, output formats and exit codes.

// `!(a <= b)` is used on purpose so that NaN counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod literal;
pub mod record;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ml2v::selftest::Suite;
use ml2v::{Complex64, TruncationOrders};

use commands::{MethodArg, Settings, EXIT_DOMAIN};
use record::Format;

#[derive(Debug, Parser)]
#[command(name = "ml2v", version, about = "Two-variable Mittag-Leffler function E_{a,b}(x, y; mu)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate at one point.
    Eval {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = literal::parse_complex, allow_hyphen_values = true)]
        x: Complex64,
        #[arg(long, value_parser = literal::parse_complex, allow_hyphen_values = true)]
        y: Complex64,
    },
    /// Evaluate on a grid, one row per point in x-major order.
    Grid {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Evaluate every applicable method and report pairwise differences,
    /// or replay the frozen oracle corpus.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = literal::parse_complex, allow_hyphen_values = true, conflicts_with = "x_range")]
        x: Option<Complex64>,
        #[arg(long, value_parser = literal::parse_complex, allow_hyphen_values = true, conflicts_with = "y_range")]
        y: Option<Complex64>,
        #[arg(long, allow_hyphen_values = true)]
        x_range: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        y_range: Option<String>,
        #[arg(long, default_value_t = 1)]
        nx: usize,
        #[arg(long, default_value_t = 1)]
        ny: usize,
        /// Include the extended-precision oracle.
        #[arg(long)]
        oracle: bool,
        /// Replay the frozen corpus (or the given JSON-lines file) instead.
        #[arg(long)]
        corpus: bool,
        #[arg(long, requires = "corpus")]
        corpus_file: Option<PathBuf>,
    },
    /// Run the invariant suites.
    Selftest {
        /// Run only this suite (repeatable).
        #[arg(long, value_parser = parse_suite)]
        suite: Vec<Suite>,
    },
    /// Recompute the oracle corpus and write it as JSON lines.
    Freeze {
        #[arg(long, default_value_t = ml2v::corpus::FREEZE_DIGITS)]
        digits: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, value_parser = literal::parse_complex, allow_hyphen_values = true, default_value = "1")]
    pub mu: Complex64,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 3)]
    pub p_alpha: usize,
    #[arg(long, default_value_t = 3)]
    pub p_beta: usize,
    /// Contour arc radius for the integral methods.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Contour ray angle for the integral methods (sector angle for asymptotic).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Digits for the oracle method.
    #[arg(long, default_value_t = 30)]
    pub digits: u32,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// "start:end" (complex literals allowed) or a single value.
    #[arg(long, allow_hyphen_values = true)]
    pub x_range: String,
    #[arg(long, allow_hyphen_values = true)]
    pub y_range: String,
    #[arg(long, default_value_t = 1)]
    pub nx: usize,
    #[arg(long, default_value_t = 1)]
    pub ny: usize,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    Suite::parse(s).ok_or_else(|| {
        let names: Vec<_> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite {s:?}; expected one of {}", names.join(", "))
    })
}

impl Common {
    fn settings(&self) -> Result<Settings, i32> {
        if !(self.tol > 0.0) {
            eprintln!("error: tol must be positive");
            return Err(EXIT_DOMAIN);
        }
        let params = commands::parameters(self.alpha, self.beta, self.mu)?;
        if params.thin_window() {
            let (lo, hi) = params.theta_window();
            eprintln!("warning: admissible theta window ({lo:.4}, {hi:.4}] is thin; contours sit close to the growth limit");
        }
        let orders = TruncationOrders::new(self.p_alpha, self.p_beta).map_err(|e| {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        })?;
        Ok(Settings {
            orders,
            epsilon: self.epsilon,
            theta: self.theta,
            digits: self.digits,
            ..Settings::new(params, self.method, self.tol)
        })
    }
}

fn axes(xr: &str, nx: usize, yr: &str, ny: usize) -> Result<(Vec<Complex64>, Vec<Complex64>), i32> {
    let f = |r: &str, n| {
        commands::axis(r, n).map_err(|e| {
            eprintln!("error: {e}");
            EXIT_DOMAIN
        })
    };
    Ok((f(xr, nx)?, f(yr, ny)?))
}

fn output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Runs a parsed command and returns the exit code.
pub fn run(cli: Cli) -> anyhow::Result<i32> {
    let stdout = || BufWriter::new(io::stdout().lock());
    match cli.command {
        Command::Eval { common, x, y } => match common.settings() {
            Ok(s) => commands::cmd_eval(stdout(), x, y, &s, common.format),
            Err(code) => Ok(code),
        },
        Command::Grid { common, grid } => {
            let s = match common.settings() {
                Ok(s) => s,
                Err(code) => return Ok(code),
            };
            match axes(&grid.x_range, grid.nx, &grid.y_range, grid.ny) {
                Ok((xs, ys)) => commands::cmd_grid(stdout(), &xs, &ys, &s, common.format),
                Err(code) => Ok(code),
            }
        }
        Command::Compare { common, x, y, x_range, y_range, nx, ny, oracle, corpus, corpus_file } => {
            if corpus {
                let entries = match corpus_file {
                    Some(p) => ml2v::corpus::parse_corpus(&std::fs::read_to_string(p)?)?,
                    None => ml2v::corpus::frozen()?,
                };
                return commands::cmd_replay(stdout(), &entries, common.tol);
            }
            let s = match common.settings() {
                Ok(s) => s,
                Err(code) => return Ok(code),
            };
            let xr = x.map(literal::format_complex).or(x_range);
            let yr = y.map(literal::format_complex).or(y_range);
            let (Some(xr), Some(yr)) = (xr, yr) else {
                eprintln!("error: compare needs --x/--x-range and --y/--y-range, or --corpus");
                return Ok(EXIT_DOMAIN);
            };
            match axes(&xr, nx, &yr, ny) {
                Ok((xs, ys)) => commands::cmd_compare(stdout(), &xs, &ys, &s, oracle),
                Err(code) => Ok(code),
            }
        }
        Command::Selftest { suite } => commands::cmd_selftest(stdout(), &suite),
        Command::Freeze { digits, output: path } => commands::cmd_freeze(output(path.as_ref())?, digits),
    }
}
