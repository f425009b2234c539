//! Command-line front end for `geophase`.
//!
//! Exit codes: 0 all checks pass, 1 a residual check failed, 2 usage or
//! configuration error, 3 degenerate spectrum or singular coupling.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use config::{Format, LambdaKind, Quantity, RunConfig, SweepParam};
use output::Status;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] geophase::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use geophase::Error as E;
        match self {
            CliError::Model(E::DegenerateSpectrum { .. } | E::InfiniteCoupling { .. }) => {
                EXIT_SINGULAR
            }
            _ => EXIT_USAGE,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "geophase",
    version,
    about = "Geometric phase and gauge structure of a qubit"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Flat `key = value` file; flags given on the command line win
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Write to PATH instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Omit the timestamp from the metadata
    #[arg(long, global = true)]
    pub reproducible: bool,
    /// Read --theta, --gamma1, --gamma2 and theta sweep bounds as degrees
    #[arg(long, global = true)]
    pub degrees: bool,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega2: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma1: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma2: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the evolved state over a time grid
    Evolve {
        /// End of the grid; defaults to one period
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, value_parser = ["phi", "psi"])]
        selector: Option<String>,
        /// Add RK4 columns and their deviation from the closed form
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Total, dynamical and geometric phase after n cycles
    Phase {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        f0: Option<f64>,
    },
    /// Residuals of the gauge structure
    GaugeCheck {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        lambda: Option<Vec<LambdaKind>>,
        /// Slope of the linear gauge function
        #[arg(long, allow_hyphen_values = true)]
        lambda_c: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        f0: Option<f64>,
        #[arg(long)]
        fd_step: Option<f64>,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Cyclic invariant, entropy action and operator identities
    Invariant {
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t: Option<Vec<f64>>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Closed form against numeric value over a parameter range
    Sweep {
        #[arg(long)]
        param: Option<SweepParam>,
        #[arg(long, allow_hyphen_values = true)]
        start: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        stop: Option<f64>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        quantity: Option<Vec<Quantity>>,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        steps: Option<usize>,
    },
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// Defaults, then the config file, then flags.
pub fn effective_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    let c = &cli.common;
    if let Some(path) = &c.config {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
        cfg.apply_kv(&text)?;
    }
    let angle = |v: Option<f64>| v.map(|x| if c.degrees { x.to_radians() } else { x });
    set(&mut cfg.format, c.format);
    if c.reproducible {
        cfg.reproducible = true;
    }
    set(&mut cfg.omega1, c.omega1);
    set(&mut cfg.omega2, c.omega2);
    set(&mut cfg.theta, angle(c.theta));
    set(&mut cfg.gamma1, angle(c.gamma1));
    set(&mut cfg.gamma2, angle(c.gamma2));

    match &cli.command {
        Command::Evolve {
            t_max,
            points,
            selector,
            oracle,
            dt,
        } => {
            if t_max.is_some() {
                cfg.t_max = *t_max;
            }
            set(&mut cfg.points, *points);
            set(&mut cfg.selector, selector.clone());
            if *oracle {
                cfg.oracle = true;
            }
            set(&mut cfg.dt, *dt);
        }
        Command::Phase {
            n,
            steps,
            samples,
            f0,
        } => {
            set(&mut cfg.n, *n);
            set(&mut cfg.steps, *steps);
            set(&mut cfg.samples, *samples);
            set(&mut cfg.f0, *f0);
        }
        Command::GaugeCheck {
            t,
            lambda,
            lambda_c,
            f0,
            fd_step,
            n,
        } => {
            set(&mut cfg.t, t.clone());
            set(&mut cfg.lambda, lambda.clone());
            set(&mut cfg.lambda_c, *lambda_c);
            set(&mut cfg.f0, *f0);
            set(&mut cfg.fd_step, *fd_step);
            set(&mut cfg.n, *n);
        }
        Command::Invariant {
            n,
            steps,
            t,
            points,
        } => {
            set(&mut cfg.n, *n);
            set(&mut cfg.steps, *steps);
            set(&mut cfg.t, t.clone());
            set(&mut cfg.points, *points);
        }
        Command::Sweep {
            param,
            start,
            stop,
            count,
            quantity,
            n,
            steps,
        } => {
            set(&mut cfg.sweep.param, *param);
            let bound = |v: Option<f64>| {
                if cfg.sweep.param == SweepParam::Theta {
                    angle(v)
                } else {
                    v
                }
            };
            let (start, stop) = (bound(*start), bound(*stop));
            set(&mut cfg.sweep.start, start);
            set(&mut cfg.sweep.stop, stop);
            set(&mut cfg.sweep.count, *count);
            set(&mut cfg.quantity, quantity.clone());
            set(&mut cfg.n, *n);
            set(&mut cfg.steps, *steps);
        }
    }
    Ok(cfg)
}

fn execute(cli: &Cli, cfg: &RunConfig) -> Result<output::Report, CliError> {
    match cli.command {
        Command::Evolve { .. } => commands::evolve_cmd(cfg),
        Command::Phase { .. } => commands::phase_cmd(cfg),
        Command::GaugeCheck { .. } => commands::gauge_check_cmd(cfg),
        Command::Invariant { .. } => commands::invariant_cmd(cfg),
        Command::Sweep { .. } => commands::sweep_cmd(cfg),
    }
}

fn run_parsed(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    let cfg = effective_config(cli)?;
    let report = execute(cli, &cfg)?;
    let text = output::render(&report, &cfg);
    match &cli.common.output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?,
        None => out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    Ok(match report.status {
        Status::Pass => EXIT_OK,
        Status::Fail => EXIT_FAIL,
        Status::Skipped => EXIT_SINGULAR,
    })
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return e.exit_code();
        }
    };
    match run_parsed(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
