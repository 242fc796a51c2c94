//! Command-line front end: loads a configuration, runs one pipeline and
//! writes deterministic CSV/JSON.

pub mod commands;
pub mod format;
pub mod verify;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use su11_core::Error as CoreError;

pub use verify::{run_verify, Check, Suite, VerificationReport};

#[derive(Debug, Parser)]
#[command(name = "su11", version, about = "Time-dependent SU(1,1) systems: trajectories, group elements, Bargmann functions, wave functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Report errors as JSON on stderr.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed for randomized property sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Standard,
    General,
    Alt,
    AltInverse,
    Legendre,
    Series,
}

impl FormArg {
    pub fn form(self) -> su11_core::bargmann::Form {
        use su11_core::bargmann::Form;
        match self {
            FormArg::Standard => Form::Standard,
            FormArg::General => Form::General,
            FormArg::Alt => Form::Alt,
            FormArg::AltInverse => Form::AltInverse,
            FormArg::Legendre => Form::Legendre,
            FormArg::Series => Form::Series,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the classical equations and write the trajectory CSV.
    Trajectory {
        #[arg(short, long)]
        config: PathBuf,
        /// CSV path; a JSON sidecar with Ω and the constants is written
        /// next to it. Without it the CSV goes to stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the group element and its disentangled parameters at time T.
    Group {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated Bargmann matrix at time T.
    Bargmann {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        t: f64,
        #[arg(long, value_enum, default_value = "standard")]
        form: FormArg,
        /// Evaluate a second form and report the entrywise deviation.
        #[arg(long, value_enum)]
        compare: Option<FormArg>,
        /// CSV path; metadata JSON is written next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evolved wave function φ_n^- on the configured radial grid.
    Wavefn {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Overlap of φ_m^{s-} with φ_n^- by quadrature against the Bargmann
    /// closed form.
    Overlap {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the property checks at configuration scale.
    Verify {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized special-function identity sweeps.
    #[command(name = "specfun-selftest", hide = true)]
    SpecfunSelftest {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 12)]
        max_index: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("usage: {0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    /// 0 ok, 1 verification failure, 2 config/usage, 3 I/O, 4 numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Core(e) => match e {
                CoreError::Config { .. } | CoreError::Usage(_) | CoreError::NotApplicable(_) | CoreError::Domain(_) => 2,
                CoreError::Io(_) => 3,
                _ => 4,
            },
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Verification(_) => "verification",
            CliError::Usage(_) => "usage",
            CliError::Io { .. } => "io",
            CliError::Core(e) => match e {
                CoreError::Domain(_) => "domain",
                CoreError::SingularM { .. } => "singular_mass",
                CoreError::Config { .. } => "config",
                CoreError::Integration(_) => "integration",
                CoreError::Grid(_) => "grid",
                CoreError::Invariant(_) => "invariant",
                CoreError::Usage(_) => "usage",
                CoreError::Pole { .. } => "pole",
                CoreError::NotApplicable(_) => "not_applicable",
                CoreError::Convergence { .. } => "convergence",
                CoreError::Quadrature(_) => "quadrature",
                CoreError::Numerics(_) => "numerics",
                CoreError::Io(_) => "io",
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Runs one invocation; output goes to files or stdout.
pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Trajectory { config, out } => commands::run_trajectory(config, out.as_deref()),
        Command::Group { config, t, out } => commands::run_group(config, *t, out.as_deref()),
        Command::Bargmann {
            config,
            t,
            form,
            compare,
            out,
        } => commands::run_bargmann(config, *t, *form, *compare, out.as_deref()),
        Command::Wavefn { config, n, t, out } => commands::run_wavefn(config, *n, *t, out.as_deref()),
        Command::Overlap { config, m, n, t, out } => commands::run_overlap(config, *m, *n, *t, out.as_deref()),
        Command::Verify { config, suite, out } => commands::run_verify_command(config, *suite, out.as_deref()),
        Command::SpecfunSelftest {
            samples,
            max_index,
            out,
        } => commands::run_specfun_selftest(cli.seed, *samples, *max_index, out.as_deref()),
    }
}

/// Applies `SU11_THREADS` to the global thread pool.
pub fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("SU11_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Usage(format!("SU11_THREADS must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size thread pool: {e}")))
}
