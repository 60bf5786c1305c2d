//! Command-line front end: parses flags, runs an experiment and writes its CSV,
//! metadata and plot files.

pub mod error;
pub mod experiments;
pub mod output;
pub mod plot;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map};

use qwalk_core::rl::{default_episodes, StateDistribution, TrainConfig};

pub use error::{CliError, CliResult};
pub use output::{Cell, Dataset, Report, Table};

use experiments::{DEFAULT_OMEGA_POINTS, DEFAULT_SAMPLES, DEFAULT_THETA_POINTS};

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Coin-sequence entanglement experiments for a 1D quantum walk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Seed for every random draw.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory, created if absent.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    /// θ uniform, φ = 0.
    Phi0,
    /// θ and φ uniform.
    Random,
}

impl From<Dist> for StateDistribution {
    fn from(d: Dist) -> Self {
        match d {
            Dist::Phi0 => StateDistribution::FixedPhiZero,
            Dist::Random => StateDistribution::FullyRandom,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Schmidt norm and Bloch vector of one coin sequence.
    EvalSeq {
        /// e.g. "HFHFF", "F,H^7,F,H^6", "GH(0.5),F,F".
        #[arg(long)]
        seq: String,
        #[arg(long, conflicts_with = "theta_grid")]
        theta: Option<f64>,
        /// Number of θ points on [0, π].
        #[arg(long)]
        theta_grid: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Universal sequence over θ for several m.
    Universal {
        #[arg(long, value_delimiter = ',', default_values_t = [1usize, 2, 3, 4, 5])]
        m_list: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_THETA_POINTS)]
        theta_grid: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Mean and variance of the universal sequence as the step count grows.
    Converge {
        #[arg(long, default_value_t = 50)]
        m_max: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Generalized Hadamard angle sweep.
    OmegaSweep {
        #[arg(long, value_delimiter = ',', default_values_t = [2usize, 3, 7])]
        m_list: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_OMEGA_POINTS)]
        grid: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Long-time limit of the universal sequence.
    Asymptotic {
        #[arg(long, default_value_t = DEFAULT_THETA_POINTS)]
        grid: usize,
        #[arg(long, default_value_t = experiments::default_quadrature())]
        quadrature: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive ranking of all H/F sequences of a given length.
    BruteForce {
        #[arg(long, default_value_t = 5)]
        steps: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Dist::Phi0)]
        dist: Dist,
        #[command(flatten)]
        common: Common,
    },
    /// Q-learning over coin sequences.
    Train {
        #[arg(long, default_value_t = 5)]
        steps: usize,
        /// Defaults to 20000 up to 7 steps and 100000 beyond.
        #[arg(long)]
        episodes: Option<usize>,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, value_enum, default_value_t = Dist::Phi0)]
        dist: Dist,
        #[arg(long, default_value_t = 0.7)]
        lr: f64,
        #[arg(long, default_value_t = 0.9)]
        eps_init: f64,
        #[arg(long, default_value_t = 0.01)]
        eps_fin: f64,
        /// Points per axis of the (θ, φ) surface.
        #[arg(long, default_value_t = DEFAULT_THETA_POINTS)]
        surface_grid: usize,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::EvalSeq { common, .. }
            | Command::Universal { common, .. }
            | Command::Converge { common, .. }
            | Command::OmegaSweep { common, .. }
            | Command::Asymptotic { common, .. }
            | Command::BruteForce { common, .. }
            | Command::Train { common, .. } => common,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::EvalSeq { .. } => "eval-seq",
            Command::Universal { .. } => "universal",
            Command::Converge { .. } => "converge",
            Command::OmegaSweep { .. } => "omega-sweep",
            Command::Asymptotic { .. } => "asymptotic",
            Command::BruteForce { .. } => "brute-force",
            Command::Train { .. } => "train",
        }
    }
}

/// Runs the experiment without writing anything.
pub fn build_report(command: &Command) -> CliResult<Report> {
    let seed = command.common().seed;
    match command {
        Command::EvalSeq {
            seq, theta, theta_grid, phi, ..
        } => {
            let thetas = match (theta, theta_grid) {
                (Some(t), _) => vec![*t],
                (None, Some(n)) => experiments::theta_grid(*n)?,
                (None, None) => experiments::theta_grid(DEFAULT_THETA_POINTS)?,
            };
            experiments::eval_seq(seq, &thetas, *phi)
        }
        Command::Universal { m_list, theta_grid, .. } => experiments::universal(m_list, *theta_grid),
        Command::Converge { m_max, samples, .. } => experiments::converge(*m_max, *samples, seed),
        Command::OmegaSweep {
            m_list, grid, samples, ..
        } => experiments::omega_sweep(m_list, *grid, *samples, seed),
        Command::Asymptotic { grid, quadrature, .. } => experiments::asymptotic(*grid, *quadrature),
        Command::BruteForce {
            steps, samples, dist, ..
        } => experiments::brute_force(*steps, *samples, (*dist).into(), seed),
        Command::Train {
            steps,
            episodes,
            runs,
            dist,
            lr,
            eps_init,
            eps_fin,
            surface_grid,
            samples,
            ..
        } => {
            let config = TrainConfig {
                n_steps: *steps,
                n_episodes: episodes.unwrap_or_else(|| default_episodes(*steps)),
                learning_rate: *lr,
                eps_init: *eps_init,
                eps_fin: *eps_fin,
                seed,
                state_distribution: (*dist).into(),
            };
            config.validate()?;
            experiments::train(&experiments::TrainSettings {
                config,
                runs: *runs,
                surface_points: *surface_grid,
                eval_samples: *samples,
            })
        }
    }
}

/// Runs the experiment and writes its files; returns the paths written.
pub fn run(cli: &Cli) -> CliResult<Vec<PathBuf>> {
    let report = build_report(&cli.command)?;
    let common = cli.command.common();
    let mut meta = Map::new();
    meta.insert("command".into(), json!(cli.command.name()));
    meta.insert("seed".into(), json!(common.seed));
    Ok(output::write_report(&common.out, &report, &meta)?)
}
