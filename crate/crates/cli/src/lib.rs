//! Command-line front end for the `hardy-core` engines.

pub mod commands;
pub mod config;
pub mod error;
pub mod render;
pub mod reports;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub use config::{Format, RunConfig};
pub use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "hardy",
    version,
    about = "Hardy's two-interferometer experiment: states, probabilities, criteria"
)]
pub struct Cli {
    /// TOML run configuration (seed, format, boosts, tolerances, events).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// RNG seed for sampling; overrides the config.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Frame velocity used by frame-bound commands (ER1 frame, preferred
    /// collapse frame).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Overrides every tolerance (amplitude, geometry, certainty).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Er1,
    Er3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Intersection,
    Union,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    /// Collapse on equal-time slices of the `--beta` frame.
    Vn,
    /// Collapse on the backward light cone of each detection.
    Hk,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply an evolution schedule to the source state.
    Evolve {
        /// Comma-separated steps: bs1+, bs1-, ann, bs2+, bs2-.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        steps: Vec<String>,
    },
    /// Intermediate-path probabilities given a D+D- coincidence.
    Abl,
    /// Simulate runs and compare counts with the outcome distribution.
    Sample {
        #[arg(short = 'n', long, default_value_t = 160_000)]
        n: u64,
    },
    /// Evaluate an element-of-reality criterion.
    Eor {
        #[arg(long, value_enum)]
        criterion: CriterionArg,
        /// Observable such as U+, U-, U+U-.
        #[arg(long, allow_hyphen_values = true)]
        observable: String,
        #[arg(long, value_enum, default_value = "intersection")]
        rule: RuleArg,
        /// Comma-separated detectors known to have fired (D+, D-, C+, C-).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        outcomes: Vec<String>,
        /// Current time in the `--beta` frame (ER1 only).
        #[arg(long, allow_hyphen_values = true)]
        now: Option<f64>,
        /// The measurement of the observable is actually carried out (ER3).
        #[arg(long)]
        performed: bool,
    },
    /// State assigned by a collapse model, given that D+ and D- both fire.
    Collapse {
        #[arg(long, value_enum)]
        model: ModelArg,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<f64>,
        /// Emit a region map with this many samples per axis instead (hk only).
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Causal classification of an event against the configured geometry.
    Regions {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
    },
    /// The five-step derivation of the Hardy contradiction.
    Contradiction {
        /// Leave out the product-rule step.
        #[arg(long)]
        no_product_rule: bool,
    },
    /// Multiplicative value assignments on a diagonal projector family.
    Theorem {
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
}

/// Resolved settings: command-line flags over config file over defaults.
#[derive(Debug, Clone)]
pub struct Settings {
    pub config: RunConfig,
    pub seed: u64,
    pub beta: f64,
    pub format: Format,
}

impl Settings {
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let mut config = match &cli.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(tol) = cli.tol {
            config.tolerances.amplitude = tol;
            config.tolerances.geometry = tol;
            config.tolerances.certainty = tol;
            if !config.tolerances.is_valid() {
                return Err(CliError::Usage(format!("--tol must be positive and finite, got {tol}")));
            }
        }
        Ok(Settings {
            seed: cli.seed.or(config.seed).unwrap_or(0),
            beta: cli.beta.unwrap_or(0.0),
            format: cli.format.or(config.format).unwrap_or_default(),
            config,
        })
    }
}

/// Runs one command and returns the text to print.
pub fn run(cli: &Cli) -> Result<String, CliError> {
    let settings = Settings::resolve(cli)?;
    let value = commands::dispatch(&cli.command, &settings)?;
    match settings.format {
        Format::Json => Ok(value.json),
        Format::Table => Ok(render::table(&value.command, &value.tree)),
    }
}
