use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use dashu::rational::RBig;
use ptcubic_core::numeric::parse_rational;

use crate::error::CliError;

pub const DEFAULT_ORDER: usize = 46;
pub const DEFAULT_PRECISION: usize = 30;
pub const MIN_PRECISION: usize = 10;
pub const DEFAULT_PADE_DEPTH: usize = 22;
pub const DEFAULT_WKB_DEPTH: usize = 7;
pub const CACHE_FILE_NAME: &str = "coefficients.bncache";
pub const CACHE_DIR_ENV: &str = "PTCUBIC_CACHE_DIR";

/// Couplings of the energy table.
pub const REFERENCE_LAMBDAS: [&str; 8] = ["1/64", "1/32", "1/16", "1/8", "1/4", "1/2", "1", "2"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Exact perturbation coefficients b_1..b_order
    Coeffs,
    /// Diagonal and subdiagonal Padé ladders at t = lambda^2
    Pade,
    /// Padé-summed ground-state energies
    Energy,
    /// Ground-state energy from the shooting solver
    Shoot,
    /// Leading and WKB growth ratios for every b_n
    Growth,
    /// Dispersion-integral moments n = 1..order
    Dispersion,
    /// Bounce action and leading Im E for each eps
    Bounce,
    /// Run the acceptance checks and report pass/fail per criterion
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Coeffs => "coeffs",
            Command::Pade => "pade",
            Command::Energy => "energy",
            Command::Shoot => "shoot",
            Command::Growth => "growth",
            Command::Dispersion => "dispersion",
            Command::Bounce => "bounce",
            Command::Verify => "verify",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ptcubic", version, about = "Large-order perturbation analysis of H = p^2 + x^2/4 + i lambda x^3")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Number of coefficients b_n to use
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Couplings as exact rationals, e.g. 1/8 or 0.125 (comma separated)
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub lambda: Vec<String>,
    /// Cubic couplings for `bounce` (comma separated rationals)
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub eps: Vec<String>,
    /// Decimal digits of reported values
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    pub precision: usize,
    /// Padé depth K (default 22) or WKB depth for `growth` (default 7)
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Coefficient cache file
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Directory holding the default cache file
    #[arg(long, global = true, env = CACHE_DIR_ENV)]
    pub cache_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Table)]
    pub format: OutputFormat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub order: usize,
    pub lambdas: Vec<RBig>,
    pub epsilons: Vec<RBig>,
    pub precision: usize,
    pub depth: usize,
    pub cache_path: Option<PathBuf>,
    pub format: OutputFormat,
}

fn parse_list(values: &[String], flag: &str, defaults: &[&str]) -> Result<Vec<RBig>, CliError> {
    let source: Vec<&str> = if values.is_empty() {
        defaults.to_vec()
    } else {
        values.iter().map(String::as_str).collect()
    };
    source
        .into_iter()
        .map(|text| {
            parse_rational(text.trim())
                .map_err(|e| CliError::InvalidConfig(format!("--{flag} {text:?}: {e}")))
        })
        .collect()
}

fn is_positive(value: &RBig) -> bool {
    *value > RBig::ZERO
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let lambda_defaults: &[&str] = match cli.command {
            Command::Pade => &["1/8"],
            _ => &REFERENCE_LAMBDAS,
        };
        let default_depth = match cli.command {
            Command::Growth => DEFAULT_WKB_DEPTH,
            _ => DEFAULT_PADE_DEPTH,
        };
        let cache_path = cli
            .cache
            .clone()
            .or_else(|| cli.cache_dir.as_ref().map(|dir| dir.join(CACHE_FILE_NAME)));
        let config = RunConfig {
            command: cli.command,
            order: cli.order,
            lambdas: parse_list(&cli.lambda, "lambda", lambda_defaults)?,
            epsilons: parse_list(&cli.eps, "eps", &["1/10"])?,
            precision: cli.precision,
            depth: cli.depth.unwrap_or(default_depth),
            cache_path,
            format: cli.format,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |message: String| Err(CliError::InvalidConfig(message));
        if self.precision < MIN_PRECISION {
            return invalid(format!(
                "--precision {} is below the minimum of {MIN_PRECISION}",
                self.precision
            ));
        }
        if self.order > ptcubic_core::perturbation::DEFAULT_ORDER_CEILING {
            return invalid(format!(
                "--order {} exceeds the ceiling of {}",
                self.order,
                ptcubic_core::perturbation::DEFAULT_ORDER_CEILING
            ));
        }
        match self.command {
            Command::Shoot if !self.lambdas.iter().all(is_positive) => {
                return invalid("--lambda values must be positive for shoot".into());
            }
            Command::Bounce if !self.epsilons.iter().all(is_positive) => {
                return invalid("--eps values must be positive".into());
            }
            Command::Growth if self.depth > ptcubic_core::asymptotics::MAX_WKB_DEPTH => {
                return invalid(format!(
                    "--depth {} exceeds the {} WKB corrections",
                    self.depth,
                    ptcubic_core::asymptotics::MAX_WKB_DEPTH
                ));
            }
            Command::Growth if self.order < 2 => {
                return invalid("growth needs --order of at least 2".into());
            }
            Command::Dispersion if self.order == 0 => {
                return invalid("dispersion needs --order of at least 1".into());
            }
            _ => {}
        }
        Ok(())
    }
}
