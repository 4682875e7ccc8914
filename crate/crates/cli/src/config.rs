//! Command-line surface and the resolved run configuration.

use std::path::PathBuf;

use adc_core::QuadratureFrame;
use clap::{Args, Parser, Subcommand};

use crate::error::{CliError, CliResult};
use crate::grid::{GridSpec, ValueList};

#[derive(Debug, Parser)]
#[command(
    name = "adc-sim",
    version,
    about = "Squeezed vacuum in the amplitude-damping channel: figure data and validation"
)]
pub struct Cli {
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Emit JSON instead of CSV (validate: print the JSON report instead of a summary).
    #[arg(long, global = true)]
    pub json: bool,

    /// Output file (default: stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mean photon number against κt for several λ.
    Fig1(Fig1Args),
    /// Photon-number distributions at several κt.
    Fig2(Fig2Args),
    /// Wigner function on a square α grid.
    #[command(visible_alias = "wigner")]
    Fig3(WignerArgs),
    /// Tomogram along a quadrature frame (f, g).
    Tomogram(TomogramArgs),
    /// Compare every closed form against the Fock-space oracles.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct Fig1Args {
    /// Squeezing values, list or min:max:count.
    #[arg(long, visible_alias = "lambda", default_value = "0,0.1,0.3,0.5,1", allow_hyphen_values = true)]
    pub lambdas: ValueList,
    /// Decay times κt, list or min:max:count.
    #[arg(long, visible_alias = "kappa-t", default_value = "0:3:31", allow_hyphen_values = true)]
    pub kappa_ts: ValueList,
}

#[derive(Debug, Args)]
pub struct Fig2Args {
    #[arg(long, visible_alias = "lambdas", default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, visible_alias = "kappa-t", default_value = "0,0.5,1,2", allow_hyphen_values = true)]
    pub kappa_ts: ValueList,
    /// Largest photon number listed.
    #[arg(long, default_value_t = 20)]
    pub n_max: usize,
}

#[derive(Debug, Args)]
pub struct WignerArgs {
    #[arg(long, visible_alias = "lambdas", default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, visible_alias = "kappa-t", default_value = "0,0.5,1,2", allow_hyphen_values = true)]
    pub kappa_ts: ValueList,
    /// Grid for both Re α and Im α.
    #[arg(long, default_value = "-6:6:121", allow_hyphen_values = true)]
    pub alpha_grid: GridSpec,
    /// Multiply by 2 so the function integrates to 1.
    #[arg(long)]
    pub normalized: bool,
}

#[derive(Debug, Args)]
pub struct TomogramArgs {
    #[arg(long, visible_alias = "lambdas", default_value_t = 1.0, allow_hyphen_values = true)]
    pub lambda: f64,
    #[arg(long, visible_alias = "kappa-ts", default_value_t = 0.5, allow_hyphen_values = true)]
    pub kappa_t: f64,
    #[arg(long, default_value = "-12:12:241", allow_hyphen_values = true)]
    pub q_grid: GridSpec,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub f: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub g: f64,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, visible_alias = "lambda", default_value = "0.3,0.5,1,1.5", allow_hyphen_values = true)]
    pub lambdas: ValueList,
    #[arg(long, visible_alias = "kappa-t", default_value = "0,0.1,0.5,1,2", allow_hyphen_values = true)]
    pub kappa_ts: ValueList,
    /// Comparison cutoff for every λ (default: 64, doubled until the squeezed tail is below 1e-6).
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Tolerance for the closed-form vs oracle density-matrix comparisons.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Fig1,
    Fig2,
    Wigner,
    Tomogram,
    Validate,
}

/// Everything a run needs, with per-command defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    pub lambdas: Vec<f64>,
    pub kappa_ts: Vec<f64>,
    pub cutoff: Option<usize>,
    pub n_max: usize,
    pub alpha_grid: GridSpec,
    pub q_grid: GridSpec,
    pub frame: QuadratureFrame,
    pub normalized: bool,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub json: bool,
}

/// Default tolerance for density-matrix agreement.
pub const DEFAULT_TOL: f64 = 1e-8;

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: CommandKind::Validate,
            lambdas: vec![0.3, 0.5, 1.0, 1.5],
            kappa_ts: vec![0.0, 0.1, 0.5, 1.0, 2.0],
            cutoff: None,
            n_max: 20,
            alpha_grid: GridSpec { min: -6.0, max: 6.0, count: 121 },
            q_grid: GridSpec { min: -12.0, max: 12.0, count: 241 },
            frame: QuadratureFrame::position(),
            normalized: false,
            tol: DEFAULT_TOL,
            out: None,
            json: false,
        }
    }
}

fn check_values(name: &str, values: &[f64]) -> CliResult<()> {
    if values.is_empty() {
        return Err(CliError::Usage(format!("--{name} needs at least one value")));
    }
    if let Some(v) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(CliError::Usage(format!("--{name} values must be finite and non-negative, got {v}")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        let base = RunConfig { out: cli.out.clone(), json: cli.json, ..RunConfig::default() };
        let cfg = match &cli.command {
            Command::Fig1(a) => RunConfig {
                command: CommandKind::Fig1,
                lambdas: a.lambdas.values(),
                kappa_ts: a.kappa_ts.values(),
                ..base
            },
            Command::Fig2(a) => RunConfig {
                command: CommandKind::Fig2,
                lambdas: vec![a.lambda],
                kappa_ts: a.kappa_ts.values(),
                n_max: a.n_max,
                ..base
            },
            Command::Fig3(a) => RunConfig {
                command: CommandKind::Wigner,
                lambdas: vec![a.lambda],
                kappa_ts: a.kappa_ts.values(),
                alpha_grid: a.alpha_grid,
                normalized: a.normalized,
                ..base
            },
            Command::Tomogram(a) => RunConfig {
                command: CommandKind::Tomogram,
                lambdas: vec![a.lambda],
                kappa_ts: vec![a.kappa_t],
                q_grid: a.q_grid,
                frame: QuadratureFrame::new(a.f, a.g).map_err(|e| CliError::Usage(e.to_string()))?,
                ..base
            },
            Command::Validate(a) => {
                let tol = a.tol.unwrap_or(DEFAULT_TOL);
                if !(tol > 0.0 && tol.is_finite()) {
                    return Err(CliError::Usage(format!("--tol must be positive, got {tol}")));
                }
                RunConfig {
                    command: CommandKind::Validate,
                    lambdas: a.lambdas.values(),
                    kappa_ts: a.kappa_ts.values(),
                    cutoff: a.cutoff,
                    tol,
                    ..base
                }
            }
        };
        check_values("lambdas", &cfg.lambdas)?;
        check_values("kappa-ts", &cfg.kappa_ts)?;
        Ok(cfg)
    }
}
