//! `adc-sim`: figure data and oracle validation for the squeezed vacuum in the
//! amplitude-damping channel.

pub mod config;
pub mod error;
pub mod figures;
pub mod grid;
pub mod output;
pub mod validate;

use std::fs;
use std::io::Write;

pub use config::{Cli, CommandKind, RunConfig};
pub use error::{CliError, CliResult};

/// Runs one command and writes its output; the returned error carries the exit code.
pub fn run(cfg: &RunConfig) -> CliResult<()> {
    let table = match cfg.command {
        CommandKind::Fig1 => figures::run_fig1(cfg)?,
        CommandKind::Fig2 => figures::run_fig2(cfg)?,
        CommandKind::Wigner => figures::run_wigner(cfg)?,
        CommandKind::Tomogram => figures::run_tomogram(cfg)?,
        CommandKind::Validate => return run_validate_command(cfg),
    };
    if cfg.json {
        write_text(cfg, &output::table_json(&table))
    } else {
        output::emit(&table, cfg.out.as_deref())
    }
}

fn write_text(cfg: &RunConfig, text: &str) -> CliResult<()> {
    match &cfg.out {
        Some(path) => fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn run_validate_command(cfg: &RunConfig) -> CliResult<()> {
    let report = validate::run_validate(cfg)?;
    let json = report.to_json() + "\n";
    if let Some(path) = &cfg.out {
        fs::write(path, &json).map_err(|e| CliError::io(path, e))?;
    }
    let shown = if cfg.json { json } else { report.summary() };
    if cfg.json || cfg.out.is_none() || !report.passed {
        std::io::stdout().lock().write_all(shown.as_bytes()).map_err(|e| CliError::io("<stdout>", e))?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::ValidationFailed(report.failed_checks().join(", ")))
    }
}
