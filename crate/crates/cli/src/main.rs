use std::process::ExitCode;

use adc_sim::{run, Cli, CliError, RunConfig};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| {
        if let Some(n) = cli.threads {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::Usage(format!("--threads: {e}")))?;
        }
        run(&cfg)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("adc-sim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
