mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command};
use output::{emit, CliError, EXIT_PRECONDITION};

const THREADS_VAR: &str = "PADIC_SPECTRA_THREADS";

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::precondition(format!("{THREADS_VAR}={value:?} is not a positive integer")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError { code: "threads", message: e.to_string(), exit: output::EXIT_FAILURE })?;
    #[cfg(not(feature = "parallel"))]
    let _ = threads;
    Ok(())
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    configure_threads()?;
    let (report, out) = match &cli.command {
        Command::Nerve(a) => (commands::nerve(a)?, &a.out),
        Command::Spectrum(a) => (commands::spectrum(a)?, &a.out),
        Command::Heat(a) => (commands::heat(a)?, &a.out),
        Command::Green(a) => (commands::green(a)?, &a.out),
        Command::Simulate(a) => (commands::simulate(a)?, &a.out),
        Command::Hear(a) => (commands::hear(a)?, &a.out),
        Command::Count(a) => (commands::count(a)?, &a.out),
        Command::Equalise(a) => (commands::equalise(a)?, &a.out),
    };
    emit(&report, out)?;
    Ok(report.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { EXIT_PRECONDITION as u8 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit as u8)
        }
    }
}
