mod args;
mod commands;
mod report;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use report::{CliError, Outcome};

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::precondition("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::internal(format!("thread pool: {e}")))?;
    }
    match &cli.command {
        Command::Compute(a) => commands::compute(a, cli.format),
        Command::Verify(a) => commands::verify(a, cli.format),
        Command::Reinhardt(a) => commands::reinhardt(a, cli.format),
        Command::Scan(a) => commands::scan(a, cli.format),
        Command::Selftest => commands::selftest(cli.format),
    }
}

fn emit(text: &str, cli: &Cli) -> std::io::Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.text, &cli) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(1);
            }
            for note in &outcome.notes {
                eprintln!("{note}");
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

