mod args;
mod batch;
mod error;
mod estimate;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, OutputArgs};
use error::CliResult;

fn emit(output: &OutputArgs, text: &str) -> CliResult {
    match &output.out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Stability(a) => emit(&a.output, &batch::stability(a)?),
        Command::Runtime(a) => emit(&a.output, &batch::runtime(a)?),
        Command::Ransac(a) => emit(&a.output, &estimate::ransac(a)?),
        Command::Solve(a) => emit(&a.output, &estimate::solve(a)?),
        Command::Generate(a) => emit(&a.output, &estimate::generate(a)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("minpose: {e}");
            e.exit_code()
        }
    }
}
