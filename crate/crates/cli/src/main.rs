mod config;
mod input;
mod report;
mod run;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use config::{Cli, Command, Emit};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, emit) = match &cli.command {
        Command::Compute(args) => (run::compute(args), args.common.emit),
        Command::CheckLemmas(args) => (run::check_lemmas(args), args.common.emit),
    };
    match result {
        Ok(out) => {
            let text = match emit {
                Emit::Text => out.report.to_text(),
                Emit::Json => out.report.to_json(),
                Emit::Dot => out.dot.unwrap_or_default(),
            };
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            if out.report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("freemon: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
