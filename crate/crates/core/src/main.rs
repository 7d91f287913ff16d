use std::process::ExitCode;

use clap::Parser;

use spinhall::app::{self, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (experiment, args) = cli.command.parts();
    let result = RunConfig::resolve(experiment, args).and_then(|cfg| app::run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinhall: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
