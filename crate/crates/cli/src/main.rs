use std::process::ExitCode;

use clap::Parser;
use qwalk_cli::{run, Cli};

fn main() -> ExitCode {
    // clap exits with 2 on usage errors and 0 for --help/--version.
    let cli = Cli::parse();
    match run(&cli) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qwalk: {e:#}");
            ExitCode::from(e.exit_code())
        }
    }
}
