use std::process::ExitCode;

use clap::Parser;
use geninfo_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("geninfo: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
