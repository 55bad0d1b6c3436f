use std::process::ExitCode;

use clap::Parser;
use heisenberg_cli::{run, Cli};

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors by itself
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("h3surf: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}
