use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cosym3_cli::{order_bound_from, run, Cli, ORDER_BOUND_VAR};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let bound = std::env::var(ORDER_BOUND_VAR).ok();
    let result = order_bound_from(bound.as_deref()).and_then(|b| run(&cli, b));
    match result {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.stdout.as_bytes());
            ExitCode::from(out.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
