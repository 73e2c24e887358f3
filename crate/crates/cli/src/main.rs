use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qkz_cli::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("QKZ_THREADS").ok().and_then(|s| s.parse().ok()) {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().ok();
    }
    let out = match run(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &out.text),
        None => std::io::stdout().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if out.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
