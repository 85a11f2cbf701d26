use std::process::ExitCode;

use clap::Parser;
use normed_riemann::experiment::{run, RunConfig};
use normed_riemann::Error;

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    let out = match run(&cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("nr: {e}");
            return match e {
                Error::NonPositiveEpsilon(_)
                | Error::Parse { .. }
                | Error::ZeroSubintervals
                | Error::EmptyInterval { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            };
        }
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &out.text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(out.text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("nr: cannot write output: {e}");
        return ExitCode::FAILURE;
    }
    if out.success {
        ExitCode::SUCCESS
    } else {
        eprintln!("nr: an exact invariant failed");
        ExitCode::FAILURE
    }
}
