mod args;
mod error;
mod run;

use std::io::{ErrorKind, Write};
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use serde_json::json;

use wfdecide::solver::Limits;

use args::Cli;
use error::CliError;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let limits = Limits {
        max_nodes: cli.max_nodes,
        max_vertices: cli.max_vertices,
    };
    let start = Instant::now();
    let result = run::execute(&cli.command, limits);
    eprintln!("elapsed: {} ms", start.elapsed().as_millis());
    match result {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("json");
            match writeln!(std::io::stdout().lock(), "{text}") {
                Err(e) if e.kind() != ErrorKind::BrokenPipe => {
                    eprintln!("error: {e}");
                    ExitCode::from(1)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            let mut report = json!({ "error": e.to_string() });
            if let CliError::Resource { partial, .. } = &e {
                report["partial"] = partial.clone();
            }
            eprintln!("{}", serde_json::to_string(&report).expect("json"));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
