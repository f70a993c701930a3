use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use bianchi_cli::{run, RunConfig, EXIT_WARNING};
use clap::Parser;

fn main() -> ExitCode {
    let cfg = RunConfig::parse();
    if let Some(n) = cfg.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(1);
        }
    }
    let start = Instant::now();
    let out = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &cfg.out {
        Some(path) => fs::write(path, &out.json).map_err(|e| format!("writing {}: {e}", path.display())),
        None => std::io::stdout().write_all(out.json.as_bytes()).map_err(|e| format!("writing stdout: {e}")),
    };
    let written = written.and_then(|_| match &out.csv {
        Some((path, text)) => fs::write(path, text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => Ok(()),
    });
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    // Wall time is reported here and never in the JSON, which must not depend on it.
    eprintln!("elapsed {:.3} s", start.elapsed().as_secs_f64());
    for w in &out.warnings {
        eprintln!("warning: {w}");
    }
    if cfg.strict && !out.warnings.is_empty() {
        return ExitCode::from(EXIT_WARNING as u8);
    }
    ExitCode::SUCCESS
}
