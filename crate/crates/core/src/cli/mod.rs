//! Command-line front end: option resolution, dispatch to the experiments
//! and artifact emission (results.csv, manifest.json, `.dat` plot files).
//!
//! Exit status: 0 on success, 2 on configuration errors, 3 when a numerical
//! accuracy target is missed.

mod commands;
mod config;
mod output;

pub use commands::execute;
pub use config::{command_line, keys, parse_config_text, KeySpec, RunConfig, COMMANDS};
pub use output::{num, write_all, Outcome, Table, CSV_FORMAT_VERSION};

use crate::error::Error;
use std::ffi::OsString;
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_ACCURACY: i32 = 3;

/// Environment variable capping the worker pool.
pub const THREADS_VAR: &str = "MORAWETZ_LAB_THREADS";

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Accuracy { .. } => EXIT_ACCURACY,
        _ => EXIT_CONFIG,
    }
}

/// Sizes the global worker pool from [`THREADS_VAR`] when it is set.
pub fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n = parse_threads(&raw)?;
    if rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .is_err()
    {
        log::debug!("worker pool already initialized; {THREADS_VAR} ignored");
    }
    Ok(())
}

fn parse_threads(raw: &str) -> Result<usize, Error> {
    raw.trim()
        .parse()
        .ok()
        .filter(|&n: &usize| n >= 1)
        .ok_or_else(|| {
            Error::Config(format!(
                "{THREADS_VAR} must be an integer >= 1, got `{raw}`"
            ))
        })
}

/// Runs one command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command_line().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return EXIT_CONFIG;
    }
    let (name, sub) = matches.subcommand().expect("subcommand required");
    let cfg = match RunConfig::from_matches(name, sub) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let start = Instant::now();
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    for line in &outcome.summary {
        println!("{line}");
    }
    match write_all(
        cfg.output_dir(),
        name,
        &cfg.options,
        cfg.seed,
        &outcome,
        start.elapsed().as_secs_f64(),
    ) {
        Ok(paths) => {
            for p in paths {
                log::info!("wrote {}", p.display());
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_IO
        }
    }
}
