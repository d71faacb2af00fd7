//! Batch front end for the `lipbound` toolkit.
//!
//! Every command writes a CSV (default) or JSON-lines report to `--out` or stdout;
//! diagnostics go to stderr. Exit status: 0 success, 1 usage error, 2 a bound was
//! violated, 3 numeric failure.

pub mod commands;
pub mod config;
pub mod constants;
pub mod error;
pub mod report;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};

use clap::Parser;

pub use config::{Command, Flags, Format, FunctionChoice, RunConfig};
pub use error::{CliError, CliResult};

/// Runs one configured command, writing the report to `cfg.out` or `stdout`.
pub fn run(cfg: &RunConfig, stdout: &mut dyn Write, diag: &mut dyn Write) -> CliResult<()> {
    match &cfg.out {
        Some(path) => {
            let file = File::create(path)
                .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            let res = commands::dispatch(cfg, &mut w, diag);
            w.flush()?;
            res
        }
        None => {
            let mut w = BufWriter::new(stdout);
            let res = commands::dispatch(cfg, &mut w, diag);
            w.flush()?;
            res
        }
    }
}

/// Parses `args` (program name first) and runs; returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let flags = match Flags::try_parse_from(args) {
        Ok(f) => f,
        Err(e) => {
            let informational = !e.use_stderr();
            let sink: &mut dyn Write = if informational { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return if informational { 0 } else { 1 };
        }
    };
    let result = flags.into_config().and_then(|cfg| run(&cfg, stdout, stderr));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "lipbound: {e}");
            e.exit_code()
        }
    }
}
