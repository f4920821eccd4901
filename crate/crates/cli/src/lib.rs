//! Command-line driver: configuration layering, subcommands, CSV/JSON
//! emission and the exit-code contract (0 pass, 1 error, 2 violation).

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub use commands::{run_command, Outcome, Streams};
pub use config::{Cli, Command, Format, Model, RunConfig, Settings};
pub use error::{CliError, CliResult};

pub const THREADS_ENV: &str = "LGBOUNDS_THREADS";

/// Sizes the global thread pool from `LGBOUNDS_THREADS`; unset or `0` keeps
/// rayon's default.
fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("{THREADS_ENV} must be an integer, got `{raw}`")))?;
    if n > 0 {
        // A pool built earlier in this process keeps its size.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command, and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return 1;
        }
    };
    let result = configure_threads()
        .and_then(|()| RunConfig::resolve(cli.command, cli.flags))
        .and_then(|cfg| run_command(&cfg, &mut Streams { stdout, stderr }));
    match result {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            // Every variant's message already embeds its source.
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}
