//! Command-line front end for `fracwave`.

pub mod args;
pub mod commands;
pub mod error;
pub mod inputs;
pub mod report;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};

use crate::args::{Cli, Command, ConfigFile, Settings};
use crate::commands::{AnalysisOptions, CoherenceOptions, Context, DwtOptions};
use crate::error::{CliError, CliResult};

/// Exit status for malformed command lines and settings.
pub const USAGE_EXIT: i32 = 126;
/// Largest failure count reported through the exit status.
pub const MAX_FAILURE_EXIT: usize = 125;

/// Runs the tool and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => USAGE_EXIT,
            };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return USAGE_EXIT;
        }
    };
    match dispatch(&cli, &matches) {
        Ok(failures) => failures.min(MAX_FAILURE_EXIT) as i32,
        Err(e @ CliError::Usage(_)) => {
            eprintln!("fracwave: {e}");
            USAGE_EXIT
        }
        Err(e) => {
            eprintln!("fracwave: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli, matches: &clap::ArgMatches) -> CliResult<usize> {
    let config = match &cli.config {
        Some(p) => ConfigFile::load(p)?,
        None => ConfigFile::default(),
    };
    let (_, sub) = matches
        .subcommand()
        .ok_or_else(|| CliError::Usage("missing subcommand".into()))?;
    let settings = Settings::new(sub, &config);
    let ctx = Context::from_settings(&settings)?;
    let jobs: usize = settings.get("jobs")?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start {jobs} workers: {e}")))?;

    pool.install(|| match &cli.command {
        Command::Synth(a) => commands::synth(&ctx, &a.specs, a.output.as_deref()),
        Command::Mfdfa(a) => {
            let opts = AnalysisOptions::from_settings(&settings)?;
            commands::mfdfa(&ctx, &a.inputs, &opts)
        }
        Command::Dwt(a) => {
            let opts = DwtOptions::from_settings(&settings)?;
            commands::dwt(&ctx, &a.inputs, &opts)
        }
        Command::Coherence(a) => {
            let opts = CoherenceOptions::from_settings(&settings)?;
            commands::coherence(&ctx, &a.x, &a.y, &opts)
        }
        Command::Report(a) => {
            let opts = AnalysisOptions::from_settings(&settings)?;
            let name: String = settings.get("name")?;
            report::report(&ctx, &a.groups, &name, &opts)
        }
    })
}
