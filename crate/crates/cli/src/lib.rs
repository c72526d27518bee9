//! Command-line front end: `scan`, `diff`, `check`, `watch` and `serve`.

pub mod args;
mod commands;
pub mod exit;
mod report;
mod serve;
mod watch;

use std::io::Write;

use args::{Cli, Command};
use exit::Exit;

/// Runs a parsed command line, writing reports to `out`. Long-running
/// commands write to stdout directly.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<Exit> {
    let root = match &cli.command {
        Command::Scan(a) => &a.root,
        Command::Diff(a) => &a.root,
        Command::Check(a) => &a.root,
        Command::Watch(a) => &a.root,
        Command::Serve(a) => &a.root,
    };
    let config = commands::load_config(root, cli.config.as_deref())?;
    match cli.command {
        Command::Scan(a) => commands::scan(&a, &config, out),
        Command::Diff(a) => commands::diff(&a, &config, out),
        Command::Check(a) => commands::check(&a, &config, out),
        Command::Watch(a) => watch::run(&a, &config),
        Command::Serve(a) => serve::run(a, config),
    }
}

/// Parses `argv` and runs it; errors are reported on stderr and mapped to
/// [`Exit::Operational`].
pub fn main_with<I, T>(argv: I, out: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::Parser;
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Exit::Operational } else { Exit::Clean };
        }
    };
    init_logging(cli.verbose);
    match run(cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            Exit::Operational
        }
    }
}

fn init_logging(verbose: u8) {
    let level = match verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    let filter = tracing_subscriber::EnvFilter::try_from_env("CODAT_LOG")
        .unwrap_or_else(|_| tracing_subscriber::EnvFilter::new(level));
    let _ = tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .try_init();
}
