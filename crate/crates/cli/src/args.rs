use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "codat", version, about = "Keep labeled code comments honest")]
pub struct Cli {
    /// Configuration file to use instead of `<root>/codat.toml`.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Log verbosity (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scan the project and store a new baseline snapshot.
    Scan(ScanArgs),
    /// Compare the working tree with the stored snapshot.
    Diff(DiffArgs),
    /// Ask a backend whether comments and code agree.
    Check(CheckArgs),
    /// Stream diagnostics as files change.
    Watch(WatchArgs),
    /// Watch and serve the HTTP API and UI bundle.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(default_value = ".")]
    pub root: PathBuf,
    #[arg(long)]
    pub json: bool,
    /// Exit with status 2 when grammar violations are found.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    #[arg(default_value = ".")]
    pub root: PathBuf,
    #[arg(long)]
    pub json: bool,
    /// Acknowledge the stale finding on a node (`LABEL@file[:scope]`).
    #[arg(long = "ack", value_name = "SELECTOR")]
    pub ack: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Replay,
    Http,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutcomeArg {
    Consistent,
    Inconsistent,
    Unknown,
}

#[derive(Debug, Clone, Args)]
pub struct BackendArgs {
    #[arg(long, value_enum, default_value_t = BackendKind::Replay)]
    pub backend: BackendKind,
    /// Replay fixture directory; the bundled transcripts are used if omitted.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Endpoint of the http backend.
    #[arg(long, default_value = "http://127.0.0.1:8080/query")]
    pub endpoint: String,
    /// Environment variable holding the http backend's API key.
    #[arg(long, default_value = codat_core::checker::DEFAULT_API_KEY_ENV)]
    pub api_key_env: String,
    /// Response given by the constant backend.
    #[arg(long, value_enum, default_value_t = OutcomeArg::Consistent)]
    pub outcome: OutcomeArg,
    /// Per-request timeout in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub timeout: f64,
    #[arg(long, default_value_t = 2)]
    pub retries: u32,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(default_value = ".")]
    pub root: PathBuf,
    /// Nodes to check (`LABEL@file[:scope]` or a node id).
    #[arg(long = "node", value_name = "SELECTOR", required_unless_present = "all")]
    pub nodes: Vec<String>,
    /// Check every node that has a linked code region.
    #[arg(long, conflicts_with = "nodes")]
    pub all: bool,
    #[command(flatten)]
    pub backend: BackendArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct WatchArgs {
    #[arg(default_value = ".")]
    pub root: PathBuf,
    /// Poll instead of using native file notifications.
    #[arg(long)]
    pub poll: bool,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(default_value = ".")]
    pub root: PathBuf,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Port to listen on; 0 picks a free one.
    #[arg(long, default_value_t = 7878)]
    pub port: u16,
    /// Built UI bundle to serve under /ui.
    #[arg(long)]
    pub ui_dir: Option<PathBuf>,
    #[arg(long)]
    pub poll: bool,
    #[command(flatten)]
    pub backend: BackendArgs,
}
