//! `watch`: stream diagnostic batches until interrupted.

use std::io::{IsTerminal, Write};
use std::sync::{Arc, Mutex};

use anyhow::Result;
use codat_core::tracker::{self, Batch, Project, WatchBackend};
use codat_core::Config;

use crate::args::WatchArgs;
use crate::exit::Exit;
use crate::report::write_diagnostic;

pub fn backend(poll: bool) -> WatchBackend {
    if poll {
        WatchBackend::Poll
    } else {
        WatchBackend::Native
    }
}

/// One JSON object per line when piped, readable text on a terminal.
fn print_batch(batch: &Batch, human: bool) {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let res = if human {
        writeln!(out, "-- batch {}: {} diagnostic(s)", batch.seq, batch.diagnostics.len()).and_then(|_| {
            batch
                .diagnostics
                .iter()
                .try_for_each(|d| write_diagnostic(&mut out, d))
        })
    } else {
        serde_json::to_writer(&mut out, batch)
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(out))
    };
    if let Err(e) = res.and_then(|_| out.flush()) {
        tracing::error!("cannot write batch: {e}");
    }
}

pub fn run(args: &WatchArgs, config: &Config) -> Result<Exit> {
    let project = Arc::new(Mutex::new(Project::open(&args.root, config.clone())?));
    let human = std::io::stdout().is_terminal();
    let handle = tracker::watch(project, backend(args.poll), move |b| print_batch(b, human))?;
    let rt = tokio::runtime::Builder::new_current_thread().enable_all().build()?;
    rt.block_on(tokio::signal::ctrl_c())?;
    handle.stop()?;
    Ok(Exit::Clean)
}
