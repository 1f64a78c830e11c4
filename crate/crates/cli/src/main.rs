//! `pcanon`: verification suites, character queries and alcove pictures for
//! p-canonical data on affine Weyl groups.

mod compute;
mod config;
mod draw;
mod output;

use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Parser, Subcommand, ValueEnum};

use pcanon_core::hecke::CacheFile;
use pcanon_core::verify::{Params, Suite, Verifier};

use crate::config::{GlobalArgs, RunConfig};
use crate::output::Format;

pub const TOOL: &str = concat!("pcanon ", env!("CARGO_PKG_VERSION"));

#[derive(Parser, Debug)]
#[command(name = "pcanon", version, about = "p-canonical bases, periodic modules and G1T-characters")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a verification suite and print a JSON report.
    ///
    /// Exit status is 0 when every check passes, 1 when some check is
    /// falsified and 2 on any other error.
    Verify {
        /// lemma-rho, main, periodic, orders or all
        suite: Suite,
        /// Random samples for the translation checks.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Compute one object and print it.
    Compute {
        #[command(subcommand)]
        kind: compute::Kind,
    },
    /// Draw dominant alcoves of a rank 2 datum as SVG or TikZ.
    Draw {
        /// Alcoves to shade: `restricted`, `fW-window(n)`, `box(a,b)` or
        /// `list(A=s0 s1;s0 s2)`. Repeat for several layers.
        #[arg(long = "shade")]
        shade: Vec<String>,
    },
    /// Inspect or manage the on-disk KL cache.
    Cache {
        #[arg(value_enum)]
        action: CacheAction,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CacheAction {
    /// Print the cache file and number of stored columns.
    Info,
    /// Delete the cache file for the datum.
    Clear,
    /// Compute and store every KL column up to --max-len.
    Warm,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("pcanon: error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    // Clearing must not reopen the file it is about to delete.
    let clearing = matches!(cli.cmd, Cmd::Cache { action: CacheAction::Clear });
    let cfg = RunConfig::from_args(&cli.global, !clearing)?;
    if !cli.global.quiet {
        eprintln!("pcanon: datum {} [{}] table {}", cfg.datum_tag(), cfg.datum_hash(), cfg.table_hash());
    }
    let code = match cli.cmd {
        Cmd::Verify { suite, samples, seed } => {
            let fmt = cfg.format.unwrap_or(Format::Json);
            if fmt != Format::Json {
                bail!("verify reports are JSON only");
            }
            let g = cfg.weyl();
            let mut params = Params::defaults_for(g);
            if let Some(n) = cfg.max_len {
                params.max_len = n;
            }
            if let Some(n) = cfg.window {
                params.window = n;
            }
            params.samples = samples;
            params.seed = seed;
            params.timing = cli.global.timing;
            let verifier = Verifier::new(cfg.hecke.clone(), cfg.table.clone());
            let report = verifier.run(suite, &params, TOOL)?;
            emit(&(serde_json::to_string_pretty(&report)? + "\n"))?;
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Cmd::Compute { kind } => {
            let out = compute::run(&cfg, &kind)?;
            emit(&out.render(cfg.format.unwrap_or(Format::Text), &cfg)?)?;
            ExitCode::SUCCESS
        }
        Cmd::Draw { shade } => {
            let fmt = cfg.format.unwrap_or(Format::Svg);
            let pic = draw::Picture::build(cfg.weyl(), cfg.window.unwrap_or(8), &shade)?;
            match fmt {
                Format::Svg => emit(&pic.svg())?,
                Format::Tikz => emit(&pic.tikz())?,
                other => bail!("draw writes svg or tikz, not {other}"),
            }
            ExitCode::SUCCESS
        }
        Cmd::Cache { action } => {
            cache(&cfg, action)?;
            ExitCode::SUCCESS
        }
    };
    cfg.hecke.flush_cache()?;
    Ok(code)
}

/// Writes to stdout; a closed pipe (as with `| head`) is not an error.
fn emit(s: &str) -> Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(s.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn cache(cfg: &RunConfig, action: CacheAction) -> Result<()> {
    let Some(dir) = &cfg.cache_dir else {
        bail!("no cache directory; pass --cache-dir or set PCANON_CACHE_DIR");
    };
    let path = CacheFile::path_for(cfg.weyl(), dir);
    match action {
        CacheAction::Info => {
            emit(&format!("file: {}\ncolumns: {}\n", path.display(), cfg.hecke.cached_len()))?;
        }
        CacheAction::Clear => {
            match std::fs::remove_file(&path) {
                Ok(()) => emit(&format!("removed {}\n", path.display()))?,
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => emit("nothing to remove\n")?,
                Err(e) => return Err(e.into()),
            }
        }
        CacheAction::Warm => {
            let g = cfg.weyl();
            let elems = g.enumerate_w(cfg.max_len.unwrap_or(6));
            pcanon_core::par::map(&elems, |w| cfg.hecke.kl_arc(w).map(|_| ()))
                .into_iter()
                .collect::<pcanon_core::Result<Vec<_>>>()?;
            let added = cfg.hecke.flush_cache()?;
            emit(&format!("columns: {} ({} new)\n", cfg.hecke.cached_len(), added))?;
        }
    }
    Ok(())
}
