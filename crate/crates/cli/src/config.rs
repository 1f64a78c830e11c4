use std::path::PathBuf;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::Args;

use pcanon_core::hecke::{Hecke, PCanonicalTable, Prime};
use pcanon_core::rootdata::RootDatum;
use pcanon_core::weyl::Weyl;

use crate::output::Format;

#[derive(Args, Debug)]
pub struct GlobalArgs {
    /// Cartan type such as A1, C2 or A2~ (the trailing ~ is optional).
    #[arg(long = "type", global = true, conflicts_with = "datum")]
    pub cartan_type: Option<String>,
    /// Root datum JSON file.
    #[arg(long, global = true)]
    pub datum: Option<PathBuf>,
    /// `builtin` for the KL basis, or a p-canonical table file.
    #[arg(long, global = true, default_value = "builtin")]
    pub table: String,
    /// Characteristic for character computations. Defaults to the table's.
    #[arg(long, global = true)]
    pub p: Option<i64>,
    #[arg(long, global = true)]
    pub max_len: Option<usize>,
    #[arg(long, global = true)]
    pub window: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[arg(long, global = true, env = "PCANON_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads; 1 runs everything sequentially.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Include wall-clock timings in reports.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Do not log the datum and table hashes to stderr.
    #[arg(long, short, global = true)]
    pub quiet: bool,
}

pub struct RunConfig {
    pub hecke: Arc<Hecke>,
    pub table: PCanonicalTable,
    pub p: Option<i64>,
    pub max_len: Option<usize>,
    pub window: Option<usize>,
    pub format: Option<Format>,
    pub cache_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(a: &GlobalArgs, open_cache: bool) -> Result<Self> {
        match a.threads {
            Some(0) => bail!("--threads must be positive"),
            Some(1) => pcanon_core::par::set_sequential(true),
            #[cfg(feature = "parallel")]
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("setting up the thread pool")?,
            _ => {}
        }
        let datum = match (&a.cartan_type, &a.datum) {
            (Some(t), None) => RootDatum::from_type(t)?,
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                RootDatum::from_json(&text)?
            }
            _ => bail!("give the root datum with --type or --datum"),
        };
        let weyl = Arc::new(Weyl::new(Arc::new(datum)));
        let hecke = Arc::new(match (&a.cache_dir, open_cache) {
            (Some(dir), true) => {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                Hecke::with_cache_dir(weyl, dir)?
            }
            _ => Hecke::new(weyl),
        });
        let table = if a.table == "builtin" {
            PCanonicalTable::builtin(hecke.clone())
        } else {
            PCanonicalTable::load(hecke.clone(), a.table.as_ref()).with_context(|| format!("loading table {}", a.table))?
        };
        let p = match (a.p, table.p()) {
            (Some(p), Prime::Finite(q)) if p as u64 != q => bail!("--p {p} disagrees with the table's p = {q}"),
            (Some(p), _) => Some(p),
            (None, Prime::Finite(q)) => Some(q as i64),
            (None, Prime::Infinity) => None,
        };
        Ok(RunConfig {
            hecke,
            table,
            p,
            max_len: a.max_len,
            window: a.window,
            format: a.format,
            cache_dir: a.cache_dir.clone(),
        })
    }

    pub fn weyl(&self) -> &Weyl {
        self.hecke.weyl()
    }

    pub fn datum_tag(&self) -> String {
        self.weyl().datum().tag()
    }

    pub fn datum_hash(&self) -> &str {
        self.weyl().datum().hash()
    }

    pub fn table_hash(&self) -> String {
        self.table.hash()
    }

    pub fn require_p(&self) -> Result<i64> {
        self.p.context("this computation needs --p")
    }
}
