use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Subcommand};

use pcanon_core::characters::{Characters, FormalCharacter};
use pcanon_core::lincomb::{render, LinComb};
use pcanon_core::rootdata::Weight;
use pcanon_core::weyl::{ExtElem, Weyl};

use crate::config::RunConfig;
use crate::output::{Cell, Output};

#[derive(Subcommand, Debug)]
pub enum Kind {
    /// Column of the (p-)canonical basis element of H_ext.
    Kl {
        #[arg(long)]
        elem: String,
    },
    /// Antispherical (p-)canonical basis element; the label must be minimal
    /// in its W_f-coset.
    Asph {
        #[arg(long)]
        elem: String,
    },
    /// Spherical (p-)canonical basis element.
    Sph {
        #[arg(long)]
        elem: String,
    },
    /// (p-)canonical basis element of the periodic module.
    Periodic {
        #[arg(long)]
        alcove: String,
    },
    /// Baby Verma multiplicities of the projective attached to an alcove.
    Qa {
        #[arg(long)]
        alcove: String,
    },
    /// Dominant part of a restricted simple character.
    Simplechar {
        #[arg(long)]
        weight: String,
    },
    /// Baby Verma multiplicities of a projective, by weight or by label.
    #[command(group(ArgGroup::new("which").required(true).args(["weight", "elem"])))]
    Projmult {
        #[arg(long)]
        weight: Option<String>,
        #[arg(long)]
        elem: Option<String>,
    },
    /// Character of a baby Verma module.
    Babyverma {
        #[arg(long)]
        weight: String,
    },
    /// Dominant alcove counts of the original and improved algorithms.
    Bounds,
}

pub fn parse_weight(g: &Weyl, s: &str) -> Result<Weight> {
    let inner = s.trim();
    let inner = inner
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .unwrap_or(inner);
    let coords = inner
        .split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<Vec<_>, _>>()
        .with_context(|| format!("bad weight {s:?}"))?;
    let n = g.datum().lattice_rank;
    if coords.len() != n {
        bail!("weight {s:?} has {} coordinates, the lattice has rank {n}", coords.len());
    }
    Ok(Weight::from_slice(&coords))
}

fn elem_rows<K: Ord + Clone>(g: &Weyl, x: &LinComb<K>, key: impl Fn(&K) -> &ExtElem) -> Vec<Vec<Cell>> {
    render(x, |k| g.bfs_key(key(k)), |k| g.format(key(k)))
        .into_iter()
        .map(|(k, p)| vec![Cell::Text(k), Cell::Poly(p)])
        .collect()
}

fn int_rows<K, N: std::fmt::Display>(g: &Weyl, m: &BTreeMap<K, N>, key: impl Fn(&K) -> &ExtElem) -> Vec<Vec<Cell>> {
    let mut v: Vec<_> = m.iter().map(|(k, n)| (g.bfs_key(key(k)), g.format(key(k)), n)).collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v.into_iter().map(|(_, k, n)| vec![Cell::Text(k), Cell::int(n)]).collect()
}

fn char_rows(ch: &FormalCharacter) -> Vec<Vec<Cell>> {
    ch.iter()
        .map(|(mu, m)| vec![Cell::Text(mu.to_string()), Cell::int(m)])
        .collect()
}

pub fn run(cfg: &RunConfig, kind: &Kind) -> Result<Output> {
    let g = cfg.weyl();
    let chars = Characters::from_hecke(cfg.hecke.clone());
    let table = &cfg.table;
    let out = |kind, input: &str, p, columns, rows| Output {
        kind,
        input: input.to_string(),
        p,
        columns,
        rows,
        text: None,
    };
    Ok(match kind {
        Kind::Kl { elem } => {
            let x = g.parse(elem)?;
            let h = chars.h_column(table, &x)?;
            out("kl", elem, None, vec!["y", "coeff"], elem_rows(g, &h, |k| k))
        }
        Kind::Asph { elem } => {
            let w = g.parse(elem)?;
            let n = chars.parabolic().p_n(table, &w)?;
            out("asph", elem, None, vec!["y", "coeff"], elem_rows(g, &n, |k| k))
        }
        Kind::Sph { elem } => {
            let w = g.parse(elem)?;
            let m = chars.parabolic().p_m(table, &w)?;
            out("sph", elem, None, vec!["y", "coeff"], elem_rows(g, &m, |k| k))
        }
        Kind::Periodic { alcove } => {
            let a = g.parse_alcove(alcove)?;
            let x = chars.periodic().p_canonical_p(table, &a)?;
            out("periodic", alcove, None, vec!["alcove", "coeff"], elem_rows(g, &x, |b| b.elem()))
        }
        Kind::Qa { alcove } => {
            let a = g.parse_alcove(alcove)?;
            let q = chars.q_of_alcove(table, &a)?;
            out("qa", alcove, None, vec!["alcove", "mult"], int_rows(g, &q, |b| b.elem()))
        }
        Kind::Simplechar { weight } => {
            let p = cfg.require_p()?;
            let ch = chars.simple_character(table, &parse_weight(g, weight)?, p)?;
            out("simplechar", weight, Some(p), vec!["weight", "mult"], char_rows(&ch))
        }
        Kind::Projmult { weight: Some(weight), .. } => {
            let p = cfg.require_p()?;
            let ch = chars.projective_character(table, &parse_weight(g, weight)?, p)?;
            out("projmult", weight, Some(p), vec!["weight", "mult"], char_rows(&ch))
        }
        Kind::Projmult { elem: Some(elem), .. } => {
            let w = g.parse(elem)?;
            let row = chars.projective_row(table, &w)?;
            out("projmult", elem, None, vec!["y", "mult"], int_rows(g, &row, |k| k))
        }
        Kind::Projmult { .. } => bail!("projmult needs --weight or --elem"),
        Kind::Babyverma { weight } => {
            let p = cfg.require_p()?;
            let ch = chars.baby_verma_character(&parse_weight(g, weight)?, p);
            out("babyverma", weight, Some(p), vec!["weight", "mult"], char_rows(&ch))
        }
        Kind::Bounds => {
            let (lo, hi, improved) = g.datum().complexity_bounds();
            let mut o = out(
                "bounds",
                "",
                None,
                vec!["orig", "orig_upper", "improved"],
                vec![vec![Cell::int(lo), Cell::int(hi), Cell::int(improved)]],
            );
            o.text = Some(format!("{lo} / {hi} / {improved}"));
            o
        }
    })
}
