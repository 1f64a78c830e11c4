//! Pictures of dominant alcoves for rank 2 data.
//!
//! Points are handled by their pairings with the simple coroots and only
//! turned into plane coordinates at the end, so the same code serves every
//! lattice.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt::Write as _;

use anyhow::{bail, Context, Result};

use pcanon_core::alcoves::Alcove;
use pcanon_core::rootdata::Weight;
use pcanon_core::weyl::Weyl;

use crate::compute::parse_weight;

const SVG_FILL: [&str; 4] = ["#c8c8c8", "#9ecae1", "#fdae6b", "#a1d99b"];
const TIKZ_FILL: [&str; 4] = ["gray!40", "blue!25", "orange!35", "green!30"];
/// Longest side of the picture, in px for SVG and cm for TikZ.
const SVG_SIZE: f64 = 480.0;
const TIKZ_SIZE: f64 = 10.0;

type Pt = (f64, f64);

struct Cell {
    key: (usize, String),
    corners: Vec<Pt>,
    center: Pt,
    layer: Option<usize>,
    label: Option<String>,
}

pub struct Picture {
    cells: Vec<Cell>,
}

/// One `--shade` expression: its alcoves and their labels.
fn shading(g: &Weyl, expr: &str) -> Result<Vec<(Alcove, Option<String>)>> {
    let expr = expr.trim();
    let call = |name: &str| {
        expr.strip_prefix(name)
            .and_then(|r| r.trim().strip_prefix('('))
            .and_then(|r| r.strip_suffix(')'))
    };
    if expr == "restricted" {
        let zero = Weight::zero(g.datum().lattice_rank);
        return Ok(box_alcoves(g, &zero).into_iter().map(|a| (a, None)).collect());
    }
    if let Some(n) = call("fW-window") {
        let n: usize = n.trim().parse().with_context(|| format!("bad window in {expr:?}"))?;
        return Ok(g.dominant_alcoves(n).into_iter().map(|a| (a, None)).collect());
    }
    if let Some(mu) = call("box") {
        let mu = parse_weight(g, mu)?;
        return Ok(box_alcoves(g, &mu).into_iter().map(|a| (a, None)).collect());
    }
    if let Some(items) = call("list") {
        let mut out = vec![];
        for item in items.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (label, word) = match item.split_once('=') {
                Some((l, w)) => (Some(l.trim().to_string()), w),
                None => (None, item),
            };
            out.push((g.parse_alcove(word)?, label));
        }
        return Ok(out);
    }
    bail!("unknown shading {expr:?}; expected restricted, fW-window(n), box(a,b) or list(...)")
}

/// Alcoves of the box `Π̂_μ = {μ ≤ ⟨v,α∨⟩ < μ + 1}`.
fn box_alcoves(g: &Weyl, mu: &Weight) -> Vec<Alcove> {
    let start = g.translate(&g.fundamental_alcove(), mu);
    let want = g.box_rep_above(&start);
    let mut seen = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let mut out = vec![];
    while let Some(a) = queue.pop_front() {
        for s in 0..g.num_gens() {
            let b = g.act_right_gen(&a, s);
            if g.box_rep_above(&b) == want && seen.insert(b.clone()) {
                queue.push_back(b);
            }
        }
        out.push(a);
    }
    out
}

struct Plane {
    /// Rows are the simple coroots in the plane; points solve `M v = c`.
    inv: [[f64; 2]; 2],
}

impl Plane {
    fn new(g: &Weyl) -> Plane {
        let c = &g.datum().cartan;
        let (a, b) = (c[0][1] as f64, c[1][0] as f64);
        let cos = -(a * b).sqrt() / 2.0;
        let sin = (1.0 - cos * cos).sqrt();
        let ratio = if a == 0.0 { 1.0 } else { (b / a).sqrt() };
        let m = [[1.0, 0.0], [ratio * cos, ratio * sin]];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let inv = [[m[1][1] / det, -m[0][1] / det], [-m[1][0] / det, m[0][0] / det]];
        // Turn the dominant chamber to open upwards.
        let w0 = (inv[0][0], inv[1][0]);
        let w1 = (inv[0][1], inv[1][1]);
        let n0 = (w0.0 * w0.0 + w0.1 * w0.1).sqrt();
        let n1 = (w1.0 * w1.0 + w1.1 * w1.1).sqrt();
        let mid = (w0.0 / n0 + w1.0 / n1, w0.1 / n0 + w1.1 / n1);
        let phi = std::f64::consts::FRAC_PI_2 - mid.1.atan2(mid.0);
        let (s, co) = phi.sin_cos();
        let rot = |v: [f64; 2]| [co * v[0] - s * v[1], s * v[0] + co * v[1]];
        let r0 = rot([inv[0][0], inv[1][0]]);
        let r1 = rot([inv[0][1], inv[1][1]]);
        Plane {
            inv: [[r0[0], r1[0]], [r0[1], r1[1]]],
        }
    }

    fn point(&self, c: &[f64]) -> Pt {
        (
            self.inv[0][0] * c[0] + self.inv[0][1] * c[1],
            self.inv[1][0] * c[0] + self.inv[1][1] * c[1],
        )
    }
}

/// Corners of `A_fund` as pairing vectors: one simplex per component.
fn fundamental_corners(g: &Weyl) -> Vec<Vec<f64>> {
    let d = g.datum();
    let mut corners = vec![vec![0.0; d.rank]];
    for (comp, &k) in d.components.iter().zip(&d.highest_short) {
        let m = &d.coroot_support[k];
        let mut next = vec![];
        for c in &corners {
            next.push(c.clone());
            for &i in comp {
                let mut e = c.clone();
                e[i] = 1.0 / m[i] as f64;
                next.push(e);
            }
        }
        corners = next;
    }
    corners
}

/// Pairings of `x(v)` from those of `v`.
fn act(g: &Weyl, a: &Alcove, c: &[f64]) -> Vec<f64> {
    let d = g.datum();
    let x = a.elem();
    let shift = d.simple_pairings(&x.trans);
    let mut c: Vec<f64> = c.iter().zip(&shift).map(|(a, b)| a + *b as f64).collect();
    for &i in g.fin().word(x.fin).iter().rev() {
        let i = i as usize;
        let ci = c[i];
        for (j, cj) in c.iter_mut().enumerate() {
            *cj -= ci * d.cartan[j][i] as f64;
        }
    }
    c
}

fn order_around(mut pts: Vec<Pt>) -> Vec<Pt> {
    let n = pts.len() as f64;
    let cx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let cy = pts.iter().map(|p| p.1).sum::<f64>() / n;
    pts.sort_by(|a, b| {
        let ta = (a.1 - cy).atan2(a.0 - cx);
        let tb = (b.1 - cy).atan2(b.0 - cx);
        ta.total_cmp(&tb)
    });
    pts
}

impl Picture {
    /// Dominant alcoves of length at most `window`, plus everything named by
    /// the shadings. Later shadings paint over earlier ones.
    pub fn build(g: &Weyl, window: usize, shades: &[String]) -> Result<Picture> {
        let d = g.datum();
        if d.rank != 2 {
            bail!("draw needs a rank 2 datum, {} has rank {}", d.tag(), d.rank);
        }
        let mut marks: BTreeMap<Alcove, (Option<usize>, Option<String>)> = BTreeMap::new();
        for a in g.dominant_alcoves(window) {
            marks.insert(a, (None, None));
        }
        for (layer, expr) in shades.iter().enumerate() {
            for (a, label) in shading(g, expr)? {
                let e = marks.entry(a).or_insert((None, None));
                e.0 = Some(layer);
                if label.is_some() {
                    e.1 = label;
                }
            }
        }
        let plane = Plane::new(g);
        let base = fundamental_corners(g);
        let den = g.denom() as f64;
        let mut cells: Vec<Cell> = marks
            .into_iter()
            .map(|(a, (layer, label))| {
                let corners = base.iter().map(|c| plane.point(&act(g, &a, c))).collect();
                let bary: Vec<f64> = g.simple_pairings_scaled(&a).iter().map(|&q| q as f64 / den).collect();
                Cell {
                    key: g.bfs_key(a.elem()),
                    corners: order_around(corners),
                    center: plane.point(&bary),
                    layer,
                    label,
                }
            })
            .collect();
        cells.sort_by(|a, b| a.key.cmp(&b.key));
        Ok(Picture { cells })
    }

    fn bounds(&self) -> (Pt, Pt) {
        let pts = self.cells.iter().flat_map(|c| c.corners.iter());
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts {
            lo = (lo.0.min(p.0), lo.1.min(p.1));
            hi = (hi.0.max(p.0), hi.1.max(p.1));
        }
        (lo, hi)
    }

    fn scale(&self, size: f64) -> f64 {
        let (lo, hi) = self.bounds();
        size / (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9)
    }

    #[cfg(test)]
    fn shaded(&self) -> std::collections::BTreeSet<(usize, String)> {
        self.cells
            .iter()
            .filter(|c| c.layer.is_some())
            .map(|c| c.key.clone())
            .collect()
    }

    pub fn svg(&self) -> String {
        let k = self.scale(SVG_SIZE);
        let (lo, hi) = self.bounds();
        let margin = 10.0;
        let w = (hi.0 - lo.0) * k + 2.0 * margin;
        let h = (hi.1 - lo.1) * k + 2.0 * margin;
        // SVG's y axis points down.
        let map = |p: &Pt| ((p.0 - lo.0) * k + margin, (hi.1 - p.1) * k + margin);
        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
        )
        .unwrap();
        s.push_str("<g stroke=\"#333333\" stroke-width=\"1\" stroke-linejoin=\"round\">\n");
        for c in &self.cells {
            let pts: Vec<String> = c
                .corners
                .iter()
                .map(|p| {
                    let (x, y) = map(p);
                    format!("{x:.2},{y:.2}")
                })
                .collect();
            let fill = c.layer.map_or("#ffffff", |l| SVG_FILL[l % SVG_FILL.len()]);
            writeln!(s, r#"<polygon points="{}" fill="{fill}"/>"#, pts.join(" ")).unwrap();
        }
        s.push_str("</g>\n");
        for c in &self.cells {
            if let Some(l) = &c.label {
                let (x, y) = map(&c.center);
                writeln!(
                    s,
                    r#"<text x="{x:.2}" y="{y:.2}" font-family="sans-serif" font-size="14" text-anchor="middle" dominant-baseline="central">{}</text>"#,
                    xml_escape(l)
                )
                .unwrap();
            }
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn tikz(&self) -> String {
        let k = self.scale(TIKZ_SIZE);
        let mut s = String::from("\\documentclass[tikz,border=2pt]{standalone}\n\\begin{document}\n\\begin{tikzpicture}\n");
        for c in &self.cells {
            let path: Vec<String> = c
                .corners
                .iter()
                .map(|p| format!("({:.3},{:.3})", p.0 * k, p.1 * k))
                .collect();
            let cmd = match c.layer {
                Some(l) => format!("\\filldraw[fill={}]", TIKZ_FILL[l % TIKZ_FILL.len()]),
                None => "\\draw".to_string(),
            };
            writeln!(s, "{cmd} {} -- cycle;", path.join(" -- ")).unwrap();
        }
        for c in &self.cells {
            if let Some(l) = &c.label {
                writeln!(s, "\\node at ({:.3},{:.3}) {{{}}};", c.center.0 * k, c.center.1 * k, tex_escape(l)).unwrap();
            }
        }
        s.push_str("\\end{tikzpicture}\n\\end{document}\n");
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tex_escape(s: &str) -> String {
    s.chars()
        .map(|c| match c {
            '\\' => "\\textbackslash{}".to_string(),
            '{' | '}' | '$' | '&' | '#' | '_' | '%' => format!("\\{c}"),
            _ => c.to_string(),
        })
        .collect()
}
