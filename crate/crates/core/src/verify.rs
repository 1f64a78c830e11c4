//! Verification suites with deterministic JSON reports.
//!
//! A check either passes, fails (the identity is false on that input) or
//! aborts the run with an [`Error`] when the harness itself cannot proceed.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::alcoves::Alcove;
use crate::characters::Characters;
use crate::error::{Error, Result};
use crate::hecke::{Hecke, PCanonicalTable};
use crate::laurent::LaurentPoly;
use crate::lincomb::{self, LinComb};
use crate::parabolic::{AsphElem, SphElem, Status};
use crate::rootdata::Weight;
use crate::weyl::{ExtElem, Order, Weyl};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    LemmaRho,
    Main,
    Periodic,
    Orders,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::LemmaRho => "lemma-rho",
            Suite::Main => "main",
            Suite::Periodic => "periodic",
            Suite::Orders => "orders",
            Suite::All => "all",
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::LemmaRho, Suite::Main, Suite::Periodic, Suite::Orders],
            s => vec![s],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Suite::LemmaRho, Suite::Main, Suite::Periodic, Suite::Orders, Suite::All]
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct Params {
    /// Length bound for the `main` and `lemma-rho` sweeps.
    pub max_len: usize,
    /// Length bound of the alcove window for `periodic` and `orders`.
    pub window: usize,
    /// Random samples for the translation checks.
    pub samples: usize,
    pub seed: u64,
    pub timing: bool,
}

impl Params {
    pub fn defaults_for(weyl: &Weyl) -> Self {
        let rank = weyl.datum().rank;
        Params {
            max_len: if rank <= 1 { 8 } else { 6 },
            window: if rank <= 1 { 10 } else { 6 },
            samples: 100,
            seed: 0x5eed,
            timing: false,
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub suite: String,
    pub datum: String,
    pub datum_hash: String,
    pub table: String,
    pub max_len: usize,
    pub window: usize,
    pub status: Status,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<BTreeMap<String, u128>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

fn check(suite: Suite, name: String, ok: bool, detail: impl FnOnce() -> String) -> Check {
    Check {
        suite: suite.name(),
        name,
        status: if ok { Status::Pass } else { Status::Fail },
        detail: if ok { String::new() } else { detail() },
    }
}

/// Errors that refute the statement under test rather than the harness.
fn is_falsification(e: &Error) -> bool {
    matches!(
        e,
        Error::Hypothesis(_) | Error::NotDivisible(_) | Error::NotInImage { .. } | Error::Validation { .. }
    )
}

fn from_result(suite: Suite, name: String, r: Result<Option<String>>) -> Result<Check> {
    match r {
        Ok(None) => Ok(check(suite, name, true, String::new)),
        Ok(Some(d)) => Ok(check(suite, name, false, || d)),
        Err(e) if is_falsification(&e) => Ok(check(suite, name, false, || e.to_string())),
        Err(e) => Err(e),
    }
}

pub struct Verifier {
    chars: Characters,
    table: PCanonicalTable,
}

impl Verifier {
    pub fn new(hecke: Arc<Hecke>, table: PCanonicalTable) -> Self {
        Verifier {
            chars: Characters::from_hecke(hecke),
            table,
        }
    }

    pub fn weyl(&self) -> &Weyl {
        self.chars.weyl()
    }

    pub fn run(&self, suite: Suite, params: &Params, tool: &str) -> Result<Report> {
        let g = self.weyl();
        let mut checks = vec![];
        let mut timing = BTreeMap::new();
        for part in suite.parts() {
            let start = Instant::now();
            checks.extend(match part {
                Suite::LemmaRho => self.lemma_rho()?,
                Suite::Main => self.main(params)?,
                Suite::Periodic => self.periodic(params)?,
                Suite::Orders => self.orders(params)?,
                Suite::All => unreachable!(),
            });
            timing.insert(part.name().to_string(), start.elapsed().as_millis());
        }
        let failed = checks.iter().filter(|c| c.status == Status::Fail).count();
        Ok(Report {
            schema: REPORT_SCHEMA,
            tool: tool.to_string(),
            suite: suite.name().to_string(),
            datum: g.datum().tag(),
            datum_hash: g.datum().hash().to_string(),
            table: self.table.hash(),
            max_len: params.max_len,
            window: params.window,
            status: if failed == 0 { Status::Pass } else { Status::Fail },
            passed: checks.len() - failed,
            failed,
            checks,
            timing_ms: params.timing.then_some(timing),
        })
    }

    fn show<K: Ord + Clone>(&self, x: &LinComb<K>, key: impl Fn(&K) -> &ExtElem) -> String {
        let g = self.weyl();
        lincomb::render(x, |k| g.bfs_key(key(k)), |k| g.format(key(k)))
            .into_iter()
            .map(|(k, p)| format!("({p})*[{k}]"))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    pub fn lemma_rho(&self) -> Result<Vec<Check>> {
        let s = Suite::LemmaRho;
        let g = self.weyl();
        let par = self.chars.parabolic();
        let t = par.t_varsigma();
        let mut out = vec![];
        for om in g.omega_elements().unwrap_or(&[]) {
            let key = g.mul(&t, om);
            let x = par.kl_n(&key)?;
            let pattern: LinComb<ExtElem> = g
                .finite_elements()
                .into_iter()
                .map(|z| (g.mul(&g.mul(&t, &z), om), LaurentPoly::monomial(g.length(&z) as i32, 1)))
                .collect();
            let diff = x.sub(&pattern);
            out.push(check(s, format!("orbit-sum/{}", g.format(om)), diff.is_empty(), || {
                format!("difference {}", self.show(&diff, |k| k))
            }));
        }
        let base = par.kl_n(&t)?;
        let vv = LaurentPoly::v() + LaurentPoly::v_inv();
        for sg in g.finite_gens() {
            let prod = par.asph_act(&base, &self.chars.periodic().hecke().kl_basis(g.gen(sg)));
            let diff = prod.sub(&base.scale(&vv));
            out.push(check(s, format!("absorb/{}", g.gen_name(sg)), diff.is_empty(), || {
                format!("difference {}", self.show(&diff, |k| k))
            }));
        }
        Ok(out)
    }

    pub fn main(&self, params: &Params) -> Result<Vec<Check>> {
        let s = Suite::Main;
        let g = self.weyl();
        let par = self.chars.parabolic().clone();
        let hecke = par.hecke().clone();
        let fw = g.enumerate_fwext(params.max_len);

        // φ(ᵖM̲_w) = ᵖN̲_{t_ς w}
        let rows = crate::par::map(&fw, |w| {
            let name = format!("phi/{}", g.format(w));
            match par.verify_main(&self.table, w) {
                Ok(r) if r.status == Status::Pass => Ok(check(s, name, true, String::new)),
                Ok(r) => Ok(check(s, name, false, || {
                    let d: Vec<String> = r.diff.iter().map(|(k, p)| format!("({p})*[{k}]")).collect();
                    format!("lhs - rhs = {}", d.join(" + "))
                })),
                Err(e) => from_result(s, name, Err(e)),
            }
        });
        let mut out: Vec<Check> = rows.into_iter().collect::<Result<_>>()?;

        // ξ(H̲_w) is N̲_w on ᶠW_ext and 0 elsewhere.
        let mut all = vec![];
        let oms = g.omega_elements().map(|o| o.to_vec()).unwrap_or_else(|| vec![g.identity()]);
        for x in g.enumerate_w(params.max_len) {
            for om in &oms {
                all.push(g.mul(&x, om));
            }
        }
        let rows = crate::par::map(&all, |w| {
            let x = par.xi(&hecke.kl_basis(w));
            let name = format!("xi/{}", g.format(w));
            let bad = if g.is_fwext(w) {
                self.not_canonical(&x.0, w, |y| par.bar_asph(&AsphElem(y.clone())).0)
            } else if x.is_empty() {
                None
            } else {
                Some(format!("expected 0, got {}", self.show(&x, |k| k)))
            };
            check(s, name, bad.is_none(), || bad.unwrap_or_default())
        });
        out.extend(rows);

        // M̲_w is bar-invariant and unitriangular, and ζ(M̲_w) = H̲_{w_f w}.
        let rows = crate::par::map(&fw, |w| {
            let name = format!("zeta/{}", g.format(w));
            let r = par.kl_m(w).map(|m| {
                self.not_canonical(&m.0, w, |y| par.bar_sph(&SphElem(y.clone())).0)
                    .or_else(|| {
                        let z = par.zeta(&m);
                        let target = hecke.kl_basis(&g.mul(&g.w_f(), w));
                        (z != target).then(|| "zeta image differs from the KL element".to_string())
                    })
            });
            from_result(s, name, r)
        });
        out.extend(rows.into_iter().collect::<Result<Vec<_>>>()?);

        // ζ(M_ω) = H̲_{w_f}·H_ω = Σ_z v^{ℓ(w_f)−ℓ(z)} H_{zω}
        let lwf = g.length(&g.w_f()) as i32;
        for om in &oms {
            let z = par.zeta(&SphElem::basis(om.clone()));
            let prod = hecke.mul_std(&hecke.kl_basis(&g.w_f()), om);
            let sum: LinComb<ExtElem> = g
                .finite_elements()
                .into_iter()
                .map(|x| (g.mul(&x, om), LaurentPoly::monomial(lwf - g.length(&x) as i32, 1)))
                .collect();
            let ok = z.0 == prod.0 && prod.0 == sum;
            out.push(check(s, format!("zeta-id/{}", g.format(om)), ok, || {
                format!("zeta(M) = {}", self.show(&z, |k| k))
            }));
        }
        Ok(out)
    }

    /// `None` when `x` is bar-invariant with coefficient 1 at `w` and the
    /// other coefficients in `vℤ[v]`.
    fn not_canonical(
        &self,
        x: &LinComb<ExtElem>,
        w: &ExtElem,
        bar: impl Fn(&LinComb<ExtElem>) -> LinComb<ExtElem>,
    ) -> Option<String> {
        let g = self.weyl();
        if !x.coeff(w).is_one() {
            return Some(format!("coefficient at {} is {}", g.format(w), x.coeff(w)));
        }
        if let Some((y, c)) = x.iter().find(|(y, c)| *y != w && !c.in_v_zv()) {
            return Some(format!("coefficient at {} is {c}", g.format(y)));
        }
        let b = bar(x);
        (b != *x).then(|| format!("not bar-invariant: bar = {}", self.show(&b, |k| k)))
    }

    fn window(&self, params: &Params) -> Vec<Alcove> {
        let g = self.weyl();
        g.enumerate_w(params.window)
            .into_iter()
            .map(|x| g.alcove(&x).expect("enumerated in W"))
            .collect()
    }

    fn random_weight(&self, rng: &mut ChaCha8Rng, r: i64) -> Weight {
        let d = self.weyl().datum();
        Weight((0..d.lattice_rank).map(|_| rng.gen_range(-r..=r)).collect())
    }

    pub fn periodic(&self, params: &Params) -> Result<Vec<Check>> {
        let s = Suite::Periodic;
        let g = self.weyl();
        let per = self.chars.periodic().clone();
        let hecke = per.hecke().clone();
        let window = self.window(params);
        let name = |a: &Alcove| g.format_alcove(a);

        // π_f-division in Lusztig's formula
        let rows = crate::par::map(&window, |a| {
            from_result(s, format!("divide/{}", name(a)), per.canonical_p(a).map(|_| None))
        });
        let mut out: Vec<Check> = rows.into_iter().collect::<Result<_>>()?;

        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let short = g.enumerate_w(3);
        let mut samples = vec![];
        for _ in 0..params.samples {
            let a = window[rng.gen_range(0..window.len())].clone();
            let mu = self.random_weight(&mut rng, 2);
            let x = short[rng.gen_range(0..short.len())].clone();
            samples.push((a, mu, x));
        }
        let rows = crate::par::map(&samples, |(a, mu, x)| -> Result<Vec<Check>> {
            let tag = format!("{}+{:?}", name(a), mu.0);
            let pa = per.canonical_p(a)?;
            let moved = per.canonical_p(&g.translate(a, mu))?;
            let c1 = check(s, format!("translate/{tag}"), *moved == per.per_translate(&pa, mu), String::new);
            let ppa = per.p_canonical_p(&self.table, a)?;
            let pmoved = per.p_canonical_p(&self.table, &g.translate(a, mu))?;
            let c2 = check(
                s,
                format!("p-translate/{tag}"),
                pmoved == per.per_translate(&ppa, mu),
                String::new,
            );
            // (R·h) + μ = (R + μ)·τ_μ(h)
            let h = hecke.std(x);
            let lhs = per.per_translate(&per.per_act(&pa, &h)?, mu);
            let th = hecke.std(&g.tau(mu, x)?);
            let rhs = per.per_act(&per.per_translate(&pa, mu), &th)?;
            let c3 = check(
                s,
                format!("trans-action/{tag}/{}", g.format(x)),
                lhs == rhs,
                String::new,
            );
            Ok(vec![c1, c2, c3])
        });
        for r in rows {
            out.extend(r?);
        }

        let rep = per.positivity_check(&self.table, &window)?;
        out.push(check(s, "positivity".into(), rep.passed(), || {
            rep.negatives
                .iter()
                .map(|n| format!("coefficient {} of {} in {}", n.coeff, n.b, n.a))
                .collect::<Vec<_>>()
                .join("; ")
        }));

        // q_A by both routes, and coset constancy of the columns used.
        let rows = crate::par::map(&window, |a| -> Result<Vec<Check>> {
            let q1 = self.chars.q_of_alcove(&self.table, a)?;
            let q2 = self.chars.q_via_coset_sum(&self.table, a)?;
            let c1 = check(s, format!("q-routes/{}", name(a)), q1 == q2, || {
                format!("{q1:?} != {q2:?}")
            });
            let a0 = g.translate(a, &g.box_rep_below(a).neg());
            let w = g.mul(&g.w_f(), a0.elem());
            let c2 = check(
                s,
                format!("coset-constancy/{}", name(a)),
                self.chars.coset_constancy(&self.table, &w)?,
                String::new,
            );
            Ok(vec![c1, c2])
        });
        for r in rows {
            out.extend(r?);
        }
        Ok(out)
    }

    pub fn orders(&self, params: &Params) -> Result<Vec<Check>> {
        let s = Suite::Orders;
        let g = self.weyl();
        let mut out = vec![];

        // Length formula against breadth-first search.
        let depth = bfs_lengths(g, params.window);
        let mut elems: Vec<(&ExtElem, &usize)> = depth.iter().collect();
        elems.sort_by_key(|(x, _)| g.bfs_key(x));
        let bad: Vec<String> = elems
            .iter()
            .filter(|(x, d)| g.length(x) != **d)
            .map(|(x, d)| format!("{}: formula {} bfs {}", g.format(x), g.length(x), d))
            .collect();
        out.push(check(s, format!("length/{}", depth.len()), bad.is_empty(), || bad.join("; ")));

        let window = self.window(params);
        let rho2v = g.rho2_vee();
        let height = |a: &Alcove| g.scaled_barycenter(a).pair(&rho2v);
        let rows = crate::par::map(&window, |a| {
            let mut bad = vec![];
            if g.check(&g.hat(a)) != *a || g.hat(&g.check(a)) != *a {
                bad.push("hat and check are not inverse".to_string());
            }
            if g.box_rep_above(&g.hat(a)) != g.box_rep_below(a) {
                bad.push("hat leaves the box".to_string());
            }
            for sg in 0..g.num_gens() {
                let b = g.act_right_gen(a, sg);
                let below = g.neighbor_below(a, sg);
                let cmp = g.generic_cmp(a, &b);
                let expect = if below { Order::Less } else { Order::Greater };
                if cmp != expect {
                    bad.push(format!("{} vs {}: {:?}", g.gen_name(sg), g.format_alcove(&b), cmp));
                }
                if below != (height(a) < height(&b)) {
                    bad.push(format!("height not monotone across {}", g.gen_name(sg)));
                }
            }
            check(s, format!("alcove/{}", g.format_alcove(a)), bad.is_empty(), || bad.join("; "))
        });
        out.extend(rows);

        // Translation invariance of the generic order on sampled pairs.
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ 0x0dde);
        let mut bad = vec![];
        for _ in 0..params.samples {
            let a = &window[rng.gen_range(0..window.len())];
            let b = &window[rng.gen_range(0..window.len())];
            let mu = self.random_weight(&mut rng, 2);
            let c0 = g.generic_cmp(a, b);
            let c1 = g.generic_cmp(&g.translate(a, &mu), &g.translate(b, &mu));
            if c0 != c1 {
                bad.push(format!("{} {} +{:?}", g.format_alcove(a), g.format_alcove(b), mu.0));
            }
            if c0 == Order::Less && height(a) >= height(b) {
                bad.push(format!("height order {} {}", g.format_alcove(a), g.format_alcove(b)));
            }
        }
        out.push(check(s, "generic-translation".into(), bad.is_empty(), || bad.join("; ")));
        Ok(out)
    }
}

/// Reduced-word length of each element of `W` up to `max_len`, by
/// breadth-first search over the Cayley graph.
pub fn bfs_lengths(g: &Weyl, max_len: usize) -> HashMap<ExtElem, usize> {
    let mut depth = HashMap::new();
    let mut queue = VecDeque::new();
    depth.insert(g.identity(), 0);
    queue.push_back(g.identity());
    let mut seen = HashSet::new();
    while let Some(x) = queue.pop_front() {
        let d = depth[&x];
        if d == max_len || !seen.insert(x.clone()) {
            continue;
        }
        for s in 0..g.num_gens() {
            let y = g.mul_gen(&x, s);
            if !depth.contains_key(&y) {
                depth.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    depth
}
