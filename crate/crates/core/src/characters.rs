//! Characters of `G₁T`-modules as combinatorics: the elements `q_A`,
//! baby Verma multiplicities of projectives and tiltings, reciprocity and
//! simple characters.
//!
//! Labels are elements `x ∈ W_ext`, standing for the weight `x·_p 0` (or
//! `x·_p b` for the base `b` of another regular block).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use parking_lot::Mutex;

use crate::alcoves::Alcove;
use crate::error::{Error, Result};
use crate::hecke::{BasisKind, Hecke, HeckeElem, PCanonicalTable, Prime};
use crate::laurent::LaurentPoly;
use crate::parabolic::{AsphElem, Parabolic, SphElem};
use crate::periodic::{specialize_v1, Periodic};
use crate::rootdata::Weight;
use crate::weyl::{ExtElem, Gen, Weyl};

/// Weight multiplicities.
pub type FormalCharacter = BTreeMap<Weight, i64>;

/// Row of multiplicities `y ↦ (Q̂_w : Ẑ_y)`.
pub type Row = BTreeMap<ExtElem, i64>;

/// Integer matrix indexed by labels. For tables built from projectives the
/// entry at `(w, y)` is `(Q̂_w : Ẑ_y) = [Ẑ_y : L̂_w]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiplicityTable {
    pub labels: Vec<ExtElem>,
    pub entries: BTreeMap<(ExtElem, ExtElem), i64>,
}

impl MultiplicityTable {
    pub fn identity(labels: &[ExtElem]) -> Self {
        MultiplicityTable {
            labels: labels.to_vec(),
            entries: labels.iter().map(|x| ((x.clone(), x.clone()), 1)).collect(),
        }
    }

    pub fn get(&self, row: &ExtElem, col: &ExtElem) -> i64 {
        self.entries
            .get(&(row.clone(), col.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn row(&self, row: &ExtElem) -> Row {
        self.entries
            .iter()
            .filter(|((r, _), _)| r == row)
            .map(|((_, c), &m)| (c.clone(), m))
            .collect()
    }

    fn insert(&mut self, row: ExtElem, col: ExtElem, m: i64) {
        if m != 0 {
            self.entries.insert((row, col), m);
        }
    }
}

pub fn mass(ch: &FormalCharacter) -> i64 {
    ch.values().sum()
}

pub struct Characters {
    periodic: Arc<Periodic>,
    rows: Mutex<HashMap<ExtElem, Arc<Row>>>,
}

impl Characters {
    pub fn new(periodic: Arc<Periodic>) -> Self {
        Characters {
            periodic,
            rows: Mutex::new(HashMap::new()),
        }
    }

    pub fn from_hecke(hecke: Arc<Hecke>) -> Self {
        Self::new(Arc::new(Periodic::from_hecke(hecke)))
    }

    pub fn weyl(&self) -> &Weyl {
        self.periodic.weyl()
    }

    pub fn periodic(&self) -> &Arc<Periodic> {
        &self.periodic
    }

    pub fn parabolic(&self) -> &Arc<Parabolic> {
        self.periodic.parabolic()
    }

    /// `ᵖH̲_x`, read from an `H` table directly or through `ζ` from an `M` table.
    pub fn h_column(&self, table: &PCanonicalTable, x: &ExtElem) -> Result<HeckeElem> {
        let g = self.weyl();
        match table.basis() {
            BasisKind::H => Ok(HeckeElem(table.column(x)?)),
            BasisKind::M => {
                let w = g.mul(&g.w_f(), x);
                if !g.is_fwext(&w) {
                    return Err(Error::Precondition(format!(
                        "{} is not w_f times an element of fW_ext",
                        g.format(x)
                    )));
                }
                Ok(self.parabolic().zeta(&SphElem(table.column(&w)?)))
            }
            BasisKind::N => Err(Error::Precondition(
                "an N-basis table does not determine the columns of H".into(),
            )),
        }
    }

    /// `q_A = ᵖP̲_Â` at `v = 1`.
    pub fn q_of_alcove(&self, table: &PCanonicalTable, a: &Alcove) -> Result<BTreeMap<Alcove, BigInt>> {
        let hat = self.weyl().hat(a);
        Ok(specialize_v1(&self.periodic.p_canonical_p(table, &hat)?))
    }

    /// `q_A` as `Σ_z ᵖh_{z, w_f w}(1) z(A_fund)` for `A = w_f w(A_fund) ⊂ Π̌_0`,
    /// moved to the box of `A` by translation.
    pub fn q_via_coset_sum(&self, table: &PCanonicalTable, a: &Alcove) -> Result<BTreeMap<Alcove, BigInt>> {
        let g = self.weyl();
        let mu = g.box_rep_below(a);
        let a0 = g.translate(a, &mu.neg());
        let col = self.h_column(table, a0.elem())?;
        let mut out = BTreeMap::new();
        for (z, c) in col.specialize_one() {
            if c.is_zero() {
                continue;
            }
            let b = g.alcove(&z)?;
            out.insert(g.translate(&b, &mu), c);
        }
        Ok(out)
    }

    /// Whether `z ↦ ᵖh_{z, w_f w}(1)` is constant on left `W_f`-cosets.
    pub fn coset_constancy(&self, table: &PCanonicalTable, w: &ExtElem) -> Result<bool> {
        let g = self.weyl();
        if !g.is_fwext(w) {
            return Err(Error::NotMinimal(g.format(w)));
        }
        let col = self.h_column(table, &g.mul(&g.w_f(), w))?.specialize_one();
        let fin = g.finite_elements();
        for (z, c) in &col {
            for x in &fin {
                let xz = g.mul(x, z);
                if col.get(&xz).cloned().unwrap_or_default() != *c {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    fn check_table_prime(&self, table: &PCanonicalTable, p: i64) -> Result<()> {
        match table.p() {
            Prime::Finite(q) if q as i64 != p => Err(Error::Precondition(format!(
                "table is for p = {q}, asked for p = {p}"
            ))),
            _ => Ok(()),
        }
    }

    fn check_p(&self, p: i64) -> Result<()> {
        let h = self.weyl().datum().coxeter_number;
        if p < 2 * h - 1 || p <= h {
            return Err(Error::Hypothesis(format!("p = {p} is below 2h - 1 = {}", 2 * h - 1)));
        }
        Ok(())
    }

    /// Whether the label `w` satisfies the hypotheses of the multiplicity
    /// formula: `t_ς w` restricted.
    pub fn is_restricted_label(&self, w: &ExtElem) -> bool {
        let g = self.weyl();
        let tw = g.mul(&self.parabolic().t_varsigma(), w);
        g.is_fwext(&tw) && g.is_restricted(&tw)
    }

    /// `y ↦ ᵖh_{y,w}(1)`, the baby Verma multiplicities of `Q̂(w·_p 0)`.
    pub fn projective_multiplicities(&self, table: &PCanonicalTable, w: &ExtElem) -> Result<Row> {
        let g = self.weyl();
        if !self.is_restricted_label(w) {
            return Err(Error::Precondition(format!(
                "t_varsigma {} is not restricted",
                g.format(w)
            )));
        }
        let col = self.h_column(table, w)?;
        Ok(col
            .iter()
            .map(|(y, c)| (y.clone(), c.eval_one_i64()))
            .filter(|(_, m)| *m != 0)
            .collect())
    }

    /// `ν` such that `t_ν w` is a restricted label.
    pub fn normalize_label(&self, w: &ExtElem) -> Weight {
        let g = self.weyl();
        let d = g.datum();
        let p0 = 2 * d.coxeter_number + 1;
        let tw = g.mul(&self.parabolic().t_varsigma(), w);
        let lam = g.dot(&tw, &Weight::zero(d.lattice_rank), p0);
        let k: Vec<i64> = d.simple_pairings(&lam).iter().map(|c| -c.div_euclid(p0)).collect();
        d.weight_with_pairings(&k)
    }

    /// Baby Verma multiplicities of `Q̂(w·_p 0)` for any label, through the
    /// twist by `t_ν` into the restricted range.
    pub fn projective_row(&self, table: &PCanonicalTable, w: &ExtElem) -> Result<Arc<Row>> {
        if let Some(r) = self.rows.lock().get(w) {
            return Ok(r.clone());
        }
        let g = self.weyl();
        let nu = self.normalize_label(w);
        let w1 = g.mul(&g.translation(&nu), w);
        let back = g.translation(&nu.neg());
        let row: Row = self
            .projective_multiplicities(table, &w1)?
            .into_iter()
            .map(|(y, m)| (g.mul(&back, &y), m))
            .collect();
        let row = Arc::new(row);
        if table.is_builtin() {
            self.rows.lock().insert(w.clone(), row.clone());
        }
        Ok(row)
    }

    pub fn multiplicity_table(&self, table: &PCanonicalTable, labels: &[ExtElem]) -> Result<MultiplicityTable> {
        let rows = crate::par::map(labels, |w| self.projective_row(table, w));
        let mut mt = MultiplicityTable {
            labels: labels.to_vec(),
            entries: BTreeMap::new(),
        };
        for (w, r) in labels.iter().zip(rows) {
            for (y, m) in r?.iter() {
                mt.insert(w.clone(), y.clone(), *m);
            }
        }
        Ok(mt)
    }

    /// Height of the weight `x·0` at the reference prime.
    fn label_height(&self, x: &ExtElem) -> i64 {
        let g = self.weyl();
        let d = g.datum();
        let p0 = 2 * d.coxeter_number + 1;
        g.dot(x, &Weight::zero(d.lattice_rank), p0).pair(&g.rho2_vee())
    }

    /// Reads `mt` as `[Ẑ_y : L̂_w]` and inverts on `window`: the result has
    /// `[L̂_w] = Σ_y a_{w,y} [Ẑ_y]` at `(w, y)`.
    pub fn reciprocity_invert(&self, mt: &MultiplicityTable, window: &[ExtElem]) -> Result<MultiplicityTable> {
        let g = self.weyl();
        let inside: HashSet<&ExtElem> = window.iter().collect();
        let have: HashSet<&ExtElem> = mt.labels.iter().collect();
        let mut missing: Vec<&ExtElem> = window.iter().filter(|w| !have.contains(w)).collect();
        let heights: HashMap<&ExtElem, i64> = window.iter().map(|w| (w, self.label_height(w))).collect();
        let lo = heights.values().copied().min().unwrap_or(0);
        let hi = heights.values().copied().max().unwrap_or(0);
        for (r, c) in mt.entries.keys() {
            if inside.contains(r) && !inside.contains(c) {
                let h = self.label_height(c);
                if lo < h && h < hi {
                    missing.push(c);
                }
            }
        }
        if !missing.is_empty() {
            missing.sort_by_key(|x| g.bfs_key(x));
            missing.dedup();
            let names: Vec<String> = missing.iter().map(|x| g.format(x)).collect();
            return Err(Error::Window(format!(
                "labels needed for a closed window: {}",
                names.join(", ")
            )));
        }
        // Upper unitriangular by height: solve M X = 1 column by column.
        let mut order: Vec<&ExtElem> = window.iter().collect();
        order.sort_by_key(|x| (heights[x], g.bfs_key(x)));
        for (i, w) in order.iter().enumerate() {
            if mt.get(w, w) != 1 {
                return Err(Error::Precondition(format!("diagonal entry at {} is not 1", g.format(w))));
            }
            for y in &order[..i] {
                if mt.get(w, y) != 0 {
                    return Err(Error::Precondition(format!(
                        "entry ({}, {}) breaks triangularity",
                        g.format(w),
                        g.format(y)
                    )));
                }
            }
        }
        let n = order.len();
        let mut inv = vec![vec![0i64; n]; n];
        for j in 0..n {
            inv[j][j] = 1;
            for i in (0..j).rev() {
                let s: i64 = (i + 1..=j).map(|k| mt.get(order[i], order[k]) * inv[k][j]).sum();
                inv[i][j] = -s;
            }
        }
        let mut out = MultiplicityTable {
            labels: window.to_vec(),
            entries: BTreeMap::new(),
        };
        for (i, y) in order.iter().enumerate() {
            for (j, w) in order.iter().enumerate() {
                out.insert((*w).clone(), (*y).clone(), inv[i][j]);
            }
        }
        Ok(out)
    }

    /// `ch Ẑ(λ) = e(λ) Π_{α > 0} (1 + e(−α) + … + e(−(p−1)α))`
    pub fn baby_verma_character(&self, lambda: &Weight, p: i64) -> FormalCharacter {
        let mut ch = FormalCharacter::new();
        ch.insert(lambda.clone(), 1);
        for alpha in &self.weyl().datum().positive_roots {
            let mut next = FormalCharacter::new();
            for (mu, m) in &ch {
                for k in 0..p {
                    *next.entry(mu.add_scaled(-k, alpha)).or_insert(0) += m;
                }
            }
            ch = next;
        }
        ch
    }

    pub fn dominant_part(&self, ch: &FormalCharacter) -> FormalCharacter {
        let d = self.weyl().datum();
        ch.iter()
            .filter(|(mu, m)| **m != 0 && d.simple_pairings(mu).iter().all(|&c| c >= 0))
            .map(|(mu, m)| (mu.clone(), *m))
            .collect()
    }

    /// The weight in the closure of the lowest `p`-alcove linked to `λ`, or
    /// `None` when `λ` is singular.
    pub fn block_base(&self, lambda: &Weight, p: i64) -> Option<Weight> {
        let d = self.weyl().datum();
        let mut v = lambda.add(d.varsigma());
        'outer: loop {
            for i in 0..d.rank {
                if v.pair(&d.simple_coroots[i]) < 0 {
                    v = d.reflect(i, &v);
                    continue 'outer;
                }
            }
            for &k in &d.highest_short {
                let c = v.pair(&d.positive_coroots[k]);
                if c > p {
                    v = v.add_scaled(p - c, &d.positive_roots[k]);
                    continue 'outer;
                }
            }
            break;
        }
        let regular = d.positive_coroots.iter().all(|c| v.pair(c).rem_euclid(p) != 0);
        regular.then(|| v.sub(d.varsigma()))
    }

    /// The label `x` with `x·_p base = μ`, if `μ` is linked to `base`.
    pub fn dot_preimage(&self, base: &Weight, mu: &Weight, p: i64) -> Option<ExtElem> {
        let g = self.weyl();
        let vs = g.datum().varsigma();
        let shifted = mu.add(vs);
        for w in g.fin().elements() {
            let u = g.fin().apply(g.fin().inv(w), &shifted).sub(vs).sub(base);
            if u.0.iter().all(|c| c % p == 0) {
                let kappa = Weight(u.0.iter().map(|c| c / p).collect());
                let x = ExtElem { fin: w, trans: kappa };
                debug_assert_eq!(&g.dot(&x, base, p), mu);
                return Some(x);
            }
        }
        None
    }

    fn is_steinberg_type(&self, lambda: &Weight, p: i64) -> bool {
        let d = self.weyl().datum();
        d.simple_pairings(&lambda.add(d.varsigma()))
            .iter()
            .all(|c| c.rem_euclid(p) == 0)
    }

    /// `μ ↦ (Q̂(λ) : Ẑ(μ))` for `λ` regular or of Steinberg type
    /// (`λ + ς ∈ pX`). The latter is read off the row of `w_f` through
    /// translation onto the wall, which sends each `Ẑ(y·_p 0)`, `y ∈ W_f`, to
    /// the same `Ẑ(λ)`.
    pub fn projective_character(&self, table: &PCanonicalTable, lambda: &Weight, p: i64) -> Result<FormalCharacter> {
        self.check_p(p)?;
        self.check_table_prime(table, p)?;
        let g = self.weyl();
        let d = g.datum();
        if self.is_steinberg_type(lambda, p) {
            let row = self.projective_multiplicities(table, &g.w_f())?;
            let wall = d.varsigma().neg();
            let shift = lambda.add(d.varsigma());
            let mut fibres: BTreeMap<Weight, Vec<i64>> = BTreeMap::new();
            for (y, m) in row.iter() {
                fibres
                    .entry(g.dot(y, &wall, p).add(&shift))
                    .or_default()
                    .push(*m);
            }
            let size = g.fin().order();
            let mut out = FormalCharacter::new();
            for (mu, ms) in fibres {
                if ms.len() != size || ms.iter().any(|m| *m != ms[0]) {
                    return Err(Error::Hypothesis(format!(
                        "row of w_f is not constant on the fibre over {:?}",
                        mu.0
                    )));
                }
                out.insert(mu, ms[0]);
            }
            return Ok(out);
        }
        let base = self.block_base(lambda, p).ok_or_else(|| {
            Error::Precondition(format!("weight {:?} is singular and not of Steinberg type", lambda.0))
        })?;
        let x = self.dot_preimage(&base, lambda, p).expect("block base is linked");
        let row = self.projective_row(table, &x)?;
        Ok(row.iter().map(|(y, m)| (g.dot(y, &base, p), *m)).collect())
    }

    /// Dominant part of `ch L̂(λ)` for restricted `λ`, by induction along
    /// `[Ẑ(λ)] = Σ_μ [Ẑ(λ) : L̂(μ)] [L̂(μ)]` over the linked `μ ≤ λ` whose
    /// baby Verma module has a dominant weight.
    pub fn simple_character(&self, table: &PCanonicalTable, lambda: &Weight, p: i64) -> Result<FormalCharacter> {
        self.check_p(p)?;
        self.check_table_prime(table, p)?;
        let d = self.weyl().datum();
        if !d.simple_pairings(lambda).iter().all(|c| (0..p).contains(c)) {
            return Err(Error::Precondition(format!("weight {:?} is not restricted", lambda.0)));
        }
        if self.is_steinberg_type(lambda, p) {
            return Ok(self.dominant_part(&self.baby_verma_character(lambda, p)));
        }
        let base = self.block_base(lambda, p).ok_or_else(|| {
            Error::Precondition(format!("weight {:?} is singular and not of Steinberg type", lambda.0))
        })?;
        let mut memo = HashMap::new();
        self.simple_dominant(table, lambda, &base, p, &mut memo)
    }

    /// Same, for the label `x` of a restricted weight `x·_p 0`.
    pub fn simple_character_of_label(&self, table: &PCanonicalTable, x: &ExtElem, p: i64) -> Result<FormalCharacter> {
        let g = self.weyl();
        let lam = g.dot(x, &Weight::zero(g.datum().lattice_rank), p);
        self.simple_character(table, &lam, p)
    }

    fn simple_dominant(
        &self,
        table: &PCanonicalTable,
        lambda: &Weight,
        base: &Weight,
        p: i64,
        memo: &mut HashMap<Weight, FormalCharacter>,
    ) -> Result<FormalCharacter> {
        if let Some(c) = memo.get(lambda) {
            return Ok(c.clone());
        }
        let g = self.weyl();
        let d = g.datum();
        let rho2v = g.rho2_vee();
        let x_lam = self.dot_preimage(base, lambda, p).expect("linked by construction");
        let mut ch = self.dominant_part(&self.baby_verma_character(lambda, p));
        // Candidates λ − Σ c_i α_i above some dominant weight, lowest last.
        let budget = lambda.pair(&rho2v) / 2;
        let mut cands = vec![];
        let mut stack = vec![(lambda.clone(), 0usize, 0i64)];
        while let Some((mu, start, used)) = stack.pop() {
            if &mu != lambda {
                cands.push(mu.clone());
            }
            if used == budget {
                continue;
            }
            for i in start..d.rank {
                stack.push((mu.sub(&d.simple_roots[i]), i, used + 1));
            }
        }
        cands.sort_by_key(|mu| std::cmp::Reverse(mu.pair(&rho2v)));
        for mu in cands {
            let Some(x_mu) = self.dot_preimage(base, &mu, p) else {
                continue;
            };
            let m = self.projective_row(table, &x_mu)?.get(&x_lam).copied().unwrap_or(0);
            if m == 0 {
                continue;
            }
            let sub = self.simple_dominant(table, &mu, base, p, memo)?;
            for (nu, k) in sub {
                *ch.entry(nu).or_insert(0) -= m * k;
            }
        }
        ch.retain(|_, m| *m != 0);
        if let Some((nu, m)) = ch.iter().find(|(_, m)| **m < 0) {
            return Err(Error::Hypothesis(format!(
                "negative multiplicity {m} at {:?} in the simple character of {:?}",
                nu.0, lambda.0
            )));
        }
        memo.insert(lambda.clone(), ch.clone());
        Ok(ch)
    }

    /// Whether the tilting label `u` corresponds to a projective, i.e. whether
    /// `t_ς w_f u` is restricted.
    pub fn is_valid_tilting_label(&self, u: &ExtElem) -> bool {
        let g = self.weyl();
        self.is_restricted_label(&g.mul(&g.w_f(), u))
    }

    /// `u ↦ w_f u`: `T(t_ς u·_p 0)` restricts to `Q̂(t_ς w_f u·_p 0)`.
    pub fn tilting_to_projective(&self, u: &ExtElem) -> Result<ExtElem> {
        let g = self.weyl();
        if !self.is_valid_tilting_label(u) {
            return Err(Error::Hypothesis(format!(
                "t_varsigma w_f {} is not restricted",
                g.format(u)
            )));
        }
        Ok(g.mul(&g.w_f(), u))
    }

    pub fn projective_to_tilting(&self, w: &ExtElem) -> Result<ExtElem> {
        let g = self.weyl();
        if !self.is_restricted_label(w) {
            return Err(Error::Hypothesis(format!("t_varsigma {} is not restricted", g.format(w))));
        }
        Ok(g.mul(&g.w_f(), w))
    }

    /// `ζ(φ^{-1}(a))` at `v = 1`, for `a` in the antispherical module at `v = 1`.
    pub fn tilting_babyverma_mults(&self, a: &BTreeMap<ExtElem, BigInt>) -> Result<BTreeMap<ExtElem, BigInt>> {
        let g = self.weyl();
        let par = self.parabolic();
        let t = par.t_varsigma();
        let t_inv = g.inv(&t);
        let mut rem: BTreeMap<ExtElem, BigInt> =
            a.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (k.clone(), c.clone())).collect();
        let mut pre: BTreeMap<ExtElem, BigInt> = BTreeMap::new();
        while let Some(k) = rem.keys().max_by_key(|k| g.bfs_key(k)).cloned() {
            let c = rem[&k].clone();
            let w = g.mul(&t_inv, &k);
            let not_image = || Error::NotInImage {
                map: "phi",
                witness: g.format(&k),
                found: c.to_string(),
                expected: "0".into(),
            };
            if !g.is_fwext(&w) {
                return Err(not_image());
            }
            let img = par.phi(&SphElem::basis(w.clone()))?.specialize_one();
            if img.get(&k).and_then(|x| x.to_i64()) != Some(1) {
                return Err(not_image());
            }
            for (y, m) in img {
                let e = rem.entry(y.clone()).or_default();
                *e -= &c * m;
                if e.is_zero() {
                    rem.remove(&y);
                }
            }
            *pre.entry(w).or_default() += c;
        }
        let mut out: BTreeMap<ExtElem, BigInt> = BTreeMap::new();
        for (w, c) in pre {
            for x in g.finite_elements() {
                let e = out.entry(g.mul(&x, &w)).or_default();
                *e += &c;
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// `a·(1 + s)` in the antispherical module at `v = 1`.
    pub fn theta_asph(&self, a: &BTreeMap<ExtElem, BigInt>, s: Gen) -> BTreeMap<ExtElem, BigInt> {
        let g = self.weyl();
        let x = AsphElem(
            a.iter()
                .map(|(k, c)| (k.clone(), LaurentPoly::monomial(0, c.clone())))
                .collect(),
        );
        let h = self.parabolic().hecke().kl_basis(g.gen(s));
        let mut out = self.parabolic().asph_act(&x, &h).specialize_one();
        out.retain(|_, c| !c.is_zero());
        out
    }
}

/// `b·(1 + s)` in `ℤ[W_ext]`.
pub fn theta_group(weyl: &Weyl, b: &BTreeMap<ExtElem, BigInt>, s: Gen) -> BTreeMap<ExtElem, BigInt> {
    let mut out: BTreeMap<ExtElem, BigInt> = BTreeMap::new();
    for (y, c) in b {
        *out.entry(y.clone()).or_default() += c;
        *out.entry(weyl.mul_gen(y, s)).or_default() += c;
    }
    out.retain(|_, c| !c.is_zero());
    out
}
