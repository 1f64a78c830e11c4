//! Finite, affine and extended affine Weyl groups.
//!
//! Elements of `W_ext = W_f ⋉ X` are stored as pairs `(w, λ)` meaning
//! `w·t_λ`, acting on `V` by `v ↦ w(v + λ)`.

mod finite;
mod text;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub use finite::{FinGroup, FinId};
pub use text::ElemJson;

use crate::error::{Error, Result};
use crate::rootdata::{RootDatum, Weight};

/// Index into the list of simple reflections `S` of the affine Weyl group.
pub type Gen = usize;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct ExtElem {
    pub fin: FinId,
    pub trans: Weight,
}

/// Result of comparing two alcoves or elements in a partial order.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Order {
    Equal,
    Less,
    Greater,
    Incomparable,
}

#[derive(Debug)]
pub struct Weyl {
    datum: Arc<RootDatum>,
    fin: FinGroup,
    /// Affine reflections first (one per component), then `s_1..s_r`.
    gens: Vec<ExtElem>,
    gen_names: Vec<String>,
    n_affine: usize,
    omega: Option<Vec<ExtElem>>,
    omega_index: HashMap<ExtElem, usize>,
}

impl Weyl {
    pub fn new(datum: Arc<RootDatum>) -> Self {
        let fin = FinGroup::new(&datum);
        let n = datum.lattice_rank;
        let mut gens = vec![];
        let mut gen_names = vec![];
        let n_aff = datum.components.len();
        for (c, &k) in datum.highest_short.iter().enumerate() {
            let theta = &datum.positive_roots[k];
            let theta_v = &datum.positive_coroots[k];
            let m: Vec<i64> = (0..n * n)
                .map(|idx| {
                    let (row, col) = (idx / n, idx % n);
                    (row == col) as i64 - theta.0[row] * theta_v.0[col]
                })
                .collect();
            let s_theta = fin.from_matrix(&m).expect("reflection in highest root");
            gens.push(ExtElem {
                fin: s_theta,
                trans: theta.neg(),
            });
            gen_names.push(if n_aff == 1 {
                "s0".to_string()
            } else {
                format!("s0_{}", c + 1)
            });
        }
        for i in 0..datum.rank {
            gens.push(ExtElem {
                fin: fin.simple(i),
                trans: Weight::zero(n),
            });
            gen_names.push(format!("s{}", i + 1));
        }
        let mut g = Weyl {
            datum,
            fin,
            gens,
            gen_names,
            n_affine: n_aff,
            omega: None,
            omega_index: HashMap::new(),
        };
        if g.datum.is_semisimple() {
            let list = g.enumerate_omega();
            g.omega_index = list.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect();
            g.omega = Some(list);
        }
        g
    }

    pub fn from_type(name: &str) -> Result<Self> {
        Ok(Self::new(Arc::new(RootDatum::from_type(name)?)))
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn fin(&self) -> &FinGroup {
        &self.fin
    }

    pub fn gens(&self) -> &[ExtElem] {
        &self.gens
    }

    pub fn gen(&self, s: Gen) -> &ExtElem {
        &self.gens[s]
    }

    pub fn num_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_name(&self, s: Gen) -> &str {
        &self.gen_names[s]
    }

    pub fn gen_by_name(&self, name: &str) -> Option<Gen> {
        self.gen_names.iter().position(|n| n == name)
    }

    /// Indices of `S_f` in `S`.
    pub fn finite_gens(&self) -> Vec<Gen> {
        (self.n_affine..self.gens.len()).collect()
    }

    pub fn is_finite_gen(&self, s: Gen) -> bool {
        s >= self.n_affine
    }

    /// The simple-root index of a finite generator.
    pub fn simple_index(&self, s: Gen) -> usize {
        s - self.n_affine
    }

    pub fn finite_gen(&self, i: usize) -> Gen {
        i + self.n_affine
    }

    pub fn identity(&self) -> ExtElem {
        ExtElem {
            fin: FinId::E,
            trans: Weight::zero(self.datum.lattice_rank),
        }
    }

    pub fn translation(&self, lambda: &Weight) -> ExtElem {
        ExtElem {
            fin: FinId::E,
            trans: lambda.clone(),
        }
    }

    pub fn from_fin(&self, w: FinId) -> ExtElem {
        ExtElem {
            fin: w,
            trans: Weight::zero(self.datum.lattice_rank),
        }
    }

    pub fn from_word(&self, word: &[Gen]) -> ExtElem {
        word.iter()
            .fold(self.identity(), |acc, &s| self.mul(&acc, &self.gens[s]))
    }

    /// `(w t_λ)(w' t_μ) = w w' t_{w'^{-1}(λ) + μ}`
    pub fn mul(&self, x: &ExtElem, y: &ExtElem) -> ExtElem {
        let lam = if x.trans.is_zero() {
            y.trans.clone()
        } else {
            self.fin.apply(self.fin.inv(y.fin), &x.trans).add(&y.trans)
        };
        ExtElem {
            fin: self.fin.mul(x.fin, y.fin),
            trans: lam,
        }
    }

    pub fn mul_gen(&self, x: &ExtElem, s: Gen) -> ExtElem {
        self.mul(x, &self.gens[s])
    }

    pub fn gen_mul(&self, s: Gen, x: &ExtElem) -> ExtElem {
        self.mul(&self.gens[s], x)
    }

    /// `(w t_λ)^{-1} = w^{-1} t_{-w(λ)}`
    pub fn inv(&self, x: &ExtElem) -> ExtElem {
        ExtElem {
            fin: self.fin.inv(x.fin),
            trans: self.fin.apply(x.fin, &x.trans).neg(),
        }
    }

    pub fn length(&self, x: &ExtElem) -> usize {
        let neg = self.fin.negates(x.fin);
        let mut total = 0i64;
        for (k, cv) in self.datum.positive_coroots.iter().enumerate() {
            let p = x.trans.pair(cv);
            total += if neg[k] { (1 + p).abs() } else { p.abs() };
        }
        total as usize
    }

    pub fn is_in_omega(&self, x: &ExtElem) -> bool {
        self.length(x) == 0
    }

    pub fn is_in_w(&self, x: &ExtElem) -> bool {
        self.datum.in_root_lattice(&x.trans)
    }

    pub fn is_right_descent(&self, x: &ExtElem, s: Gen) -> bool {
        self.length(&self.mul_gen(x, s)) < self.length(x)
    }

    pub fn is_left_descent(&self, s: Gen, x: &ExtElem) -> bool {
        self.length(&self.gen_mul(s, x)) < self.length(x)
    }

    pub fn right_descent(&self, x: &ExtElem) -> Option<Gen> {
        (0..self.gens.len()).find(|&s| self.is_right_descent(x, s))
    }

    /// Least reduced word and length-zero part: `x = s_{w[0]} ⋯ s_{w[k-1]} · ω`.
    pub fn lexmin_word(&self, x: &ExtElem) -> (Vec<Gen>, ExtElem) {
        let mut word = vec![];
        let mut cur = x.clone();
        let mut len = self.length(&cur);
        'outer: while len > 0 {
            for s in 0..self.gens.len() {
                let y = self.gen_mul(s, &cur);
                let ly = self.length(&y);
                if ly < len {
                    word.push(s);
                    cur = y;
                    len = ly;
                    continue 'outer;
                }
            }
            unreachable!("element of positive length without left descent");
        }
        (word, cur)
    }

    /// `x = ω·w` with `ω ∈ Ω` and `w ∈ W`.
    pub fn omega_decompose(&self, x: &ExtElem) -> (ExtElem, ExtElem) {
        let (_, om) = self.lexmin_word(x);
        let w = self.mul(&self.inv(&om), x);
        (om, w)
    }

    /// `x = w·ω` with `w ∈ W` and `ω ∈ Ω`.
    pub fn split_right(&self, x: &ExtElem) -> (ExtElem, ExtElem) {
        let (_, om) = self.lexmin_word(x);
        let w = self.mul(x, &self.inv(&om));
        (w, om)
    }

    /// `(ω_λ, x_λ)` with `t_λ = x_λ ω_λ`, `x_λ ∈ W`.
    pub fn omega_of_weight(&self, lambda: &Weight) -> (ExtElem, ExtElem) {
        let (x, om) = self.split_right(&self.translation(lambda));
        (om, x)
    }

    /// `τ_λ(w) = ω_λ w ω_λ^{-1}`.
    pub fn tau(&self, lambda: &Weight, w: &ExtElem) -> Result<ExtElem> {
        if !self.is_in_w(w) {
            return Err(Error::NotInW(self.format(w)));
        }
        let (om, _) = self.omega_of_weight(lambda);
        Ok(self.mul(&self.mul(&om, w), &self.inv(&om)))
    }

    /// The generator `τ_λ(s)` as an index into `S`.
    pub fn tau_gen(&self, lambda: &Weight, s: Gen) -> Gen {
        let img = self.tau(lambda, &self.gens[s]).expect("generators lie in W");
        self.gens.iter().position(|g| g == &img).expect("τ permutes S")
    }

    /// Whether `x` and `y` lie in the same coset `W ω`.
    pub fn same_omega_coset(&self, x: &ExtElem, y: &ExtElem) -> bool {
        self.is_in_w(&self.mul(x, &self.inv(y)))
    }

    /// Bruhat order; `None` when the elements lie in different `Ω`-cosets.
    pub fn bruhat_leq(&self, x: &ExtElem, y: &ExtElem) -> Option<bool> {
        if !self.same_omega_coset(x, y) {
            return None;
        }
        Some(self.bruhat_leq_same_coset(x, y))
    }

    /// Descent recursion: if `ys < y` then `x ≤ y ⇔ min(x, xs) ≤ ys`.
    pub fn bruhat_leq_same_coset(&self, x: &ExtElem, y: &ExtElem) -> bool {
        let mut x = x.clone();
        let mut y = y.clone();
        let mut lx = self.length(&x);
        let mut ly = self.length(&y);
        loop {
            if lx > ly {
                return false;
            }
            if lx == ly {
                return x == y;
            }
            let s = self.right_descent(&y).unwrap();
            y = self.mul_gen(&y, s);
            ly -= 1;
            let xs = self.mul_gen(&x, s);
            let lxs = self.length(&xs);
            if lxs < lx {
                x = xs;
                lx = lxs;
            }
        }
    }

    pub fn bruhat_cmp(&self, x: &ExtElem, y: &ExtElem) -> Order {
        if x == y {
            return Order::Equal;
        }
        match self.bruhat_leq(x, y) {
            None => Order::Incomparable,
            Some(true) => Order::Less,
            Some(false) if self.bruhat_leq_same_coset(y, x) => Order::Greater,
            Some(false) => Order::Incomparable,
        }
    }

    /// Whether `ℓ(s·w) > ℓ(w)` for every `s` in `parabolic`.
    pub fn is_min_in_coset(&self, w: &ExtElem, parabolic: &[Gen]) -> bool {
        let l = self.length(w);
        parabolic.iter().all(|&s| self.length(&self.gen_mul(s, w)) > l)
    }

    /// Minimal in `W_f w` (for `w ∈ W` this is membership in `ᶠW`, in general `ᶠW_ext`).
    pub fn is_fwext(&self, w: &ExtElem) -> bool {
        self.is_min_in_coset(w, &self.finite_gens())
    }

    pub fn is_fw(&self, w: &ExtElem) -> bool {
        self.is_in_w(w) && self.is_fwext(w)
    }

    /// `(z, w)` with `x = z·w`, `z ∈ W_f`, `w` minimal in `W_f x`.
    pub fn min_coset_rep(&self, x: &ExtElem) -> (FinId, ExtElem) {
        let fg = self.finite_gens();
        let mut cur = x.clone();
        let mut z = FinId::E;
        let mut len = self.length(&cur);
        'outer: loop {
            for &s in &fg {
                let y = self.gen_mul(s, &cur);
                let ly = self.length(&y);
                if ly < len {
                    cur = y;
                    len = ly;
                    z = self.fin.mul_simple_right(z, self.simple_index(s));
                    continue 'outer;
                }
            }
            return (z, cur);
        }
    }

    /// Longest element of the subgroup of `W_f` generated by `parabolic ⊂ S_f`.
    pub fn longest_element(&self, parabolic: &[Gen]) -> ExtElem {
        let idx: Vec<usize> = parabolic.iter().map(|&s| self.simple_index(s)).collect();
        self.from_fin(self.fin.longest_in(&idx))
    }

    pub fn w_f(&self) -> ExtElem {
        self.from_fin(self.fin.longest())
    }

    /// All of `W_f` as extended elements, in enumeration order.
    pub fn finite_elements(&self) -> Vec<ExtElem> {
        self.fin.elements().map(|w| self.from_fin(w)).collect()
    }

    /// Apply `x` to a scaled point `P = D·v`: returns `D·x(v)`.
    pub fn apply_scaled(&self, x: &ExtElem, point: &Weight, denom: i64) -> Weight {
        self.fin.apply(x.fin, &point.add_scaled(denom, &x.trans))
    }

    pub fn apply_weight(&self, x: &ExtElem, lambda: &Weight) -> Weight {
        self.apply_scaled(x, lambda, 1)
    }

    /// `(w t_μ)·_p λ = w(λ + pμ + ς) − ς`.
    pub fn dot(&self, x: &ExtElem, lambda: &Weight, p: i64) -> Weight {
        let vs = self.datum.varsigma();
        let inner = lambda.add_scaled(p, &x.trans).add(vs);
        self.fin.apply(x.fin, &inner).sub(vs)
    }

    pub fn is_restricted_at(&self, x: &ExtElem, p: i64) -> bool {
        let lam = self.dot(x, &Weight::zero(self.datum.lattice_rank), p);
        self.datum
            .simple_pairings(&lam)
            .iter()
            .all(|&c| (0..p).contains(&c))
    }

    /// Restrictedness at the reference prime `2h + 1`.
    pub fn is_restricted(&self, x: &ExtElem) -> bool {
        self.is_restricted_at(x, 2 * self.datum.coxeter_number + 1)
    }

    pub fn omega_elements(&self) -> Option<&[ExtElem]> {
        self.omega.as_deref()
    }

    pub fn omega_index(&self, om: &ExtElem) -> Option<usize> {
        self.omega_index.get(om).copied()
    }

    fn enumerate_omega(&self) -> Vec<ExtElem> {
        let n = self.datum.lattice_rank;
        let generators: Vec<ExtElem> = (0..n)
            .map(|k| self.omega_of_weight(&Weight::unit(n, k)).0)
            .collect();
        let mut list = vec![self.identity()];
        let mut i = 0;
        while i < list.len() {
            for g in &generators {
                let y = self.mul(&list[i], g);
                if !list.contains(&y) {
                    list.push(y);
                }
            }
            i += 1;
        }
        list
    }

    /// Elements of `W` of length at most `max_len`, in order of (length,
    /// least reduced word).
    pub fn enumerate_w(&self, max_len: usize) -> Vec<ExtElem> {
        let mut seen = std::collections::HashSet::new();
        let mut out = vec![self.identity()];
        seen.insert(self.identity());
        let mut start = 0;
        for len in 1..=max_len {
            let end = out.len();
            let mut level = vec![];
            for x in &out[start..end] {
                for s in 0..self.gens.len() {
                    let y = self.mul_gen(x, s);
                    if self.length(&y) == len && seen.insert(y.clone()) {
                        level.push(y);
                    }
                }
            }
            out.extend(level);
            start = end;
        }
        out
    }

    /// Elements of `ᶠW_ext` whose `W`-part has length at most `max_len`,
    /// grouped by length, then by `Ω`-component.
    pub fn enumerate_fwext(&self, max_len: usize) -> Vec<ExtElem> {
        let base: Vec<ExtElem> = self
            .enumerate_w(max_len)
            .into_iter()
            .filter(|x| self.is_fwext(x))
            .collect();
        let omegas = self.omega.clone().unwrap_or_else(|| vec![self.identity()]);
        let mut out = vec![];
        for x in &base {
            for om in &omegas {
                out.push(self.mul(x, om));
            }
        }
        out
    }

    /// Elements of the same length are ordered by their text form.
    pub fn bfs_key(&self, x: &ExtElem) -> (usize, String) {
        (self.length(x), self.format(x))
    }

    pub fn format(&self, x: &ExtElem) -> String {
        text::format(self, x)
    }

    pub fn parse(&self, s: &str) -> Result<ExtElem> {
        text::parse(self, s)
    }

    pub fn to_json(&self, x: &ExtElem) -> ElemJson {
        text::to_json(self, x)
    }

    pub fn from_json(&self, j: &ElemJson) -> Result<ExtElem> {
        text::from_json(self, j)
    }

    pub fn display<'a>(&'a self, x: &'a ExtElem) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Weyl, &'a ExtElem);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0.format(self.1))
            }
        }
        D(self, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(t: &str) -> Weyl {
        Weyl::from_type(t).unwrap()
    }

    fn el(g: &Weyl, s: &str) -> ExtElem {
        g.parse(s).unwrap()
    }

    #[test]
    fn lengths_of_translations() {
        let a1 = w("A1");
        let alpha = a1.datum().simple_roots[0].clone();
        assert_eq!(a1.length(&a1.translation(&alpha)), 2);
        let c2 = w("C2");
        let rho = c2.datum().varsigma().clone();
        assert_eq!(c2.length(&c2.translation(&rho)), 7);
        assert_eq!(c2.length(&c2.identity()), 0);
    }

    #[test]
    fn affine_generators() {
        let a1 = w("A1");
        let alpha = a1.datum().simple_roots[0].clone();
        let s1 = a1.gen(1).clone();
        let s0 = a1.gen(0).clone();
        assert_eq!(s0, a1.mul(&a1.translation(&alpha), &s1));
        let c2 = w("C2");
        assert_eq!(c2.num_gens(), 3);
        for s in c2.gens() {
            assert_eq!(c2.length(s), 1);
            assert_eq!(c2.mul(s, s), c2.identity());
        }
    }

    #[test]
    fn semidirect_relation() {
        let a1 = w("A1");
        let rho = a1.datum().varsigma().clone();
        let s1 = a1.gen(1).clone();
        let lhs = a1.mul(&s1, &a1.translation(&rho));
        let rhs = a1.mul(&a1.translation(&a1.apply_weight(&s1, &rho)), &s1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn omega_in_a1() {
        let a1 = w("A1");
        let rho = a1.datum().varsigma().clone();
        let (om, x) = a1.omega_decompose(&a1.translation(&rho));
        assert_ne!(om, a1.identity());
        assert_eq!(a1.length(&om), 0);
        assert_eq!(a1.length(&x), 1);
        assert_eq!(a1.omega_elements().unwrap().len(), 2);
        let (om_rho, x_rho) = a1.omega_of_weight(&rho);
        assert_eq!(x_rho, a1.gen(0).clone());
        assert_eq!(a1.mul(&x_rho, &om_rho), a1.translation(&rho));
        // t_ρ s_1 has length zero
        assert_eq!(a1.length(&a1.mul(&a1.translation(&rho), a1.gen(1))), 0);
    }

    #[test]
    fn tau_swaps_a1_generators() {
        let a1 = w("A1");
        let rho = a1.datum().varsigma().clone();
        assert_eq!(a1.tau_gen(&rho, 0), 1);
        assert_eq!(a1.tau_gen(&rho, 1), 0);
        let alpha = a1.datum().simple_roots[0].clone();
        assert_eq!(a1.tau_gen(&alpha, 0), 0);
        let x = el(&a1, "s0 s1 s0");
        assert_eq!(a1.tau(&rho, &a1.tau(&rho.neg(), &x).unwrap()).unwrap(), x);
        assert!(a1.tau(&rho, &a1.translation(&rho)).is_err());
    }

    #[test]
    fn omega_order_matches_fundamental_group() {
        for (t, k) in [("A1", 2), ("A2", 3), ("C2", 2), ("G2", 1), ("A3", 4), ("D4", 4)] {
            assert_eq!(w(t).omega_elements().unwrap().len(), k, "{t}");
        }
    }

    #[test]
    fn omega_conjugation_permutes_s() {
        let a2 = w("A2");
        for om in a2.omega_elements().unwrap() {
            let mut imgs: Vec<ExtElem> = a2
                .gens()
                .iter()
                .map(|s| a2.mul(&a2.mul(om, s), &a2.inv(om)))
                .collect();
            imgs.sort();
            let mut gens = a2.gens().to_vec();
            gens.sort();
            assert_eq!(imgs, gens);
        }
    }

    #[test]
    fn bruhat_examples() {
        let a1 = w("A1");
        let s0 = el(&a1, "s0");
        let s1 = el(&a1, "s1");
        assert_eq!(a1.bruhat_leq(&s0, &el(&a1, "s0 s1 s0")), Some(true));
        assert_eq!(a1.bruhat_leq(&s0, &s1), Some(false));
        assert_eq!(a1.bruhat_leq(&s1, &s0), Some(false));
        assert_eq!(a1.bruhat_cmp(&s0, &s1), Order::Incomparable);
        let om = a1.omega_elements().unwrap()[1].clone();
        assert_eq!(a1.bruhat_leq(&s0, &om), None);
        assert_eq!(a1.bruhat_cmp(&s0, &a1.mul(&s0, &om)), Order::Incomparable);
    }

    #[test]
    fn coset_minimality() {
        let a1 = w("A1");
        assert!(a1.is_fwext(&a1.identity()));
        assert!(!a1.is_fwext(&el(&a1, "s1 s0")));
        assert!(a1.is_fwext(&el(&a1, "s0 s1")));
        for om in a1.omega_elements().unwrap() {
            assert!(a1.is_fwext(om));
        }
    }

    #[test]
    fn longest_elements() {
        let c2 = w("C2");
        assert_eq!(c2.longest_element(&[]), c2.identity());
        let wf = c2.longest_element(&c2.finite_gens());
        assert_eq!(c2.length(&wf), 4);
        assert_eq!(c2.mul(&wf, &wf), c2.identity());
        assert_eq!(c2.fin().order(), 8);
    }

    #[test]
    fn dot_action_and_restriction() {
        let a1 = w("A1");
        let zero = Weight::zero(1);
        assert_eq!(a1.dot(&el(&a1, "s1"), &zero, 5), Weight::from_slice(&[-2]));
        let mu = Weight::from_slice(&[3]);
        assert_eq!(a1.dot(&a1.translation(&mu), &zero, 5), Weight::from_slice(&[15]));
        assert!(a1.is_restricted(&a1.identity()));
        let om = a1.omega_elements().unwrap()[1].clone();
        let p = 5;
        assert_eq!(a1.dot(&om, &zero, p), Weight::from_slice(&[p - 2]));
        assert!(a1.is_restricted(&om));
        let s0 = el(&a1, "s0");
        assert_eq!(a1.dot(&s0, &zero, p), Weight::from_slice(&[2 * p - 2]));
        assert!(!a1.is_restricted(&s0));
    }

    #[test]
    fn enumerations() {
        let a1 = w("A1");
        assert_eq!(a1.enumerate_w(3).len(), 7);
        let fw = a1.enumerate_fwext(2);
        assert_eq!(fw.len(), 6);
        assert!(fw.iter().all(|x| a1.is_fwext(x)));
    }
}
