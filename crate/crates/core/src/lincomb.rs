//! Finitely supported linear combinations with Laurent-polynomial
//! coefficients, and a generic engine for right actions of the Hecke
//! algebra on modules with a standard basis.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use num_bigint::BigInt;

use crate::error::Result;
use crate::laurent::LaurentPoly;
use crate::weyl::{ExtElem, Gen, Weyl};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, LaurentPoly>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(k: K, p: LaurentPoly) -> Self {
        let mut x = Self::new();
        x.add_term(k, &p);
        x
    }

    pub fn basis(k: K) -> Self {
        Self::term(k, LaurentPoly::one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, k: &K) -> Option<&LaurentPoly> {
        self.terms.get(k)
    }

    pub fn coeff(&self, k: &K) -> LaurentPoly {
        self.terms.get(k).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &LaurentPoly)> {
        self.terms.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, k: K, p: &LaurentPoly) {
        if p.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(c) => {
                *c += p;
                if c.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, p.clone());
            }
        }
    }

    /// `self += c·other`
    pub fn add_scaled(&mut self, other: &LinComb<K>, c: &LaurentPoly) {
        if c.is_zero() {
            return;
        }
        let unit = c.is_one();
        for (k, p) in &other.terms {
            if unit {
                self.add_term(k.clone(), p);
            } else {
                self.add_term(k.clone(), &(p * c));
            }
        }
    }

    pub fn add_assign(&mut self, other: &LinComb<K>) {
        self.add_scaled(other, &LaurentPoly::one());
    }

    pub fn sub_assign(&mut self, other: &LinComb<K>) {
        self.add_scaled(other, &-LaurentPoly::one());
    }

    pub fn sub(&self, other: &LinComb<K>) -> LinComb<K> {
        let mut x = self.clone();
        x.sub_assign(other);
        x
    }

    pub fn scale(&self, c: &LaurentPoly) -> LinComb<K> {
        let mut x = Self::new();
        x.add_scaled(self, c);
        x
    }

    /// Apply `v ↦ v^{-1}` to every coefficient (not the bar involution of
    /// the module).
    pub fn bar_coefficients(&self) -> LinComb<K> {
        LinComb {
            terms: self.terms.iter().map(|(k, p)| (k.clone(), p.bar())).collect(),
        }
    }

    pub fn map_keys<L: Ord + Clone>(&self, mut f: impl FnMut(&K) -> L) -> LinComb<L> {
        let mut out = LinComb::new();
        for (k, p) in &self.terms {
            out.add_term(f(k), p);
        }
        out
    }

    pub fn filter_keys(&self, mut f: impl FnMut(&K) -> bool) -> LinComb<K> {
        LinComb {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| f(k))
                .map(|(k, p)| (k.clone(), p.clone()))
                .collect(),
        }
    }

    pub fn specialize_one(&self) -> BTreeMap<K, BigInt> {
        self.terms
            .iter()
            .map(|(k, p)| (k.clone(), p.eval_one()))
            .filter(|(_, c)| c != &BigInt::from(0))
            .collect()
    }

    pub fn into_inner(self) -> BTreeMap<K, LaurentPoly> {
        self.terms
    }
}

impl<K: Ord + Clone> FromIterator<(K, LaurentPoly)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, LaurentPoly)>>(it: I) -> Self {
        let mut x = Self::new();
        for (k, p) in it {
            x.add_term(k, &p);
        }
        x
    }
}

/// Effect of `H_s` on a standard basis vector `b`.
#[derive(Clone, Debug)]
pub enum Step<K> {
    /// `b·H_s = b'`
    Up(K),
    /// `b·H_s = b' + (v^{-1} − v)·b`
    Down(K),
    /// `b·H_s = c·b`
    Scalar(LaurentPoly),
}

/// A right module over `H_ext` (or `H`) with a standard basis.
pub trait StdModule: Sync {
    type Key: Ord + Clone + Hash + Send + Sync;

    fn weyl(&self) -> &Weyl;

    fn step(&self, k: &Self::Key, s: Gen) -> Step<Self::Key>;

    fn act_omega(&self, k: &Self::Key, om: &ExtElem) -> Result<Self::Key>;
}

/// `x·H_s`
pub fn act_gen<M: StdModule>(m: &M, x: &LinComb<M::Key>, s: Gen) -> LinComb<M::Key> {
    let q = LaurentPoly::v_inv() - LaurentPoly::v();
    let mut out = LinComb::new();
    for (k, p) in x.iter() {
        match m.step(k, s) {
            Step::Up(k2) => out.add_term(k2, p),
            Step::Down(k2) => {
                out.add_term(k2, p);
                out.add_term(k.clone(), &(p * &q));
            }
            Step::Scalar(c) => out.add_term(k.clone(), &(p * &c)),
        }
    }
    out
}

/// `x·H_ω` for `ω ∈ Ω`.
pub fn act_omega<M: StdModule>(m: &M, x: &LinComb<M::Key>, om: &ExtElem) -> Result<LinComb<M::Key>> {
    if om == &m.weyl().identity() {
        return Ok(x.clone());
    }
    let mut out = LinComb::new();
    for (k, p) in x.iter() {
        out.add_term(m.act_omega(k, om)?, p);
    }
    Ok(out)
}

/// `x·H_y`
pub fn act_std<M: StdModule>(m: &M, x: &LinComb<M::Key>, y: &ExtElem) -> Result<LinComb<M::Key>> {
    let (word, om) = m.weyl().lexmin_word(y);
    let mut cur = x.clone();
    for s in word {
        cur = act_gen(m, &cur, s);
    }
    act_omega(m, &cur, &om)
}

/// `x·h`. Products `x·H_y` are built along least reduced words, sharing
/// prefixes between the elements of the support of `h`.
pub fn act<M: StdModule>(
    m: &M,
    x: &LinComb<M::Key>,
    h: &LinComb<ExtElem>,
) -> Result<LinComb<M::Key>> {
    let g = m.weyl();
    let mut memo: HashMap<ExtElem, LinComb<M::Key>> = HashMap::new();
    memo.insert(g.identity(), x.clone());
    let mut out = LinComb::new();
    for (y, c) in h.iter() {
        let (word, om) = g.lexmin_word(y);
        let mut prefix = g.identity();
        for &s in &word {
            let next = g.mul_gen(&prefix, s);
            if !memo.contains_key(&next) {
                let val = act_gen(m, &memo[&prefix], s);
                memo.insert(next.clone(), val);
            }
            prefix = next;
        }
        let val = act_omega(m, &memo[&prefix], &om)?;
        out.add_scaled(&val, c);
    }
    Ok(out)
}

/// Renders `Σ c_k k` with keys ordered by `order` (typically BFS order).
pub fn render<K: Ord + Clone, O: Ord>(
    x: &LinComb<K>,
    mut order: impl FnMut(&K) -> O,
    mut name: impl FnMut(&K) -> String,
) -> Vec<(String, LaurentPoly)> {
    let mut v: Vec<(O, String, LaurentPoly)> = x
        .iter()
        .map(|(k, p)| (order(k), name(k), p.clone()))
        .collect();
    v.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
    v.into_iter().map(|(_, n, p)| (n, p)).collect()
}

/// Declares a newtype over `LinComb<K>` for one of the modules.
macro_rules! elem_type {
    ($(#[$m:meta])* $name:ident, $key:ty) => {
        $(#[$m])*
        #[derive(Clone, PartialEq, Eq, Debug, Default)]
        pub struct $name(pub $crate::lincomb::LinComb<$key>);

        impl std::ops::Deref for $name {
            type Target = $crate::lincomb::LinComb<$key>;
            fn deref(&self) -> &Self::Target {
                &self.0
            }
        }

        impl std::ops::DerefMut for $name {
            fn deref_mut(&mut self) -> &mut Self::Target {
                &mut self.0
            }
        }

        impl From<$crate::lincomb::LinComb<$key>> for $name {
            fn from(x: $crate::lincomb::LinComb<$key>) -> Self {
                $name(x)
            }
        }

        impl $name {
            pub fn zero() -> Self {
                Self::default()
            }

            pub fn basis(k: $key) -> Self {
                $name($crate::lincomb::LinComb::basis(k))
            }

            pub fn into_lincomb(self) -> $crate::lincomb::LinComb<$key> {
                self.0
            }
        }
    };
}
pub(crate) use elem_type;
