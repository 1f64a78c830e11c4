//! The Hecke algebras `H ⊂ H_ext`, the bar involution and the
//! Kazhdan–Lusztig basis.

mod cache;
mod table;

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::lincomb::{self, elem_type, LinComb, Step, StdModule};
use crate::weyl::{ExtElem, Gen, Weyl};

pub use cache::{CacheFile, CACHE_VERSION};
pub use table::{BasisKind, PCanonicalTable, Prime, TableSource};

elem_type!(
    /// Element of `H_ext` in the standard basis `(H_x)`.
    HeckeElem,
    ExtElem
);

/// Hecke algebra of a fixed datum, with its Kazhdan–Lusztig cache.
pub struct Hecke {
    weyl: Arc<Weyl>,
    kl: RwLock<HashMap<ExtElem, Arc<HeckeElem>>>,
    store: Option<Mutex<CacheFile>>,
}

impl std::fmt::Debug for Hecke {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Hecke")
            .field("datum", &self.weyl.datum().tag())
            .field("cached", &self.kl.read().len())
            .finish()
    }
}

impl StdModule for Hecke {
    type Key = ExtElem;

    fn weyl(&self) -> &Weyl {
        &self.weyl
    }

    fn step(&self, k: &ExtElem, s: Gen) -> Step<ExtElem> {
        let ks = self.weyl.mul_gen(k, s);
        if self.weyl.length(&ks) > self.weyl.length(k) {
            Step::Up(ks)
        } else {
            Step::Down(ks)
        }
    }

    fn act_omega(&self, k: &ExtElem, om: &ExtElem) -> Result<ExtElem> {
        Ok(self.weyl.mul(k, om))
    }
}

impl Hecke {
    pub fn new(weyl: Arc<Weyl>) -> Self {
        Hecke {
            weyl,
            kl: RwLock::new(HashMap::new()),
            store: None,
        }
    }

    /// Backs the KL cache with a file under `dir`. Entries found there are
    /// loaded eagerly; records failing their checksum are dropped and will
    /// be recomputed.
    pub fn with_cache_dir(weyl: Arc<Weyl>, dir: &Path) -> Result<Self> {
        let (file, entries) = CacheFile::open(&weyl, dir)?;
        let mut map = HashMap::new();
        for (w, col) in entries {
            map.insert(w, Arc::new(HeckeElem(col)));
        }
        Ok(Hecke {
            weyl,
            kl: RwLock::new(map),
            store: Some(Mutex::new(file)),
        })
    }

    pub fn weyl(&self) -> &Weyl {
        &self.weyl
    }

    pub fn weyl_arc(&self) -> &Arc<Weyl> {
        &self.weyl
    }

    /// `H_y`
    pub fn std(&self, y: &ExtElem) -> HeckeElem {
        HeckeElem::basis(y.clone())
    }

    pub fn mul(&self, a: &HeckeElem, b: &HeckeElem) -> HeckeElem {
        HeckeElem(lincomb::act(self, a, b).expect("Hecke action is total"))
    }

    /// `a·H_y`
    pub fn mul_std(&self, a: &HeckeElem, y: &ExtElem) -> HeckeElem {
        HeckeElem(lincomb::act_std(self, a, y).expect("Hecke action is total"))
    }

    /// `v ↦ v^{-1}`, `H_x ↦ (H_{x^{-1}})^{-1}`.
    pub fn bar(&self, a: &HeckeElem) -> HeckeElem {
        let g = &*self.weyl;
        let q = LaurentPoly::v() - LaurentPoly::v_inv();
        let mut memo: HashMap<ExtElem, LinComb<ExtElem>> = HashMap::new();
        memo.insert(g.identity(), LinComb::basis(g.identity()));
        let mut out = LinComb::new();
        for (y, c) in a.iter() {
            let (word, om) = g.lexmin_word(y);
            let mut prefix = g.identity();
            for &s in &word {
                let next = g.mul_gen(&prefix, s);
                if !memo.contains_key(&next) {
                    let prev = &memo[&prefix];
                    let mut val = lincomb::act_gen(self, prev, s);
                    val.add_scaled(prev, &q);
                    memo.insert(next.clone(), val);
                }
                prefix = next;
            }
            let val = memo[&prefix].map_keys(|k| g.mul(k, &om));
            out.add_scaled(&val, &c.bar());
        }
        HeckeElem(out)
    }

    /// The Kazhdan–Lusztig basis element `H̲_x`; for `x = wω` with `w ∈ W`
    /// this is `H̲_w·H_ω`.
    pub fn kl_basis(&self, x: &ExtElem) -> HeckeElem {
        let g = &*self.weyl;
        let (w, om) = g.split_right(x);
        let base = self.kl_w(&w);
        if om == g.identity() {
            (*base).clone()
        } else {
            HeckeElem(base.map_keys(|y| g.mul(y, &om)))
        }
    }

    /// Shared handle to `H̲_w` for `w ∈ W`.
    pub fn kl_arc(&self, w: &ExtElem) -> Result<Arc<HeckeElem>> {
        if !self.weyl.is_in_w(w) {
            return Err(Error::NotInW(self.weyl.format(w)));
        }
        Ok(self.kl_w(w))
    }

    /// Coefficient of `H_y` in `H̲_w`.
    pub fn kl_poly(&self, y: &ExtElem, w: &ExtElem) -> LaurentPoly {
        self.kl_basis(w).coeff(y)
    }

    /// `H̲_w·H̲_s = (v + v^{-1})·H̲_w` for a right descent `s` of `w`.
    pub fn check_absorption(&self, w: &ExtElem, s: Gen) -> Result<bool> {
        let g = &*self.weyl;
        if !g.is_right_descent(w, s) {
            return Err(Error::Precondition(format!(
                "{} is not a right descent of {}",
                g.gen_name(s),
                g.format(w)
            )));
        }
        let kw = self.kl_basis(w);
        let lhs = self.mul(&kw, &self.kl_basis(g.gen(s)));
        let rhs = kw.scale(&(LaurentPoly::v() + LaurentPoly::v_inv()));
        Ok(*lhs == rhs)
    }

    pub fn cached_len(&self) -> usize {
        self.kl.read().len()
    }

    /// Appends newly computed columns to the backing file, if any.
    pub fn flush_cache(&self) -> Result<usize> {
        let Some(store) = &self.store else {
            return Ok(0);
        };
        let snapshot: Vec<(ExtElem, Arc<HeckeElem>)> = self
            .kl
            .read()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        let mut file = store.lock();
        file.append(&self.weyl, snapshot.iter().map(|(k, v)| (k, &v.0)))
    }

    fn kl_w(&self, w: &ExtElem) -> Arc<HeckeElem> {
        if let Some(h) = self.kl.read().get(w) {
            return h.clone();
        }
        let h = Arc::new(self.compute_kl(w));
        self.kl.write().entry(w.clone()).or_insert(h).clone()
    }

    // H̲_w = H̲_{ws}·H̲_s minus bar-invariant corrections at lower terms.
    fn compute_kl(&self, w: &ExtElem) -> HeckeElem {
        let g = &*self.weyl;
        let lw = g.length(w);
        if lw == 0 {
            return HeckeElem::basis(w.clone());
        }
        let (word, _) = g.lexmin_word(w);
        let s = *word.last().unwrap();
        let ws = g.mul_gen(w, s);
        let prev = self.kl_w(&ws);
        let mut cur = lincomb::act_gen(self, &prev, s);
        cur.add_scaled(&prev, &LaurentPoly::v());

        let mut buckets: Vec<BTreeSet<ExtElem>> = vec![BTreeSet::new(); lw];
        for z in cur.keys() {
            let l = g.length(z);
            if l < lw {
                buckets[l].insert(z.clone());
            }
        }
        for l in (0..lw).rev() {
            let zs = std::mem::take(&mut buckets[l]);
            for z in zs {
                let c = match cur.get(&z) {
                    Some(p) => p.nonpositive_symmetric(),
                    None => continue,
                };
                if c.is_zero() {
                    continue;
                }
                let kz = self.kl_w(&z);
                for y in kz.keys() {
                    let ly = g.length(y);
                    if ly < l {
                        buckets[ly].insert(y.clone());
                    }
                }
                cur.add_scaled(&kz, &-c);
            }
        }
        HeckeElem(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(t: &str) -> Hecke {
        Hecke::new(Arc::new(Weyl::from_type(t).unwrap()))
    }

    fn poly(t: &[(i32, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(t.iter().copied())
    }

    #[test]
    fn quadratic_relation() {
        let h = setup("A1");
        let g = h.weyl();
        let s = g.gen(1).clone();
        let hs = h.std(&s);
        let sq = h.mul(&hs, &hs);
        let mut expected = LinComb::basis(g.identity());
        expected.add_term(s, &poly(&[(-1, 1), (1, -1)]));
        assert_eq!(*sq, expected);
    }

    #[test]
    fn bar_of_generator_and_kl() {
        let h = setup("A1");
        let g = h.weyl();
        let s = g.gen(0).clone();
        let b = h.bar(&h.std(&s));
        assert_eq!(b.coeff(&s), LaurentPoly::one());
        assert_eq!(b.coeff(&g.identity()), poly(&[(1, 1), (-1, -1)]));
        let ks = h.kl_basis(&s);
        assert_eq!(ks.coeff(&g.identity()), LaurentPoly::v());
        assert_eq!(h.bar(&ks), ks);
    }

    #[test]
    fn infinite_dihedral_closed_form() {
        let h = setup("A1");
        let g = h.weyl();
        let w = g.from_word(&[0, 1, 0]);
        let kw = h.kl_basis(&w);
        assert_eq!(kw.len(), 6);
        for (y, c) in kw.iter() {
            let d = (g.length(&w) - g.length(y)) as i32;
            assert_eq!(c, &LaurentPoly::monomial(d, 1));
        }
        let s0s1 = g.from_word(&[0, 1]);
        assert_eq!(h.kl_poly(&g.identity(), &s0s1), poly(&[(2, 1)]));
    }

    #[test]
    fn lengths_add() {
        let h = setup("A1");
        let g = h.weyl();
        let prod = h.mul(&h.mul(&h.std(g.gen(0)), &h.std(g.gen(1))), &h.std(g.gen(0)));
        assert_eq!(*prod, LinComb::basis(g.from_word(&[0, 1, 0])));
    }

    #[test]
    fn absorption_small() {
        let h = setup("C2");
        let g = h.weyl();
        for w in g.enumerate_w(4) {
            for s in 0..g.num_gens() {
                if g.is_right_descent(&w, s) {
                    assert!(h.check_absorption(&w, s).unwrap());
                }
            }
        }
        assert!(h.check_absorption(&g.identity(), 0).is_err());
    }

    #[test]
    fn extended_kl_is_omega_translate() {
        let h = setup("A2");
        let g = h.weyl();
        let om = g.omega_elements().unwrap()[1].clone();
        let w = g.from_word(&[1, 2, 0]);
        let lhs = h.kl_basis(&g.mul(&om, &w));
        let rhs = h.mul(&h.std(&om), &h.kl_basis(&w));
        assert_eq!(lhs, rhs);
        assert_eq!(h.bar(&lhs), lhs);
    }
}
