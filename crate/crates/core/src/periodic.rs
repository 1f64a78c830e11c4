//! The periodic module: free on alcoves, with the `H`-action governed by
//! the generic order, and its canonical and p-canonical bases.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use num_bigint::BigInt;
use parking_lot::RwLock;
use serde::Serialize;

use crate::alcoves::Alcove;
use crate::error::{Error, Result};
use crate::hecke::{BasisKind, Hecke, HeckeElem, PCanonicalTable};
use crate::laurent::LaurentPoly;
use crate::lincomb::{self, elem_type, LinComb, Step, StdModule};
use crate::parabolic::{Parabolic, SphElem};
use crate::rootdata::Weight;
use crate::weyl::{ExtElem, Gen, Weyl};

elem_type!(
    /// Element of the periodic module in the alcove basis.
    PeriodicElem,
    Alcove
);

/// Standard-basis action: `A·H_s = As` if `A ≼ As`, else `As + (v^{-1} − v)A`.
pub struct PerModule<'a> {
    weyl: &'a Weyl,
}

impl<'a> PerModule<'a> {
    pub fn new(weyl: &'a Weyl) -> Self {
        PerModule { weyl }
    }
}

impl StdModule for PerModule<'_> {
    type Key = Alcove;

    fn weyl(&self) -> &Weyl {
        self.weyl
    }

    fn step(&self, a: &Alcove, s: Gen) -> Step<Alcove> {
        let b = self.weyl.act_right_gen(a, s);
        if self.weyl.neighbor_below(a, s) {
            Step::Up(b)
        } else {
            Step::Down(b)
        }
    }

    fn act_omega(&self, _: &Alcove, om: &ExtElem) -> Result<Alcove> {
        Err(Error::OmegaSupport(self.weyl.format(om)))
    }
}

/// Data behind one application of the Lusztig formula.
#[derive(Clone, Debug)]
pub struct LusztigData {
    /// `μ` with `A ⊂ Π̂_μ`.
    pub mu: Weight,
    /// `w` with `(μ + A_fund)·w = A`.
    pub w: ExtElem,
    /// `w_μ̄ w`, the index of the Hecke column used.
    pub column: ExtElem,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct NegativeEntry {
    pub a: String,
    pub b: String,
    pub coeff: LaurentPoly,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct PositivityReport {
    pub checked: usize,
    pub nonidentity: usize,
    pub negatives: Vec<NegativeEntry>,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        self.negatives.is_empty()
    }
}

pub struct Periodic {
    parabolic: Arc<Parabolic>,
    kl: RwLock<HashMap<Alcove, Arc<PeriodicElem>>>,
}

impl Periodic {
    pub fn new(parabolic: Arc<Parabolic>) -> Self {
        Periodic {
            parabolic,
            kl: RwLock::new(HashMap::new()),
        }
    }

    pub fn from_hecke(hecke: Arc<Hecke>) -> Self {
        Self::new(Arc::new(Parabolic::new(hecke)))
    }

    pub fn weyl(&self) -> &Weyl {
        self.parabolic.weyl()
    }

    pub fn hecke(&self) -> &Arc<Hecke> {
        self.parabolic.hecke()
    }

    pub fn parabolic(&self) -> &Arc<Parabolic> {
        &self.parabolic
    }

    pub fn per_act(&self, x: &PeriodicElem, h: &HeckeElem) -> Result<PeriodicElem> {
        let g = self.weyl();
        if let Some(k) = h.keys().find(|k| !g.is_in_w(k)) {
            return Err(Error::OmegaSupport(g.format(k)));
        }
        Ok(PeriodicElem(lincomb::act(&PerModule::new(g), x, h)?))
    }

    /// `R + μ`
    pub fn per_translate(&self, x: &PeriodicElem, mu: &Weight) -> PeriodicElem {
        let g = self.weyl();
        PeriodicElem(x.map_keys(|a| g.translate(a, mu)))
    }

    /// `π_f = v^{-ℓ(w_f)} Σ_{x ∈ W_f} v^{2ℓ(x)}`, the scalar by which `H̲_{w_f}`
    /// acts on itself.
    pub fn pi_f(&self) -> LaurentPoly {
        let g = self.weyl();
        let lwf = g.length(&g.w_f()) as i32;
        LaurentPoly::from_exponents(
            g.fin().elements().map(|x| 2 * g.fin().length(x) as i32 - lwf),
        )
    }

    /// `P̲_{A_fund + μ} = Σ_{x ∈ W_f} v^{ℓ(x)} (x(A_fund) + μ)`
    pub fn canonical_p_fund(&self, mu: &Weight) -> PeriodicElem {
        let g = self.weyl();
        let mut out = LinComb::new();
        for x in g.finite_elements() {
            let a = g.translate(&Alcove::from_w(x.clone()), mu);
            out.add_term(a, &LaurentPoly::monomial(g.length(&x) as i32, 1));
        }
        PeriodicElem(out)
    }

    pub fn lusztig_data(&self, a: &Alcove) -> LusztigData {
        let g = self.weyl();
        let mu = g.box_rep_above(a);
        let (om, x_mu) = g.omega_of_weight(&mu);
        let w = g.mul(&g.inv(&x_mu), a.elem());
        let w_bar = g.mul(&g.mul(&om, &g.w_f()), &g.inv(&om));
        let column = g.mul(&w_bar, &w);
        LusztigData { mu, w, column }
    }

    /// `P̲_A = π_f^{-1} · P̲_{A_fund+μ} · H̲_{w_μ̄ w}`
    pub fn canonical_p(&self, a: &Alcove) -> Result<Arc<PeriodicElem>> {
        if let Some(x) = self.kl.read().get(a) {
            return Ok(x.clone());
        }
        let d = self.lusztig_data(a);
        let col = self.hecke().kl_basis(&d.column);
        let x = Arc::new(self.lusztig(a, &d.mu, &col)?);
        Ok(self.kl.write().entry(a.clone()).or_insert(x).clone())
    }

    /// The same formula with the table's column in place of the KL column.
    pub fn p_canonical_p(&self, table: &PCanonicalTable, a: &Alcove) -> Result<PeriodicElem> {
        if table.is_builtin() && table.basis() == BasisKind::H {
            return Ok((*self.canonical_p(a)?).clone());
        }
        let d = self.lusztig_data(a);
        let col = self.table_column(table, &d)?;
        self.lusztig(a, &d.mu, &col)
    }

    /// `ζ_μ̄(ᵖM̲^μ̄_w)` as an element of `H`.
    fn table_column(&self, table: &PCanonicalTable, d: &LusztigData) -> Result<HeckeElem> {
        let g = self.weyl();
        match table.basis() {
            BasisKind::H => Ok(HeckeElem(table.column(&d.column)?)),
            BasisKind::M => {
                // ζ(ᵖM̲_{ω^{-1}w}) = H_{ω^{-1}}·ᵖH̲_{w_μ̄ w}
                let (om, _) = g.omega_of_weight(&d.mu);
                let key = g.mul(&g.inv(&om), &d.w);
                let z = self.parabolic.zeta(&SphElem(table.column(&key)?));
                Ok(HeckeElem(z.map_keys(|k| g.mul(&om, k))))
            }
            BasisKind::N => Err(Error::Precondition(
                "an N-basis table does not determine the periodic p-canonical basis".into(),
            )),
        }
    }

    fn lusztig(&self, a: &Alcove, mu: &Weight, col: &HeckeElem) -> Result<PeriodicElem> {
        let g = self.weyl();
        let prod = self.per_act(&self.canonical_p_fund(mu), col)?;
        let pi = self.pi_f();
        let mut out = LinComb::new();
        for (b, c) in prod.iter() {
            let q = c.div_exact(&pi).ok_or_else(|| {
                Error::NotDivisible(format!(
                    "coefficient {c} of {} in the formula for {}",
                    g.format_alcove(b),
                    g.format_alcove(a)
                ))
            })?;
            out.add_term(b.clone(), &q);
        }
        Ok(PeriodicElem(out))
    }

    /// Expands `ᵖP̲_A` in the canonical basis, highest barycenter first.
    /// Every `B` needed must lie in `window`.
    pub fn expand_in_canonical(
        &self,
        table: &PCanonicalTable,
        a: &Alcove,
        window: &HashSet<Alcove>,
    ) -> Result<PeriodicElem> {
        let g = self.weyl();
        let rho2v = g.rho2_vee();
        let height = |b: &Alcove| g.scaled_barycenter(b).pair(&rho2v);
        let mut rem = self.p_canonical_p(table, a)?;
        let mut out = LinComb::new();
        while let Some(b) = rem
            .keys()
            .max_by(|x, y| height(x).cmp(&height(y)).then_with(|| x.cmp(y)))
            .cloned()
        {
            if !window.contains(&b) {
                return Err(Error::Window(format!(
                    "expanding the p-canonical element at {} needs the canonical element at {}",
                    g.format_alcove(a),
                    g.format_alcove(&b)
                )));
            }
            let c = rem.coeff(&b);
            let kb = self.canonical_p(&b)?;
            rem.add_scaled(&kb, &-c.clone());
            out.add_term(b, &c);
        }
        Ok(PeriodicElem(out))
    }

    /// Checks `ᵖP̲_A ∈ Σ ℤ≥0[v^{±1}] P̲_B` for every `A` in `window`.
    pub fn positivity_check(&self, table: &PCanonicalTable, window: &[Alcove]) -> Result<PositivityReport> {
        let g = self.weyl();
        let set: HashSet<Alcove> = window.iter().cloned().collect();
        let results = crate::par::map(window, |a| self.expand_in_canonical(table, a, &set));
        let mut negatives = vec![];
        let mut nonidentity = 0;
        for (a, r) in window.iter().zip(results) {
            let e = r?;
            if *e != LinComb::basis(a.clone()) {
                nonidentity += 1;
            }
            let mut rows: Vec<(&Alcove, &LaurentPoly)> = e.iter().collect();
            rows.sort_by_key(|(b, _)| g.bfs_key(b.elem()));
            for (b, c) in rows {
                if !c.is_nonnegative() {
                    negatives.push(NegativeEntry {
                        a: g.format_alcove(a),
                        b: g.format_alcove(b),
                        coeff: c.clone(),
                    });
                }
            }
        }
        Ok(PositivityReport {
            checked: window.len(),
            nonidentity,
            negatives,
        })
    }
}

/// `x ↦ x|_{v=1}`
pub fn specialize_v1(x: &PeriodicElem) -> BTreeMap<Alcove, BigInt> {
    x.specialize_one()
}
