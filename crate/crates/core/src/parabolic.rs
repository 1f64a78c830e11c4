//! Antispherical and spherical modules, the maps `ξ`, `ζ` and `φ`.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hecke::{BasisKind, Hecke, HeckeElem, PCanonicalTable};
use crate::laurent::LaurentPoly;
use crate::lincomb::{self, elem_type, LinComb, Step, StdModule};
use crate::rootdata::Weight;
use crate::weyl::{ExtElem, Gen, Weyl};

elem_type!(
    /// Element of the antispherical module in the basis `(N_w)`, `w ∈ ᶠW_ext`.
    AsphElem,
    ExtElem
);

elem_type!(
    /// Element of the spherical module in the basis `(M_w)`, `w ∈ ᶠW_ext`.
    SphElem,
    ExtElem
);

/// Standard-basis action for `sgn ⊗ H_ext` (`sign = true`) or `triv ⊗ H_ext`.
pub struct Induced<'a> {
    weyl: &'a Weyl,
    sign: bool,
}

impl<'a> Induced<'a> {
    pub fn asph(weyl: &'a Weyl) -> Self {
        Induced { weyl, sign: true }
    }

    pub fn sph(weyl: &'a Weyl) -> Self {
        Induced { weyl, sign: false }
    }
}

impl StdModule for Induced<'_> {
    type Key = ExtElem;

    fn weyl(&self) -> &Weyl {
        self.weyl
    }

    fn step(&self, k: &ExtElem, s: Gen) -> Step<ExtElem> {
        let g = self.weyl;
        let ks = g.mul_gen(k, s);
        if !g.is_fwext(&ks) {
            Step::Scalar(if self.sign {
                -LaurentPoly::v()
            } else {
                LaurentPoly::v_inv()
            })
        } else if g.length(&ks) > g.length(k) {
            Step::Up(ks)
        } else {
            Step::Down(ks)
        }
    }

    fn act_omega(&self, k: &ExtElem, om: &ExtElem) -> Result<ExtElem> {
        Ok(self.weyl.mul(k, om))
    }
}

/// Outcome of comparing `φ(ᵖM̲_w)` with `ᵖN̲_{t_ς w}`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MainReport {
    pub w: String,
    pub status: Status,
    pub lhs: Vec<(String, LaurentPoly)>,
    pub rhs: Vec<(String, LaurentPoly)>,
    pub diff: Vec<(String, LaurentPoly)>,
}

#[derive(Clone, Copy, Debug, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

pub struct Parabolic {
    hecke: Arc<Hecke>,
    un: RwLock<HashMap<ExtElem, Arc<AsphElem>>>,
}

impl Parabolic {
    pub fn new(hecke: Arc<Hecke>) -> Self {
        Parabolic {
            hecke,
            un: RwLock::new(HashMap::new()),
        }
    }

    pub fn hecke(&self) -> &Arc<Hecke> {
        &self.hecke
    }

    pub fn weyl(&self) -> &Weyl {
        self.hecke.weyl()
    }

    pub fn asph_act(&self, x: &AsphElem, h: &HeckeElem) -> AsphElem {
        AsphElem(lincomb::act(&Induced::asph(self.weyl()), x, h).expect("total"))
    }

    pub fn sph_act(&self, x: &SphElem, h: &HeckeElem) -> SphElem {
        SphElem(lincomb::act(&Induced::sph(self.weyl()), x, h).expect("total"))
    }

    /// `ξ(h) = N_e·h`
    pub fn xi(&self, h: &HeckeElem) -> AsphElem {
        self.asph_act(&AsphElem::basis(self.weyl().identity()), h)
    }

    /// `ζ(M_y) = H̲_{w_f}·H_y`
    pub fn zeta(&self, m: &SphElem) -> HeckeElem {
        let kwf = self.hecke.kl_basis(&self.weyl().w_f());
        self.hecke.mul(&kwf, &HeckeElem(m.0.clone()))
    }

    /// Inverse of `ζ` on its image. The coefficient of `M_y` is read off at
    /// `H_{w_f y}`; the candidate is then pushed forward and compared.
    pub fn zeta_preimage(&self, h: &HeckeElem) -> Result<SphElem> {
        let g = self.weyl();
        let wf = g.w_f();
        let lwf = g.length(&wf);
        let mut m = LinComb::new();
        for (k, c) in h.iter() {
            let (z, y) = g.min_coset_rep(k);
            if g.fin().length(z) == lwf {
                m.add_term(y, c);
            }
        }
        let m = SphElem(m);
        let back = self.zeta(&m);
        if back != *h {
            let diff = h.sub(&back);
            let witness = diff
                .keys()
                .max_by_key(|k| g.bfs_key(k))
                .expect("nonzero difference")
                .clone();
            return Err(Error::NotInImage {
                map: "zeta",
                witness: g.format(&witness),
                found: h.coeff(&witness).to_string(),
                expected: back.coeff(&witness).to_string(),
            });
        }
        Ok(m)
    }

    fn require_fwext(&self, w: &ExtElem) -> Result<()> {
        if self.weyl().is_fwext(w) {
            Ok(())
        } else {
            Err(Error::NotMinimal(self.weyl().format(w)))
        }
    }

    /// `N̲_w = ξ(H̲_w)`
    pub fn kl_n(&self, w: &ExtElem) -> Result<AsphElem> {
        self.require_fwext(w)?;
        Ok(self.xi(&self.hecke.kl_basis(w)))
    }

    /// `M̲_w` with `ζ(M̲_w) = H̲_{w_f w}`.
    pub fn kl_m(&self, w: &ExtElem) -> Result<SphElem> {
        self.require_fwext(w)?;
        let g = self.weyl();
        self.zeta_preimage(&self.hecke.kl_basis(&g.mul(&g.w_f(), w)))
    }

    pub fn p_n(&self, table: &PCanonicalTable, w: &ExtElem) -> Result<AsphElem> {
        self.require_fwext(w)?;
        match table.basis() {
            BasisKind::H => Ok(self.xi(&HeckeElem(table.column(w)?))),
            BasisKind::N => Ok(AsphElem(table.column(w)?)),
            BasisKind::M => Err(Error::Precondition(
                "an M-basis table does not determine the antispherical p-canonical basis".into(),
            )),
        }
    }

    pub fn p_m(&self, table: &PCanonicalTable, w: &ExtElem) -> Result<SphElem> {
        self.require_fwext(w)?;
        let g = self.weyl();
        match table.basis() {
            BasisKind::H => self.zeta_preimage(&HeckeElem(table.column(&g.mul(&g.w_f(), w))?)),
            BasisKind::M => Ok(SphElem(table.column(w)?)),
            BasisKind::N => Err(Error::Precondition(
                "an N-basis table does not determine the spherical p-canonical basis".into(),
            )),
        }
    }

    pub fn bar_asph(&self, x: &AsphElem) -> AsphElem {
        let h = self.hecke.bar(&HeckeElem(x.0.clone()));
        self.xi(&h)
    }

    pub fn bar_sph(&self, x: &SphElem) -> SphElem {
        let h = self.hecke.bar(&HeckeElem(x.0.clone()));
        self.sph_act(&SphElem::basis(self.weyl().identity()), &h)
    }

    /// `t_ς`
    pub fn t_varsigma(&self) -> ExtElem {
        let g = self.weyl();
        g.translation(g.datum().varsigma())
    }

    /// `N̲_{t_ς ω}`, after checking that it equals `Σ_{z ∈ W_f} v^{ℓ(z)} N_{t_ς z ω}`
    /// and that `N̲_{t_ς}` absorbs `H̲_s` for every finite `s`.
    pub fn un_varsigma(&self, om: &ExtElem) -> Result<Arc<AsphElem>> {
        let g = self.weyl();
        if !g.is_in_omega(om) {
            return Err(Error::Precondition(format!("{} has positive length", g.format(om))));
        }
        if let Some(x) = self.un.read().get(om) {
            return Ok(x.clone());
        }
        let t = self.t_varsigma();
        let x = self.kl_n(&g.mul(&t, om))?;
        let pattern: LinComb<ExtElem> = g
            .finite_elements()
            .into_iter()
            .map(|z| {
                let key = g.mul(&g.mul(&t, &z), om);
                (key, LaurentPoly::monomial(g.length(&z) as i32, 1))
            })
            .collect();
        if x.0 != pattern {
            return Err(Error::Hypothesis(format!(
                "N̲ at {} is not the W_f-orbit sum",
                g.format(&g.mul(&t, om))
            )));
        }
        if om == &g.identity() {
            let vv = LaurentPoly::v() + LaurentPoly::v_inv();
            for s in g.finite_gens() {
                let prod = self.asph_act(&x, &self.hecke.kl_basis(g.gen(s)));
                if prod.0 != x.scale(&vv) {
                    return Err(Error::Hypothesis(format!(
                        "N̲ at t_varsigma does not absorb {}",
                        g.gen_name(s)
                    )));
                }
            }
        }
        let x = Arc::new(x);
        Ok(self.un.write().entry(om.clone()).or_insert(x).clone())
    }

    /// `φ(M_y) = N̲_{t_ς}·H_y`
    pub fn phi(&self, m: &SphElem) -> Result<AsphElem> {
        let base = self.un_varsigma(&self.weyl().identity())?;
        Ok(self.asph_act(&base, &HeckeElem(m.0.clone())))
    }

    /// Compares `φ(ᵖM̲_w)` with `ᵖN̲_{t_ς w}`.
    pub fn verify_main(&self, table: &PCanonicalTable, w: &ExtElem) -> Result<MainReport> {
        let g = self.weyl();
        let lhs = self.phi(&self.p_m(table, w)?)?;
        let rhs = self.p_n(table, &g.mul(&self.t_varsigma(), w))?;
        let diff = lhs.sub(&rhs);
        let show = |x: &LinComb<ExtElem>| lincomb::render(x, |k| g.bfs_key(k), |k| g.format(k));
        Ok(MainReport {
            w: g.format(w),
            status: if diff.is_empty() {
                Status::Pass
            } else {
                Status::Fail
            },
            lhs: show(&lhs),
            rhs: show(&rhs),
            diff: show(&diff),
        })
    }

    /// Embeds an element of the `λ̄`-twisted spherical module (keys in `W`)
    /// via `M_e·H_{ω_λ^{-1}}·h`.
    pub fn twisted_embed(&self, lambda: &Weight, m: &SphElem) -> Result<SphElem> {
        let g = self.weyl();
        if let Some(k) = m.keys().find(|k| !g.is_in_w(k)) {
            return Err(Error::NotInW(g.format(k)));
        }
        let (om, _) = g.omega_of_weight(lambda);
        let start = SphElem::basis(g.inv(&om));
        Ok(self.sph_act(&start, &HeckeElem(m.0.clone())))
    }

    /// Key in the spherical module of `M^λ_A`: `t_{-λ}·x_A`.
    pub fn sph_alcove_key(&self, lambda: &Weight, a: &crate::alcoves::Alcove) -> ExtElem {
        let g = self.weyl();
        g.mul(&g.translation(&lambda.neg()), a.elem())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup(t: &str) -> Parabolic {
        let g = Arc::new(Weyl::from_type(t).unwrap());
        Parabolic::new(Arc::new(Hecke::new(g)))
    }

    #[test]
    fn sign_and_triv_actions() {
        let p = setup("A1");
        let g = p.weyl();
        let e = g.identity();
        let s1 = g.gen(1).clone();
        let s0 = g.gen(0).clone();
        let n = p.xi(&HeckeElem::basis(s1.clone()));
        assert_eq!(n.0, LinComb::term(e.clone(), -LaurentPoly::v()));
        let m = p.sph_act(&SphElem::basis(e.clone()), &HeckeElem::basis(s1));
        assert_eq!(m.0, LinComb::term(e.clone(), LaurentPoly::v_inv()));
        assert_eq!(p.xi(&HeckeElem::basis(s0.clone())).0, LinComb::basis(s0));
    }

    #[test]
    fn xi_of_kl() {
        let p = setup("A1");
        let g = p.weyl();
        assert!(p.xi(&p.hecke().kl_basis(g.gen(1))).is_empty());
        let w = g.from_word(&[0, 1]);
        let mut expected = LinComb::basis(w.clone());
        expected.add_term(g.gen(0).clone(), &LaurentPoly::v());
        assert_eq!(p.kl_n(&w).unwrap().0, expected);
        let w3 = g.from_word(&[0, 1, 0]);
        let mut expected = LinComb::basis(w3.clone());
        expected.add_term(w.clone(), &LaurentPoly::v());
        assert_eq!(p.kl_n(&w3).unwrap().0, expected);
    }

    #[test]
    fn zeta_and_preimage() {
        let p = setup("A1");
        let g = p.weyl();
        let e = g.identity();
        let z = p.zeta(&SphElem::basis(e.clone()));
        let mut expected = LinComb::term(e.clone(), LaurentPoly::v());
        expected.add_term(g.gen(1).clone(), &LaurentPoly::one());
        assert_eq!(z.0, expected);
        let s0 = g.gen(0).clone();
        assert_eq!(
            p.zeta(&p.kl_m(&s0).unwrap()),
            p.hecke().kl_basis(&g.from_word(&[1, 0]))
        );
        let err = p.zeta_preimage(&HeckeElem::basis(e)).unwrap_err();
        assert!(matches!(err, Error::NotInImage { map: "zeta", .. }));
    }

    #[test]
    fn un_varsigma_shapes() {
        for (t, n) in [("A1", 2), ("C2", 8), ("G2", 12)] {
            let p = setup(t);
            let x = p.un_varsigma(&p.weyl().identity()).unwrap();
            assert_eq!(x.len(), n, "{t}");
        }
        let p = setup("A1");
        let g = p.weyl();
        let t = p.t_varsigma();
        let x = p.un_varsigma(&g.identity()).unwrap();
        assert_eq!(g.length(&t), 1);
        assert!(g.is_in_omega(&g.mul(&t, g.gen(1))));
        assert_eq!(x.coeff(&g.mul(&t, g.gen(1))), LaurentPoly::v());
    }

    #[test]
    fn twisted_embedding_at_rho() {
        let p = setup("A1");
        let g = p.weyl();
        let rho = g.datum().varsigma().clone();
        let a = g.alcove(&g.omega_of_weight(&rho).1).unwrap();
        let key = p.sph_alcove_key(&rho, &a);
        let (om, _) = g.omega_of_weight(&rho);
        assert_eq!(key, g.inv(&om));
        let m = p.twisted_embed(&rho, &SphElem::basis(g.identity())).unwrap();
        assert_eq!(m.0, LinComb::basis(g.inv(&om)));
        let zero = Weight::zero(1);
        let s0 = SphElem::basis(g.gen(0).clone());
        assert_eq!(p.twisted_embed(&zero, &s0).unwrap(), s0);
    }

    #[test]
    fn main_identity_kl_level() {
        let p = setup("A1");
        let g = p.weyl();
        let table = PCanonicalTable::builtin(p.hecke().clone());
        for w in g.enumerate_fwext(6) {
            let r = p.verify_main(&table, &w).unwrap();
            assert_eq!(r.status, Status::Pass, "{}", r.w);
        }
    }
}
