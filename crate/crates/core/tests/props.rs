use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use proptest::prelude::*;

use pcanon_core::hecke::{Hecke, HeckeElem};
use pcanon_core::laurent::LaurentPoly;
use pcanon_core::lincomb::LinComb;
use pcanon_core::parabolic::Parabolic;
use pcanon_core::periodic::{Periodic, PeriodicElem};
use pcanon_core::rootdata::Weight;
use pcanon_core::weyl::{ExtElem, Weyl};

const TYPES: [&str; 4] = ["A1", "A2", "C2", "G2"];

fn hecke(i: usize) -> Arc<Hecke> {
    static CELLS: OnceLock<Vec<Arc<Hecke>>> = OnceLock::new();
    CELLS
        .get_or_init(|| {
            TYPES
                .iter()
                .map(|t| Arc::new(Hecke::new(Arc::new(Weyl::from_type(t).unwrap()))))
                .collect()
        })[i]
        .clone()
}

/// Type index, a word in the affine generators and a choice of `ω`.
fn word(max: usize) -> impl Strategy<Value = (usize, Vec<usize>, usize)> {
    (0..TYPES.len()).prop_flat_map(move |i| {
        let g = hecke(i);
        let n = g.weyl().num_gens();
        let no = g.weyl().omega_elements().map_or(1, |o| o.len());
        (Just(i), prop::collection::vec(0..n, 0..max), 0..no)
    })
}

fn elem(g: &Weyl, w: &[usize], om: usize) -> ExtElem {
    let o = g.omega_elements().map_or(g.identity(), |o| o[om].clone());
    g.mul(&g.from_word(w), &o)
}

fn weight(n: usize) -> impl Strategy<Value = Weight> {
    prop::collection::vec(-4i64..=4, n).prop_map(|v| Weight::from_slice(&v))
}

fn poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i32..=3, -3i64..=3), 0..3).prop_map(LaurentPoly::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn group_laws((i, a, oa) in word(10), b in prop::collection::vec(0usize..3, 0..10), c in prop::collection::vec(0usize..3, 0..10)) {
        let g = hecke(i);
        let g = g.weyl();
        let n = g.num_gens();
        let x = elem(g, &a, oa);
        let y = g.from_word(&b.iter().map(|s| s % n).collect::<Vec<_>>());
        let z = g.from_word(&c.iter().map(|s| s % n).collect::<Vec<_>>());
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
        prop_assert_eq!(g.mul(&g.identity(), &x), x.clone());
        prop_assert_eq!(g.length(&g.inv(&x)), g.length(&x));
        prop_assert!(g.length(&x) <= a.len());
        for s in 0..n {
            let d = g.length(&g.mul_gen(&x, s)) as i64 - g.length(&x) as i64;
            prop_assert_eq!(d.abs(), 1);
            prop_assert_eq!(d < 0, g.is_right_descent(&x, s));
        }
    }

    #[test]
    fn text_round_trip((i, a, oa) in word(12)) {
        let g = hecke(i);
        let g = g.weyl();
        let x = elem(g, &a, oa);
        prop_assert_eq!(g.parse(&g.format(&x)).unwrap(), x.clone());
        prop_assert_eq!(g.from_json(&g.to_json(&x)).unwrap(), x.clone());
        let (w, om) = g.lexmin_word(&x);
        prop_assert_eq!(w.len(), g.length(&x));
        prop_assert_eq!(g.mul(&g.from_word(&w), &om), x);
    }

    #[test]
    fn translations((i, a, _) in word(8), l in weight(2), m in weight(2)) {
        let g = hecke(i);
        let g = g.weyl();
        let (l, m) = (Weight::from_slice(&l.0[..g.datum().lattice_rank]), Weight::from_slice(&m.0[..g.datum().lattice_rank]));
        prop_assert_eq!(g.mul(&g.translation(&l), &g.translation(&m)), g.translation(&l.add(&m)));
        let w = g.from_fin(g.mul(&g.from_word(&a), &g.identity()).fin);
        let conj = g.mul(&g.mul(&w, &g.translation(&l)), &g.inv(&w));
        prop_assert_eq!(conj, g.translation(&g.apply_weight(&w, &l)));
        // ℓ(t_λ) = ⟨λ, 2ρ∨⟩ on dominant λ.
        let d = g.datum();
        let dom = d.weight_with_pairings(&d.simple_pairings(&l).iter().map(|c| c.abs()).collect::<Vec<_>>());
        prop_assert_eq!(g.length(&g.translation(&dom)) as i64, dom.pair(&g.rho2_vee()));
    }

    #[test]
    fn tau_is_a_length_preserving_automorphism((i, a, _) in word(8), b in prop::collection::vec(0usize..3, 0..8), l in weight(2)) {
        let g = hecke(i);
        let g = g.weyl();
        let l = Weight::from_slice(&l.0[..g.datum().lattice_rank]);
        let n = g.num_gens();
        let x = g.from_word(&a);
        let y = g.from_word(&b.iter().map(|s| s % n).collect::<Vec<_>>());
        let tx = g.tau(&l, &x).unwrap();
        prop_assert_eq!(g.length(&tx), g.length(&x));
        prop_assert_eq!(g.tau(&l, &g.mul(&x, &y)).unwrap(), g.mul(&tx, &g.tau(&l, &y).unwrap()));
    }

    #[test]
    fn alcove_hat_and_check((i, a, _) in word(12)) {
        let g = hecke(i);
        let g = g.weyl();
        let al = g.alcove(&g.from_word(&a)).unwrap();
        let h = g.hat(&al);
        prop_assert_eq!(g.check(&h), al.clone());
        prop_assert_eq!(g.hat(&g.check(&al)), al.clone());
        prop_assert_eq!(g.box_rep_above(&h), g.box_rep_below(&al));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn bar_involution(i in 0usize..3, terms in prop::collection::vec((prop::collection::vec(0usize..3, 0..5), poly()), 1..4), b in prop::collection::vec(0usize..3, 0..4)) {
        let h = hecke(i);
        let g = h.weyl();
        let n = g.num_gens();
        let mut x = LinComb::new();
        for (w, c) in &terms {
            x.add_term(g.from_word(&w.iter().map(|s| s % n).collect::<Vec<_>>()), c);
        }
        let x = HeckeElem(x);
        prop_assert_eq!(h.bar(&h.bar(&x)), x.clone());
        let y = h.std(&g.from_word(&b.iter().map(|s| s % n).collect::<Vec<_>>()));
        prop_assert_eq!(h.bar(&h.mul(&x, &y)), h.mul(&h.bar(&x), &h.bar(&y)));
    }

    #[test]
    fn kl_basis_is_canonical((i, a, oa) in word(7)) {
        let h = hecke(i);
        let g = h.weyl();
        let w = elem(g, &a, oa);
        let c = h.kl_basis(&w);
        prop_assert_eq!(h.bar(&c), c.clone());
        prop_assert!(c.coeff(&w).is_one());
        for (y, p) in c.iter() {
            prop_assert!(g.bruhat_leq(y, &w) == Some(true));
            if *y != w {
                prop_assert!(p.in_v_zv() && p.is_nonnegative());
            }
        }
    }

    #[test]
    fn translation_commutes_with_the_action((i, a, _) in word(6), (_, b, _) in word(4), l in weight(2)) {
        let h = hecke(i % 3);
        let g = h.weyl();
        let n = g.num_gens();
        let l = Weight::from_slice(&l.0[..g.datum().lattice_rank]);
        let per = Periodic::from_hecke(h.clone());
        let al = g.alcove(&g.from_word(&a.iter().map(|s| s % n).collect::<Vec<_>>())).unwrap();
        let x = PeriodicElem::basis(al);
        let hb = h.kl_basis(&g.from_word(&b.iter().map(|s| s % n).collect::<Vec<_>>()));
        let th: LinComb<ExtElem> = hb.iter().map(|(k, c)| (g.tau(&l, k).unwrap(), c.clone())).collect();
        let lhs = per.per_translate(&per.per_act(&x, &hb).unwrap(), &l);
        let rhs = per.per_act(&per.per_translate(&x, &l), &HeckeElem(th)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

/// `Z[v, v^{-1}]` with machine coefficients.
type Poly = BTreeMap<i32, i64>;

fn padd(a: &mut Poly, b: &Poly, k: i64, shift: i32) {
    for (e, c) in b {
        let t = a.entry(e + shift).or_default();
        *t += k * c;
        if *t == 0 {
            a.remove(&(e + shift));
        }
    }
}

/// `N̲_w` for `w ∈ ᶠW`, by `N̲_{w's} = N̲_{w'}·H̲_s − Σ c_y N̲_y` where the
/// `c_y` clear the constant terms, and `N_x·H̲_s` is `0`, `N_{xs} + vN_x` or
/// `N_{xs} + v^{-1}N_x`.
fn asph_oracle(g: &Weyl, w: &ExtElem, memo: &mut BTreeMap<ExtElem, BTreeMap<ExtElem, Poly>>) -> BTreeMap<ExtElem, Poly> {
    if let Some(x) = memo.get(w) {
        return x.clone();
    }
    let out = if g.length(w) == 0 {
        BTreeMap::from([(w.clone(), Poly::from([(0, 1)]))])
    } else {
        let s = (0..g.num_gens()).find(|&s| g.is_right_descent(w, s)).unwrap();
        let prev = asph_oracle(g, &g.mul_gen(w, s), memo);
        let mut acc: BTreeMap<ExtElem, Poly> = BTreeMap::new();
        for (x, c) in &prev {
            let xs = g.mul_gen(x, s);
            if !g.is_fwext(&xs) {
                continue;
            }
            let up = g.length(&xs) > g.length(x);
            padd(acc.entry(xs).or_default(), c, 1, 0);
            padd(acc.entry(x.clone()).or_default(), c, 1, if up { 1 } else { -1 });
        }
        loop {
            acc.retain(|_, c| !c.is_empty());
            let bad = acc
                .iter()
                .filter(|(y, c)| *y != w && c.get(&0).is_some())
                .max_by_key(|(y, _)| g.length(y))
                .map(|(y, c)| (y.clone(), c[&0]));
            let Some((y, c0)) = bad else { break };
            for (z, c) in asph_oracle(g, &y, memo) {
                padd(acc.entry(z).or_default(), &c, -c0, 0);
            }
        }
        acc
    };
    memo.insert(w.clone(), out.clone());
    out
}

#[test]
fn antispherical_basis_matches_the_recursive_oracle() {
    for (i, max_len) in [(0, 12), (1, 7), (2, 7), (3, 6)] {
        let h = hecke(i);
        let g = h.weyl();
        let par = Parabolic::new(h.clone());
        let mut memo = BTreeMap::new();
        let oms = g.omega_elements().map_or(vec![g.identity()], |o| o.to_vec());
        for w in g.enumerate_w(max_len).into_iter().filter(|x| g.is_fwext(x)) {
            let want = asph_oracle(g, &w, &mut memo);
            for om in &oms {
                let got = par.kl_n(&g.mul(&w, om)).unwrap();
                let want: LinComb<ExtElem> = want
                    .iter()
                    .map(|(y, c)| (g.mul(y, om), LaurentPoly::from_terms(c.iter().map(|(e, c)| (*e, *c)))))
                    .collect();
                assert_eq!(got.0, want, "{} at {}", TYPES[i], g.format(&w));
            }
        }
    }
}

#[test]
fn periodic_alcoves_round_trip() {
    let h = hecke(2);
    let g = h.weyl();
    for x in g.enumerate_w(6) {
        let a = g.alcove(&x).unwrap();
        assert_eq!(g.parse_alcove(&g.format_alcove(&a)).unwrap(), a);
        assert_eq!(a.elem(), &x);
    }
}
