//! The alcove model: alcoves are identified with `W` through
//! `x ↦ x(A_fund)`; geometry uses the exact barycenter `x(ρ/h)`.
//!
//! Points are kept as integer vectors scaled by `D = 2h`, so the
//! barycenter of `A_fund` is `2ρ` and every wall test is an integer
//! comparison.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::rootdata::{RatWeight, Weight};
use crate::weyl::{ExtElem, Gen, Order, Weyl};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Alcove(ExtElem);

impl Alcove {
    pub fn elem(&self) -> &ExtElem {
        &self.0
    }

    pub fn into_elem(self) -> ExtElem {
        self.0
    }

    pub(crate) fn from_w(x: ExtElem) -> Self {
        Alcove(x)
    }
}

impl Weyl {
    /// Scale factor of barycenter coordinates.
    pub fn denom(&self) -> i64 {
        2 * self.datum().coxeter_number
    }

    pub fn fundamental_alcove(&self) -> Alcove {
        Alcove(self.identity())
    }

    pub fn alcove(&self, x: &ExtElem) -> Result<Alcove> {
        if !self.is_in_w(x) {
            return Err(Error::NotInW(self.format(x)));
        }
        Ok(Alcove(x.clone()))
    }

    /// Barycenter scaled by [`Weyl::denom`].
    pub fn scaled_barycenter(&self, a: &Alcove) -> Weight {
        self.apply_scaled(&a.0, self.datum().rho2(), self.denom())
    }

    pub fn barycenter(&self, a: &Alcove) -> RatWeight {
        RatWeight {
            num: self.scaled_barycenter(a),
            den: self.denom(),
        }
    }

    /// The alcove `y(A)` for `y ∈ W_ext`.
    pub fn act_left(&self, y: &ExtElem, a: &Alcove) -> Alcove {
        Alcove(self.split_right(&self.mul(y, &a.0)).0)
    }

    /// The right action `A·y = (x_A y)(A_fund)`.
    pub fn act_right(&self, a: &Alcove, y: &ExtElem) -> Alcove {
        Alcove(self.split_right(&self.mul(&a.0, y)).0)
    }

    pub fn act_right_gen(&self, a: &Alcove, s: Gen) -> Alcove {
        Alcove(self.mul_gen(&a.0, s))
    }

    pub fn translate(&self, a: &Alcove, mu: &Weight) -> Alcove {
        if mu.is_zero() {
            return a.clone();
        }
        self.act_left(&self.translation(mu), a)
    }

    pub fn simple_pairings_scaled(&self, a: &Alcove) -> Vec<i64> {
        self.datum().simple_pairings(&self.scaled_barycenter(a))
    }

    pub fn is_dominant(&self, a: &Alcove) -> bool {
        self.simple_pairings_scaled(a).iter().all(|&c| c > 0)
    }

    /// `μ` with `⟨μ,α∨⟩ − 1 < ⟨b,α∨⟩ ≤ ⟨μ,α∨⟩` for simple `α`.
    pub fn box_rep_below(&self, a: &Alcove) -> Weight {
        let d = self.denom();
        let c: Vec<i64> = self
            .simple_pairings_scaled(a)
            .iter()
            .map(|&q| q.div_euclid(d) + 1)
            .collect();
        self.datum().weight_with_pairings(&c)
    }

    /// `μ` with `⟨μ,α∨⟩ ≤ ⟨b,α∨⟩ < ⟨μ,α∨⟩ + 1` for simple `α`.
    pub fn box_rep_above(&self, a: &Alcove) -> Weight {
        let d = self.denom();
        let c: Vec<i64> = self
            .simple_pairings_scaled(a)
            .iter()
            .map(|&q| q.div_euclid(d))
            .collect();
        self.datum().weight_with_pairings(&c)
    }

    fn box_flip(&self, mu: &Weight, a: &Alcove) -> Alcove {
        let y = self.mul(
            &self.mul(&self.translation(mu), &self.w_f()),
            &self.translation(&mu.neg()),
        );
        self.act_left(&y, a)
    }

    /// `Â = (t_μ w_f t_{−μ})(A)` with `μ` the lower box representative.
    pub fn hat(&self, a: &Alcove) -> Alcove {
        self.box_flip(&self.box_rep_below(a), a)
    }

    /// Inverse of [`Weyl::hat`].
    pub fn check(&self, a: &Alcove) -> Alcove {
        self.box_flip(&self.box_rep_above(a), a)
    }

    /// Least `m ≥ 0` such that `A + mς` is dominant.
    pub fn dominance_shift(&self, a: &Alcove) -> i64 {
        let d = self.denom();
        self.simple_pairings_scaled(a)
            .iter()
            .map(|&q| if q > 0 { 0 } else { (-q).div_euclid(d) + 1 })
            .max()
            .unwrap_or(0)
    }

    /// The generic order, computed by translating both alcoves by the least
    /// common multiple of `ς` that makes them dominant.
    pub fn generic_cmp(&self, a: &Alcove, b: &Alcove) -> Order {
        let m = self.dominance_shift(a).max(self.dominance_shift(b));
        self.generic_cmp_at(a, b, m)
    }

    /// Comparison after translating by `m·ς`; meaningful once both
    /// translates are dominant.
    pub fn generic_cmp_at(&self, a: &Alcove, b: &Alcove, m: i64) -> Order {
        let mu = self.datum().varsigma().scale(m);
        let ta = self.translate(a, &mu);
        let tb = self.translate(b, &mu);
        self.bruhat_cmp(&ta.0, &tb.0)
    }

    /// Whether `A ≼ A·s`. The two alcoves share a wall orthogonal to some
    /// positive root `β`; the larger one is on the side where `⟨·, ρ∨⟩`
    /// grows, since that side is further from `A_fund` after any dominant
    /// translation.
    pub fn neighbor_below(&self, a: &Alcove, s: Gen) -> bool {
        let b = self.act_right_gen(a, s);
        let diff = self.scaled_barycenter(&b).sub(&self.scaled_barycenter(a));
        let rho2v = self.rho2_vee();
        diff.pair(&rho2v) > 0
    }

    /// `2ρ∨`, the sum of the positive coroots.
    pub fn rho2_vee(&self) -> Weight {
        let d = self.datum();
        d.positive_coroots
            .iter()
            .fold(Weight::zero(d.lattice_rank), |acc, c| acc.add(c))
    }

    /// Alcoves whose barycenter satisfies `lo < ⟨b, α∨⟩ < hi` for every
    /// simple coroot, found by walking through walls from `start`.
    pub fn alcoves_in_box(&self, start: &Alcove, lo: i64, hi: i64) -> Vec<Alcove> {
        let d = self.denom();
        let inside = |a: &Alcove| {
            self.simple_pairings_scaled(a)
                .iter()
                .all(|&q| q > lo * d && q < hi * d)
        };
        let mut out = vec![];
        if !inside(start) {
            return out;
        }
        let mut seen = HashSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start.clone());
        queue.push_back(start.clone());
        while let Some(a) = queue.pop_front() {
            for s in 0..self.num_gens() {
                let b = self.act_right_gen(&a, s);
                if inside(&b) && seen.insert(b.clone()) {
                    queue.push_back(b);
                }
            }
            out.push(a);
        }
        out.sort_by_key(|a| self.bfs_key(a.elem()));
        out
    }

    /// Dominant alcoves `x(A_fund)` with `ℓ(x) ≤ max_len`.
    pub fn dominant_alcoves(&self, max_len: usize) -> Vec<Alcove> {
        self.enumerate_w(max_len)
            .into_iter()
            .filter(|x| self.is_fwext(x))
            .map(Alcove)
            .collect()
    }

    pub fn format_alcove(&self, a: &Alcove) -> String {
        self.format(&a.0)
    }

    pub fn parse_alcove(&self, s: &str) -> Result<Alcove> {
        self.alcove(&self.parse(s)?)
    }
}
