//! Sparse Laurent polynomials in `v` with arbitrary-precision integer
//! coefficients.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Terms are kept sorted by exponent with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct LaurentPoly {
    terms: Vec<(i32, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    pub fn v_inv() -> Self {
        Self::monomial(-1, 1)
    }

    /// `c·v^e`
    pub fn monomial(e: i32, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { terms: vec![(e, c)] }
        }
    }

    /// Builds from arbitrary `(exponent, coefficient)` pairs, merging repeats.
    pub fn from_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut terms: Vec<(i32, BigInt)> = it.into_iter().map(|(e, c)| (e, c.into())).collect();
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(i32, BigInt)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        LaurentPoly { terms: out }
    }

    /// `v^{-k} Σ_{x} v^{ℓ(x)}`-style polynomials from a list of exponents.
    pub fn from_exponents(exps: impl IntoIterator<Item = i32>) -> Self {
        Self::from_terms(exps.into_iter().map(|e| (e, 1)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == 0 && self.terms[0].1.is_one()
    }

    pub fn terms(&self) -> &[(i32, BigInt)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.last().map(|t| t.0)
    }

    /// Multiplication by `v^k`.
    pub fn shift(&self, k: i32) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    /// `v ↦ v^{-1}`
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().rev().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self == &self.bar()
    }

    pub fn eval_one(&self) -> BigInt {
        self.terms.iter().map(|t| &t.1).sum()
    }

    /// Value at `v = 1` as a machine integer; panics on overflow.
    pub fn eval_one_i64(&self) -> i64 {
        self.eval_one().to_i64().expect("value at v=1 fits in i64")
    }

    pub fn is_nonnegative(&self) -> bool {
        self.terms.iter().all(|t| t.1.is_positive())
    }

    /// Whether every exponent is at least 1.
    pub fn in_v_zv(&self) -> bool {
        self.min_degree().is_none_or(|d| d >= 1)
    }

    /// The part with exponents `≤ 0`, made bar-invariant by mirroring its
    /// negative-degree terms. Subtracting `c·X` for a bar-invariant `X` with
    /// leading coefficient 1 removes every nonpositive term.
    pub fn nonpositive_symmetric(&self) -> Self {
        let mut t = vec![];
        for (e, c) in &self.terms {
            if *e <= 0 {
                t.push((*e, c.clone()));
                if *e < 0 {
                    t.push((-e, c.clone()));
                }
            }
        }
        Self::from_terms(t)
    }

    /// Exact division, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let (dl, dc) = d.terms.last().unwrap();
        let mut rem = self.clone();
        let mut q = vec![];
        let lo = self.min_degree().unwrap() - d.min_degree().unwrap();
        while let Some((rl, rc)) = rem.terms.last().cloned() {
            let e = rl - dl;
            if e < lo {
                return None;
            }
            let (quo, r) = rc.div_rem(dc);
            if !r.is_zero() {
                return None;
            }
            rem -= &d.shift(e).scale(&quo);
            q.push((e, quo));
        }
        Some(Self::from_terms(q))
    }

    /// Pairs `(exponent, coefficient)` with decimal-string coefficients.
    pub fn to_pairs(&self) -> Vec<(i32, String)> {
        self.terms.iter().map(|(e, c)| (*e, c.to_string())).collect()
    }

    fn combine(&self, other: &LaurentPoly, sign: bool) -> LaurentPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) => x.0.cmp(&y.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    let c = if sign { b[j].1.clone() } else { -&b[j].1 };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if sign { &a[i].1 + &b[j].1 } else { &a[i].1 - &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        LaurentPoly { terms: out }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        self.combine(o, true)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        self.combine(o, false)
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: LaurentPoly) -> LaurentPoly {
        &self + &o
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: LaurentPoly) -> LaurentPoly {
        &self - &o
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, o: &LaurentPoly) {
        if o.is_zero() {
            return;
        }
        *self = self.combine(o, true);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, o: &LaurentPoly) {
        if o.is_zero() {
            return;
        }
        *self = self.combine(o, false);
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        if o.terms.len() == 1 && o.terms[0].1.is_one() {
            return self.shift(o.terms[0].0);
        }
        if self.terms.len() == 1 && self.terms[0].1.is_one() {
            return o.shift(self.terms[0].0);
        }
        let mut t = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                t.push((e1 + e2, c1 * c2));
            }
        }
        LaurentPoly::from_terms(t)
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        &self * &o
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            let unit = mag.is_one();
            match *e {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "v")?,
                1 => write!(f, "{mag}v")?,
                _ if unit => write!(f, "v^{e}")?,
                _ => write!(f, "{mag}v^{e}")?,
            }
        }
        Ok(())
    }
}

/// JSON form: `[[exp, coeff], ...]`; coefficients are numbers when they fit
/// in 64 bits and decimal strings otherwise.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<(i32, serde_json::Value)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let val = match c.to_i64() {
                    Some(x) => serde_json::Value::from(x),
                    None => serde_json::Value::from(c.to_string()),
                };
                (*e, val)
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v: Vec<(i32, serde_json::Value)> = Vec::deserialize(d)?;
        let mut t = Vec::with_capacity(v.len());
        for (e, c) in v {
            let c = match c {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| D::Error::custom(format!("non-integer coefficient {n}")))?,
                serde_json::Value::String(s) => s
                    .parse::<BigInt>()
                    .map_err(|e| D::Error::custom(format!("bad coefficient {s:?}: {e}")))?,
                other => return Err(D::Error::custom(format!("bad coefficient {other}"))),
            };
            t.push((e, c));
        }
        Ok(LaurentPoly::from_terms(t))
    }
}
