//! Root data: the character lattice, simple roots and coroots, the positive
//! system and the distinguished weights `rho` and `varsigma`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Coords = SmallVec<[i64; 4]>;

/// An element of the character lattice X, or a covector on it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Weight(pub Coords);

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight(SmallVec::from_elem(0, n))
    }

    pub fn from_slice(v: &[i64]) -> Self {
        Weight(SmallVec::from_slice(v))
    }

    pub fn unit(n: usize, k: usize) -> Self {
        let mut w = Self::zero(n);
        w.0[k] = 1;
        w
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn pair(&self, covector: &Weight) -> i64 {
        self.0.iter().zip(covector.0.iter()).map(|(a, b)| a * b).sum()
    }

    pub fn add(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|a| a * k).collect())
    }

    pub fn neg(&self) -> Weight {
        self.scale(-1)
    }

    /// `self + k * other`
    pub fn add_scaled(&self, k: i64, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + k * b).collect())
    }

    pub fn l1(&self) -> i64 {
        self.0.iter().map(|c| c.abs()).sum()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A weight with an exact common denominator, used for `rho` in lattices
/// where it is not integral and for alcove barycenters.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatWeight {
    pub num: Weight,
    pub den: i64,
}

impl RatWeight {
    /// Pairing with a covector, as an exact fraction `(numerator, den)`.
    pub fn pair(&self, covector: &Weight) -> (i64, i64) {
        (self.num.pair(covector), self.den)
    }
}

pub type IMat = Vec<Vec<i64>>;

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum LatticeSpec {
    Named(String),
    Embedding {
        embedding: IMat,
        #[serde(default)]
        coroots: Option<IMat>,
    },
}

/// JSON description of a root datum.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DatumConfig {
    pub schema: u32,
    #[serde(rename = "type", default)]
    pub cartan_type: Option<String>,
    #[serde(default)]
    pub cartan: Option<IMat>,
    pub lattice: LatticeSpec,
    #[serde(default)]
    pub label: Option<String>,
}

impl DatumConfig {
    pub fn simply_connected(cartan_type: &str) -> Self {
        DatumConfig {
            schema: 1,
            cartan_type: Some(cartan_type.to_string()),
            cartan: None,
            lattice: LatticeSpec::Named("simply_connected".into()),
            label: None,
        }
    }
}

/// Parses names like `A2`, `C2`, `G2`, `A1~` (the affine marker is accepted
/// and ignored: the affine group is always built from the finite datum).
pub fn parse_type(name: &str) -> Result<(char, usize)> {
    let name = name.trim().trim_end_matches('~');
    let mut chars = name.chars();
    let letter = chars
        .next()
        .ok_or_else(|| Error::Datum("empty type name".into()))?
        .to_ascii_uppercase();
    let rank: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::Datum(format!("cannot parse rank in type {name:?}")))?;
    let ok = match letter {
        'A' => rank >= 1,
        'B' => rank >= 2,
        'C' => rank >= 2,
        'D' => rank >= 4,
        'E' => (6..=8).contains(&rank),
        'F' => rank == 4,
        'G' => rank == 2,
        _ => false,
    };
    if !ok {
        return Err(Error::Datum(format!("unknown Cartan type {name:?}")));
    }
    Ok((letter, rank))
}

/// Cartan matrix with `cartan[i][j] = <alpha_j, alpha_i^vee>`, Bourbaki numbering.
pub fn cartan_matrix(letter: char, rank: usize) -> IMat {
    let n = rank;
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        a[i][j] = -1;
        a[j][i] = -1;
    };
    match letter {
        'A' | 'B' | 'C' => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        'D' => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        'E' => {
            link(0, 2);
            link(1, 3);
            link(2, 3);
            for i in 3..n - 1 {
                link(i, i + 1);
            }
        }
        'F' => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        'G' => link(0, 1),
        _ => unreachable!(),
    }
    match letter {
        // alpha_n short
        'B' => a[n - 1][n - 2] = -2,
        // alpha_n long
        'C' => a[n - 2][n - 1] = -2,
        'F' => a[2][1] = -2,
        'G' => a[0][1] = -3,
        _ => {}
    }
    a
}

#[derive(Clone, Debug)]
pub struct RootDatum {
    pub label: String,
    pub rank: usize,
    pub lattice_rank: usize,
    pub cartan: IMat,
    pub simple_roots: Vec<Weight>,
    pub simple_coroots: Vec<Weight>,
    pub positive_roots: Vec<Weight>,
    pub positive_coroots: Vec<Weight>,
    /// Coordinates of each positive root in the basis of simple roots.
    pub root_support: Vec<Vec<i64>>,
    /// Coordinates of each positive coroot in the basis of simple coroots.
    pub coroot_support: Vec<Vec<i64>>,
    /// Irreducible components, as sorted lists of simple indices.
    pub components: Vec<Vec<usize>>,
    /// Per component, the index of the positive root whose coroot is highest.
    pub highest_short: Vec<usize>,
    pub coxeter_number: i64,
    varsigma: Weight,
    rho2: Weight,
    /// `dual_basis[k]` pairs to `delta_{jk}` with `simple_coroots[j]`.
    dual_basis: Vec<Weight>,
    root_index: HashMap<Weight, (usize, bool)>,
    hash: String,
}

impl RootDatum {
    pub fn from_type(name: &str) -> Result<Self> {
        Self::build(&DatumConfig::simply_connected(name))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: DatumConfig =
            serde_json::from_str(text).map_err(|e| Error::Datum(format!("schema: {e}")))?;
        Self::build(&cfg)
    }

    pub fn build(cfg: &DatumConfig) -> Result<Self> {
        if cfg.schema != 1 {
            return Err(Error::Datum(format!("unsupported schema {}", cfg.schema)));
        }
        let (cartan, mut label) = match (&cfg.cartan_type, &cfg.cartan) {
            (Some(t), None) => {
                let (letter, rank) = parse_type(t)?;
                (cartan_matrix(letter, rank), format!("{letter}{rank}"))
            }
            (None, Some(c)) => (c.clone(), "custom".to_string()),
            (Some(t), Some(c)) => {
                let (letter, rank) = parse_type(t)?;
                if &cartan_matrix(letter, rank) != c {
                    return Err(Error::Datum(format!(
                        "explicit Cartan matrix does not match type {t}"
                    )));
                }
                (c.clone(), format!("{letter}{rank}"))
            }
            (None, None) => return Err(Error::Datum("need a type or a Cartan matrix".into())),
        };
        if let Some(l) = &cfg.label {
            label = l.clone();
        }
        let r = cartan.len();
        if r == 0 || cartan.iter().any(|row| row.len() != r) {
            return Err(Error::Datum("Cartan matrix must be square and nonempty".into()));
        }
        for i in 0..r {
            if cartan[i][i] != 2 {
                return Err(Error::Datum(format!("diagonal entry ({i},{i}) is not 2")));
            }
            for j in 0..r {
                if i != j && (cartan[i][j] > 0 || (cartan[i][j] == 0) != (cartan[j][i] == 0)) {
                    return Err(Error::Datum(format!("bad off-diagonal entry ({i},{j})")));
                }
            }
        }
        let (roots, coroots) = match &cfg.lattice {
            LatticeSpec::Named(s) if s == "simply_connected" => {
                let roots = (0..r)
                    .map(|i| Weight((0..r).map(|j| cartan[j][i]).collect()))
                    .collect();
                let coroots = (0..r).map(|j| Weight::unit(r, j)).collect();
                (roots, coroots)
            }
            LatticeSpec::Named(s) => {
                return Err(Error::Datum(format!("unknown lattice {s:?}")));
            }
            LatticeSpec::Embedding { embedding, coroots } => {
                if embedding.len() != r {
                    return Err(Error::Datum("embedding needs one row per simple root".into()));
                }
                let n = embedding[0].len();
                if embedding.iter().any(|row| row.len() != n) || n < r {
                    return Err(Error::Datum("embedding rows have inconsistent length".into()));
                }
                let roots: Vec<Weight> = embedding.iter().map(|v| Weight::from_slice(v)).collect();
                let coroots = match coroots {
                    Some(c) => {
                        if c.len() != r || c.iter().any(|row| row.len() != n) {
                            return Err(Error::Datum("coroot matrix has the wrong shape".into()));
                        }
                        c.iter().map(|v| Weight::from_slice(v)).collect()
                    }
                    None if n == r => coroots_from_square_embedding(&cartan, &roots)?,
                    None => {
                        return Err(Error::Datum(
                            "lattice of larger rank needs explicit coroots".into(),
                        ))
                    }
                };
                (roots, coroots)
            }
        };
        Self::from_parts(label, cartan, roots, coroots)
    }

    fn from_parts(
        label: String,
        cartan: IMat,
        simple_roots: Vec<Weight>,
        simple_coroots: Vec<Weight>,
    ) -> Result<Self> {
        let r = cartan.len();
        let n = simple_roots[0].len();
        for i in 0..r {
            for j in 0..r {
                if simple_roots[i].pair(&simple_coroots[j]) != cartan[j][i] {
                    return Err(Error::Datum(format!(
                        "pairing of root {i} with coroot {j} is {}, Cartan entry is {}",
                        simple_roots[i].pair(&simple_coroots[j]),
                        cartan[j][i]
                    )));
                }
            }
        }

        let (root_support, coroot_support) = close_positive_system(&cartan)?;
        let combine = |basis: &[Weight], c: &[i64]| {
            let mut acc = Weight::zero(n);
            for (b, &k) in basis.iter().zip(c) {
                acc = acc.add_scaled(k, b);
            }
            acc
        };
        let positive_roots: Vec<Weight> =
            root_support.iter().map(|c| combine(&simple_roots, c)).collect();
        let positive_coroots: Vec<Weight> =
            coroot_support.iter().map(|c| combine(&simple_coroots, c)).collect();

        let components = components(&cartan);
        let mut highest_short = Vec::new();
        let mut coxeter_number = 1;
        for comp in &components {
            let in_comp: Vec<usize> = (0..root_support.len())
                .filter(|&k| comp.iter().any(|&i| root_support[k][i] != 0))
                .collect();
            let best = *in_comp
                .iter()
                .max_by_key(|&&k| (coroot_support[k].iter().sum::<i64>(), std::cmp::Reverse(k)))
                .unwrap();
            highest_short.push(best);
            coxeter_number = coxeter_number.max(2 * in_comp.len() as i64 / comp.len() as i64);
        }

        let mut rho2 = Weight::zero(n);
        for a in &positive_roots {
            rho2 = rho2.add(a);
        }

        let hnf = ColumnHermite::new(&simple_coroots, n).ok_or_else(|| {
            Error::Datum("simple coroots are linearly dependent".into())
        })?;
        let dual_basis = (0..r)
            .map(|k| {
                let mut e = vec![0; r];
                e[k] = 1;
                hnf.solve(&e)
            })
            .collect::<Option<Vec<_>>>()
            .ok_or(Error::NoVarsigma)?;
        let varsigma = choose_varsigma(&simple_coroots, &dual_basis, n);

        let mut root_index = HashMap::new();
        for (k, a) in positive_roots.iter().enumerate() {
            root_index.insert(a.clone(), (k, true));
            root_index.insert(a.neg(), (k, false));
        }

        let mut hasher = Sha256::new();
        hasher.update(format!("{label}|{cartan:?}|").as_bytes());
        for w in simple_roots.iter().chain(simple_coroots.iter()) {
            hasher.update(format!("{w}").as_bytes());
        }
        let hash = hex::encode(hasher.finalize());

        Ok(RootDatum {
            label,
            rank: r,
            lattice_rank: n,
            cartan,
            simple_roots,
            simple_coroots,
            positive_roots,
            positive_coroots,
            root_support,
            coroot_support,
            components,
            highest_short,
            coxeter_number,
            varsigma,
            rho2,
            dual_basis,
            root_index,
            hash,
        })
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    /// Label plus a 16-hex-digit prefix of the hash, e.g. `C2@1f0c...`.
    pub fn tag(&self) -> String {
        format!("{}@{}", self.label, &self.hash[..16])
    }

    pub fn is_semisimple(&self) -> bool {
        self.rank == self.lattice_rank
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn height(&self, k: usize) -> i64 {
        self.root_support[k].iter().sum()
    }

    pub fn coroot_height(&self, k: usize) -> i64 {
        self.coroot_support[k].iter().sum()
    }

    pub fn varsigma(&self) -> &Weight {
        &self.varsigma
    }

    pub fn rho(&self) -> RatWeight {
        RatWeight {
            num: self.rho2.clone(),
            den: 2,
        }
    }

    /// `2 rho`, the sum of the positive roots.
    pub fn rho2(&self) -> &Weight {
        &self.rho2
    }

    /// Index and sign of a root given in lattice coordinates.
    pub fn root_lookup(&self, v: &Weight) -> Option<(usize, bool)> {
        self.root_index.get(v).copied()
    }

    /// The pairings of `lambda` with the simple coroots.
    pub fn simple_pairings(&self, lambda: &Weight) -> Vec<i64> {
        self.simple_coroots.iter().map(|c| lambda.pair(c)).collect()
    }

    /// The canonical weight with prescribed simple-coroot pairings: the
    /// combination of the fixed dual basis, so the part along the common
    /// kernel of the coroots is zero.
    pub fn weight_with_pairings(&self, c: &[i64]) -> Weight {
        let mut acc = Weight::zero(self.lattice_rank);
        for (f, &k) in self.dual_basis.iter().zip(c) {
            acc = acc.add_scaled(k, f);
        }
        acc
    }

    /// Simple reflection `s_i` applied to a weight.
    pub fn reflect(&self, i: usize, lambda: &Weight) -> Weight {
        lambda.add_scaled(-lambda.pair(&self.simple_coroots[i]), &self.simple_roots[i])
    }

    /// `(lo, hi, improved)`: the number of dominant alcoves to be considered
    /// by the original algorithm, its upper variant, and the improved one.
    pub fn complexity_bounds(&self) -> (i64, i64, i64) {
        let lo: i64 = (0..self.num_positive_roots()).map(|k| self.height(k)).sum();
        let lwf = self.num_positive_roots() as i64;
        (lo, 2 * lo - lwf, lo - lwf)
    }

    /// Whether `lambda` lies in the root lattice.
    pub fn in_root_lattice(&self, lambda: &Weight) -> bool {
        // lambda = sum c_i alpha_i forces c_i from the pairings when the
        // roots are independent; solve via the Cartan matrix.
        let pairings = self.simple_pairings(lambda);
        match solve_rational(&self.cartan, &pairings) {
            Some(c) => {
                let mut acc = Weight::zero(self.lattice_rank);
                for (a, k) in self.simple_roots.iter().zip(&c) {
                    acc = acc.add_scaled(*k, a);
                }
                &acc == lambda
            }
            None => false,
        }
    }
}

/// Solves the square system `m x = b` and returns `x` if it is integral.
fn solve_rational(m: &IMat, b: &[i64]) -> Option<Vec<i64>> {
    use num_rational_lite::Q;
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| row.iter().map(|&x| Q::int(x)).chain([Q::int(bi)]).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let p = a[col][col];
        for k in col..=n {
            a[col][k] = a[col][k].div(p);
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for k in col..=n {
                    let t = a[col][k].mul(f);
                    a[r][k] = a[r][k].sub(t);
                }
            }
        }
    }
    a.iter().map(|row| row[n].as_int()).collect()
}

/// Minimal exact rationals over i128 for tiny dense solves.
mod num_rational_lite {
    use num_integer::Integer;

    #[derive(Clone, Copy, Debug)]
    pub struct Q(i128, i128);

    impl Q {
        pub fn int(x: i64) -> Q {
            Q(x as i128, 1)
        }
        fn norm(n: i128, d: i128) -> Q {
            let g = n.gcd(&d).max(1);
            let s = if d < 0 { -1 } else { 1 };
            Q(s * n / g, s * d / g)
        }
        pub fn is_zero(&self) -> bool {
            self.0 == 0
        }
        pub fn mul(self, o: Q) -> Q {
            Q::norm(self.0 * o.0, self.1 * o.1)
        }
        pub fn div(self, o: Q) -> Q {
            Q::norm(self.0 * o.1, self.1 * o.0)
        }
        pub fn sub(self, o: Q) -> Q {
            Q::norm(self.0 * o.1 - o.0 * self.1, self.1 * o.1)
        }
        pub fn as_int(&self) -> Option<i64> {
            (self.1 == 1).then_some(self.0 as i64)
        }
    }
}

fn coroots_from_square_embedding(cartan: &IMat, roots: &[Weight]) -> Result<Vec<Weight>> {
    // <alpha_i, c_j> = cartan[j][i] for all i: solve E c_j = column.
    let e: IMat = roots.iter().map(|w| w.0.to_vec()).collect();
    (0..cartan.len())
        .map(|j| {
            let rhs: Vec<i64> = (0..cartan.len()).map(|i| cartan[j][i]).collect();
            solve_rational(&e, &rhs)
                .map(|c| Weight::from_slice(&c))
                .ok_or_else(|| Error::Datum(format!("coroot {j} is not integral on the lattice")))
        })
        .collect()
}

/// Positive roots and coroots in simple coordinates, closed under simple
/// reflections, ordered by height then lexicographically.
fn close_positive_system(cartan: &IMat) -> Result<(Vec<Vec<i64>>, Vec<Vec<i64>>)> {
    let r = cartan.len();
    let mut seen: HashMap<Vec<i64>, Vec<i64>> = HashMap::new();
    let mut queue = VecDeque::new();
    for i in 0..r {
        let mut e = vec![0; r];
        e[i] = 1;
        seen.insert(e.clone(), e.clone());
        queue.push_back(e);
    }
    while let Some(c) = queue.pop_front() {
        let d = seen[&c].clone();
        for i in 0..r {
            let k: i64 = (0..r).map(|j| c[j] * cartan[i][j]).sum();
            let kv: i64 = (0..r).map(|j| d[j] * cartan[j][i]).sum();
            let mut c2 = c.clone();
            c2[i] -= k;
            let mut d2 = d.clone();
            d2[i] -= kv;
            if c2.iter().all(|&x| x >= 0) && c2.iter().any(|&x| x > 0) && !seen.contains_key(&c2) {
                if seen.len() > 10_000 {
                    return Err(Error::Datum("Cartan matrix is not of finite type".into()));
                }
                seen.insert(c2.clone(), d2);
                queue.push_back(c2);
            }
        }
    }
    let mut all: Vec<(Vec<i64>, Vec<i64>)> = seen.into_iter().collect();
    all.sort_by(|a, b| {
        let ha: i64 = a.0.iter().sum();
        let hb: i64 = b.0.iter().sum();
        ha.cmp(&hb).then_with(|| b.0.cmp(&a.0))
    });
    Ok(all.into_iter().unzip())
}

fn components(cartan: &IMat) -> Vec<Vec<usize>> {
    let r = cartan.len();
    let mut comp = vec![usize::MAX; r];
    let mut out = Vec::new();
    for start in 0..r {
        if comp[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut members = vec![];
        let mut stack = vec![start];
        comp[start] = id;
        while let Some(i) = stack.pop() {
            members.push(i);
            for j in 0..r {
                if cartan[i][j] != 0 && comp[j] == usize::MAX {
                    comp[j] = id;
                    stack.push(j);
                }
            }
        }
        members.sort();
        out.push(members);
    }
    out
}

/// Column-style Hermite reduction `C U = [H | 0]` of the coroot matrix.
struct ColumnHermite {
    h: IMat,
    u: IMat,
    r: usize,
    n: usize,
}

impl ColumnHermite {
    fn new(coroots: &[Weight], n: usize) -> Option<Self> {
        let r = coroots.len();
        let mut a: IMat = coroots.iter().map(|c| c.0.to_vec()).collect();
        let mut u: IMat = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i64).collect())
            .collect();
        let col_op = |m: &mut IMat, dst: usize, q: i64, src: usize| {
            for row in m.iter_mut() {
                row[dst] -= q * row[src];
            }
        };
        let swap = |m: &mut IMat, x: usize, y: usize| {
            for row in m.iter_mut() {
                row.swap(x, y);
            }
        };
        for i in 0..r {
            for j in i + 1..n {
                while a[i][j] != 0 {
                    let q = a[i][i] / a[i][j];
                    col_op(&mut a, i, q, j);
                    col_op(&mut u, i, q, j);
                    swap(&mut a, i, j);
                    swap(&mut u, i, j);
                }
            }
            if a[i][i] == 0 {
                return None;
            }
            if a[i][i] < 0 {
                for m in [&mut a, &mut u] {
                    for row in m.iter_mut() {
                        row[i] = -row[i];
                    }
                }
            }
        }
        Some(ColumnHermite { h: a, u, r, n })
    }

    /// Integral `x` with `C x = b` and zero component along the kernel
    /// directions of the reduction, if one exists.
    fn solve(&self, b: &[i64]) -> Option<Weight> {
        let mut y = vec![0i64; self.r];
        for i in 0..self.r {
            let rest: i64 = (0..i).map(|j| self.h[i][j] * y[j]).sum();
            let num = b[i] - rest;
            if num % self.h[i][i] != 0 {
                return None;
            }
            y[i] = num / self.h[i][i];
        }
        Some(Weight(
            (0..self.n)
                .map(|row| (0..self.r).map(|k| self.u[row][k] * y[k]).sum())
                .collect(),
        ))
    }
}

/// Among all weights pairing to 1 with every simple coroot, the one of least
/// l1-norm, ties broken lexicographically. Unique when X is semisimple.
fn choose_varsigma(coroots: &[Weight], dual_basis: &[Weight], n: usize) -> Weight {
    let mut canonical = Weight::zero(n);
    for f in dual_basis {
        canonical = canonical.add(f);
    }
    if coroots.len() == n {
        return canonical;
    }
    let ok = |v: &Weight| coroots.iter().all(|c| v.pair(c) == 1);
    for radius in 0..=canonical.l1() {
        let mut found: Vec<Weight> = Vec::new();
        let mut buf = vec![0i64; n];
        enumerate_sphere(&mut buf, 0, radius, &mut |v| {
            let w = Weight::from_slice(v);
            if ok(&w) {
                found.push(w);
            }
        });
        if let Some(best) = found.into_iter().min() {
            return best;
        }
    }
    canonical
}

fn enumerate_sphere(buf: &mut [i64], pos: usize, remaining: i64, f: &mut dyn FnMut(&[i64])) {
    if pos + 1 == buf.len() {
        for v in [-remaining, remaining] {
            buf[pos] = v;
            f(buf);
            if remaining == 0 {
                break;
            }
        }
        return;
    }
    for v in -remaining..=remaining {
        buf[pos] = v;
        enumerate_sphere(buf, pos + 1, remaining - v.abs(), f);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn a1_basics() {
        let d = RootDatum::from_type("A1").unwrap();
        assert_eq!(d.rank, 1);
        assert_eq!(d.positive_roots, vec![Weight::from_slice(&[2])]);
        assert_eq!(d.varsigma(), &Weight::from_slice(&[1]));
        assert_eq!(d.rho().num, Weight::from_slice(&[2]));
        assert_eq!(d.coxeter_number, 2);
        assert_eq!(d.complexity_bounds(), (1, 1, 0));
    }

    #[test]
    fn c2_heights_and_bounds() {
        let d = RootDatum::from_type("C2").unwrap();
        let mut hs: Vec<i64> = (0..4).map(|k| d.height(k)).collect();
        hs.sort();
        assert_eq!(hs, vec![1, 1, 2, 3]);
        assert_eq!(d.complexity_bounds(), (7, 10, 3));
        assert_eq!(d.coxeter_number, 4);
        let theta = d.highest_short[0];
        assert_eq!(d.rho().pair(&d.positive_coroots[theta]), (6, 2));
    }

    #[test]
    fn explicit_b2_labelling_matrix() {
        let cfg = DatumConfig {
            schema: 1,
            cartan_type: None,
            cartan: Some(vec![vec![2, -1], vec![-2, 2]]),
            lattice: LatticeSpec::Named("simply_connected".into()),
            label: None,
        };
        let d = RootDatum::build(&cfg).unwrap();
        let mut hs: Vec<i64> = (0..4).map(|k| d.height(k)).collect();
        hs.sort();
        assert_eq!(hs, vec![1, 1, 2, 3]);
    }

    #[test]
    fn a2_bounds() {
        let d = RootDatum::from_type("A2").unwrap();
        assert_eq!(d.complexity_bounds(), (4, 5, 1));
        assert_eq!(d.coxeter_number, 3);
    }

    #[test]
    fn rho_pairs_to_coroot_heights() {
        for t in ["A1", "A2", "A3", "B3", "C3", "G2", "D4", "F4"] {
            let d = RootDatum::from_type(t).unwrap();
            for k in 0..d.num_positive_roots() {
                let (num, den) = d.rho().pair(&d.positive_coroots[k]);
                assert_eq!(num, den * d.coroot_height(k), "{t} root {k}");
            }
        }
    }

    #[test]
    fn positive_system_sizes() {
        for (t, n, h) in [("A3", 6, 4), ("B3", 9, 6), ("G2", 6, 6), ("D4", 12, 6), ("E6", 36, 12), ("F4", 24, 12)] {
            let d = RootDatum::from_type(t).unwrap();
            assert_eq!(d.num_positive_roots(), n, "{t}");
            assert_eq!(d.coxeter_number, h, "{t}");
        }
    }

    #[test]
    fn simple_reflection_permutes_other_positive_roots() {
        for t in ["A2", "C2", "G2", "B3"] {
            let d = RootDatum::from_type(t).unwrap();
            for i in 0..d.rank {
                for (k, a) in d.positive_roots.iter().enumerate() {
                    let img = d.reflect(i, a);
                    let (j, pos) = d.root_lookup(&img).unwrap();
                    if a == &d.simple_roots[i] {
                        assert!(!pos);
                    } else {
                        assert!(pos, "{t}: s{i} sends root {k} negative");
                        assert_ne!(d.positive_roots[j], d.simple_roots[i]);
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_mismatch_is_rejected() {
        let cfg = DatumConfig {
            schema: 1,
            cartan_type: None,
            cartan: Some(vec![vec![2, -1], vec![-1, 2]]),
            lattice: LatticeSpec::Embedding {
                embedding: vec![vec![2, -1], vec![-1, 2]],
                coroots: Some(vec![vec![1, 0], vec![1, 1]]),
            },
            label: None,
        };
        assert!(matches!(RootDatum::build(&cfg), Err(Error::Datum(_))));
    }

    #[test]
    fn adjoint_a1_has_no_varsigma() {
        let cfg = DatumConfig {
            schema: 1,
            cartan_type: Some("A1".into()),
            cartan: None,
            lattice: LatticeSpec::Embedding {
                embedding: vec![vec![1]],
                coroots: None,
            },
            label: None,
        };
        assert_eq!(RootDatum::build(&cfg).unwrap_err(), Error::NoVarsigma);
    }

    #[test]
    fn gl2_varsigma_is_least_then_lexicographic() {
        let cfg = DatumConfig {
            schema: 1,
            cartan_type: Some("A1".into()),
            cartan: None,
            lattice: LatticeSpec::Embedding {
                embedding: vec![vec![1, -1]],
                coroots: Some(vec![vec![1, -1]]),
            },
            label: Some("GL2".into()),
        };
        let d = RootDatum::build(&cfg).unwrap();
        // Solutions are (a, a-1); the two of norm 1 are (0,-1) and (1,0).
        assert_eq!(d.varsigma(), &Weight::from_slice(&[0, -1]));
        assert!(!d.is_semisimple());
        assert_eq!(d.rho().pair(&d.simple_coroots[0]), (2, 2));
    }

    #[test]
    fn json_config_roundtrip() {
        let text = r#"{"schema":1,"type":"C2","cartan":null,"lattice":"simply_connected"}"#;
        let d = RootDatum::from_json(text).unwrap();
        assert_eq!(d.label, "C2");
        assert!(RootDatum::from_json(r#"{"schema":2,"type":"A1","lattice":"simply_connected"}"#).is_err());
        assert!(RootDatum::from_json(r#"{"schema":1,"type":"Q7","lattice":"simply_connected"}"#).is_err());
    }

    #[test]
    fn weights_with_pairings_and_root_lattice() {
        let d = RootDatum::from_type("A2").unwrap();
        let w = d.weight_with_pairings(&[3, -1]);
        assert_eq!(d.simple_pairings(&w), vec![3, -1]);
        assert!(d.in_root_lattice(&d.simple_roots[0]));
        assert!(!d.in_root_lattice(&Weight::from_slice(&[1, 0])));
        assert!(d.in_root_lattice(&Weight::from_slice(&[1, 1])));
    }
}
