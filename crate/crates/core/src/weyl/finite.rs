//! The finite Weyl group, enumerated once as explicit matrices on X.

use std::collections::HashMap;

use crate::rootdata::{RootDatum, Weight};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct FinId(pub u32);

impl FinId {
    pub const E: FinId = FinId(0);
}

/// Above this order the full multiplication table is not stored.
const TABLE_LIMIT: usize = 2048;

#[derive(Debug)]
pub struct FinGroup {
    n: usize,
    rank: usize,
    mats: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, u32>,
    words: Vec<Vec<u8>>,
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
    inverse: Vec<u32>,
    table: Option<Vec<u32>>,
    /// `negates[w][j]` iff `w(alpha_j)` is a negative root.
    negates: Vec<Vec<bool>>,
    longest: u32,
}

impl FinGroup {
    /// Breadth-first enumeration; level `k` is processed in lexicographic
    /// order of words, so the first word found for an element is the
    /// lexicographically least reduced word.
    pub fn new(d: &RootDatum) -> Self {
        let n = d.lattice_rank;
        let r = d.rank;
        let ident: Vec<i64> = (0..n * n).map(|k| (k / n == k % n) as i64).collect();
        let simple: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let a = &d.simple_roots[i];
                let c = &d.simple_coroots[i];
                (0..n * n)
                    .map(|k| {
                        let (row, col) = (k / n, k % n);
                        (row == col) as i64 - a.0[row] * c.0[col]
                    })
                    .collect()
            })
            .collect();
        let mut mats = vec![ident.clone()];
        let mut index = HashMap::new();
        index.insert(ident, 0u32);
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut right: Vec<Vec<u32>> = vec![];
        let mut frontier = vec![0u32];
        while !frontier.is_empty() {
            let mut next = vec![];
            for &x in &frontier {
                for (i, s) in simple.iter().enumerate() {
                    let m = matmul(&mats[x as usize], s, n);
                    if !index.contains_key(&m) {
                        let id = mats.len() as u32;
                        index.insert(m.clone(), id);
                        mats.push(m);
                        let mut w = words[x as usize].clone();
                        w.push(i as u8);
                        words.push(w);
                        next.push(id);
                    }
                }
            }
            frontier = next;
        }
        let size = mats.len();
        for x in 0..size {
            right.push(
                simple
                    .iter()
                    .map(|s| index[&matmul(&mats[x], s, n)])
                    .collect(),
            );
        }
        let left: Vec<Vec<u32>> = (0..size)
            .map(|x| simple.iter().map(|s| index[&matmul(s, &mats[x], n)]).collect())
            .collect();
        let mut inverse = vec![0u32; size];
        for x in 0..size {
            let mut y = 0u32;
            for &i in words[x].iter().rev() {
                y = right[y as usize][i as usize];
            }
            inverse[x] = y;
        }
        let table = (size <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(size * size);
            for a in 0..size {
                for b in 0..size {
                    t.push(index[&matmul(&mats[a], &mats[b], n)]);
                }
            }
            t
        });
        let negates = (0..size)
            .map(|x| {
                d.positive_roots
                    .iter()
                    .map(|a| {
                        let img = apply_mat(&mats[x], a, n);
                        !d.root_lookup(&img).expect("Weyl group permutes roots").1
                    })
                    .collect()
            })
            .collect();
        let longest = (size - 1) as u32;
        FinGroup {
            n,
            rank: r,
            mats,
            index,
            words,
            right,
            left,
            inverse,
            table,
            negates,
            longest,
        }
    }

    pub fn order(&self) -> usize {
        self.mats.len()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All elements in order of (length, least reduced word).
    pub fn elements(&self) -> impl Iterator<Item = FinId> {
        (0..self.mats.len() as u32).map(FinId)
    }

    pub fn word(&self, w: FinId) -> &[u8] {
        &self.words[w.0 as usize]
    }

    pub fn length(&self, w: FinId) -> usize {
        self.words[w.0 as usize].len()
    }

    pub fn longest(&self) -> FinId {
        FinId(self.longest)
    }

    pub fn matrix(&self, w: FinId) -> &[i64] {
        &self.mats[w.0 as usize]
    }

    pub fn simple(&self, i: usize) -> FinId {
        FinId(self.right[0][i])
    }

    pub fn mul(&self, a: FinId, b: FinId) -> FinId {
        match &self.table {
            Some(t) => FinId(t[a.0 as usize * self.mats.len() + b.0 as usize]),
            None => {
                let m = matmul(&self.mats[a.0 as usize], &self.mats[b.0 as usize], self.n);
                FinId(self.index[&m])
            }
        }
    }

    pub fn mul_simple_right(&self, a: FinId, i: usize) -> FinId {
        FinId(self.right[a.0 as usize][i])
    }

    pub fn mul_simple_left(&self, i: usize, a: FinId) -> FinId {
        FinId(self.left[a.0 as usize][i])
    }

    pub fn inv(&self, a: FinId) -> FinId {
        FinId(self.inverse[a.0 as usize])
    }

    pub fn apply(&self, w: FinId, v: &Weight) -> Weight {
        apply_mat(&self.mats[w.0 as usize], v, self.n)
    }

    pub fn negates(&self, w: FinId) -> &[bool] {
        &self.negates[w.0 as usize]
    }

    pub fn from_matrix(&self, m: &[i64]) -> Option<FinId> {
        self.index.get(m).map(|&i| FinId(i))
    }

    pub fn from_word(&self, word: &[usize]) -> FinId {
        word.iter().fold(FinId::E, |acc, &i| self.mul_simple_right(acc, i))
    }

    /// Longest element of the parabolic subgroup generated by `subset`.
    pub fn longest_in(&self, subset: &[usize]) -> FinId {
        let mut w = FinId::E;
        loop {
            let up = subset
                .iter()
                .map(|&i| self.mul_simple_right(w, i))
                .find(|&ws| self.length(ws) > self.length(w));
            match up {
                Some(ws) => w = ws,
                None => return w,
            }
        }
    }
}

fn matmul(a: &[i64], b: &[i64], n: usize) -> Vec<i64> {
    let mut out = vec![0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik != 0 {
                for j in 0..n {
                    out[i * n + j] += aik * b[k * n + j];
                }
            }
        }
    }
    out
}

fn apply_mat(m: &[i64], v: &Weight, n: usize) -> Weight {
    Weight((0..n).map(|i| (0..n).map(|j| m[i * n + j] * v.0[j]).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_longest() {
        for (t, order, lwf) in [("A1", 2, 1), ("A2", 6, 3), ("C2", 8, 4), ("G2", 12, 6), ("B3", 48, 9)] {
            let d = RootDatum::from_type(t).unwrap();
            let g = FinGroup::new(&d);
            assert_eq!(g.order(), order, "{t}");
            let w0 = g.longest();
            assert_eq!(g.length(w0), lwf);
            assert_eq!(g.length(w0), d.num_positive_roots());
            assert_eq!(g.mul(w0, w0), FinId::E);
            assert_eq!(g.longest_in(&(0..d.rank).collect::<Vec<_>>()), w0);
        }
    }

    #[test]
    fn length_counts_negated_roots() {
        let d = RootDatum::from_type("B3").unwrap();
        let g = FinGroup::new(&d);
        for w in g.elements() {
            let inv = g.negates(w).iter().filter(|&&b| b).count();
            assert_eq!(inv, g.length(w));
        }
    }

    #[test]
    fn words_are_lexicographically_least() {
        let d = RootDatum::from_type("A2").unwrap();
        let g = FinGroup::new(&d);
        let words: Vec<Vec<u8>> = g.elements().map(|w| g.word(w).to_vec()).collect();
        assert_eq!(
            words,
            vec![vec![], vec![0], vec![1], vec![0, 1], vec![1, 0], vec![0, 1, 0]]
        );
    }

    #[test]
    fn reflections_count_positive_roots() {
        // Reflections are the conjugates of simple reflections.
        for t in ["A3", "C3", "G2"] {
            let d = RootDatum::from_type(t).unwrap();
            let g = FinGroup::new(&d);
            let mut refl = std::collections::BTreeSet::new();
            for w in g.elements() {
                for i in 0..d.rank {
                    refl.insert(g.mul(g.mul(w, g.simple(i)), g.inv(w)));
                }
            }
            assert_eq!(refl.len(), d.num_positive_roots(), "{t}");
        }
    }
}
