//! Dense square matrices and packed boolean relations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major dense `n x n` matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Square<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Clone> Square<T> {
    pub fn filled(n: usize, value: T) -> Self {
        Square { n, data: vec![value; n * n] }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Square { n, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != n {
                return Err(Error::Malformed(format!(
                    "row {i} has length {} in a {n}x{n} matrix",
                    r.len()
                )));
            }
            data.extend(r);
        }
        Ok(Square { n, data })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Square<U> {
        Square { n: self.n, data: self.data.iter().map(f).collect() }
    }

    /// Principal submatrix on `idx` (in the given order).
    pub fn select(&self, idx: &[usize]) -> Self {
        Square::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]).clone())
    }
}

impl<T> Square<T> {
    pub fn from_vec(n: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Malformed(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        Ok(Square { n, data })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }
}

impl Square<f64> {
    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Packed boolean `n x n` relation; row `i` holds the set `{j : (i, j) in R}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    w: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let w = words_for(n);
        BitMatrix { n, w, data: vec![0; n * w] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::new(n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = BitMatrix::new(n);
        for i in 0..n {
            for j in 0..n {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<bool>]) -> Result<Self> {
        let n = rows.len();
        let mut m = BitMatrix::new(n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::Malformed(format!("relation row {i} has length {}", r.len())));
            }
            for (j, &b) in r.iter().enumerate() {
                if b {
                    m.set(i, j, true);
                }
            }
        }
        Ok(m)
    }

    pub fn to_rows(&self) -> Vec<Vec<bool>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> usize {
        self.w
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.w + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let word = &mut self.data[i * self.w + j / 64];
        if v {
            *word |= 1 << (j % 64);
        } else {
            *word &= !(1 << (j % 64));
        }
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.w..(i + 1) * self.w]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.w..(i + 1) * self.w]
    }

    pub fn row_set(&self, i: usize) -> BitSet {
        BitSet { n: self.n, words: self.row(i).to_vec() }
    }

    pub fn count(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut t = BitMatrix::new(self.n);
        for i in 0..self.n {
            for j in ones(self.row(i)) {
                t.set(j, i, true);
            }
        }
        t
    }

    /// Transitive closure (Warshall over packed rows).
    pub fn transitive_closure(&self) -> Self {
        let mut m = self.clone();
        let w = self.w;
        for k in 0..self.n {
            let rk: Vec<u64> = m.row(k).to_vec();
            for i in 0..self.n {
                if m.get(i, k) {
                    let ri = &mut m.data[i * w..(i + 1) * w];
                    for (a, b) in ri.iter_mut().zip(&rk) {
                        *a |= *b;
                    }
                }
            }
        }
        m
    }

    /// Reflexive-transitive closure.
    pub fn reflexive_transitive_closure(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.set(i, i, true);
        }
        m.transitive_closure()
    }

    pub fn is_subset_of(&self, other: &BitMatrix) -> bool {
        self.n == other.n && self.data.iter().zip(&other.data).all(|(a, b)| a & !b == 0)
    }

    /// Drop the diagonal.
    pub fn strict(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m.set(i, i, false);
        }
        m
    }

    /// Symmetrized relation `R ∪ R^T`.
    pub fn symmetrize(&self) -> Self {
        let t = self.transpose();
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(&t.data) {
            *a |= *b;
        }
        m
    }

    pub fn select(&self, idx: &[usize]) -> Self {
        BitMatrix::from_fn(idx.len(), |a, b| self.get(idx[a], idx[b]))
    }
}

/// Packed subset of `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    n: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet { n, words: vec![0; words_for(n)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = BitSet::new(n);
        for i in 0..n {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(n: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut s = BitSet::new(n);
        for i in idx {
            s.insert(i);
        }
        s
    }

    pub fn from_words(n: usize, words: &[u64]) -> Self {
        BitSet { n, words: words.to_vec() }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        ones(&self.words)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a |= *b;
        }
    }

    pub fn intersect_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= *b;
        }
    }

    pub fn difference_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= !*b;
        }
    }

    pub fn is_subset_of(&self, other: &[u64]) -> bool {
        self.words.iter().zip(other).all(|(a, b)| a & !b == 0)
    }
}

/// Iterate the set bits of a packed word slice.
/// `m[i][j] = max_k |p[i][k] - p[j][k]|` over the columns `cols` (all
/// columns when `None`).
pub fn sup_profile_metric(prof: &Square<f64>, cols: Option<&[usize]>) -> Square<f64> {
    use rayon::prelude::*;
    let n = prof.n();
    let picked: Option<Vec<f64>> =
        cols.map(|c| (0..n).flat_map(|i| c.iter().map(move |&k| *prof.get(i, k))).collect());
    let width = cols.map_or(n, |c| c.len());
    let data: &[f64] = picked.as_deref().unwrap_or(prof.as_slice());
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ri = &data[i * width..(i + 1) * width];
            (i + 1..n)
                .map(|j| {
                    let rj = &data[j * width..(j + 1) * width];
                    ri.iter().zip(rj).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
                })
                .collect()
        })
        .collect();
    let mut out = Square::filled(n, 0.0);
    for (i, row) in upper.into_iter().enumerate() {
        for (k, v) in row.into_iter().enumerate() {
            out.set(i, i + 1 + k, v);
            out.set(i + 1 + k, i, v);
        }
    }
    out
}

pub fn ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(k, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + b)
            }
        })
    })
}

#[inline]
pub fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[inline]
pub fn and3_count(a: &[u64], b: &[u64], c: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .zip(c)
        .map(|((x, y), z)| (x & y & z).count_ones() as usize)
        .sum()
}

/// Weighted measure of `a ∩ b` under point weights `mu`.
pub fn and_weight(a: &[u64], b: &[u64], mu: &[f64]) -> f64 {
    let mut s = 0.0;
    for (k, (x, y)) in a.iter().zip(b).enumerate() {
        let mut w = x & y;
        while w != 0 {
            let bit = w.trailing_zeros() as usize;
            s += mu[k * 64 + bit];
            w &= w - 1;
        }
    }
    s
}

pub fn weight(a: &[u64], mu: &[f64]) -> f64 {
    let mut s = 0.0;
    for (k, &x) in a.iter().enumerate() {
        let mut w = x;
        while w != 0 {
            let bit = w.trailing_zeros() as usize;
            s += mu[k * 64 + bit];
            w &= w - 1;
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_of_path() {
        let mut r = BitMatrix::new(4);
        r.set(0, 1, true);
        r.set(1, 2, true);
        r.set(2, 3, true);
        let c = r.transitive_closure();
        assert!(c.get(0, 3) && c.get(1, 3) && !c.get(3, 0));
        assert_eq!(c.count(), 6);
    }

    #[test]
    fn ones_iterates_across_words() {
        let s = BitSet::from_indices(200, [0, 63, 64, 130, 199]);
        assert_eq!(s.to_vec(), vec![0, 63, 64, 130, 199]);
        assert_eq!(s.len(), 5);
    }

    #[test]
    fn weighted_intersection() {
        let a = BitSet::from_indices(70, [1, 2, 65]);
        let b = BitSet::from_indices(70, [2, 65, 66]);
        let mu: Vec<f64> = (0..70).map(|i| i as f64).collect();
        assert_eq!(and_weight(a.words(), b.words(), &mu), 67.0);
        assert_eq!(and_count(a.words(), b.words()), 2);
    }
}
