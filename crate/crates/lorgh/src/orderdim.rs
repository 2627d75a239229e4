//! Order-theoretic dimensions: realizers, horismos, metric dimension and
//! catcher sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, BitSet};
use crate::space::{chronological_pairs, derived_causal, FiniteLorentzSpace, FiniteMetricSpace, FinitePOM};

/// Largest poset accepted by the realizer search.
pub const DM_MAX_POINTS: usize = 10;

/// Linear extensions whose intersection is the order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Realizer {
    pub orders: Vec<Vec<usize>>,
}

impl Realizer {
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// Position of every point in each extension.
    pub fn ranks(&self) -> Vec<Vec<usize>> {
        self.orders
            .iter()
            .map(|ord| {
                let mut r = vec![0; ord.len()];
                for (k, &x) in ord.iter().enumerate() {
                    r[x] = k;
                }
                r
            })
            .collect()
    }

    /// Each order extends `leq` and their intersection is `leq`.
    pub fn verify(&self, leq: &BitMatrix) -> bool {
        let n = leq.n();
        let ranks = self.ranks();
        if ranks.iter().zip(&self.orders).any(|(r, o)| {
            let mut seen = vec![false; n];
            o.len() != n || o.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) || r.len() != n
        }) {
            return false;
        }
        (0..n).all(|x| (0..n).all(|y| leq.get(x, y) == ranks.iter().all(|r| r[x] <= r[y])))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DmDimension {
    pub dim: usize,
    pub realizer: Realizer,
}

type Rows = Vec<u16>;

fn add_edge(rows: &mut Rows, x: usize, y: usize) {
    // everything below x now lies below everything above y
    let above = rows[y];
    for r in rows.iter_mut() {
        if *r & (1 << x) != 0 {
            *r |= above;
        }
    }
}

fn search(pairs: &[(usize, usize)], k: usize, classes: &mut Vec<Rows>, idx: usize, used: usize) -> bool {
    let Some(&(x, y)) = pairs.get(idx) else { return true };
    if classes[..used].iter().any(|c| c[x] & (1 << y) != 0) {
        return search(pairs, k, classes, idx + 1, used);
    }
    let limit = (used + 1).min(k);
    for i in 0..limit {
        if classes[i][y] & (1 << x) != 0 {
            continue;
        }
        let saved = classes[i].clone();
        add_edge(&mut classes[i], x, y);
        if search(pairs, k, classes, idx + 1, used.max(i + 1)) {
            return true;
        }
        classes[i] = saved;
    }
    false
}

fn linear_extension(rows: &Rows) -> Vec<usize> {
    let n = rows.len();
    let mut order: Vec<usize> = (0..n).collect();
    // a point precedes another iff fewer points lie below it, ties by index
    let below: Vec<u32> = (0..n).map(|y| rows.iter().filter(|r| **r & (1 << y) != 0).count() as u32).collect();
    order.sort_by_key(|&i| (below[i], i));
    order
}

/// Least number of linear extensions realizing the order.
pub fn dushnik_miller(pom: &FinitePOM, max_k: usize) -> Result<DmDimension> {
    let n = pom.len();
    if n > DM_MAX_POINTS {
        return Err(Error::InvalidArgument(format!("realizer search limited to {DM_MAX_POINTS} points")));
    }
    let base: Rows = (0..n).map(|x| (0..n).filter(|&y| pom.leq.get(x, y)).fold(0u16, |r, y| r | 1 << y)).collect();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| x != y && !pom.leq.get(x, y) && !pom.leq.get(y, x))
        .collect();
    for k in 1..=max_k.max(1) {
        let mut classes = vec![base.clone(); k];
        if search(&pairs, k, &mut classes, 0, if pairs.is_empty() { k } else { 0 }) {
            let realizer = Realizer { orders: classes.iter().map(linear_extension).collect() };
            debug_assert!(realizer.verify(&pom.leq));
            return Ok(DmDimension { dim: k, realizer });
        }
        if k >= max_k {
            break;
        }
    }
    Err(Error::BoundExceeded(format!("no realizer with at most {max_k} extensions")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UtilityReport {
    pub dim: usize,
    /// `utility[i][x]` is the value of the `i`-th coordinate at `x`.
    pub utility: Vec<Vec<f64>>,
    pub verified: bool,
}

/// Builds a utility of size `dim_DM` from a minimal realizer and checks
/// `x ≤ y ⇔ f_i(x) ≤ f_i(y) for all i`.
pub fn finite_dims_coincide(pom: &FinitePOM) -> Result<UtilityReport> {
    let dm = dushnik_miller(pom, pom.len().max(1))?;
    let utility: Vec<Vec<f64>> =
        dm.realizer.ranks().into_iter().map(|r| r.into_iter().map(|v| v as f64).collect()).collect();
    let n = pom.len();
    let verified = (0..n)
        .all(|x| (0..n).all(|y| pom.leq.get(x, y) == utility.iter().all(|f| f[x] <= f[y])));
    Ok(UtilityReport { dim: dm.dim, utility, verified })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

/// `E^±` as matrices: row `a` of `plus` is `J^+(a) \ I^+(a)` minus `a`.
#[derive(Clone, Debug, PartialEq)]
pub struct Horismos {
    pub plus: BitMatrix,
    pub minus: BitMatrix,
}

pub fn horismos(space: &FiniteLorentzSpace, tol: f64) -> Result<Horismos> {
    let causal = space
        .causal
        .as_ref()
        .ok_or_else(|| Error::Missing("horismos needs an exact causal matrix".into()))?;
    let chron = chronological_pairs(space, tol);
    let n = space.len();
    let plus = BitMatrix::from_fn(n, |a, q| a != q && causal.get(a, q) && !chron.get(a, q));
    let minus = plus.transpose();
    Ok(Horismos { plus, minus })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Horismoticity {
    pub value: usize,
    pub witness: Vec<usize>,
    pub sign: Sign,
}

/// Least `|A|` with `⋂_{a ∈ A} E^±(a) = {p}` for one sign.
pub fn horismoticity(space: &FiniteLorentzSpace, p: usize, max_a: usize, tol: f64) -> Result<Horismoticity> {
    let h = horismos(space, tol)?;
    let n = space.len();
    if p >= n {
        return Err(Error::InvalidArgument(format!("point {p} out of range")));
    }
    let target = BitSet::from_indices(n, [p]);
    for k in 1..=max_a {
        for (sign, rel, inv) in [(Sign::Plus, &h.plus, &h.minus), (Sign::Minus, &h.minus, &h.plus)] {
            // a with p ∈ E^±(a)
            let cands: Vec<usize> = crate::matrix::ones(inv.row(p)).collect();
            if let Some(w) = find_subset(&cands, k, &mut Vec::new(), 0, &|chosen: &[usize]| {
                let mut s = BitSet::full(n);
                for &a in chosen {
                    s.intersect_with(rel.row(a));
                }
                s == target
            }) {
                return Ok(Horismoticity { value: k, witness: w, sign });
            }
        }
    }
    Err(Error::BoundExceeded(format!("no horismos witness of size ≤ {max_a} for point {p}")))
}

fn find_subset(
    cands: &[usize],
    k: usize,
    chosen: &mut Vec<usize>,
    from: usize,
    ok: &dyn Fn(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    if chosen.len() == k {
        return ok(chosen).then(|| chosen.clone());
    }
    for i in from..cands.len() {
        if cands.len() - i < k - chosen.len() {
            break;
        }
        chosen.push(cands[i]);
        if let Some(w) = find_subset(cands, k, chosen, i + 1, ok) {
            return Some(w);
        }
        chosen.pop();
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlumenthalDim {
    pub value: usize,
    pub witness: Vec<usize>,
}

/// Least `|A|`, `A ⊆ M \ {p}`, such that `d(x, a) = d(p, a)` for all
/// `a ∈ A` forces `x = p`.
pub fn blumenthal_dim(m: &FiniteMetricSpace, p: usize, max_a: usize, tol: f64) -> Result<BlumenthalDim> {
    let n = m.len();
    if p >= n {
        return Err(Error::InvalidArgument(format!("point {p} out of range")));
    }
    if n == 1 {
        return Ok(BlumenthalDim { value: 0, witness: vec![] });
    }
    let cands: Vec<usize> = (0..n).filter(|&a| a != p).collect();
    for k in 1..=max_a {
        let ok = |chosen: &[usize]| {
            (0..n).all(|x| x == p || chosen.iter().any(|&a| (m.at(x, a) - m.at(p, a)).abs() > tol))
        };
        if let Some(w) = find_subset(&cands, k, &mut Vec::new(), 0, &ok) {
            return Ok(BlumenthalDim { value: k, witness: w });
        }
    }
    Err(Error::BoundExceeded(format!("no resolving set of size ≤ {max_a} for point {p}")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub injective: bool,
    /// `a ≤ b ⇒ f(a) ≤ f(b)`.
    pub increasing: bool,
    /// Injective and `a ≤ b ⇔ f(a) ≤ f(b)`.
    pub order_embedding: bool,
}

pub fn check_order_embedding(map: &[usize], domain: &BitMatrix, codomain: &BitMatrix) -> Result<EmbeddingReport> {
    let n = domain.n();
    if map.len() != n {
        return Err(Error::InvalidArgument(format!("assignment covers {} of {n} points", map.len())));
    }
    if let Some(&bad) = map.iter().find(|&&y| y >= codomain.n()) {
        return Err(Error::InvalidArgument(format!("image {bad} out of range")));
    }
    let mut seen = BitSet::new(codomain.n());
    let mut injective = true;
    for &y in map {
        injective &= !seen.contains(y);
        seen.insert(y);
    }
    let mut increasing = true;
    let mut reflecting = true;
    for a in 0..n {
        for b in 0..n {
            let (d, c) = (domain.get(a, b), codomain.get(map[a], map[b]));
            increasing &= !d || c;
            reflecting &= d || !c;
        }
    }
    Ok(EmbeddingReport { injective, increasing, order_embedding: injective && increasing && reflecting })
}

/// Causal (`J`, reflexive) and chronological (`I`) relations of a space.
#[derive(Clone, Debug, PartialEq)]
pub struct Relations {
    pub causal: BitMatrix,
    pub chron: BitMatrix,
    causal_t: BitMatrix,
    chron_t: BitMatrix,
}

impl Relations {
    pub fn from_space(space: &FiniteLorentzSpace, tol: f64) -> Result<Self> {
        let causal = derived_causal(space, tol)?;
        let chron = chronological_pairs(space, tol);
        Ok(Relations { causal_t: causal.transpose(), chron_t: chron.transpose(), causal, chron })
    }

    pub fn j(&self, x: usize, sign: Sign) -> &[u64] {
        match sign {
            Sign::Plus => self.causal.row(x),
            Sign::Minus => self.causal_t.row(x),
        }
    }

    pub fn i(&self, x: usize, sign: Sign) -> &[u64] {
        match sign {
            Sign::Plus => self.chron.row(x),
            Sign::Minus => self.chron_t.row(x),
        }
    }

    fn n(&self) -> usize {
        self.causal.n()
    }
}

fn flip(s: Sign) -> Sign {
    match s {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
    }
}

fn check_quadruple(r: &Relations, q: [usize; 4]) -> Result<()> {
    if q.iter().any(|&x| x >= r.n()) {
        return Err(Error::InvalidArgument("quadruple point out of range".into()));
    }
    if !(r.chron.get(q[0], q[1]) && r.chron.get(q[1], q[2]) && r.chron.get(q[2], q[3])) {
        return Err(Error::InvalidArgument(format!("{q:?} is not a chronological chain")));
    }
    Ok(())
}

/// Candidate region `J^+(a) \ I^-(c)` and the set `J^±(b) \ J^∓(d)` that
/// `I^±(V)` has to absorb.
fn catcher_sets(r: &Relations, q: [usize; 4], sign: Sign) -> (BitSet, BitSet) {
    let n = r.n();
    let [a, b, c, d] = q;
    let mut region = BitSet::from_words(n, r.j(a, Sign::Plus));
    region.difference_with(r.i(c, Sign::Minus));
    let mut todo = BitSet::from_words(n, r.j(b, sign));
    todo.difference_with(r.j(d, flip(sign)));
    (region, todo)
}

pub fn is_catcher_set(r: &Relations, v: &[usize], q: [usize; 4], sign: Sign) -> Result<bool> {
    check_quadruple(r, q)?;
    let (region, mut todo) = catcher_sets(r, q, sign);
    if v.iter().any(|&x| x >= r.n() || !region.contains(x)) {
        return Ok(false);
    }
    for &x in v {
        todo.difference_with(r.i(x, sign));
    }
    Ok(todo.is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catcher {
    pub size: usize,
    pub witness: Vec<usize>,
}

/// Minimum catcher set, exact search up to `max_v` points.
pub fn min_catcher(r: &Relations, q: [usize; 4], sign: Sign, max_v: usize) -> Result<Catcher> {
    check_quadruple(r, q)?;
    let n = r.n();
    let (region, todo) = catcher_sets(r, q, sign);
    if todo.is_empty() {
        return Ok(Catcher { size: 0, witness: vec![] });
    }
    // coverage of each candidate, dominated ones dropped
    let mut cov: Vec<(usize, BitSet)> = region
        .iter()
        .map(|v| {
            let mut s = BitSet::from_words(n, r.i(v, sign));
            s.intersect_with(todo.words());
            (v, s)
        })
        .filter(|(_, s)| !s.is_empty())
        .collect();
    cov.sort_by_key(|(v, s)| (std::cmp::Reverse(s.len()), *v));
    let mut kept: Vec<(usize, BitSet)> = Vec::new();
    for (v, s) in cov {
        if !kept.iter().any(|(_, t)| s.is_subset_of(t.words())) {
            kept.push((v, s));
        }
    }
    for k in 1..=max_v {
        let mut chosen = Vec::new();
        if cover_search(&kept, &todo, k, &mut chosen) {
            chosen.sort_unstable();
            return Ok(Catcher { size: k, witness: chosen });
        }
    }
    Err(Error::BoundExceeded(format!("no catcher set with at most {max_v} points")))
}

fn cover_search(cov: &[(usize, BitSet)], left: &BitSet, k: usize, chosen: &mut Vec<usize>) -> bool {
    let Some(x) = left.iter().next() else { return true };
    if k == 0 {
        return false;
    }
    for (v, s) in cov {
        if s.contains(x) {
            let mut rest = left.clone();
            rest.difference_with(s.words());
            chosen.push(*v);
            if cover_search(cov, &rest, k - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}
