//! Noldus-type metrics, intrinsification, time functions built from a Cauchy
//! antichain, and the chain-of-diamonds metric.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gh::{gh_metric, GhMode};
use crate::matrix::{and_count, ones, sup_profile_metric, BitMatrix, BitSet, Square};
use crate::space::{derived_causal, FiniteLorentzSpace, FiniteMetricSpace};

/// Violations listed in an audit before truncation.
pub const MAX_LISTED: usize = 1000;

fn signed_power(s: f64, p: f64) -> f64 {
    s.signum() * s.abs().powf(p)
}

fn check_power(p: f64) -> Result<()> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("power must be at least 1, got {p}")));
    }
    Ok(())
}

/// `Ď_p(x, y) = sup_z |σ^p(x, z) - σ^p(y, z)|` with signed powers.
pub fn noldus_metric(space: &FiniteLorentzSpace, p: f64) -> Result<FiniteMetricSpace> {
    check_power(p)?;
    let prof = space.sigma.map(|&s| signed_power(s, p));
    FiniteMetricSpace::new(space.points.clone(), sup_profile_metric(&prof, None))
}

/// `D_p^A`: the sup restricted to reference points in `a`.
pub fn dpa_metric(space: &FiniteLorentzSpace, a: &[usize], p: f64) -> Result<FiniteMetricSpace> {
    check_power(p)?;
    if a.is_empty() {
        return Err(Error::Empty("reference set is empty".into()));
    }
    if let Some(&bad) = a.iter().find(|&&r| r >= space.len()) {
        return Err(Error::InvalidArgument(format!("reference point {bad} out of range")));
    }
    let prof = space.sigma.map(|&s| signed_power(s, p));
    FiniteMetricSpace::new(space.points.clone(), sup_profile_metric(&prof, Some(a)))
}

/// Shortest paths over pairs with `d ≤ connect_radius`; unreachable pairs
/// are `+∞`.
pub fn intrinsify(m: &FiniteMetricSpace, connect_radius: f64) -> Result<FiniteMetricSpace> {
    if !(connect_radius > 0.0) {
        return Err(Error::InvalidArgument(format!("connect radius must be positive, got {connect_radius}")));
    }
    let n = m.len();
    let adj: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| (0..n).filter(|&j| j != i && m.at(i, j) <= connect_radius).map(|j| (j, m.at(i, j))).collect())
        .collect();
    let rows: Vec<Vec<f64>> = (0..n).into_par_iter().map(|s| dijkstra(&adj, s)).collect();
    FiniteMetricSpace::new(m.points.clone(), Square::from_rows(rows)?)
}

#[derive(PartialEq)]
struct Dist(f64);
impl Eq for Dist {}
impl PartialOrd for Dist {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Dist {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&o.0)
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    dist[s] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push((Reverse(Dist(0.0)), s));
    while let Some((Reverse(Dist(d)), u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push((Reverse(Dist(nd)), v));
            }
        }
    }
    dist
}

/// Outcome of a pairwise audit.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    pub ok: bool,
    pub checked: usize,
    pub violations: Vec<(usize, usize)>,
    pub truncated: bool,
    /// Largest shortfall among the violations.
    pub worst: f64,
}

fn audit_pairs(causal: &BitMatrix, check: impl Fn(usize, usize) -> f64 + Sync) -> Audit {
    let n = causal.n();
    let per_row: Vec<(usize, Vec<(usize, usize, f64)>)> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut bad = Vec::new();
            let mut k = 0;
            for y in ones(causal.row(x)) {
                if y == x {
                    continue;
                }
                k += 1;
                let short = check(x, y);
                if short > 0.0 {
                    bad.push((x, y, short));
                }
            }
            (k, bad)
        })
        .collect();
    let mut a = Audit { ok: true, ..Audit::default() };
    for (k, bad) in per_row {
        a.checked += k;
        for (x, y, s) in bad {
            a.ok = false;
            a.worst = a.worst.max(s);
            if a.violations.len() < MAX_LISTED {
                a.violations.push((x, y));
            } else {
                a.truncated = true;
            }
        }
    }
    a
}

fn check_values(space: &FiniteLorentzSpace, t: &[f64]) -> Result<()> {
    if t.len() != space.len() {
        return Err(Error::Malformed(format!("{} values for {} points", t.len(), space.len())));
    }
    if t.iter().any(|v| !v.is_finite()) {
        return Err(Error::Malformed("time function has non-finite values".into()));
    }
    Ok(())
}

/// `t(y) - t(x) ≥ σ(x, y)` on causal pairs `x ≤ y`.
pub fn is_rushing(space: &FiniteLorentzSpace, t: &[f64], tol: f64) -> Result<Audit> {
    check_values(space, t)?;
    let causal = derived_causal(space, tol)?;
    Ok(audit_pairs(&causal, |x, y| space.s(x, y) - (t[y] - t[x]) - tol))
}

/// `t(y) - t(x) ≥ D(x, y)` on causal pairs `x ≤ y`.
pub fn is_anti_lipschitz(space: &FiniteLorentzSpace, t: &[f64], d: &FiniteMetricSpace, tol: f64) -> Result<Audit> {
    check_values(space, t)?;
    if d.len() != space.len() {
        return Err(Error::Malformed("metric size differs from the space".into()));
    }
    let causal = derived_causal(space, tol)?;
    Ok(audit_pairs(&causal, |x, y| d.at(x, y) - (t[y] - t[x]) - tol))
}

/// Finite surrogate of the generalized Cauchy property: along every maximal
/// causal chain the first point realizes the minimum of `t` and the last
/// one the maximum. Equivalently `t(m) ≤ t(x)` for minimal `m ≤ x` and
/// `t(x) ≤ t(M)` for maximal `M ≥ x`.
pub fn is_generalized_cauchy(space: &FiniteLorentzSpace, t: &[f64], tol: f64) -> Result<Audit> {
    check_values(space, t)?;
    let causal = derived_causal(space, tol)?;
    let up = causal.transpose();
    let n = space.len();
    let minimal: Vec<bool> = (0..n).map(|x| and_count(up.row(x), up.row(x)) == 1).collect();
    let maximal: Vec<bool> = (0..n).map(|x| and_count(causal.row(x), causal.row(x)) == 1).collect();
    Ok(audit_pairs(&causal, |x, y| {
        let mut short = 0.0f64;
        if minimal[x] {
            short = short.max(t[x] - t[y] - tol);
        }
        if maximal[y] {
            short = short.max(t[x] - t[y] - tol);
        }
        short
    }))
}

/// An antichain meant to meet every maximal causal chain once.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchySubset {
    pub points: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauchyAudit {
    pub antichain: bool,
    /// A maximal chain missing the set, if one exists.
    pub avoiding_chain: Option<Vec<usize>>,
}

impl CauchyAudit {
    pub fn ok(&self) -> bool {
        self.antichain && self.avoiding_chain.is_none()
    }
}

impl CauchySubset {
    pub fn new(mut points: Vec<usize>) -> Self {
        points.sort_unstable();
        points.dedup();
        CauchySubset { points }
    }

    pub fn contains(&self, x: usize) -> bool {
        self.points.binary_search(&x).is_ok()
    }

    /// Maximal antichain grown greedily from the points whose `values` lie
    /// closest to `level`.
    pub fn from_level(causal: &BitMatrix, values: &[f64], level: f64) -> Result<Self> {
        let n = causal.n();
        if values.len() != n {
            return Err(Error::Malformed(format!("{} values for {n} points", values.len())));
        }
        let up = causal.transpose();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| (values[a] - level).abs().total_cmp(&(values[b] - level).abs()).then(a.cmp(&b)));
        let mut blocked = BitSet::new(n);
        let mut pts = Vec::new();
        for x in order {
            if blocked.contains(x) {
                continue;
            }
            pts.push(x);
            blocked.union_with(causal.row(x));
            blocked.union_with(up.row(x));
        }
        if pts.is_empty() {
            return Err(Error::Empty("no points to build a level set from".into()));
        }
        Ok(CauchySubset::new(pts))
    }

    pub fn audit(&self, causal: &BitMatrix) -> CauchyAudit {
        let n = causal.n();
        let antichain = self
            .points
            .iter()
            .all(|&a| self.points.iter().all(|&b| a == b || !causal.get(a, b)));
        let strict = causal.strict();
        let up = strict.transpose();
        let inside = BitSet::from_indices(n, self.points.iter().copied());
        // Hasse walk from minimal points outside the set
        let mut prev = vec![usize::MAX; n];
        let mut seen = BitSet::new(n);
        let mut queue = VecDeque::new();
        for x in 0..n {
            if !inside.contains(x) && up.row_set(x).is_empty() {
                seen.insert(x);
                queue.push_back(x);
            }
        }
        let mut found = None;
        while let Some(x) = queue.pop_front() {
            if strict.row_set(x).is_empty() {
                found = Some(x);
                break;
            }
            for y in ones(strict.row(x)) {
                if seen.contains(y) || inside.contains(y) || and_count(strict.row(x), up.row(y)) != 0 {
                    continue;
                }
                seen.insert(y);
                prev[y] = x;
                queue.push_back(y);
            }
        }
        let avoiding_chain = found.map(|mut x| {
            let mut c = vec![x];
            while prev[x] != usize::MAX {
                x = prev[x];
                c.push(x);
            }
            c.reverse();
            c
        });
        CauchyAudit { antichain, avoiding_chain }
    }
}

/// Signed `D`-distance to `S`: positive in `J^+(S)`, negative in `J^-(S)`.
pub fn delta_s(space: &FiniteLorentzSpace, s: &CauchySubset, d: &FiniteMetricSpace, tol: f64) -> Result<Vec<f64>> {
    let causal = derived_causal(space, tol)?;
    delta_with(&causal, s, d)
}

fn delta_with(causal: &BitMatrix, s: &CauchySubset, d: &FiniteMetricSpace) -> Result<Vec<f64>> {
    let n = causal.n();
    if s.points.iter().any(|&x| x >= n) {
        return Err(Error::InvalidArgument("Cauchy point out of range".into()));
    }
    let mut ambiguous = Vec::new();
    let mut out = vec![0.0; n];
    for x in 0..n {
        if s.contains(x) {
            continue;
        }
        let above = s.points.iter().any(|&p| causal.get(p, x));
        let below = s.points.iter().any(|&p| causal.get(x, p));
        let dist = s.points.iter().fold(f64::INFINITY, |m, &p| m.min(d.at(x, p)));
        out[x] = match (above, below) {
            (true, false) => dist,
            (false, true) => -dist,
            _ => {
                ambiguous.push(x);
                0.0
            }
        };
    }
    if !ambiguous.is_empty() {
        return Err(Error::SignAmbiguity(ambiguous));
    }
    Ok(out)
}

/// `τ_pq(x) = u(σ(p, x)) · sup{ D(y, x) : y ∈ J(p, x) }` on `J^+(p)`, with
/// `u(s) = min(s / σ(p,q)^2, 1 / σ(p,q))`.
pub fn tau_pq(space: &FiniteLorentzSpace, p: usize, q: usize, d: &FiniteMetricSpace, tol: f64) -> Result<Vec<f64>> {
    let causal = derived_causal(space, tol)?;
    tau_with(space, &causal, &causal.transpose(), p, q, d, tol)
}

fn tau_with(
    space: &FiniteLorentzSpace,
    causal: &BitMatrix,
    up: &BitMatrix,
    p: usize,
    q: usize,
    d: &FiniteMetricSpace,
    tol: f64,
) -> Result<Vec<f64>> {
    let spq = space.s(p, q);
    if !(spq > tol) {
        return Err(Error::InvalidArgument(format!("{p} is not chronologically before {q}")));
    }
    let n = space.len();
    let u = |s: f64| (s.max(0.0) / (spq * spq)).min(1.0 / spq);
    let row = causal.row(p);
    Ok((0..n)
        .into_par_iter()
        .map(|x| {
            if !causal.get(p, x) {
                return 0.0;
            }
            let w = u(space.s(p, x));
            if w == 0.0 {
                return 0.0;
            }
            let mut sup = 0.0f64;
            for (k, (a, b)) in row.iter().zip(up.row(x)).enumerate() {
                let mut bits = a & b;
                while bits != 0 {
                    let y = k * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    sup = sup.max(d.at(y, x));
                }
            }
            w * sup
        })
        .collect())
}

/// Greedy fat cone cover: pairs `p ≪ q` in `J^+(S')` such that the sets
/// `I^+(q) ∩ S` cover `S`.
pub fn fat_cone_cover(
    space: &FiniteLorentzSpace,
    s_prime: &CauchySubset,
    s: &CauchySubset,
    tol: f64,
) -> Result<Vec<(usize, usize)>> {
    let causal = derived_causal(space, tol)?;
    fat_cover_with(space, &causal, s_prime, s, tol)
}

fn fat_cover_with(
    space: &FiniteLorentzSpace,
    causal: &BitMatrix,
    s_prime: &CauchySubset,
    s: &CauchySubset,
    tol: f64,
) -> Result<Vec<(usize, usize)>> {
    let n = space.len();
    let mut above = BitSet::new(n);
    for &x in &s_prime.points {
        above.union_with(causal.row(x));
    }
    let late: Vec<usize> = s.points.iter().copied().filter(|&x| !s_prime.points.iter().any(|&y| y != x && space.s(y, x) > tol)).collect();
    if !late.is_empty() {
        return Err(Error::Uncoverable(late));
    }
    let targets = BitSet::from_indices(n, s.points.iter().copied());
    // q candidates with a chronological predecessor above S'
    let cands: Vec<(usize, usize, BitSet)> = above
        .iter()
        .filter_map(|q| {
            let p = above
                .iter()
                .filter(|&p| space.s(p, q) > tol)
                .max_by(|&a, &b| space.s(a, q).total_cmp(&space.s(b, q)).then(b.cmp(&a)))?;
            let mut cov = BitSet::from_indices(n, (0..n).filter(|&z| space.s(q, z) > tol));
            cov.intersect_with(targets.words());
            (!cov.is_empty()).then_some((p, q, cov))
        })
        .collect();
    let mut left = targets.clone();
    let mut pairs = Vec::new();
    while !left.is_empty() {
        let best = cands
            .iter()
            .map(|c| (and_count(c.2.words(), left.words()), c))
            .filter(|(g, _)| *g > 0)
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1 .1.cmp(&a.1 .1)));
        let Some((_, (p, q, cov))) = best else {
            return Err(Error::Uncoverable(left.to_vec()));
        };
        left.difference_with(cov.words());
        pairs.push((*p, *q));
    }
    Ok(pairs)
}

/// Height relative to `S`: longest chain length from `S` up to `x`
/// (negative below `S`).
fn height(causal: &BitMatrix, s: &CauchySubset, sign_of: &[f64]) -> Vec<f64> {
    let n = causal.n();
    let up = causal.transpose();
    let below = |x: usize| and_count(up.row(x), up.row(x));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (below(x), x));
    let mut h = vec![0.0; n];
    for &x in &order {
        if s.contains(x) || sign_of[x] < 0.0 {
            continue;
        }
        h[x] = ones(up.row(x))
            .filter(|&y| y != x && (s.contains(y) || sign_of[y] > 0.0))
            .map(|y| h[y] + 1.0)
            .fold(0.0, f64::max);
    }
    for &x in order.iter().rev() {
        if s.contains(x) || sign_of[x] > 0.0 {
            continue;
        }
        h[x] = ones(causal.row(x))
            .filter(|&y| y != x && (s.contains(y) || sign_of[y] < 0.0))
            .map(|y| h[y] - 1.0)
            .fold(0.0, f64::min);
    }
    h
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyTime {
    pub values: Vec<f64>,
    pub s: CauchySubset,
    pub future_cover: Vec<(usize, usize)>,
    pub past_cover: Vec<(usize, usize)>,
    /// Weight of the height term added to close the audit.
    pub height_weight: f64,
    pub anti_lipschitz: Audit,
    pub rushing: Audit,
    pub cauchy: Audit,
    pub chains: CauchyAudit,
}

fn reversed(space: &FiniteLorentzSpace) -> FiniteLorentzSpace {
    let n = space.len();
    let sigma = Square::from_fn(n, |i, j| space.s(j, i));
    let mut out = FiniteLorentzSpace::from_sigma(sigma);
    out.points = space.points.clone();
    if let Some(c) = &space.causal {
        out.causal = Some(c.transpose());
    }
    out
}

fn quantile(mut v: Vec<f64>, q: f64) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    Some(v[((v.len() - 1) as f64 * q).round() as usize])
}

/// Anti-Lipschitz time function vanishing exactly on `S`: a past cone
/// term, a bounded function of `Δ_S`, a future cone term, and a height
/// term whose weight is fixed by the largest remaining violation.
pub fn build_cauchy_time(space: &FiniteLorentzSpace, s: &CauchySubset, d: &FiniteMetricSpace, tol: f64) -> Result<CauchyTime> {
    let n = space.len();
    let causal = derived_causal(space, tol)?;
    let chains = s.audit(&causal);
    if !chains.antichain {
        return Err(Error::InvalidArgument("the Cauchy set must be an antichain".into()));
    }
    let delta = delta_with(&causal, s, d)?;
    let pos: Vec<f64> = delta.iter().copied().filter(|v| *v > 0.0).collect();
    let neg: Vec<f64> = delta.iter().copied().filter(|v| *v < 0.0).map(|v| -v).collect();
    let (Some(qp), Some(qn)) = (quantile(pos, 0.5), quantile(neg, 0.5)) else {
        return Err(Error::Resolution("no points on one side of the Cauchy set".into()));
    };
    let up = causal.transpose();
    let future_band = CauchySubset::from_level(&causal, &delta, qp)?;
    let future_cover = fat_cover_with(space, &causal, s, &future_band, tol)?;
    let mut theta_plus = vec![0.0; n];
    for &(p, q) in &future_cover {
        for (t, v) in theta_plus.iter_mut().zip(tau_with(space, &causal, &up, p, q, d, tol)?) {
            *t += v;
        }
    }
    let rev = reversed(space);
    let rcausal = causal.transpose();
    let past_band = CauchySubset::from_level(&rcausal, &delta.iter().map(|v| -v).collect::<Vec<_>>(), qn)?;
    let past_cover = fat_cover_with(&rev, &rcausal, s, &past_band, tol)?;
    let mut theta_minus = vec![0.0; n];
    for &(p, q) in &past_cover {
        for (t, v) in theta_minus.iter_mut().zip(tau_with(&rev, &rcausal, &causal, p, q, d, tol)?) {
            *t -= v;
        }
    }
    let scale = 1.0 + delta.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let base: Vec<f64> = (0..n).map(|x| theta_minus[x] + delta[x] / scale + theta_plus[x]).collect();
    let h = height(&causal, s, &delta);
    let shortfall = audit_pairs(&causal, |x, y| d.at(x, y) - (base[y] - base[x])).worst;
    let height_weight = 1.0 + shortfall;
    let values: Vec<f64> = (0..n).map(|x| if s.contains(x) { 0.0 } else { base[x] + height_weight * h[x] }).collect();
    let anti_lipschitz = audit_pairs(&causal, |x, y| d.at(x, y) - (values[y] - values[x]));
    let rushing = audit_pairs(&causal, |x, y| space.s(x, y) - (values[y] - values[x]));
    let cauchy = is_generalized_cauchy(space, &values, tol)?;
    Ok(CauchyTime {
        values,
        s: s.clone(),
        future_cover,
        past_cover,
        height_weight,
        anti_lipschitz,
        rushing,
        cauchy,
        chains,
    })
}

/// Chain-of-diamonds metric on `S`: shortest paths with edge weight the
/// smallest `σ(p⁻, p⁺)` over diamonds `J(p⁻, p⁺)` containing both ends.
/// Rows and columns follow `s.points`.
pub fn chain_diamond_metric(space: &FiniteLorentzSpace, s: &CauchySubset, tol: f64) -> Result<FiniteMetricSpace> {
    let causal = derived_causal(space, tol)?;
    let up = causal.transpose();
    let k = s.points.len();
    let n = space.len();
    let extremal = |set: &BitSet, rel: &BitMatrix| -> Vec<usize> {
        // elements of `set` with no other element of `set` beyond them
        set.iter().filter(|&x| ones(rel.row(x)).all(|y| y == x || !set.contains(y))).collect()
    };
    let rows: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|i| {
            let u = s.points[i];
            (0..k)
                .map(|j| {
                    let v = s.points[j];
                    if i == j {
                        return 0.0;
                    }
                    let mut past = BitSet::from_words(n, up.row(u));
                    past.intersect_with(up.row(v));
                    let mut fut = BitSet::from_words(n, causal.row(u));
                    fut.intersect_with(causal.row(v));
                    let lows = extremal(&past, &causal);
                    let highs = extremal(&fut, &up);
                    let mut best = f64::INFINITY;
                    for &a in &lows {
                        for &b in &highs {
                            best = best.min(space.s(a, b));
                        }
                    }
                    best
                })
                .collect()
        })
        .collect();
    let w = FiniteMetricSpace::from_matrix(Square::from_rows(rows)?);
    let adj: Vec<Vec<(usize, f64)>> =
        (0..k).map(|i| (0..k).filter(|&j| j != i && w.at(i, j).is_finite()).map(|j| (j, w.at(i, j))).collect()).collect();
    let d: Vec<Vec<f64>> = (0..k).into_par_iter().map(|i| dijkstra(&adj, i)).collect();
    FiniteMetricSpace::new(s.points.iter().map(|&i| space.points[i].clone()).collect(), Square::from_rows(d)?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelSet {
    pub level: f64,
    pub set: CauchySubset,
    pub restricted: FiniteMetricSpace,
    pub intrinsic: FiniteMetricSpace,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelFamily {
    pub levels: Vec<LevelSet>,
    /// GH distance between consecutive intrinsic level metrics.
    pub profile: Vec<f64>,
}

/// Banded level sets `|t - a| ≤ band` with restricted and intrinsified
/// metrics, plus the consecutive GH profile.
pub fn level_set_family(
    metric: &FiniteMetricSpace,
    t: &[f64],
    levels: &[f64],
    band: f64,
    connect_radius: f64,
    mode: &GhMode,
) -> Result<LevelFamily> {
    if t.len() != metric.len() {
        return Err(Error::Malformed("time values and metric differ in size".into()));
    }
    let sets: Vec<LevelSet> = levels
        .iter()
        .map(|&a| {
            let pts: Vec<usize> = (0..t.len()).filter(|&x| (t[x] - a).abs() <= band).collect();
            if pts.is_empty() {
                return Err(Error::Empty(format!("no point within {band} of level {a}")));
            }
            let restricted = metric.subspace(&pts);
            let intrinsic = intrinsify(&restricted, connect_radius)?;
            Ok(LevelSet { level: a, set: CauchySubset::new(pts), restricted, intrinsic })
        })
        .collect::<Result<_>>()?;
    let profile = sets
        .windows(2)
        .map(|w| gh_metric(&w[0].intrinsic.d, &w[1].intrinsic.d, mode).map(|r| r.value))
        .collect::<Result<_>>()?;
    Ok(LevelFamily { levels: sets, profile })
}

/// Three times the mean nearest-neighbour distance.
pub fn default_connect_radius(m: &FiniteMetricSpace) -> f64 {
    let n = m.len();
    if n < 2 {
        return 1.0;
    }
    let total: f64 =
        (0..n).map(|i| (0..n).filter(|&j| j != i).map(|j| m.at(i, j)).fold(f64::INFINITY, f64::min)).sum();
    3.0 * total / n as f64
}
