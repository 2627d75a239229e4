//! Diamond measures, midpoint-scaling dimension, Lorentzian length and
//! reconstruction of sigma from an ordered measure space.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gh::{distortion, Correspondence};
use crate::matrix::{and_count, ones, weight, BitMatrix, BitSet, Square};
use crate::models::mink;
use crate::pom::{dr_triple, Cones};
use crate::space::{derived_causal, FiniteLorentzSpace, FinitePOM};

/// Volume coefficient of an `N`-dimensional causal diamond:
/// `vol J(p, q) = omega(N) sigma(p, q)^N` in Minkowski space.
pub fn omega(n: f64) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::InvalidArgument(format!("omega needs N > 0, got {n}")));
    }
    let pi = std::f64::consts::PI;
    Ok(pi.powf((n - 1.0) / 2.0) / (n * statrs::function::gamma::gamma((n + 1.0) / 2.0) * 2f64.powf(n - 1.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverMode {
    Greedy,
    Exact,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverByDiamonds {
    pub diamonds: Vec<(usize, usize)>,
    /// `omega(N) * sum sigma(p_k, q_k)^N`.
    pub value: f64,
    pub mode: CoverMode,
}

/// Largest target size accepted by the exact cover search.
pub const EXACT_COVER_LIMIT: usize = 12;

/// Fixed-`delta` diamond cover of `target`. Candidate diamonds are
/// `J(p, q)` with `p ≪ q` whose diameter in the global `d^+` metric is at
/// most `delta`.
pub fn mu_n_delta(
    space: &FiniteLorentzSpace,
    target: &[usize],
    n_exp: f64,
    delta: f64,
    mode: CoverMode,
    tol: f64,
) -> Result<CoverByDiamonds> {
    let w = omega(n_exp)?;
    if target.is_empty() {
        return Ok(CoverByDiamonds { diamonds: vec![], value: 0.0, mode });
    }
    let n = space.len();
    let leq = derived_causal(space, tol)?;
    let up = leq.transpose();
    let aset = BitSet::from_indices(n, target.iter().copied());
    let dplus = crate::gh::d_plus_metric(space).d;
    // candidate diamonds touching the target
    let cands: Vec<(usize, usize, BitSet, f64)> = (0..n)
        .into_par_iter()
        .flat_map_iter(|p| {
            let (leq, up, aset, dplus) = (&leq, &up, &aset, &dplus);
            (0..n).filter_map(move |q| {
                let s = space.s(p, q);
                if !(s > tol && s <= delta) {
                    return None;
                }
                let mut j = BitSet::from_words(n, leq.row(p));
                j.intersect_with(up.row(q));
                let members = j.to_vec();
                // diam lies between the radius about p and twice it
                let radius = members.iter().fold(0.0f64, |m, &a| m.max(dplus.at(p, a)));
                if radius > delta {
                    return None;
                }
                let mut diam = if 2.0 * radius <= delta { 0.0 } else { radius };
                'outer: for (k, &a) in members.iter().enumerate() {
                    if diam == 0.0 {
                        break;
                    }
                    for &b in &members[k + 1..] {
                        diam = diam.max(dplus.at(a, b));
                        if diam > delta {
                            break 'outer;
                        }
                    }
                }
                if diam > delta {
                    return None;
                }
                j.intersect_with(aset.words());
                if j.is_empty() {
                    return None;
                }
                Some((p, q, j, w * s.powf(n_exp)))
            })
        })
        .collect();
    let mut reach = BitSet::new(n);
    for c in &cands {
        reach.union_with(c.2.words());
    }
    let missing: Vec<usize> = aset.iter().filter(|&i| !reach.contains(i)).collect();
    if !missing.is_empty() {
        return Err(Error::Uncoverable(missing));
    }
    let picked = match mode {
        CoverMode::Greedy => greedy_cover(&aset, &cands),
        CoverMode::Exact => {
            if target.len() > EXACT_COVER_LIMIT {
                return Err(Error::InvalidArgument(format!(
                    "exact cover limited to {EXACT_COVER_LIMIT} target points"
                )));
            }
            exact_cover(target, &cands)
        }
    };
    let value = picked.iter().map(|&k| cands[k].3).sum();
    Ok(CoverByDiamonds { diamonds: picked.iter().map(|&k| (cands[k].0, cands[k].1)).collect(), value, mode })
}

struct Ratio {
    ratio: f64,
    idx: usize,
}

impl PartialEq for Ratio {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}
impl Eq for Ratio {}
impl PartialOrd for Ratio {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Ratio {
    fn cmp(&self, o: &Self) -> Ordering {
        self.ratio.total_cmp(&o.ratio).then_with(|| o.idx.cmp(&self.idx))
    }
}

/// Lazy greedy weighted set cover: newly covered points per unit cost.
fn greedy_cover(aset: &BitSet, cands: &[(usize, usize, BitSet, f64)]) -> Vec<usize> {
    let mut uncovered = aset.clone();
    let mut heap: BinaryHeap<Ratio> = cands
        .iter()
        .enumerate()
        .map(|(idx, c)| Ratio { ratio: c.2.len() as f64 / c.3, idx })
        .collect();
    let mut picked = Vec::new();
    while !uncovered.is_empty() {
        let Some(top) = heap.pop() else { break };
        let gain = and_count(cands[top.idx].2.words(), uncovered.words());
        if gain == 0 {
            continue;
        }
        let ratio = gain as f64 / cands[top.idx].3;
        if ratio < top.ratio {
            heap.push(Ratio { ratio, idx: top.idx });
            continue;
        }
        uncovered.difference_with(cands[top.idx].2.words());
        picked.push(top.idx);
    }
    picked
}

/// Exact minimum-cost cover by dynamic programming over target subsets.
fn exact_cover(target: &[usize], cands: &[(usize, usize, BitSet, f64)]) -> Vec<usize> {
    let k = target.len();
    let full = (1usize << k) - 1;
    // cheapest candidate per cover mask
    let mut best_by_mask: Vec<Option<usize>> = vec![None; full + 1];
    for (idx, c) in cands.iter().enumerate() {
        let mask = target.iter().enumerate().filter(|(_, &t)| c.2.contains(t)).fold(0, |m, (b, _)| m | 1 << b);
        match best_by_mask[mask] {
            Some(j) if cands[j].3 <= c.3 => {}
            _ => best_by_mask[mask] = Some(idx),
        }
    }
    let options: Vec<(usize, usize)> =
        best_by_mask.iter().enumerate().filter_map(|(m, o)| o.map(|i| (m, i))).collect();
    let mut cost = vec![f64::INFINITY; full + 1];
    let mut from: Vec<Option<(usize, usize)>> = vec![None; full + 1];
    cost[0] = 0.0;
    for mask in 0..=full {
        if !cost[mask].is_finite() {
            continue;
        }
        for &(m, idx) in &options {
            let next = mask | m;
            let c = cost[mask] + cands[idx].3;
            if next != mask && c < cost[next] {
                cost[next] = c;
                from[next] = Some((mask, idx));
            }
        }
    }
    let mut picked = Vec::new();
    let mut mask = full;
    while let Some((prev, idx)) = from[mask] {
        picked.push(idx);
        mask = prev;
    }
    picked.reverse();
    picked
}

/// Order plus interval measure, as needed by `Φ`, `ℓ` and reconstruction.
pub trait OrderedMeasure: Sync {
    fn len(&self) -> usize;
    fn leq(&self, a: usize, b: usize) -> bool;
    /// `μ(J(a, b))`, zero unless `a ≤ b`.
    fn interval_measure(&self, a: usize, b: usize) -> f64;
    /// Number of points in `J(a, b)`.
    fn interval_count(&self, a: usize, b: usize) -> usize;
    /// Points strictly between `a` and `c`.
    fn interior(&self, a: usize, c: usize) -> Vec<usize>;
    /// Admissible imbalance when selecting midpoints.
    fn balance_band(&self, a: usize, c: usize) -> f64;
}

/// Counting measure of a finite POM.
///
/// Midpoint balance is judged up to `band_sigmas` Poisson standard
/// deviations of the enclosing interval count.
pub struct CountingMeasure<'a> {
    pub pom: &'a FinitePOM,
    pub band_sigmas: f64,
    up: BitMatrix,
}

pub const DEFAULT_BAND_SIGMAS: f64 = 0.5;

impl<'a> CountingMeasure<'a> {
    pub fn new(pom: &'a FinitePOM) -> Self {
        CountingMeasure { pom, band_sigmas: DEFAULT_BAND_SIGMAS, up: pom.leq.transpose() }
    }

    pub fn with_band(mut self, band_sigmas: f64) -> Self {
        self.band_sigmas = band_sigmas;
        self
    }

    pub fn up(&self) -> &BitMatrix {
        &self.up
    }
}

impl OrderedMeasure for CountingMeasure<'_> {
    fn len(&self) -> usize {
        self.pom.len()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        self.pom.leq.get(a, b)
    }
    fn interval_measure(&self, a: usize, b: usize) -> f64 {
        crate::matrix::and_weight(self.pom.leq.row(a), self.up.row(b), &self.pom.mu)
    }
    fn interval_count(&self, a: usize, b: usize) -> usize {
        and_count(self.pom.leq.row(a), self.up.row(b))
    }
    fn interior(&self, a: usize, c: usize) -> Vec<usize> {
        let mut s = BitSet::from_words(self.len(), self.pom.leq.row(a));
        s.intersect_with(self.up.row(c));
        s.remove(a);
        s.remove(c);
        s.to_vec()
    }
    fn balance_band(&self, a: usize, c: usize) -> f64 {
        let mut s = BitSet::from_words(self.len(), self.pom.leq.row(a));
        s.intersect_with(self.up.row(c));
        let w = s.iter().fold(0.0f64, |m, i| m.max(self.pom.mu[i]));
        w * (1.0 + self.band_sigmas * (s.len() as f64).sqrt())
    }
}

/// Minkowski points with exact continuum diamond volumes
/// `omega(d) sigma^d`, `d` the number of coordinates.
pub struct AnalyticMinkowski {
    pub coords: Vec<Vec<f64>>,
}

impl OrderedMeasure for AnalyticMinkowski {
    fn len(&self) -> usize {
        self.coords.len()
    }
    fn leq(&self, a: usize, b: usize) -> bool {
        a == b || mink(&self.coords[a], &self.coords[b]) > 0.0
    }
    fn interval_measure(&self, a: usize, b: usize) -> f64 {
        let s = mink(&self.coords[a], &self.coords[b]);
        if s <= 0.0 {
            return 0.0;
        }
        let d = self.coords[a].len() as f64;
        omega(d).expect("positive dimension") * s.powf(d)
    }
    fn interval_count(&self, a: usize, b: usize) -> usize {
        (0..self.len()).filter(|&z| self.leq(a, z) && self.leq(z, b)).count()
    }
    fn interior(&self, a: usize, c: usize) -> Vec<usize> {
        (0..self.len()).filter(|&z| z != a && z != c && self.leq(a, z) && self.leq(z, c)).collect()
    }
    fn balance_band(&self, _a: usize, _c: usize) -> f64 {
        1e-12
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiResult {
    pub phi: f64,
    /// Midpoint realizing the sup.
    pub b: usize,
    /// Number of admitted balanced candidates.
    pub candidates: usize,
}

/// Sup over (near-)balanced `b` of `(μ(J(a,b)) + μ(J(b,c))) / μ(J(a,c))`.
pub fn phi_midpoint(m: &impl OrderedMeasure, a: usize, c: usize) -> Result<PhiResult> {
    if a == c || !m.leq(a, c) {
        return Err(Error::InvalidArgument(format!("{a} does not precede {c}")));
    }
    let total = m.interval_measure(a, c);
    if !(total > 0.0) {
        return Err(Error::Empty(format!("J({a}, {c}) has zero measure")));
    }
    let inner = m.interior(a, c);
    if inner.is_empty() {
        return Err(Error::Empty(format!("no point strictly between {a} and {c}")));
    }
    let vals: Vec<(usize, f64, f64)> =
        inner.iter().map(|&b| (b, m.interval_measure(a, b), m.interval_measure(b, c))).collect();
    let min_gap = vals.iter().fold(f64::INFINITY, |g, v| g.min((v.1 - v.2).abs()));
    let band = min_gap + m.balance_band(a, c);
    let mut best: Option<(f64, usize)> = None;
    let mut count = 0;
    for &(b, x, y) in &vals {
        if (x - y).abs() <= band {
            count += 1;
            let r = (x + y) / total;
            if best.map_or(true, |(v, _)| r > v) {
                best = Some((r, b));
            }
        }
    }
    let (phi, b) = best.expect("the minimizer is admitted");
    Ok(PhiResult { phi, b, candidates: count })
}

pub fn dm_from_phi(phi: f64) -> f64 {
    -phi.log2() + 1.0
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmOptions {
    pub levels: usize,
    /// Interval size (point count) at the coarsest level; halves per level.
    pub top_count: usize,
    /// Diamonds averaged per level.
    pub pairs_per_level: usize,
    /// Past points scanned for diamond endpoints.
    pub max_anchors: usize,
    pub band_sigmas: f64,
}

impl Default for DmOptions {
    fn default() -> Self {
        DmOptions { levels: 5, top_count: 2048, pairs_per_level: 8, max_anchors: 96, band_sigmas: DEFAULT_BAND_SIGMAS }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmLevel {
    pub target_count: usize,
    pub mean_count: f64,
    pub dm: f64,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmEstimate {
    pub levels: Vec<DmLevel>,
    /// Least-squares line of `dm` against `log2(count)`, evaluated at the
    /// finest level.
    pub extrapolated: f64,
    pub slope: f64,
    /// Mean of the per-level values.
    pub mean: f64,
}

/// Midpoint-scaling dimension at `b` over nested diamonds `J(a, c)` with
/// `a ≪ b ≪ c`, the interval size halving per level.
pub fn dm_dimension(pom: &FinitePOM, b: usize, opts: &DmOptions) -> Result<DmEstimate> {
    let m = CountingMeasure::new(pom).with_band(opts.band_sigmas);
    let n = pom.len();
    let strict = pom.leq.strict();
    let past: Vec<usize> = (0..n).filter(|&a| a != b && pom.leq.get(a, b)).collect();
    let future: Vec<usize> = ones(strict.row(b)).collect();
    if past.is_empty() || future.is_empty() {
        return Err(Error::Resolution(format!("point {b} lacks a past or a future")));
    }
    let stride = past.len().div_ceil(opts.max_anchors.max(1));
    let anchors: Vec<usize> = past.iter().step_by(stride.max(1)).copied().collect();
    let fstride = future.len().div_ceil(4 * opts.max_anchors.max(1));
    let tops: Vec<usize> = future.iter().step_by(fstride.max(1)).copied().collect();
    let (up, tops) = (m.up(), &tops);
    let counts: Vec<(usize, usize, usize)> = anchors
        .par_iter()
        .flat_map_iter(|&a| tops.iter().map(move |&c| (a, c, and_count(pom.leq.row(a), up.row(c)))))
        .collect();
    let mut levels = Vec::new();
    for k in 0..opts.levels {
        let target = opts.top_count >> k;
        if target < 8 {
            break;
        }
        let mut ranked: Vec<&(usize, usize, usize)> = counts.iter().filter(|t| t.2 > 2).collect();
        ranked.sort_by_key(|t| ((t.2 as i64 - target as i64).unsigned_abs(), t.0, t.1));
        let chosen: Vec<(usize, usize, usize)> = ranked.iter().take(opts.pairs_per_level).map(|t| **t).collect();
        if chosen.is_empty() {
            break;
        }
        let dms: Vec<f64> = chosen
            .par_iter()
            .map(|&(a, c, _)| phi_midpoint(&m, a, c).map(|r| dm_from_phi(r.phi)))
            .collect::<Result<_>>()?;
        levels.push(DmLevel {
            target_count: target,
            mean_count: chosen.iter().map(|t| t.2 as f64).sum::<f64>() / chosen.len() as f64,
            dm: dms.iter().sum::<f64>() / dms.len() as f64,
            pairs: chosen.iter().map(|t| (t.0, t.1)).collect(),
        });
    }
    if levels.is_empty() {
        return Err(Error::Resolution("no diamond around the point reaches the smallest level".into()));
    }
    let xs: Vec<f64> = levels.iter().map(|l| l.mean_count.log2()).collect();
    let ys: Vec<f64> = levels.iter().map(|l| l.dm).collect();
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let (slope, intercept) = least_squares(&xs, &ys);
    let x_fine = xs.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(DmEstimate { extrapolated: intercept + slope * x_fine, slope, mean, levels })
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Dimension used by length estimates, constant or per point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DmField {
    Constant(f64),
    PerPoint(Vec<f64>),
}

impl DmField {
    pub fn at(&self, i: usize) -> f64 {
        match self {
            DmField::Constant(d) => *d,
            DmField::PerPoint(v) => v[i],
        }
    }
}

/// `(μ(J(p, q)) / omega(D))^{1/D}` with `D` the dimension at `p`.
pub fn diamond_length(volume: f64, d: f64) -> Result<f64> {
    Ok((volume / omega(d)?).powf(1.0 / d))
}

/// Infimum over coarsenings of the chain of the summed diamond lengths.
pub fn lorentz_length(m: &impl OrderedMeasure, chain: &[usize], dm: &DmField) -> Result<f64> {
    if chain.len() < 2 {
        return Ok(0.0);
    }
    for w in chain.windows(2) {
        if w[0] == w[1] || !m.leq(w[0], w[1]) {
            return Err(Error::InvalidArgument(format!("{} does not precede {}", w[0], w[1])));
        }
    }
    let k = chain.len();
    let mut best = vec![f64::INFINITY; k];
    best[0] = 0.0;
    for j in 1..k {
        for i in 0..j {
            let d = dm.at(chain[i]);
            let c = best[i] + diamond_length(m.interval_measure(chain[i], chain[j]), d)?;
            if c < best[j] {
                best[j] = c;
            }
        }
    }
    Ok(best[k - 1])
}

/// Minimum interval count for an edge admitted by the reconstruction.
pub const DEFAULT_NOISE_FLOOR: usize = 64;

/// Longest-path reconstruction: `σ̂(x, y)` is the largest sum of single
/// diamond lengths along a chain from `x` to `y` whose steps each enclose at
/// least `noise_floor` points.
pub fn reconstruct_sigma(m: &impl OrderedMeasure, dm: &DmField, noise_floor: usize) -> Result<FiniteLorentzSpace> {
    let n = m.len();
    let topo = topological_order(m)?;
    let mut rank = vec![0usize; n];
    for (r, &i) in topo.iter().enumerate() {
        rank[i] = r;
    }
    // wt[y][z] = weight of the edge z -> y, NEG_INFINITY when not admitted
    let wt_rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|y| {
            (0..n)
                .map(|z| {
                    if z != y && m.leq(z, y) && m.interval_count(z, y) >= noise_floor {
                        diamond_length(m.interval_measure(z, y), dm.at(z)).unwrap_or(f64::NEG_INFINITY)
                    } else {
                        f64::NEG_INFINITY
                    }
                })
                .collect()
        })
        .collect();
    let wt = Square::from_rows(wt_rows)?;
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut fut: Vec<usize> = (0..n).filter(|&y| y != x && m.leq(x, y)).collect();
            fut.sort_by_key(|&y| rank[y]);
            let mut r = vec![f64::NEG_INFINITY; n];
            let mut reach = Vec::with_capacity(fut.len());
            for &y in &fut {
                let wy = wt.row(y);
                let mut best = wy[x];
                for &z in &reach {
                    let v = r[z] + wy[z];
                    if v > best && m.leq(z, y) {
                        best = v;
                    }
                }
                r[y] = best;
                if best > f64::NEG_INFINITY {
                    reach.push(y);
                }
            }
            r.iter().map(|v| v.max(0.0)).collect()
        })
        .collect();
    let mut sigma = Square::from_rows(rows)?;
    for x in 0..n {
        for y in 0..n {
            let v = sigma.at(x, y);
            if v > 0.0 {
                sigma.set(y, x, -v);
            }
        }
    }
    Ok(FiniteLorentzSpace::from_sigma(sigma))
}

/// Faster reconstruction for a POM, using packed intervals.
pub fn reconstruct_pom(pom: &FinitePOM, dm: &DmField, noise_floor: usize) -> Result<FiniteLorentzSpace> {
    let n = pom.len();
    let cm = CountingMeasure::new(pom);
    let up = cm.up();
    let strict = pom.leq.strict();
    let topo = topological_order(&cm)?;
    let mut rank = vec![0usize; n];
    for (r, &i) in topo.iter().enumerate() {
        rank[i] = r;
    }
    let wt_rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|y| {
            let mut row = vec![f64::NEG_INFINITY; n];
            for z in ones(up.row(y)) {
                if z == y {
                    continue;
                }
                let cnt = and_count(pom.leq.row(z), up.row(y));
                if cnt >= noise_floor {
                    let vol = crate::matrix::and_weight(pom.leq.row(z), up.row(y), &pom.mu);
                    row[z] = diamond_length(vol, dm.at(z)).unwrap_or(f64::NEG_INFINITY);
                }
            }
            row
        })
        .collect();
    let wt = Square::from_rows(wt_rows)?;
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut fut: Vec<usize> = ones(strict.row(x)).collect();
            fut.sort_by_key(|&y| rank[y]);
            let mut r = vec![f64::NEG_INFINITY; n];
            let fx = strict.row(x);
            for &y in &fut {
                let wy = wt.row(y);
                let mut best = wy[x];
                let py = up.row(y);
                for (k, (a, b)) in fx.iter().zip(py).enumerate() {
                    let mut w = a & b;
                    while w != 0 {
                        let z = k * 64 + w.trailing_zeros() as usize;
                        w &= w - 1;
                        let v = r[z] + wy[z];
                        if v > best {
                            best = v;
                        }
                    }
                }
                r[y] = best;
            }
            r.iter().map(|v| v.max(0.0)).collect()
        })
        .collect();
    let mut sigma = Square::from_rows(rows)?;
    for x in 0..n {
        for y in 0..n {
            let v = sigma.at(x, y);
            if v > 0.0 {
                sigma.set(y, x, -v);
            }
        }
    }
    Ok(FiniteLorentzSpace::new(pom.points.clone(), sigma)?)
}

fn topological_order(m: &impl OrderedMeasure) -> Result<Vec<usize>> {
    let n = m.len();
    let below: Vec<usize> = (0..n).map(|y| (0..n).filter(|&z| z != y && m.leq(z, y)).count()).collect();
    for x in 0..n {
        for y in x + 1..n {
            if m.leq(x, y) && m.leq(y, x) {
                return Err(Error::InvalidArgument(format!("cycle between {x} and {y}")));
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (below[i], i));
    Ok(order)
}

/// Max over `r ∈ {-1/2, 0, 1/2}` of the `D_r` distortion of `c`.
pub fn dist_times(c: &Correspondence, x: &Cones, y: &Cones) -> Result<f64> {
    let (tx, ty) = (dr_triple(x), dr_triple(y));
    let a = distortion(c, &tx.minus_half.d, &ty.minus_half.d)?;
    let b = distortion(c, &tx.zero.d, &ty.zero.d)?;
    let d = distortion(c, &tx.plus_half.d, &ty.plus_half.d)?;
    Ok(a.max(b).max(d))
}

/// Counting measure of `J^-(x)` for every point.
pub fn past_volumes(pom: &FinitePOM) -> Vec<f64> {
    let up = pom.leq.transpose();
    (0..pom.len()).map(|x| weight(up.row(x), &pom.mu)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_values() {
        assert!((omega(1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((omega(2.0).unwrap() - 0.5).abs() < 1e-12);
        assert!((omega(4.0).unwrap() - std::f64::consts::PI / 24.0).abs() < 1e-12);
        assert!(omega(0.0).is_err());
    }

    #[test]
    fn analytic_single_edge_length() {
        let m = AnalyticMinkowski { coords: vec![vec![0.0, 0.0], vec![1.5, 0.3]] };
        let tau = (1.5f64 * 1.5 - 0.09).sqrt();
        let l = lorentz_length(&m, &[0, 1], &DmField::Constant(2.0)).unwrap();
        assert!((l - tau).abs() < 1e-12);
        assert_eq!(lorentz_length(&m, &[0], &DmField::Constant(2.0)).unwrap(), 0.0);
        assert!(lorentz_length(&m, &[1, 0], &DmField::Constant(2.0)).is_err());
    }

    #[test]
    fn phi_without_interior_is_an_error() {
        let m = AnalyticMinkowski { coords: vec![vec![0.0, 0.0], vec![1.0, 0.0]] };
        assert!(phi_midpoint(&m, 0, 1).is_err());
    }
}
