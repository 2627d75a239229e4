//! Correspondences, distortions and Gromov-Hausdorff type distances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Square;
use crate::models::euclid;
use crate::space::{boundary_sets, tdiam, FiniteLorentzSpace, FiniteMetricSpace};

/// Left- and right-total relation between `0..nx` and `0..ny`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    pub nx: usize,
    pub ny: usize,
    /// Sorted, duplicate-free.
    pub pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(nx: usize, ny: usize, mut pairs: Vec<(usize, usize)>) -> Result<Self> {
        pairs.sort_unstable();
        pairs.dedup();
        let r = Correspondence { nx, ny, pairs };
        r.check()?;
        Ok(r)
    }

    pub fn identity(n: usize) -> Self {
        Correspondence { nx: n, ny: n, pairs: (0..n).map(|i| (i, i)).collect() }
    }

    /// `graph(f) ∪ graph(g)^{-1}` for `f: X -> Y`, `g: Y -> X`.
    pub fn from_maps(f: &[usize], g: &[usize]) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = f.iter().enumerate().map(|(x, &y)| (x, y)).collect();
        pairs.extend(g.iter().enumerate().map(|(y, &x)| (x, y)));
        Correspondence::new(f.len(), g.len(), pairs)
    }

    pub fn check(&self) -> Result<()> {
        let mut left = vec![false; self.nx];
        let mut right = vec![false; self.ny];
        for &(x, y) in &self.pairs {
            if x >= self.nx || y >= self.ny {
                return Err(Error::InvalidCorrespondence(format!("pair ({x}, {y}) out of range")));
            }
            left[x] = true;
            right[y] = true;
        }
        if let Some(x) = left.iter().position(|b| !b) {
            return Err(Error::InvalidCorrespondence(format!("X point {x} unmatched")));
        }
        if let Some(y) = right.iter().position(|b| !b) {
            return Err(Error::InvalidCorrespondence(format!("Y point {y} unmatched")));
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        let mut pairs: Vec<(usize, usize)> = self.pairs.iter().map(|&(x, y)| (y, x)).collect();
        pairs.sort_unstable();
        Correspondence { nx: self.ny, ny: self.nx, pairs }
    }
}

/// `|a - b|` with equal infinities counted as agreeing.
#[inline]
fn gap(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

/// Distortion of `r` between two distance-like matrices.
pub fn distortion(r: &Correspondence, dx: &Square<f64>, dy: &Square<f64>) -> Result<f64> {
    r.check()?;
    if dx.n() != r.nx || dy.n() != r.ny {
        return Err(Error::InvalidCorrespondence("matrix sizes do not match the relation".into()));
    }
    let mut best = 0.0f64;
    for (k, &(x, y)) in r.pairs.iter().enumerate() {
        let (rx, ry) = (dx.row(x), dy.row(y));
        for &(x2, y2) in &r.pairs[k + 1..] {
            best = best.max(gap(rx[x2], ry[y2]));
        }
        best = best.max(gap(rx[x], ry[y]));
    }
    Ok(best)
}

pub fn dist_minus(r: &Correspondence, x: &FiniteLorentzSpace, y: &FiniteLorentzSpace) -> Result<f64> {
    distortion(r, &x.sigma, &y.sigma)
}

/// `d^+(x, x') = sup_z |sigma(x, z) - sigma(x', z)|`.
pub fn d_plus_metric(x: &FiniteLorentzSpace) -> FiniteMetricSpace {
    FiniteMetricSpace { points: x.points.clone(), d: crate::matrix::sup_profile_metric(&x.sigma, None) }
}

pub fn dist_plus(r: &Correspondence, x: &FiniteLorentzSpace, y: &FiniteLorentzSpace) -> Result<f64> {
    distortion(r, &d_plus_metric(x).d, &d_plus_metric(y).d)
}

/// Relational composition `r2 ∘ r1`.
pub fn compose(r1: &Correspondence, r2: &Correspondence) -> Result<Correspondence> {
    if r1.ny != r2.nx {
        return Err(Error::InvalidCorrespondence("middle spaces differ".into()));
    }
    let mut by_mid: Vec<Vec<usize>> = vec![Vec::new(); r2.nx];
    for &(y, z) in &r2.pairs {
        by_mid[y].push(z);
    }
    let pairs = r1
        .pairs
        .iter()
        .flat_map(|&(x, y)| by_mid[y].iter().map(move |&z| (x, z)))
        .collect();
    Correspondence::new(r1.nx, r2.ny, pairs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GhResult {
    /// Half the distortion of the witness.
    pub value: f64,
    pub witness: Correspondence,
    pub method: String,
    pub budget: f64,
}

pub const DEFAULT_BUDGET: f64 = 1e8;

/// Exact `½ min dist` over `(f, g)` graph unions by depth-first branch and
/// bound in lexicographic order of `(f, g)`; the first minimizer found is
/// kept, so ties resolve to the lexicographically smallest encoding.
pub fn gh_exact(dx: &Square<f64>, dy: &Square<f64>, budget: f64) -> Result<GhResult> {
    let (nx, ny) = (dx.n(), dy.n());
    if nx == 0 || ny == 0 {
        if nx == ny {
            return Ok(GhResult {
                value: 0.0,
                witness: Correspondence { nx, ny, pairs: vec![] },
                method: "exact".into(),
                budget,
            });
        }
        return Err(Error::InvalidArgument("no correspondence with an empty space".into()));
    }
    let needed = (ny as f64).powi(nx as i32) * (nx as f64).powi(ny as i32);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let m = nx + ny;
    let mut st = Search {
        dx,
        dy,
        nx,
        pairs: Vec::with_capacity(m),
        best: f64::INFINITY,
        best_pairs: Vec::new(),
    };
    st.descend(0, 0.0);
    let f: Vec<usize> = st.best_pairs[..nx].iter().map(|p| p.1).collect();
    let g: Vec<usize> = st.best_pairs[nx..].iter().map(|p| p.0).collect();
    Ok(GhResult {
        value: st.best / 2.0,
        witness: Correspondence::from_maps(&f, &g)?,
        method: "exact".into(),
        budget,
    })
}

struct Search<'a> {
    dx: &'a Square<f64>,
    dy: &'a Square<f64>,
    nx: usize,
    pairs: Vec<(usize, usize)>,
    best: f64,
    best_pairs: Vec<(usize, usize)>,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize, current: f64) {
        let (nx, ny) = (self.nx, self.dy.n());
        if depth == nx + ny {
            if current < self.best {
                self.best = current;
                self.best_pairs = self.pairs.clone();
            }
            return;
        }
        let range = if depth < nx { ny } else { nx };
        for v in 0..range {
            let pair = if depth < nx { (depth, v) } else { (v, depth - nx) };
            let (rx, ry) = (self.dx.row(pair.0), self.dy.row(pair.1));
            let mut worst = current.max(gap(rx[pair.0], ry[pair.1]));
            for &(a, b) in &self.pairs {
                if worst >= self.best {
                    break;
                }
                worst = worst.max(gap(rx[a], ry[b]));
            }
            if worst >= self.best {
                continue;
            }
            self.pairs.push(pair);
            self.descend(depth + 1, worst);
            self.pairs.pop();
        }
    }
}

pub fn ghdist_minus_exact(x: &FiniteLorentzSpace, y: &FiniteLorentzSpace, budget: f64) -> Result<GhResult> {
    gh_exact(&x.sigma, &y.sigma, budget)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealParams {
    pub steps: u64,
    pub cooling: f64,
    /// Initial temperature as a fraction of the starting distortion.
    pub t0_fraction: f64,
    /// Independent chains; the best is kept.
    pub chains: usize,
}

impl Default for AnnealParams {
    fn default() -> Self {
        AnnealParams { steps: 100_000, cooling: 0.999, t0_fraction: 0.5, chains: 4 }
    }
}

/// Simulated annealing over `(f, g)`; returns the best correspondence seen.
pub fn gh_anneal(dx: &Square<f64>, dy: &Square<f64>, params: &AnnealParams, seed: u64) -> Result<GhResult> {
    let (nx, ny) = (dx.n(), dy.n());
    if nx == 0 || ny == 0 {
        return gh_exact(dx, dy, 1.0);
    }
    if !(params.cooling > 0.0 && params.cooling <= 1.0) || params.chains == 0 {
        return Err(Error::InvalidArgument("cooling must lie in (0, 1] and chains >= 1".into()));
    }
    use rayon::prelude::*;
    let results: Vec<(f64, Vec<usize>)> = (0..params.chains)
        .into_par_iter()
        .map(|c| anneal_chain(dx, dy, params, seed, c as u64))
        .collect();
    let (best, state) = results
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 { b } else { a })
        .expect("at least one chain");
    let witness = Correspondence::from_maps(&state[..nx], &state[nx..])?;
    Ok(GhResult { value: best / 2.0, witness, method: "anneal".into(), budget: params.steps as f64 })
}

fn anneal_chain(dx: &Square<f64>, dy: &Square<f64>, params: &AnnealParams, seed: u64, chain: u64) -> (f64, Vec<usize>) {
    let (nx, ny) = (dx.n(), dy.n());
    let m = nx + ny;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chain);
    // state[k] is the image of pair k: f for k < nx, g afterwards
    let mut state: Vec<usize> =
        (0..m).map(|k| if k < nx { rng.gen_range(0..ny) } else { rng.gen_range(0..nx) }).collect();
    let pair = |st: &[usize], k: usize| if k < nx { (k, st[k]) } else { (st[k], k - nx) };
    let entry = |st: &[usize], k: usize, l: usize| {
        let (a, b) = pair(st, k);
        let (c, d) = pair(st, l);
        gap(dx.at(a, c), dy.at(b, d))
    };
    let row_max = |st: &[usize], k: usize| (0..m).fold(0.0f64, |acc, l| acc.max(entry(st, k, l)));
    let mut rows: Vec<f64> = (0..m).map(|k| row_max(&state, k)).collect();
    let energy = |rows: &[f64]| rows.iter().fold(0.0f64, |a, &b| a.max(b));
    let mut e = energy(&rows);
    let mut best = e;
    let mut best_state = state.clone();
    let mut temp = params.t0_fraction * if e.is_finite() { e } else { 1.0 };
    let mut old_row = vec![0.0; m];
    let mut saved_rows = vec![0.0; m];
    for _ in 0..params.steps {
        if best == 0.0 {
            break;
        }
        let k = rng.gen_range(0..m);
        let range = if k < nx { ny } else { nx };
        if range < 2 {
            temp *= params.cooling;
            continue;
        }
        let mut v = rng.gen_range(0..range - 1);
        if v >= state[k] {
            v += 1;
        }
        for l in 0..m {
            old_row[l] = entry(&state, k, l);
        }
        saved_rows.copy_from_slice(&rows);
        let prev = state[k];
        state[k] = v;
        let mut new_k = 0.0f64;
        for l in 0..m {
            let nv = entry(&state, k, l);
            new_k = new_k.max(nv);
            if l == k {
                continue;
            }
            if nv >= rows[l] {
                rows[l] = nv;
            } else if old_row[l] >= rows[l] {
                rows[l] = row_max(&state, l);
            }
        }
        rows[k] = new_k;
        let e_new = energy(&rows);
        let delta = if e_new == e { 0.0 } else { e_new - e };
        let accept = delta <= 0.0 || (temp > 0.0 && rng.gen::<f64>() < (-delta / temp).exp());
        if accept {
            e = e_new;
            if e < best {
                best = e;
                best_state.copy_from_slice(&state);
            }
        } else {
            state[k] = prev;
            rows.copy_from_slice(&saved_rows);
        }
        temp *= params.cooling;
    }
    (best, best_state)
}

pub fn ghdist_minus_anneal(
    x: &FiniteLorentzSpace,
    y: &FiniteLorentzSpace,
    params: &AnnealParams,
    seed: u64,
) -> Result<GhResult> {
    gh_anneal(&x.sigma, &y.sigma, params, seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum GhMode {
    Exact { budget: f64 },
    Anneal { params: AnnealParams, seed: u64 },
}

pub fn gh_metric(dx: &Square<f64>, dy: &Square<f64>, mode: &GhMode) -> Result<GhResult> {
    match mode {
        GhMode::Exact { budget } => gh_exact(dx, dy, *budget),
        GhMode::Anneal { params, seed } => gh_anneal(dx, dy, params, *seed),
    }
}

pub fn ghdist_minus(x: &FiniteLorentzSpace, y: &FiniteLorentzSpace, mode: &GhMode) -> Result<GhResult> {
    gh_metric(&x.sigma, &y.sigma, mode)
}

/// Metric GH distance between the derived `d^+` spaces.
pub fn ghdist_plus(x: &FiniteLorentzSpace, y: &FiniteLorentzSpace, mode: &GhMode) -> Result<GhResult> {
    gh_metric(&d_plus_metric(x).d, &d_plus_metric(y).d, mode)
}

/// Pairs whose coordinate labels lie at Euclidean distance `< 2/n`.
pub fn lattice_correspondence(
    lattice: &FiniteLorentzSpace,
    reference: &FiniteLorentzSpace,
    n: usize,
) -> Result<Correspondence> {
    let la = lattice.labels.as_ref().ok_or_else(|| Error::Missing("lattice labels".into()))?;
    let lb = reference.labels.as_ref().ok_or_else(|| Error::Missing("reference labels".into()))?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let radius = 2.0 / n as f64;
    let mut pairs = Vec::new();
    for (i, a) in la.iter().enumerate() {
        for (j, b) in lb.iter().enumerate() {
            if euclid(a, b) < radius {
                pairs.push((i, j));
            }
        }
    }
    Correspondence::new(la.len(), lb.len(), pairs)
}

/// Points whose future reach to `∂^+X` and past reach to `∂^-X` are both at
/// least `eps`.
pub fn k_epsilon(x: &FiniteLorentzSpace, eps: f64, tol: f64) -> Result<FiniteLorentzSpace> {
    let td = tdiam(x, tol)?.value;
    if !(eps > 0.0 && eps < td / 2.0) {
        return Err(Error::InvalidArgument(format!("eps {eps} outside (0, tdiam/2 = {})", td / 2.0)));
    }
    let (past, future) = boundary_sets(x, tol);
    let keep: Vec<usize> = (0..x.len())
        .filter(|&p| {
            let up = future.iter().fold(0.0f64, |m, &y| m.max(x.s(p, y)));
            let down = past.iter().fold(0.0f64, |m, &q| m.max(x.s(q, p)));
            up >= eps && down >= eps
        })
        .collect();
    Ok(x.subspace(&keep))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(s: f64) -> FiniteLorentzSpace {
        FiniteLorentzSpace::from_sigma(Square::from_rows(vec![vec![0.0, s], vec![-s, 0.0]]).unwrap())
    }

    #[test]
    fn identity_has_zero_distortion() {
        let x = pair(1.0);
        assert_eq!(dist_minus(&Correspondence::identity(2), &x, &x).unwrap(), 0.0);
        assert_eq!(dist_plus(&Correspondence::identity(2), &x, &x).unwrap(), 0.0);
    }

    #[test]
    fn two_point_pairing() {
        let r = Correspondence::identity(2);
        assert_eq!(dist_minus(&r, &pair(1.0), &pair(2.0)).unwrap(), 1.0);
        assert_eq!(ghdist_minus_exact(&pair(1.0), &pair(2.0), DEFAULT_BUDGET).unwrap().value, 0.5);
    }

    #[test]
    fn invalid_relation_is_rejected() {
        assert!(Correspondence::new(2, 2, vec![(0, 0)]).is_err());
        assert!(Correspondence::new(1, 1, vec![(0, 3)]).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let x = FiniteLorentzSpace::from_sigma(Square::filled(12, 0.0));
        assert!(matches!(ghdist_minus_exact(&x, &x, 1e8), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn compose_identities() {
        let i = Correspondence::identity(3);
        assert_eq!(compose(&i, &i).unwrap(), i);
    }
}
