//! Ground-truth generators: Minkowski sprinkles, lattices, causal cylinders,
//! products and scalings.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{BitMatrix, Square};
use crate::space::{default_ids, FiniteLorentzSpace, FiniteMetricSpace, FinitePOM, PointId};

/// Generator used for every seeded sample. ChaCha8 has a fixed, documented
/// output stream, so a seed reproduces the same points on every platform.
pub type ModelRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> ModelRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionKind {
    /// `|t| <= a`, every spatial coordinate in `[-half_width, half_width]`.
    Slab { a: f64, half_width: f64 },
    /// Causal diamond between `(-tau/2, 0)` and `(tau/2, 0)`.
    Diamond { tau: f64 },
    /// Axis-aligned box; `bounds[0]` is the time axis.
    Box { bounds: Vec<(f64, f64)> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub kind: RegionKind,
    /// Spatial dimension; spacetime dimension is `dim + 1`.
    pub dim: usize,
}

impl Region {
    pub fn slab(a: f64, half_width: f64, dim: usize) -> Self {
        Region { kind: RegionKind::Slab { a, half_width }, dim }
    }

    pub fn diamond(tau: f64, dim: usize) -> Self {
        Region { kind: RegionKind::Diamond { tau }, dim }
    }

    pub fn boxed(bounds: Vec<(f64, f64)>) -> Self {
        let dim = bounds.len().saturating_sub(1);
        Region { kind: RegionKind::Box { bounds }, dim }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match &self.kind {
            RegionKind::Slab { a, half_width } => *a > 0.0 && (*half_width > 0.0 || self.dim == 0),
            RegionKind::Diamond { tau } => *tau > 0.0,
            RegionKind::Box { bounds } => {
                bounds.len() == self.dim + 1 && bounds.iter().all(|(lo, hi)| hi > lo)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("degenerate region {self:?}")))
        }
    }

    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        match &self.kind {
            RegionKind::Slab { a, half_width } => {
                let mut b = vec![(-a, *a)];
                b.extend(std::iter::repeat((-half_width, *half_width)).take(self.dim));
                b
            }
            RegionKind::Diamond { tau } => vec![(-tau / 2.0, tau / 2.0); self.dim + 1],
            RegionKind::Box { bounds } => bounds.clone(),
        }
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        match &self.kind {
            RegionKind::Diamond { tau } => {
                let r = p[1..].iter().map(|x| x * x).sum::<f64>().sqrt();
                p[0].abs() + r <= tau / 2.0
            }
            _ => self.bounding_box().iter().zip(p).all(|((lo, hi), x)| lo <= x && x <= hi),
        }
    }

    pub fn volume(&self) -> f64 {
        match &self.kind {
            RegionKind::Diamond { tau } => {
                let n = self.dim as f64;
                let h = tau / 2.0;
                2.0 * unit_ball_volume(self.dim) * h.powf(n + 1.0) / (n + 1.0)
            }
            _ => self.bounding_box().iter().map(|(lo, hi)| hi - lo).product(),
        }
    }
}

/// Volume of the Euclidean unit ball in `R^n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let n = n as f64;
    std::f64::consts::PI.powf(n / 2.0) / statrs::function::gamma::gamma(n / 2.0 + 1.0)
}

#[inline]
pub fn mink(p: &[f64], q: &[f64]) -> f64 {
    let dt = q[0] - p[0];
    let dx2: f64 = p[1..].iter().zip(&q[1..]).map(|(a, b)| (b - a) * (b - a)).sum();
    let s2 = dt * dt - dx2;
    if s2 > 0.0 {
        s2.sqrt().copysign(dt)
    } else {
        0.0
    }
}

/// `±sqrt(dt^2 - |dx|^2)` on timelike pairs (sign by time order), else 0.
pub fn minkowski_sigma(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() || p.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "coordinate dimensions {} and {} differ",
            p.len(),
            q.len()
        )));
    }
    Ok(mink(p, q))
}

/// Poisson variate by sequential inversion. Large means are split into
/// chunks of at most 500 so that `exp(-lambda)` never underflows.
pub fn poisson_inversion<R: Rng>(rng: &mut R, lambda: f64) -> u64 {
    let mut remaining = lambda.max(0.0);
    let mut total = 0;
    while remaining > 0.0 {
        let l = remaining.min(500.0);
        remaining -= l;
        let u: f64 = rng.gen();
        let mut k = 0u64;
        let mut p = (-l).exp();
        let mut cdf = p;
        while u > cdf {
            k += 1;
            p *= l / k as f64;
            cdf += p;
            if p == 0.0 && cdf < u {
                break;
            }
        }
        total += k;
    }
    total
}

/// Poisson(density * volume) uniform points in `region`, sorted by time.
pub fn sprinkle_coords(region: &Region, density: f64, seed: u64) -> Result<Vec<Vec<f64>>> {
    region.validate()?;
    if !(density > 0.0) {
        return Err(Error::InvalidArgument("density must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let count = poisson_inversion(&mut rng, density * region.volume()) as usize;
    let bb = region.bounding_box();
    let mut pts = Vec::with_capacity(count);
    while pts.len() < count {
        let p: Vec<f64> = bb.iter().map(|(lo, hi)| lo + (hi - lo) * rng.gen::<f64>()).collect();
        if region.contains(&p) {
            pts.push(p);
        }
    }
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]));
    Ok(pts)
}

/// Minkowski space on explicit coordinates, labels set to the coordinates.
pub fn minkowski_space(coords: Vec<Vec<f64>>) -> Result<FiniteLorentzSpace> {
    let n = coords.len();
    if let Some(d) = coords.first().map(|c| c.len()) {
        if d == 0 || coords.iter().any(|c| c.len() != d) {
            return Err(Error::InvalidArgument("inconsistent coordinate dimensions".into()));
        }
    }
    let sigma = Square::from_fn(n, |i, j| mink(&coords[i], &coords[j]));
    FiniteLorentzSpace::from_sigma(sigma).with_labels(coords)
}

pub fn sprinkle(region: &Region, density: f64, seed: u64) -> Result<FiniteLorentzSpace> {
    minkowski_space(sprinkle_coords(region, density, seed)?)
}

/// Chronological order of Minkowski points, built without a sigma matrix.
pub fn minkowski_order(coords: &[Vec<f64>]) -> BitMatrix {
    let n = coords.len();
    let mut m = BitMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j && mink(&coords[i], &coords[j]) > 0.0 {
                m.set(i, j, true);
            }
        }
    }
    m
}

/// Sprinkle exported directly as an ordered measure space with weight
/// `1/density` per point; avoids the quadratic sigma matrix.
pub fn sprinkle_pom(region: &Region, density: f64, seed: u64) -> Result<(FinitePOM, Vec<Vec<f64>>)> {
    let coords = sprinkle_coords(region, density, seed)?;
    let n = coords.len();
    let pom = FinitePOM {
        points: default_ids(n),
        leq: minkowski_order(&coords),
        mu: vec![1.0 / density; n],
    };
    Ok((pom, coords))
}

/// `(1/n) Z^{1,dim}` with `|t| <= r` and every spatial `|x_k| <= s`, carrying
/// the exact causal relation (null pairs included).
pub fn lattice_nd(n: usize, r: f64, s: f64, dim: usize) -> Result<FiniteLorentzSpace> {
    if n == 0 || !(r >= 0.0) || !(s >= 0.0) {
        return Err(Error::InvalidArgument("lattice needs n >= 1 and r, s >= 0".into()));
    }
    let nf = n as f64;
    let it = (r * nf + 1e-9).floor() as i64;
    let js = (s * nf + 1e-9).floor() as i64;
    let mut grid: Vec<Vec<i64>> = Vec::new();
    let mut spatial: Vec<Vec<i64>> = vec![vec![]];
    for _ in 0..dim {
        spatial = spatial
            .into_iter()
            .flat_map(|v| {
                (-js..=js).map(move |j| {
                    let mut w = v.clone();
                    w.push(j);
                    w
                })
            })
            .collect();
    }
    for i in -it..=it {
        for x in &spatial {
            let mut p = vec![i];
            p.extend(x);
            grid.push(p);
        }
    }
    let m = grid.len();
    let interval = |a: &[i64], b: &[i64]| -> i64 {
        let dt = b[0] - a[0];
        dt * dt - a[1..].iter().zip(&b[1..]).map(|(x, y)| (y - x) * (y - x)).sum::<i64>()
    };
    let sigma = Square::from_fn(m, |a, b| {
        let q = interval(&grid[a], &grid[b]);
        if q > 0 {
            ((q as f64).sqrt() / nf).copysign((grid[b][0] - grid[a][0]) as f64)
        } else {
            0.0
        }
    });
    let causal = BitMatrix::from_fn(m, |a, b| grid[b][0] >= grid[a][0] && interval(&grid[a], &grid[b]) >= 0);
    let labels = grid.iter().map(|p| p.iter().map(|&k| k as f64 / nf).collect()).collect();
    FiniteLorentzSpace::from_sigma(sigma).with_causal(causal)?.with_labels(labels)
}

/// Two-dimensional lattice `L_{n,r}` truncated to `|x| <= s`.
pub fn lattice(n: usize, r: f64, s: f64) -> Result<FiniteLorentzSpace> {
    lattice_nd(n, r, s, 1)
}

/// Causal cylinder over `m` at the given times, time-major point order.
/// Labels are `(t, index in m)`.
pub fn causal_cylinder(m: &FiniteMetricSpace, times: &[f64]) -> Result<FiniteLorentzSpace> {
    if times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("non-finite time".into()));
    }
    let k = m.len();
    let pts: Vec<(f64, usize)> =
        times.iter().flat_map(|&t| (0..k).map(move |p| (t, p))).collect();
    let n = pts.len();
    let sigma = Square::from_fn(n, |a, b| {
        let ((t, p), (s, q)) = (pts[a], pts[b]);
        let d = m.at(p, q);
        let dt = s - t;
        if dt.abs() >= d && dt != 0.0 {
            (dt * dt - d * d).max(0.0).sqrt().copysign(dt)
        } else {
            0.0
        }
    });
    let causal = BitMatrix::from_fn(n, |a, b| {
        let ((t, p), (s, q)) = (pts[a], pts[b]);
        a == b || (s - t >= m.at(p, q) && !(s == t && p != q && m.at(p, q) == 0.0))
    });
    let labels = pts.iter().map(|&(t, p)| vec![t, p as f64]).collect();
    let ids = (0..n).map(|i| PointId::Int(i as i64)).collect();
    FiniteLorentzSpace::new(ids, sigma)?.with_causal(causal)?.with_labels(labels)
}

/// `(X × Y, p(sigma, d))` with `p = ±sqrt(sigma^2 - d^2)` when `|sigma| > d`.
/// Point order is `x`-major; labels are `(x, y)` indices.
pub fn product(x: &FiniteLorentzSpace, y: &FiniteMetricSpace) -> Result<FiniteLorentzSpace> {
    let (nx, ny) = (x.len(), y.len());
    let n = nx * ny;
    let sigma = Square::from_fn(n, |a, b| {
        let (x1, y1, x2, y2) = (a / ny, a % ny, b / ny, b % ny);
        let s = x.s(x1, x2);
        let d = y.at(y1, y2);
        if s.abs() > d {
            (s * s - d * d).sqrt().copysign(s)
        } else {
            0.0
        }
    });
    let labels = (0..n).map(|a| vec![(a / ny) as f64, (a % ny) as f64]).collect();
    FiniteLorentzSpace::from_sigma(sigma).with_labels(labels)
}

/// `(X, r sigma)`.
pub fn scale(x: &FiniteLorentzSpace, r: f64) -> Result<FiniteLorentzSpace> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("scale factor {r} must be positive")));
    }
    let mut out = x.clone();
    for v in out.sigma.as_mut_slice() {
        *v *= r;
    }
    Ok(out)
}

/// Metric of a regular `k`-gon inscribed in the unit circle, arc length.
pub fn circle_net(k: usize) -> FiniteMetricSpace {
    let step = std::f64::consts::TAU / k as f64;
    let d = Square::from_fn(k, |i, j| {
        let m = (i as i64 - j as i64).unsigned_abs() as usize;
        step * m.min(k - m) as f64
    });
    FiniteMetricSpace::from_matrix(d)
}

/// Euclidean metric on explicit coordinates.
pub fn euclidean_metric(coords: &[Vec<f64>]) -> FiniteMetricSpace {
    let d = Square::from_fn(coords.len(), |i, j| euclid(&coords[i], &coords[j]));
    FiniteMetricSpace::from_matrix(d)
}

pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Conformally flat `(t, x)` plane with metric `(-dt^2 + dx^2)/|t|`.
///
/// Maximal curves conserve `p = |t|^{-1/2} x' / sqrt(1 - x'^2)`; with
/// `V = p sqrt(T)` the spatial drift and proper time accumulated between
/// time 0 and `|t| = T` are `(V sqrt(1+V^2) - asinh V)/p^2` and
/// `2 asinh(V)/p`.
pub mod conformal_pole {
    fn drift(p: f64, big_t: f64) -> f64 {
        let v = p * big_t.sqrt();
        if v < 1e-4 {
            // series: 2 p T^{3/2} / 3 (1 - 3 V^2 / 10)
            2.0 * p * big_t.powf(1.5) / 3.0 * (1.0 - 0.3 * v * v)
        } else {
            (v * (1.0 + v * v).sqrt() - v.asinh()) / (p * p)
        }
    }

    fn proper(p: f64, big_t: f64) -> f64 {
        let v = p * big_t.sqrt();
        if v < 1e-4 {
            2.0 * big_t.sqrt() * (1.0 - v * v / 6.0)
        } else {
            2.0 * v.asinh() / p
        }
    }

    /// Accumulated (drift, proper time) from `t1` to `t2 > t1` at momentum `p`.
    fn leg(p: f64, t1: f64, t2: f64) -> (f64, f64) {
        if t1 >= 0.0 {
            (drift(p, t2) - drift(p, t1), proper(p, t2) - proper(p, t1))
        } else if t2 <= 0.0 {
            (drift(p, -t1) - drift(p, -t2), proper(p, -t1) - proper(p, -t2))
        } else {
            (drift(p, -t1) + drift(p, t2), proper(p, -t1) + proper(p, t2))
        }
    }

    /// Signed Lorentzian distance between `(t1, x1)` and `(t2, x2)`.
    pub fn sigma(a: [f64; 2], b: [f64; 2]) -> f64 {
        let (lo, hi, sign) = if a[0] <= b[0] { (a, b, 1.0) } else { (b, a, -1.0) };
        let dt = hi[0] - lo[0];
        let dx = (hi[1] - lo[1]).abs();
        if dt <= dx {
            return 0.0;
        }
        if dx == 0.0 {
            return sign * leg(0.0, lo[0], hi[0]).1;
        }
        let (mut l, mut h) = (0.0f64, 1.0f64);
        while leg(h, lo[0], hi[0]).0 < dx {
            h *= 2.0;
            if h > 1e300 {
                return 0.0;
            }
        }
        for _ in 0..200 {
            let m = 0.5 * (l + h);
            if leg(m, lo[0], hi[0]).0 < dx {
                l = m;
            } else {
                h = m;
            }
            if h - l <= 1e-15 * h {
                break;
            }
        }
        sign * leg(0.5 * (l + h), lo[0], hi[0]).1
    }

    /// Finite model on explicit `(t, x)` coordinates.
    pub fn space(coords: Vec<[f64; 2]>) -> crate::error::Result<crate::space::FiniteLorentzSpace> {
        let n = coords.len();
        let s = crate::matrix::Square::from_fn(n, |i, j| if i == j { 0.0 } else { sigma(coords[i], coords[j]) });
        crate::space::FiniteLorentzSpace::from_sigma(s)
            .with_labels(coords.iter().map(|c| c.to_vec()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{validate_lorentz, DEFAULT_TOL};

    #[test]
    fn minkowski_examples() {
        assert_eq!(minkowski_sigma(&[0.0, 0.0], &[1.0, 0.0]).unwrap(), 1.0);
        assert_eq!(minkowski_sigma(&[0.0, 0.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(minkowski_sigma(&[0.0, 0.0], &[2.0, 1.0]).unwrap(), 3f64.sqrt());
        assert_eq!(minkowski_sigma(&[1.0, 0.0], &[0.0, 0.0]).unwrap(), -1.0);
        assert!(minkowski_sigma(&[0.0], &[0.0, 1.0]).is_err());
    }

    #[test]
    fn lattice_counts_and_null_pairs() {
        let l = lattice(1, 1.0, 1.0).unwrap();
        assert_eq!(l.len(), 9);
        let c = l.causal.as_ref().unwrap();
        let lab = l.labels.as_ref().unwrap();
        let a = lab.iter().position(|p| p == &vec![-1.0, -1.0]).unwrap();
        let b = lab.iter().position(|p| p == &vec![0.0, 0.0]).unwrap();
        assert!(c.get(a, b));
        assert_eq!(l.s(a, b), 0.0);
        assert!(validate_lorentz(&l, DEFAULT_TOL).unwrap().is_valid());
    }

    #[test]
    fn cylinder_small_cases() {
        let one = FiniteMetricSpace::from_matrix(Square::filled(1, 0.0));
        let c = causal_cylinder(&one, &[0.0, 1.0]).unwrap();
        assert_eq!(c.s(0, 1), 1.0);
        let two = FiniteMetricSpace::from_matrix(Square::from_rows(vec![vec![0.0, 2.0], vec![2.0, 0.0]]).unwrap());
        let c = causal_cylinder(&two, &[0.0, 1.0]).unwrap();
        assert_eq!(c.s(0, 3), 0.0);
        assert!(!c.causal.as_ref().unwrap().get(0, 3));
    }

    #[test]
    fn product_formula() {
        let x = FiniteLorentzSpace::from_sigma(Square::from_rows(vec![vec![0.0, 2.0], vec![-2.0, 0.0]]).unwrap());
        let y = FiniteMetricSpace::from_matrix(Square::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap());
        let p = product(&x, &y).unwrap();
        // (x0,y0) -> (x1,y1)
        assert!((p.s(0, 3) - 3f64.sqrt()).abs() < 1e-15);
        assert!((p.s(3, 0) + 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn scale_rejects_nonpositive() {
        let x = FiniteLorentzSpace::from_sigma(Square::filled(1, 0.0));
        assert!(scale(&x, 0.0).is_err());
        assert_eq!(scale(&x, 1.0).unwrap(), x);
    }

    #[test]
    fn poisson_small_mean_matches_moments() {
        let mut rng = rng_from_seed(7);
        let draws: Vec<f64> = (0..20000).map(|_| poisson_inversion(&mut rng, 3.5) as f64).collect();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / draws.len() as f64;
        assert!((mean - 3.5).abs() < 0.05, "{mean}");
        assert!((var - 3.5).abs() < 0.15, "{var}");
    }

    #[test]
    fn conformal_vertical_closed_form() {
        use conformal_pole::sigma;
        assert!((sigma([0.0, 0.3], [0.49, 0.3]) - 1.4).abs() < 1e-12);
        assert!((sigma([-0.25, 0.0], [0.25, 0.0]) - 2.0).abs() < 1e-12);
        assert_eq!(sigma([0.0, 0.0], [0.1, 0.2]), 0.0);
    }

    #[test]
    fn conformal_tilted_leg_is_shorter_than_vertical() {
        use conformal_pole::sigma;
        let v = sigma([0.1, 0.0], [0.9, 0.0]);
        let t = sigma([0.1, 0.0], [0.9, 0.3]);
        assert!(t > 0.0 && t < v);
    }
}
