//! Profile metrics `Φ_{f,p}`, the `D_r` family, recovery identities,
//! chronology detection and the β/γ functors on ordered measure spaces.
//!
//! Cone indicators use open boundaries: `χ_{(0,∞)}(0) = χ_{(-∞,0)}(0) = 0`,
//! so `κ_p^+` is the chronological future of `p` and `κ_p^-` its past.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{and_weight, ones, weight, BitMatrix, BitSet, Square};
use crate::space::{chronological_pairs, FiniteLorentzSpace, FiniteMetricSpace, FinitePOM, PointId};

/// Chronological futures/pasts with point weights.
#[derive(Clone, Debug)]
pub struct Cones {
    pub points: Vec<PointId>,
    /// Row `p` is `{z : p ≪ z}`.
    pub future: BitMatrix,
    /// Row `p` is `{z : z ≪ p}`.
    pub past: BitMatrix,
    pub mu: Vec<f64>,
}

impl Cones {
    pub fn from_space(space: &FiniteLorentzSpace, mu: Vec<f64>, tol: f64) -> Result<Self> {
        if mu.len() != space.len() {
            return Err(Error::Malformed("weight count mismatch".into()));
        }
        let future = chronological_pairs(space, tol);
        let past = future.transpose();
        Ok(Cones { points: space.points.clone(), future, past, mu })
    }

    /// Cones of the strict order of a POM.
    pub fn from_pom(pom: &FinitePOM) -> Self {
        let future = pom.leq.strict();
        let past = future.transpose();
        Cones { points: pom.points.clone(), future, past, mu: pom.mu.clone() }
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    /// Sign of sigma read off the cones.
    #[inline]
    pub fn sign(&self, p: usize, z: usize) -> f64 {
        if self.future.get(p, z) {
            1.0
        } else if self.past.get(p, z) {
            -1.0
        } else {
            0.0
        }
    }

    #[inline]
    pub fn inner(&self, a: &[u64], b: &[u64]) -> f64 {
        and_weight(a, b, &self.mu)
    }

    /// `(|u^+|^2, |u^-|^2, <u^+, u^->)` for the pair `(p, q)`.
    pub fn split_terms(&self, p: usize, q: usize) -> (f64, f64, f64) {
        let (fp, fq, pp, pq) = (self.future.row(p), self.future.row(q), self.past.row(p), self.past.row(q));
        let plus = weight(fp, &self.mu) + weight(fq, &self.mu) - 2.0 * self.inner(fp, fq);
        let minus = weight(pp, &self.mu) + weight(pq, &self.mu) - 2.0 * self.inner(pp, pq);
        let cross = self.inner(fp, pp) - self.inner(fp, pq) - self.inner(fq, pp) + self.inner(fq, pq);
        (plus.max(0.0), minus.max(0.0), cross)
    }

    /// `D_r(p, q)^2` from the split terms.
    pub fn dr_squared(&self, p: usize, q: usize, r: f64) -> f64 {
        let (a, b) = ((1.0 + r) / 2.0, (1.0 - r) / 2.0);
        let (plus, minus, cross) = self.split_terms(p, q);
        (a * a * plus - 2.0 * a * b * cross + b * b * minus).max(0.0)
    }
}

/// `F_r = -((1-r)/2) χ_{(-∞,0)} + ((1+r)/2) χ_{(0,∞)}`.
pub fn f_r(r: f64) -> impl Fn(f64) -> f64 + Copy {
    move |s: f64| {
        if s > 0.0 {
            (1.0 + r) / 2.0
        } else if s < 0.0 {
            -(1.0 - r) / 2.0
        } else {
            0.0
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProfileNorm<'a> {
    /// Weighted L^2 with the given point weights.
    L2(&'a [f64]),
    Sup,
}

/// `d_{f,p}(x, y) = |f∘σ_x - f∘σ_y|` in the chosen norm.
pub fn phi_fp(space: &FiniteLorentzSpace, f: impl Fn(f64) -> f64 + Sync, norm: ProfileNorm<'_>) -> Result<FiniteMetricSpace> {
    let n = space.len();
    if let ProfileNorm::L2(mu) = norm {
        if mu.len() != n {
            return Err(Error::Malformed("weight count mismatch".into()));
        }
    }
    let prof = space.sigma.map(|&s| f(s));
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let pi = prof.row(i);
            (0..n)
                .map(|j| {
                    let pj = prof.row(j);
                    match norm {
                        ProfileNorm::Sup => pi.iter().zip(pj).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())),
                        ProfileNorm::L2(mu) => pi
                            .iter()
                            .zip(pj)
                            .zip(mu)
                            .map(|((a, b), w)| w * (a - b) * (a - b))
                            .sum::<f64>()
                            .sqrt(),
                    }
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::new(space.points.clone(), Square::from_rows(rows)?)
}

/// `Φ_{f,p}` on a space given only through its cones (sign profiles).
pub fn phi_sign_l2(cones: &Cones, f: impl Fn(f64) -> f64) -> FiniteMetricSpace {
    let n = cones.len();
    let prof = Square::from_fn(n, |p, z| f(cones.sign(p, z)));
    let d = Square::from_fn(n, |i, j| {
        prof.row(i)
            .iter()
            .zip(prof.row(j))
            .zip(&cones.mu)
            .map(|((a, b), w)| w * (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    });
    FiniteMetricSpace { points: cones.points.clone(), d }
}

/// The `D_r` pseudometric.
pub fn d_r(cones: &Cones, r: f64) -> Result<FiniteMetricSpace> {
    if !(-1.0..=1.0).contains(&r) {
        return Err(Error::InvalidArgument(format!("r = {r} outside [-1, 1]")));
    }
    let n = cones.len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|p| (0..n).map(|q| if p == q { 0.0 } else { cones.dr_squared(p, q, r).sqrt() }).collect())
        .collect();
    Ok(FiniteMetricSpace { points: cones.points.clone(), d: Square::from_rows(rows)? })
}

/// `(D_{-1/2}, D_0, D_{1/2})`.
#[derive(Clone, Debug)]
pub struct DrTriple {
    pub minus_half: FiniteMetricSpace,
    pub zero: FiniteMetricSpace,
    pub plus_half: FiniteMetricSpace,
}

pub fn dr_triple(cones: &Cones) -> DrTriple {
    DrTriple {
        minus_half: d_r(cones, -0.5).expect("r in range"),
        zero: d_r(cones, 0.0).expect("r in range"),
        plus_half: d_r(cones, 0.5).expect("r in range"),
    }
}

/// `D_r(p, q)^2` evaluated directly as a weighted sum over profile entries.
pub fn dr_squared_direct(cones: &Cones, p: usize, q: usize, r: f64) -> f64 {
    let f = f_r(r);
    (0..cones.len())
        .map(|z| {
            let d = f(cones.sign(p, z)) - f(cones.sign(q, z));
            cones.mu[z] * d * d
        })
        .sum()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryResiduals {
    /// `| |u^+|^2 - (D_{-1/2}^2 + 3 D_{1/2}^2 - 3 D_0^2) |`.
    pub plus: f64,
    /// `| |u^-|^2 - (D_{1/2}^2 + 3 D_{-1/2}^2 - 3 D_0^2) |`.
    pub minus: f64,
}

/// Recovery identities, with `|u^±|^2` from the cone indicators and the
/// `D_r` values from direct profile sums.
pub fn check_recovery_identity(cones: &Cones, p: usize, q: usize) -> RecoveryResiduals {
    let mut up = 0.0;
    let mut um = 0.0;
    for z in 0..cones.len() {
        let dp = cones.future.get(p, z) as i32 - cones.future.get(q, z) as i32;
        let dm = cones.past.get(p, z) as i32 - cones.past.get(q, z) as i32;
        up += cones.mu[z] * (dp * dp) as f64;
        um += cones.mu[z] * (dm * dm) as f64;
    }
    let dmh = dr_squared_direct(cones, p, q, -0.5);
    let d0 = dr_squared_direct(cones, p, q, 0.0);
    let dph = dr_squared_direct(cones, p, q, 0.5);
    RecoveryResiduals {
        plus: (up - (dmh + 3.0 * dph - 3.0 * d0)).abs(),
        minus: (um - (dph + 3.0 * dmh - 3.0 * d0)).abs(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarvestReport {
    /// `4 D_0^2 - D_{-1}^2 - D_1^2`.
    pub value: f64,
    /// `2(<κ_p^+, κ_q^-> + <κ_q^+, κ_p^->) - 2<κ_p^+, κ_p^-> - 2<κ_q^+, κ_q^->`.
    pub direct: f64,
    /// `(<κ_p^+, κ_p^->, <κ_q^+, κ_q^->)`, zero on irreflexive chronology.
    pub self_terms: (f64, f64),
}

impl HarvestReport {
    pub fn residual(&self) -> f64 {
        (self.value - self.direct).abs()
    }
}

pub fn harvest(cones: &Cones, p: usize, q: usize) -> HarvestReport {
    let value = 4.0 * dr_squared_direct(cones, p, q, 0.0)
        - dr_squared_direct(cones, p, q, -1.0)
        - dr_squared_direct(cones, p, q, 1.0);
    let (fp, fq, pp, pq) = (cones.future.row(p), cones.future.row(q), cones.past.row(p), cones.past.row(q));
    let spp = cones.inner(fp, pp);
    let sqq = cones.inner(fq, pq);
    let direct = 2.0 * (cones.inner(fp, pq) + cones.inner(fq, pp)) - 2.0 * spp - 2.0 * sqq;
    HarvestReport { value, direct, self_terms: (spp, sqq) }
}

pub fn harvest_value(cones: &Cones, p: usize, q: usize) -> f64 {
    harvest(cones, p, q).value
}

/// Symmetrized chronology detector: `4 D_0^2 - D_{-1}^2 - D_1^2 > tol`.
pub fn detect_chron(cones: &Cones, p: usize, q: usize, tol: f64) -> bool {
    p != q && harvest_value(cones, p, q) > tol
}

/// Detector over all pairs, using the split-term form `-2 <u^+, u^->`.
pub fn detect_matrix(cones: &Cones, tol: f64) -> BitMatrix {
    let n = cones.len();
    let rows: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map(|p| {
            (0..n)
                .filter(|&q| q != p && -2.0 * cones.split_terms(p, q).2 > tol)
                .collect()
        })
        .collect();
    let mut m = BitMatrix::new(n);
    for (p, row) in rows.into_iter().enumerate() {
        for q in row {
            m.set(p, q, true);
        }
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    Future,
    Past,
}

/// Orientation of a chain via the monotonicity of `μ(I^-(c_k))`.
pub fn orient_chain(cones: &Cones, chain: &[usize]) -> Result<Orientation> {
    if chain.len() < 2 {
        return Err(Error::AmbiguousOrientation("a chain needs at least two points".into()));
    }
    for w in chain.windows(2) {
        if !(cones.future.get(w[0], w[1]) || cones.future.get(w[1], w[0])) {
            return Err(Error::InvalidArgument(format!("{} and {} are not related", w[0], w[1])));
        }
    }
    let prof: Vec<f64> = chain.iter().map(|&c| weight(cones.past.row(c), &cones.mu)).collect();
    let up = prof.windows(2).all(|w| w[0] <= w[1]);
    let down = prof.windows(2).all(|w| w[0] >= w[1]);
    match (up, down) {
        (true, false) => Ok(Orientation::Future),
        (false, true) => Ok(Orientation::Past),
        (true, true) => Err(Error::AmbiguousOrientation("constant past-volume profile".into())),
        _ => Err(Error::AmbiguousOrientation("non-monotone past-volume profile".into())),
    }
}

fn is_chain_set(pom: &FinitePOM, up: &BitMatrix, set: &BitSet) -> bool {
    set.iter().all(|a| {
        let mut rest = set.clone();
        rest.difference_with(pom.leq.row(a));
        rest.difference_with(up.row(a));
        rest.is_empty()
    })
}

/// `x β y` iff `x ≤ y` and some `x < u < v < y` has a non-chain `J(u, v)`.
pub fn beta_relation(pom: &FinitePOM) -> BitMatrix {
    let n = pom.len();
    let up = pom.leq.transpose();
    let strict = pom.leq.strict();
    let strict_up = strict.transpose();
    // g[u] = { v : u < v, J(u, v) not totally ordered }
    let g: Vec<BitSet> = (0..n)
        .into_par_iter()
        .map(|u| {
            let mut s = BitSet::new(n);
            for v in ones(strict.row(u)) {
                if !is_chain_set(pom, &up, &pom.interval(&up, u, v)) {
                    s.insert(v);
                }
            }
            s
        })
        .collect();
    let mut beta = BitMatrix::new(n);
    for x in 0..n {
        for y in ones(pom.leq.row(x)) {
            let hit = ones(strict.row(x)).any(|u| crate::matrix::and_count(g[u].words(), strict_up.row(y)) > 0);
            if hit {
                beta.set(x, y, true);
            }
        }
    }
    beta
}

/// `p γ q` iff every `a > p` has some `b` with `a > b > p` and `b ≤ q`, and
/// every `c < q` has some `d` with `c < d < q` and `p ≤ d`.
pub fn gamma_relation(pom: &FinitePOM) -> BitMatrix {
    let n = pom.len();
    let strict = pom.leq.strict();
    let strict_up = strict.transpose();
    let up = pom.leq.transpose();
    let mut m = BitMatrix::new(n);
    for p in 0..n {
        for q in 0..n {
            let first = ones(strict.row(p)).all(|a| {
                crate::matrix::and3_count(strict.row(p), strict_up.row(a), up.row(q)) > 0
            });
            if !first {
                continue;
            }
            let second = ones(strict_up.row(q)).all(|c| {
                crate::matrix::and3_count(strict.row(c), strict_up.row(q), pom.leq.row(p)) > 0
            });
            if second {
                m.set(p, q, true);
            }
        }
    }
    m
}

/// Every β-related pair has an order interval of positive measure.
pub fn pomc_check(pom: &FinitePOM) -> bool {
    let beta = beta_relation(pom);
    let up = pom.leq.transpose();
    (0..pom.len()).all(|x| ones(beta.row(x)).all(|y| pom.measure(pom.interval(&up, x, y).words()) > 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> Cones {
        let s = Square::from_rows(vec![vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        Cones::from_space(&FiniteLorentzSpace::from_sigma(s), vec![1.0, 1.0], 1e-9).unwrap()
    }

    #[test]
    fn two_chain_dr_values() {
        let c = chain2();
        assert!((d_r(&c, -1.0).unwrap().at(0, 1) - 1.0).abs() < 1e-15);
        assert!((d_r(&c, 1.0).unwrap().at(0, 1) - 1.0).abs() < 1e-15);
        assert!((d_r(&c, 0.0).unwrap().at(0, 1) - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(d_r(&c, 1.5).is_err());
    }

    #[test]
    fn sign_profile_metric_on_two_chain() {
        let s = Square::from_rows(vec![vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let x = FiniteLorentzSpace::from_sigma(s);
        let mu = [1.0, 1.0];
        let d = phi_fp(&x, f64::signum_zero, ProfileNorm::L2(&mu)).unwrap();
        assert!((d.at(0, 1) - 2f64.sqrt()).abs() < 1e-15);
    }

    trait SignumZero {
        fn signum_zero(self) -> f64;
    }
    impl SignumZero for f64 {
        fn signum_zero(self) -> f64 {
            if self == 0.0 {
                0.0
            } else {
                self.signum()
            }
        }
    }

    #[test]
    fn detection_on_small_cases() {
        let c = chain2();
        assert!(!detect_chron(&c, 0, 0, 1e-9));
        let anti = Cones::from_space(&FiniteLorentzSpace::from_sigma(Square::filled(3, 0.0)), vec![1.0; 3], 1e-9).unwrap();
        assert!((0..3).all(|p| (0..3).all(|q| !detect_chron(&anti, p, q, 1e-9))));
    }

    #[test]
    fn orientation_examples() {
        let s = Square::from_rows(vec![vec![0.0, 1.0, 2.0], vec![-1.0, 0.0, 1.0], vec![-2.0, -1.0, 0.0]]).unwrap();
        let c = Cones::from_space(&FiniteLorentzSpace::from_sigma(s), vec![1.0; 3], 1e-9).unwrap();
        assert_eq!(orient_chain(&c, &[0, 1, 2]).unwrap(), Orientation::Future);
        assert_eq!(orient_chain(&c, &[2, 1, 0]).unwrap(), Orientation::Past);
        assert!(orient_chain(&c, &[1]).is_err());
    }
}
