#![allow(dead_code)]

use lorgh::{BitMatrix, FiniteLorentzSpace, FinitePOM, Square};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent Minkowski interval: positive time-ordered proper time, else 0.
pub fn proper_time(p: &[f64], q: &[f64]) -> f64 {
    let dt = q[0] - p[0];
    let dx: f64 = p[1..].iter().zip(&q[1..]).map(|(a, b)| (a - b).powi(2)).sum();
    if dt * dt > dx {
        (dt * dt - dx).sqrt() * dt.signum()
    } else {
        0.0
    }
}

pub fn random_points(rng: &mut impl Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect()
}

pub fn space_of(points: &[Vec<f64>]) -> FiniteLorentzSpace {
    let n = points.len();
    FiniteLorentzSpace::from_sigma(Square::from_fn(n, |i, j| proper_time(&points[i], &points[j])))
}

pub fn chain(sigmas: &[f64]) -> FiniteLorentzSpace {
    // points on a time axis at cumulative offsets
    let mut t = vec![0.0];
    for s in sigmas {
        t.push(t.last().unwrap() + s);
    }
    let n = t.len();
    FiniteLorentzSpace::from_sigma(Square::from_fn(n, |i, j| t[j] - t[i]))
}

/// Random partial order from random points in 2D Minkowski, random weights.
pub fn random_pom(rng: &mut impl Rng, n: usize) -> FinitePOM {
    let pts = random_points(rng, n, 2);
    let leq = BitMatrix::from_fn(n, |i, j| i == j || proper_time(&pts[i], &pts[j]) > 0.0);
    let mu = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
    FinitePOM::new(lorgh::space::default_ids(n), leq, mu).unwrap()
}

pub fn random_weights(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(0.1..2.0)).collect()
}
