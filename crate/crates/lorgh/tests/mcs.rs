mod common;

use approx::assert_relative_eq;
use common::*;
use lorgh::gh::Correspondence;
use lorgh::mcs::*;
use lorgh::models::{minkowski_space, sprinkle_coords, Region};
use lorgh::pom::Cones;
use lorgh::space::DEFAULT_TOL;
use lorgh::{BitMatrix, FinitePOM};
use rand::Rng;

/// Volume of the causal diamond of unit height in `n` dimensions, by
/// integrating the spatial ball volume over time (Simpson's rule).
fn diamond_volume(n: usize) -> f64 {
    let ball = |r: f64| {
        let k = (n - 1) as f64;
        std::f64::consts::PI.powf(k / 2.0) / statrs::function::gamma::gamma(k / 2.0 + 1.0) * r.powf(k)
    };
    let steps = 2000;
    let h = 0.5 / steps as f64;
    let f = |t: f64| ball(0.5 - t);
    let mut s = f(0.0) + f(0.5);
    for i in 1..steps {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    2.0 * s * h / 3.0
}

#[test]
fn omega_matches_diamond_volumes() {
    assert_relative_eq!(omega(1.0).unwrap(), 1.0, epsilon = 1e-12);
    assert_relative_eq!(omega(2.0).unwrap(), diamond_volume(2), epsilon = 1e-9);
    assert_relative_eq!(omega(3.0).unwrap(), diamond_volume(3), epsilon = 1e-9);
    assert_relative_eq!(omega(4.0).unwrap(), diamond_volume(4), epsilon = 1e-9);
    assert_relative_eq!(omega(4.0).unwrap(), std::f64::consts::PI / 24.0, epsilon = 1e-12);
}

#[test]
fn single_diamond_cover() {
    let x = space_of(&[vec![0.0, 0.0], vec![1.0, 0.2]]);
    let s = x.s(0, 1);
    let c = mu_n_delta(&x, &[0, 1], 2.0, 10.0, CoverMode::Exact, DEFAULT_TOL).unwrap();
    assert_relative_eq!(c.value, 0.5 * s * s, epsilon = 1e-12);
    assert_eq!(c.diamonds.len(), 1);
    let c = mu_n_delta(&x, &[], 2.0, 10.0, CoverMode::Greedy, DEFAULT_TOL).unwrap();
    assert_eq!(c.value, 0.0);
}

fn analytic_phi(dim: usize) -> f64 {
    let mut coords = vec![vec![0.0; dim], vec![0.0; dim], vec![0.0; dim]];
    coords[1][0] = 0.5;
    coords[2][0] = 1.0;
    // balanced but off-axis, and unbalanced candidates
    let mut g = rng(dim as u64);
    for _ in 0..20 {
        let mut p = vec![g.gen_range(0.2..0.8)];
        p.extend((1..dim).map(|_| g.gen_range(-0.15..0.15)));
        coords.push(p);
    }
    let mut q = vec![0.5, 0.2];
    q.resize(dim, 0.0);
    coords.push(q);
    let m = AnalyticMinkowski { coords };
    let r = phi_midpoint(&m, 0, 2).unwrap();
    assert_eq!(r.b, 1);
    r.phi
}

#[test]
fn analytic_phi_and_dimension() {
    for dim in [2usize, 3, 4] {
        let phi = analytic_phi(dim);
        let expected = 2.0 * 0.5f64.powi(dim as i32);
        assert_relative_eq!(phi, expected, epsilon = 1e-12);
        assert_relative_eq!(dm_from_phi(phi), dim as f64, epsilon = 1e-12);
    }
}

#[test]
fn geodesic_refinement_keeps_length() {
    let v = [0.3, 0.1];
    let pts: Vec<Vec<f64>> = (0..=6).map(|k| vec![k as f64 * 0.5, k as f64 * 0.5 * v[0]]).collect();
    let m = AnalyticMinkowski { coords: pts.clone() };
    let dm = DmField::Constant(2.0);
    let tau = proper_time(&pts[0], &pts[6]);
    assert_relative_eq!(lorentz_length(&m, &[0, 6], &dm).unwrap(), tau, epsilon = 1e-12);
    assert_relative_eq!(lorentz_length(&m, &[0, 3, 6], &dm).unwrap(), tau, epsilon = 1e-12);
    assert_relative_eq!(lorentz_length(&m, &[0, 1, 2, 3, 4, 5, 6], &dm).unwrap(), tau, epsilon = 1e-12);
    assert_eq!(lorentz_length(&m, &[], &dm).unwrap(), 0.0);
}

#[test]
fn analytic_two_chain_reconstruction() {
    let pts = vec![vec![0.0, 0.0], vec![1.2, 0.5], vec![0.3, 2.0]];
    let m = AnalyticMinkowski { coords: pts.clone() };
    let s = reconstruct_sigma(&m, &DmField::Constant(2.0), 0).unwrap();
    assert_relative_eq!(s.s(0, 1), proper_time(&pts[0], &pts[1]), epsilon = 1e-12);
    assert_relative_eq!(s.s(1, 0), -proper_time(&pts[0], &pts[1]), epsilon = 1e-12);
    assert_eq!(s.s(0, 2), 0.0);
    assert_eq!(s.s(1, 2), 0.0);
}

#[test]
fn counting_reconstruction_of_a_chain() {
    // a unit-weight chain has interval measure k + 1, so every pair is a
    // single edge
    let n = 5;
    let pom = FinitePOM::new(lorgh::space::default_ids(n), BitMatrix::from_fn(n, |i, j| i <= j), vec![1.0; n]).unwrap();
    let s = reconstruct_pom(&pom, &DmField::Constant(2.0), 0).unwrap();
    let g = reconstruct_sigma(&CountingMeasure::new(&pom), &DmField::Constant(2.0), 0).unwrap();
    assert_eq!(s.sigma, g.sigma);
    assert!(s.s(0, 4) > s.s(0, 1));
}

#[test]
fn dist_times_tracks_perturbation() {
    let r = Region::diamond(1.0, 1);
    let coords = sprinkle_coords(&r, 120.0, 4).unwrap();
    let w = vec![1.0 / 120.0; coords.len()];
    let base = Cones::from_space(&minkowski_space(coords.clone()).unwrap(), w.clone(), DEFAULT_TOL).unwrap();
    let id = Correspondence::identity(coords.len());
    assert_eq!(dist_times(&id, &base, &base).unwrap(), 0.0);
    let mut g = rng(8);
    let dirs: Vec<Vec<f64>> = coords.iter().map(|_| vec![g.gen_range(-1.0..1.0), g.gen_range(-1.0..1.0)]).collect();
    let mut last = (0.0, 0.0);
    for eps in [0.01, 0.05, 0.2] {
        let moved: Vec<Vec<f64>> = coords.iter().zip(&dirs).map(|(p, d)| vec![p[0] + eps * d[0], p[1] + eps * d[1]]).collect();
        let y = Cones::from_space(&minkowski_space(moved).unwrap(), w.clone(), DEFAULT_TOL).unwrap();
        let dt = dist_times(&id, &base, &y).unwrap();
        let n = coords.len();
        let vol = |c: &Cones, a: usize, b: usize| {
            if !c.future.get(a, b) {
                return 0.0;
            }
            (0..n).filter(|&z| c.future.get(a, z) && c.future.get(z, b)).map(|z| c.mu[z]).sum::<f64>()
        };
        let gap = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| (vol(&base, a, b) - vol(&y, a, b)).abs())
            .fold(0.0f64, f64::max);
        assert!(dt >= last.0 && gap >= last.1, "eps {eps}: {dt} {gap} after {last:?}");
        last = (dt, gap);
    }
    assert!(last.0 > 0.0);
}
