mod common;

use approx::assert_relative_eq;
use common::*;
use lorgh::experiments::lattice_distortion;
use lorgh::gh::*;
use lorgh::models::{lattice, sprinkle, Region};
use lorgh::space::{restrict_underline, validate_lorentz, DEFAULT_TOL};
use lorgh::{FiniteLorentzSpace, Square};
use rand::Rng;

fn random_correspondence(g: &mut impl Rng, nx: usize, ny: usize) -> Correspondence {
    let f: Vec<usize> = (0..nx).map(|_| g.gen_range(0..ny)).collect();
    let h: Vec<usize> = (0..ny).map(|_| g.gen_range(0..nx)).collect();
    let mut r = Correspondence::from_maps(&f, &h).unwrap();
    for _ in 0..g.gen_range(0..3) {
        r.pairs.push((g.gen_range(0..nx), g.gen_range(0..ny)));
    }
    Correspondence::new(nx, ny, r.pairs).unwrap()
}

/// Minimum over every left- and right-total subset of `X × Y`, halved.
fn brute_force_gh(x: &FiniteLorentzSpace, y: &FiniteLorentzSpace) -> f64 {
    let (nx, ny) = (x.len(), y.len());
    let all: Vec<(usize, usize)> = (0..nx).flat_map(|a| (0..ny).map(move |b| (a, b))).collect();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << all.len()) {
        let pairs: Vec<(usize, usize)> = (0..all.len()).filter(|k| mask >> k & 1 == 1).map(|k| all[k]).collect();
        let total = (0..nx).all(|a| pairs.iter().any(|p| p.0 == a)) && (0..ny).all(|b| pairs.iter().any(|p| p.1 == b));
        if !total {
            continue;
        }
        let mut dis = 0.0f64;
        for &(a, b) in &pairs {
            for &(c, d) in &pairs {
                dis = dis.max((x.s(a, c) - y.s(b, d)).abs());
            }
        }
        best = best.min(dis);
    }
    best / 2.0
}

#[test]
fn two_point_spaces() {
    let (x, y) = (chain(&[1.0]), chain(&[2.0]));
    let pairing = Correspondence::identity(2);
    assert_eq!(dist_minus(&pairing, &x, &y).unwrap(), 1.0);
    let exact = ghdist_minus_exact(&x, &y, DEFAULT_BUDGET).unwrap().value;
    assert_eq!(exact, 0.5);
    assert_eq!(brute_force_gh(&x, &y), 0.5);
    let p = chain(&[]);
    assert_eq!(ghdist_minus_exact(&p, &p, DEFAULT_BUDGET).unwrap().value, 0.0);
}

#[test]
fn exact_matches_subset_enumeration() {
    for seed in 0..20 {
        let mut g = rng(seed);
        let (nx, ny) = (g.gen_range(1..4), g.gen_range(1..4));
        let x = space_of(&random_points(&mut g, nx, 2));
        let y = space_of(&random_points(&mut g, ny, 2));
        let exact = ghdist_minus_exact(&x, &y, DEFAULT_BUDGET).unwrap().value;
        assert_relative_eq!(exact, brute_force_gh(&x, &y), epsilon = 1e-12);
    }
}

#[test]
fn plus_is_bounded_by_twice_minus_for_every_correspondence() {
    for seed in 0..100 {
        let mut g = rng(seed);
        let (nx, ny) = (g.gen_range(1..7), g.gen_range(1..7));
        let x = space_of(&random_points(&mut g, nx, 2));
        let y = space_of(&random_points(&mut g, ny, 3));
        let r = random_correspondence(&mut g, nx, ny);
        let (p, m) = (dist_plus(&r, &x, &y).unwrap(), dist_minus(&r, &x, &y).unwrap());
        assert!(p <= 2.0 * m + 1e-12, "seed {seed}: {p} > 2 * {m}");
    }
}

#[test]
fn perturbed_chain_under_identity() {
    let eps = 0.125;
    let x = chain(&[1.0, 1.0]);
    let mut s = x.sigma.clone();
    s.set(0, 2, 2.0 + eps);
    s.set(2, 0, -(2.0 + eps));
    let y = FiniteLorentzSpace::from_sigma(s);
    let id = Correspondence::identity(3);
    assert_relative_eq!(dist_plus(&id, &x, &y).unwrap(), eps);
    assert_relative_eq!(dist_minus(&id, &x, &y).unwrap(), eps);
}

#[test]
fn composition_is_subadditive_and_total() {
    for seed in 0..100 {
        let mut g = rng(seed);
        let n: Vec<usize> = (0..3).map(|_| g.gen_range(1..6)).collect();
        let s: Vec<FiniteLorentzSpace> = n.iter().map(|&k| space_of(&random_points(&mut g, k, 2))).collect();
        let r1 = random_correspondence(&mut g, n[0], n[1]);
        let r2 = random_correspondence(&mut g, n[1], n[2]);
        let c = compose(&r1, &r2).unwrap();
        c.check().unwrap();
        let lhs = dist_minus(&c, &s[0], &s[2]).unwrap();
        let rhs = dist_minus(&r1, &s[0], &s[1]).unwrap() + dist_minus(&r2, &s[1], &s[2]).unwrap();
        assert!(lhs <= rhs + 1e-12, "seed {seed}");
    }
    assert_eq!(compose(&Correspondence::identity(3), &Correspondence::identity(3)).unwrap(), Correspondence::identity(3));
}

#[test]
fn anneal_agrees_with_exact_on_small_instances() {
    let params = AnnealParams { steps: 4000, ..Default::default() };
    for seed in 0..100 {
        let mut g = rng(1000 + seed);
        let (nx, ny) = (g.gen_range(1..5), g.gen_range(1..5));
        let x = space_of(&random_points(&mut g, nx, 2));
        let y = space_of(&random_points(&mut g, ny, 2));
        let exact = ghdist_minus_exact(&x, &y, DEFAULT_BUDGET).unwrap().value;
        let heur = ghdist_minus_anneal(&x, &y, &params, seed).unwrap().value;
        assert!((exact - heur).abs() <= 1e-12, "seed {seed}: exact {exact} anneal {heur}");
    }
}

#[test]
fn anneal_is_monotone_in_steps_and_symmetric() {
    let mut g = rng(77);
    let x = space_of(&random_points(&mut g, 7, 2));
    let y = space_of(&random_points(&mut g, 6, 2));
    let mut last = f64::INFINITY;
    for steps in [10, 100, 1000, 10_000] {
        let p = AnnealParams { steps, ..Default::default() };
        let v = ghdist_minus_anneal(&x, &y, &p, 5).unwrap().value;
        assert!(v <= last + 1e-15, "{steps}: {v} > {last}");
        last = v;
    }
    let p = AnnealParams { steps: 20_000, ..Default::default() };
    let a = ghdist_minus_anneal(&x, &y, &p, 1).unwrap().value;
    let b = ghdist_minus_anneal(&y, &x, &p, 2).unwrap().value;
    assert!((a - b).abs() <= 0.1 * a.max(b), "{a} vs {b}");
}

#[test]
fn plus_gh_bounded_and_relabeling_invariant() {
    for seed in 0..30 {
        let mut g = rng(500 + seed);
        let (nx, ny) = (g.gen_range(1..4), g.gen_range(1..4));
        let x = space_of(&random_points(&mut g, nx, 2));
        let y = space_of(&random_points(&mut g, ny, 2));
        let mode = GhMode::Exact { budget: DEFAULT_BUDGET };
        let p = ghdist_plus(&x, &y, &mode).unwrap().value;
        let m = ghdist_minus(&x, &y, &mode).unwrap().value;
        assert!(p <= 2.0 * m + 1e-12);
    }
    let pts = random_points(&mut rng(3), 4, 2);
    let x = space_of(&pts);
    let perm = [2, 0, 3, 1];
    let y = FiniteLorentzSpace::from_sigma(Square::from_fn(4, |i, j| x.s(perm[i], perm[j])));
    let mode = GhMode::Exact { budget: DEFAULT_BUDGET };
    assert_eq!(ghdist_minus(&x, &y, &mode).unwrap().value, 0.0);
    assert_eq!(ghdist_plus(&x, &y, &mode).unwrap().value, 0.0);
}

#[test]
fn lattice_correspondence_is_total_and_distortion_decreases() {
    let coarse = lattice(4, 1.0, 1.0).unwrap();
    let fine = lattice(16, 1.0, 1.0).unwrap();
    let lc = coarse.labels.as_ref().unwrap();
    // every fine point lies within half a spacing of a coarse one
    for p in fine.labels.as_ref().unwrap() {
        assert!(lc.iter().any(|q| (p[0] - q[0]).abs() <= 0.125 + 1e-12 && (p[1] - q[1]).abs() <= 0.125 + 1e-12));
    }
    lattice_correspondence(&coarse, &fine, 4).unwrap().check().unwrap();
    let d: Vec<f64> = [2, 4, 8].iter().map(|&n| lattice_distortion(n, 16, 1.0, 1.0).unwrap()).collect();
    assert!(d.iter().all(|v| v.is_finite()));
    assert!(d[0] > d[1] && d[1] > d[2], "{d:?}");
}

#[test]
fn wide_lattices_do_not_converge() {
    let d: Vec<f64> = [1.0, 2.0, 3.0].iter().map(|&s| lattice_distortion(4, 8, 1.0, s).unwrap()).collect();
    assert!(d[2] >= d[0] - 1e-12, "{d:?}");
}

#[test]
fn k_epsilon_examples() {
    let r = Region::slab(1.0, 2.0, 1);
    let x = sprinkle(&r, 60.0, 6).unwrap();
    let tiny = k_epsilon(&x, 1e-9, DEFAULT_TOL).unwrap();
    assert_eq!(tiny, restrict_underline(&x, DEFAULT_TOL));
    let k = k_epsilon(&x, 0.5, DEFAULT_TOL).unwrap();
    assert!(validate_lorentz(&k, DEFAULT_TOL).unwrap().is_valid());
    // every kept point sits in the band, and the band core away from the
    // lateral edges is kept
    let labels = x.labels.as_ref().unwrap();
    let kept = k.labels.as_ref().unwrap();
    assert!(kept.iter().all(|p| p[0].abs() <= 0.5 + 0.1));
    for p in labels.iter().filter(|p| p[0].abs() < 0.3 && p[1].abs() < 1.0) {
        assert!(kept.contains(p), "{p:?}");
    }
    assert!(k_epsilon(&x, 5.0, DEFAULT_TOL).is_err());
}
