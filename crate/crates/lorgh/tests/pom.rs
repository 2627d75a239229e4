mod common;

use approx::assert_relative_eq;
use common::*;
use lorgh::gh::d_plus_metric;
use lorgh::models::{sprinkle_coords, minkowski_space, Region};
use lorgh::pom::*;
use lorgh::space::{default_ids, DEFAULT_TOL};
use lorgh::{BitMatrix, FiniteLorentzSpace, FinitePOM, Square};

fn grid_order(k: usize) -> FinitePOM {
    let n = k * k;
    let leq = BitMatrix::from_fn(n, |i, j| i / k <= j / k && i % k <= j % k);
    FinitePOM::new(default_ids(n), leq, vec![1.0; n]).unwrap()
}

fn total_order(n: usize) -> FinitePOM {
    FinitePOM::new(default_ids(n), BitMatrix::from_fn(n, |i, j| i <= j), vec![1.0; n]).unwrap()
}

fn lt(p: &FinitePOM, a: usize, b: usize) -> bool {
    a != b && p.leq.get(a, b)
}

fn beta_oracle(p: &FinitePOM) -> BitMatrix {
    let n = p.len();
    let in_j = |u: usize, v: usize| (0..n).filter(move |&z| p.leq.get(u, z) && p.leq.get(z, v)).collect::<Vec<_>>();
    let non_chain = |u: usize, v: usize| {
        let j = in_j(u, v);
        j.iter().any(|&a| j.iter().any(|&b| !p.leq.get(a, b) && !p.leq.get(b, a)))
    };
    BitMatrix::from_fn(n, |x, y| {
        p.leq.get(x, y)
            && (0..n).any(|u| lt(p, x, u) && (0..n).any(|v| lt(p, u, v) && lt(p, v, y) && non_chain(u, v)))
    })
}

fn gamma_oracle(p: &FinitePOM) -> BitMatrix {
    let n = p.len();
    BitMatrix::from_fn(n, |x, y| {
        (0..n).filter(|&a| lt(p, x, a)).all(|a| (0..n).any(|b| lt(p, b, a) && lt(p, x, b) && p.leq.get(b, y)))
            && (0..n).filter(|&c| lt(p, c, y)).all(|c| (0..n).any(|d| lt(p, c, d) && lt(p, d, y) && p.leq.get(x, d)))
    })
}

#[test]
fn identity_sup_profile_is_the_plus_metric() {
    let x = space_of(&random_points(&mut rng(1), 12, 2));
    let m = phi_fp(&x, |s| s, ProfileNorm::Sup).unwrap();
    assert_eq!(m.d, d_plus_metric(&x).d);
    let zero = phi_fp(&x, |_| 3.0, ProfileNorm::L2(&[1.0; 12])).unwrap();
    assert!(zero.d.as_slice().iter().all(|&v| v == 0.0));
}

#[test]
fn sign_profile_on_two_chain() {
    let x = chain(&[1.0]);
    let sgn = |s: f64| if s == 0.0 { 0.0 } else { s.signum() };
    let m = phi_fp(&x, sgn, ProfileNorm::L2(&[1.0, 1.0])).unwrap();
    assert_relative_eq!(m.at(0, 1), 2f64.sqrt());
}

#[test]
fn dr_values_on_two_chain() {
    let cones = Cones::from_space(&chain(&[1.0]), vec![1.0, 1.0], DEFAULT_TOL).unwrap();
    assert_relative_eq!(d_r(&cones, -1.0).unwrap().at(0, 1), 1.0);
    assert_relative_eq!(d_r(&cones, 1.0).unwrap().at(0, 1), 1.0);
    assert_relative_eq!(d_r(&cones, 0.0).unwrap().at(0, 1), 2f64.sqrt() / 2.0);
}

#[test]
fn degenerate_recovery_cases() {
    let one = Cones::from_space(&chain(&[]), vec![1.0], DEFAULT_TOL).unwrap();
    let r = check_recovery_identity(&one, 0, 0);
    assert_eq!((r.plus, r.minus), (0.0, 0.0));
    let c = Cones::from_pom(&random_pom(&mut rng(2), 20));
    let r = check_recovery_identity(&c, 5, 5);
    assert_eq!((r.plus, r.minus), (0.0, 0.0));
    assert_eq!(harvest_value(&c, 5, 5), 0.0);
}

#[test]
fn harvest_counts_the_interval_interior() {
    let r = Region::diamond(1.0, 1);
    let coords = sprinkle_coords(&r, 300.0, 3).unwrap();
    let x = minkowski_space(coords.clone()).unwrap();
    let w = vec![1.0 / 300.0; x.len()];
    let cones = Cones::from_space(&x, w.clone(), DEFAULT_TOL).unwrap();
    let mut positive = 0;
    for p in 0..x.len() {
        for q in 0..x.len() {
            if proper_time(&coords[p], &coords[q]) <= 0.0 {
                continue;
            }
            let interior: f64 = (0..x.len())
                .filter(|&z| proper_time(&coords[p], &coords[z]) > 0.0 && proper_time(&coords[z], &coords[q]) > 0.0)
                .map(|z| w[z])
                .sum();
            let h = harvest(&cones, p, q);
            assert!(h.residual() < 1e-9);
            assert_relative_eq!(h.value, 2.0 * interior, epsilon = 1e-9);
            if interior > 0.0 {
                assert!(detect_chron(&cones, p, q, DEFAULT_TOL) && detect_chron(&cones, q, p, DEFAULT_TOL));
                positive += 1;
            }
        }
    }
    assert!(positive > 1000);
}

#[test]
fn detector_degenerate_cases() {
    let anti = FiniteLorentzSpace::from_sigma(Square::filled(5, 0.0));
    let c = Cones::from_space(&anti, vec![1.0; 5], DEFAULT_TOL).unwrap();
    assert_eq!(detect_matrix(&c, DEFAULT_TOL), BitMatrix::new(5));
    let c = Cones::from_space(&chain(&[1.0, 1.0]), vec![1.0; 3], DEFAULT_TOL).unwrap();
    assert!(!detect_chron(&c, 1, 1, DEFAULT_TOL));
    assert!(detect_chron(&c, 0, 2, DEFAULT_TOL));
}

#[test]
fn chain_orientation() {
    let r = Region::diamond(1.0, 1);
    let coords = sprinkle_coords(&r, 400.0, 5).unwrap();
    let x = minkowski_space(coords.clone()).unwrap();
    let cones = Cones::from_space(&x, vec![1.0; x.len()], DEFAULT_TOL).unwrap();
    // greedy chain along the time axis
    let mut c = vec![(0..x.len()).min_by(|&a, &b| coords[a][0].total_cmp(&coords[b][0])).unwrap()];
    loop {
        let last = *c.last().unwrap();
        let next = (0..x.len())
            .filter(|&z| proper_time(&coords[last], &coords[z]) > 0.1)
            .min_by(|&a, &b| coords[a][0].total_cmp(&coords[b][0]));
        match next {
            Some(z) => c.push(z),
            None => break,
        }
    }
    assert!(c.len() >= 4);
    assert_eq!(orient_chain(&cones, &c).unwrap(), Orientation::Future);
    c.reverse();
    assert_eq!(orient_chain(&cones, &c).unwrap(), Orientation::Past);
    assert!(orient_chain(&cones, &c[..1]).is_err());
}

#[test]
fn beta_relation_examples() {
    assert_eq!(beta_relation(&total_order(6)), BitMatrix::new(6));
    let g = grid_order(4);
    let b = beta_relation(&g);
    assert_eq!(b, beta_oracle(&g));
    assert!(b.is_subset_of(&g.leq.strict()));
    // corners of the grid: the middle holds incomparable pairs
    assert!(b.get(0, 15));
}

#[test]
fn gamma_relation_examples() {
    let empty = FinitePOM::new(vec![], BitMatrix::new(0), vec![]).unwrap();
    assert_eq!(gamma_relation(&empty).count(), 0);
    let anti = FinitePOM::new(default_ids(4), BitMatrix::identity(4), vec![1.0; 4]).unwrap();
    assert_eq!(gamma_relation(&anti), gamma_oracle(&anti));
    let t = total_order(7);
    assert_eq!(gamma_relation(&t), gamma_oracle(&t));
    let g = grid_order(4);
    assert_eq!(gamma_relation(&g), gamma_oracle(&g));
    let p = random_pom(&mut rng(9), 25);
    assert_eq!(gamma_relation(&p), gamma_oracle(&p));
}

#[test]
fn pomc_examples() {
    let g = grid_order(4);
    assert!(pomc_check(&g));
    let mut weightless = g.clone();
    weightless.mu = vec![0.0; 16];
    assert!(!pomc_check(&weightless));
    let r = Region::diamond(1.0, 1);
    let (pom, _) = lorgh::models::sprinkle_pom(&r, 150.0, 2).unwrap();
    assert!(pomc_check(&pom));
}
