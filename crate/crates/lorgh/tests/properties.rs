mod common;

use common::*;
use lorgh::cauchy::{is_anti_lipschitz, is_rushing, noldus_metric};
use lorgh::gh::{compose, d_plus_metric, dist_minus, dist_plus, Correspondence};
use lorgh::models::{lattice, product, sprinkle, euclidean_metric, Region};
use lorgh::pom::{check_recovery_identity, Cones};
use lorgh::space::{derived_causal, validate_lorentz, DEFAULT_TOL};
use lorgh::FiniteLorentzSpace;
use proptest::prelude::*;
use rand::Rng;

fn point(dim: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, dim)
}

fn points(max: usize, dim: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(point(dim), 1..max)
}

fn correspondence(nx: usize, ny: usize) -> impl Strategy<Value = Correspondence> {
    (prop::collection::vec(0..ny, nx), prop::collection::vec(0..nx, ny))
        .prop_map(|(f, h)| Correspondence::from_maps(&f, &h).unwrap())
}

fn spaces_and_correspondence() -> impl Strategy<Value = (FiniteLorentzSpace, FiniteLorentzSpace, Correspondence)> {
    (points(8, 2), points(8, 3)).prop_flat_map(|(a, b)| {
        let (nx, ny) = (a.len(), b.len());
        correspondence(nx, ny).prop_map(move |r| (space_of(&a), space_of(&b), r))
    })
}

fn metric_axioms(d: &lorgh::FiniteMetricSpace) -> Result<(), TestCaseError> {
    let n = d.len();
    for i in 0..n {
        prop_assert_eq!(d.at(i, i), 0.0);
        for j in 0..n {
            prop_assert!(d.at(i, j) >= 0.0);
            prop_assert_eq!(d.at(i, j), d.at(j, i));
            for k in 0..n {
                prop_assert!(d.at(i, k) <= d.at(i, j) + d.at(j, k) + 1e-9);
            }
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minkowski_point_sets_validate(pts in points(16, 3)) {
        let x = space_of(&pts);
        prop_assert!(validate_lorentz(&x, DEFAULT_TOL).unwrap().is_valid());
    }

    #[test]
    fn sprinkles_and_lattices_validate(seed in 0u64..1000, n in 1usize..5, dim in 1usize..3) {
        let r = Region::diamond(1.0, dim);
        prop_assert!(validate_lorentz(&sprinkle(&r, 40.0 / r.volume(), seed).unwrap(), DEFAULT_TOL).unwrap().is_valid());
        prop_assert!(validate_lorentz(&lattice(n, 1.0, 1.0).unwrap(), DEFAULT_TOL).unwrap().is_valid());
    }

    #[test]
    fn products_validate(pts in points(8, 2), ys in prop::collection::vec(point(2), 1..4)) {
        let p = product(&space_of(&pts), &euclidean_metric(&ys)).unwrap();
        prop_assert!(validate_lorentz(&p, DEFAULT_TOL).unwrap().is_valid());
    }

    #[test]
    fn plus_at_most_twice_minus((x, y, r) in spaces_and_correspondence()) {
        let p = dist_plus(&r, &x, &y).unwrap();
        let m = dist_minus(&r, &x, &y).unwrap();
        prop_assert!(p <= 2.0 * m + 1e-12);
    }

    #[test]
    fn composition_subadditive(a in points(6, 2), b in points(6, 2), c in points(6, 2), seed in any::<u64>()) {
        let mut g = rng(seed);
        let mut maps = |nx: usize, ny: usize| {
            let f: Vec<usize> = (0..nx).map(|_| g.gen_range(0..ny)).collect();
            let h: Vec<usize> = (0..ny).map(|_| g.gen_range(0..nx)).collect();
            Correspondence::from_maps(&f, &h).unwrap()
        };
        let r1 = maps(a.len(), b.len());
        let r2 = maps(b.len(), c.len());
        let (x, y, z) = (space_of(&a), space_of(&b), space_of(&c));
        let rc = compose(&r1, &r2).unwrap();
        let lhs = dist_minus(&rc, &x, &z).unwrap();
        let rhs = dist_minus(&r1, &x, &y).unwrap() + dist_minus(&r2, &y, &z).unwrap();
        prop_assert!(lhs <= rhs + 1e-12);
    }

    #[test]
    fn derived_metrics_are_metrics(pts in points(12, 2), p in 1.0f64..3.0) {
        let x = space_of(&pts);
        metric_axioms(&d_plus_metric(&x))?;
        metric_axioms(&noldus_metric(&x, p).unwrap())?;
    }

    #[test]
    fn anti_lipschitz_implies_rushing(pts in points(12, 2), shift in prop::collection::vec(0.0f64..0.3, 12)) {
        // coordinate time plus a monotone bump: check the implication itself
        let x = space_of(&pts);
        let d = noldus_metric(&x, 1.0).unwrap();
        let t: Vec<f64> = pts.iter().zip(&shift).map(|(p, s)| 3.0 * p[0] + s).collect();
        if is_anti_lipschitz(&x, &t, &d, DEFAULT_TOL).unwrap().ok {
            prop_assert!(is_rushing(&x, &t, DEFAULT_TOL).unwrap().ok);
        }
    }

    #[test]
    fn recovery_identities_hold(seed in any::<u64>(), n in 2usize..20) {
        let mut g = rng(seed);
        let pts = random_points(&mut g, n, 2);
        let x = space_of(&pts);
        let w = random_weights(&mut g, n);
        let cones = Cones::from_space(&x, w, DEFAULT_TOL).unwrap();
        let causal = derived_causal(&x, DEFAULT_TOL).unwrap();
        for p in 0..n {
            for q in 0..n {
                if causal.get(p, q) {
                    let r = check_recovery_identity(&cones, p, q);
                    prop_assert!(r.plus <= 1e-9 && r.minus <= 1e-9, "{:?}", r);
                }
            }
        }
    }

    #[test]
    fn sprinkles_are_deterministic(seed in any::<u64>()) {
        let r = Region::diamond(1.0, 1);
        prop_assert_eq!(sprinkle(&r, 30.0, seed).unwrap(), sprinkle(&r, 30.0, seed).unwrap());
    }
}
