mod common;

use approx::assert_relative_eq;
use common::*;
use lorgh::experiments::*;
use lorgh::gh::{dist_minus, Correspondence};
use lorgh::models::{lattice, scale};

fn spec(name: &str, params: serde_json::Value) -> ExperimentSpec {
    ExperimentSpec {
        name: name.into(),
        seed: 3,
        params: params.as_object().cloned().unwrap_or_default(),
        output: None,
    }
}

#[test]
fn scaling_rows_respect_the_bound() {
    let rep = run_experiment(&spec("scaling", serde_json::json!({"r": [1.0, 0.5, 2.0]})), &Tolerances::builtin()).unwrap();
    assert!(rep.pass);
    let rows = &rep.tables[0].rows;
    assert_eq!(rows[0][1], 0.0);
    for r in rows {
        assert!(r[1] <= r[2] + 1e-12, "{r:?}");
    }
    assert_eq!(rep.schema, REPORT_SCHEMA);
}

#[test]
fn unknown_experiment_and_bad_params() {
    assert!(run_experiment(&spec("nope", serde_json::json!({})), &Tolerances::builtin()).is_err());
    assert!(run_experiment(&spec("scaling", serde_json::json!({"r": "x"})), &Tolerances::builtin()).is_err());
}

#[test]
fn lattice_families_and_precompactness() {
    // the ball correspondence of a lattice with itself keeps the diagonal
    let l = lattice(4, 1.0, 1.0).unwrap();
    let c = lorgh::gh::lattice_correspondence(&l, &l, 4).unwrap();
    assert!((0..l.len()).all(|i| c.pairs.contains(&(i, i))));
    assert!(lattice_distortion(4, 4, 1.0, 1.0).unwrap() > 0.0);
    let single = vec![lattice(4, 1.0, 1.0).unwrap()];
    let rep = precompactness_predicates(&single, &PrecompactOptions::default());
    assert!(rep.diameter_ok && rep.cardinality_ok);
    let base = lattice(2, 1.0, 1.0).unwrap();
    let scaled: Vec<_> = [1.0, 2.0, 4.0, 8.0].iter().map(|&k| scale(&base, k).unwrap()).collect();
    let rep = precompactness_predicates(&scaled, &PrecompactOptions::default());
    assert!(!rep.diameter_ok, "{:?}", rep.diameters);
}

#[test]
fn eps_approximant_is_a_valid_correspondence() {
    let x = space_of(&random_points(&mut rng(4), 30, 2));
    for eps in [0.1, 0.3, 1.0] {
        let (centers, half) = eps_approximant(&x, eps);
        assert!(!centers.is_empty() && half < eps);
        // nearest-centre assignment in d^+ rebuilt independently
        let dp = |a: usize, b: usize| (0..x.len()).map(|z| (x.s(a, z) - x.s(b, z)).abs()).fold(0.0, f64::max);
        let assign: Vec<usize> = (0..x.len())
            .map(|i| (0..centers.len()).min_by(|&a, &b| dp(i, centers[a]).total_cmp(&dp(i, centers[b])).then(a.cmp(&b))).unwrap())
            .collect();
        let pairs: Vec<(usize, usize)> = assign.iter().enumerate().map(|(i, &k)| (i, k)).collect();
        let r = Correspondence::new(x.len(), centers.len(), pairs).unwrap();
        let sub = x.subspace(&centers);
        assert_relative_eq!(dist_minus(&r, &x, &sub).unwrap() / 2.0, half, epsilon = 1e-12);
    }
}

#[test]
fn cylinder_rows_are_finite() {
    let times: Vec<f64> = (0..5).map(|i| i as f64 * 0.5).collect();
    let (x, w) = cylinder_model(8, &times).unwrap();
    assert_eq!(x.len(), 40);
    assert_relative_eq!(w[0], 2.0 * std::f64::consts::PI / 8.0 * 0.5, epsilon = 1e-12);
    let rows = cylinder_convergence(&[4, 8], 16, &times).unwrap();
    assert!(rows.iter().all(|r| r.dist_minus.is_finite() && r.dist_times.is_finite()));
}

#[test]
fn reports_round_trip_through_disk() {
    let rep = run_experiment(&spec("scaling", serde_json::json!({})), &Tolerances::builtin()).unwrap();
    let dir = std::env::temp_dir().join(format!("lorgh-report-{}", std::process::id()));
    let files = rep.write(&dir).unwrap();
    assert_eq!(files.len(), rep.tables.len() + 1);
    let text = std::fs::read_to_string(dir.join("summary.json")).unwrap();
    let back: ExperimentReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, rep);
    let mut csv = csv::Reader::from_path(dir.join("scaling.csv")).unwrap();
    assert_eq!(csv.headers().unwrap().iter().collect::<Vec<_>>(), vec!["r", "dist_minus", "bound"]);
    assert_eq!(csv.records().count(), rep.tables[0].rows.len());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn same_seed_same_report() {
    let a = run_experiment(&spec("scaling", serde_json::json!({})), &Tolerances::builtin()).unwrap();
    let b = run_experiment(&spec("scaling", serde_json::json!({})), &Tolerances::builtin()).unwrap();
    assert_eq!(a, b);
}
