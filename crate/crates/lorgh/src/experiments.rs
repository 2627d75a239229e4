//! Named experiments, precompactness predicates and the tolerance config.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cauchy::{build_cauchy_time, default_connect_radius, intrinsify, noldus_metric, CauchySubset};
use crate::error::{Error, Result};
use crate::gh::{dist_minus, lattice_correspondence, Correspondence};
use crate::matrix::Square;
use crate::mcs::{dist_times, dm_dimension, reconstruct_pom, DmField, DmOptions, DEFAULT_NOISE_FLOOR};
use crate::models::{causal_cylinder, circle_net, lattice, mink, scale, sprinkle_coords, sprinkle_pom, Region};
use crate::pom::Cones;
use crate::space::{derived_causal, FiniteLorentzSpace, FiniteMetricSpace, DEFAULT_TOL};

const TOLERANCES: &str = include_str!("../tolerances.toml");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub validation: ValidationTol,
    pub recovery: RecoveryTol,
    pub lattice: LatticeTol,
    pub dm: DmTol,
    pub measure: MeasureTol,
    pub reconstruction: ReconstructionTol,
    pub cauchy: CauchyTol,
    pub precompact: PrecompactTol,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationTol {
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryTol {
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeTol {
    pub ratio_min: f64,
    pub ratio_max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DmTol {
    pub dim2: [f64; 2],
    pub dim3: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureTol {
    pub relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionTol {
    pub median_relative: f64,
    pub sigma_fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyTol {
    pub strip_relative: f64,
    pub slice_relative: f64,
    pub pole_relative: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecompactTol {
    pub eps: f64,
    pub growth: f64,
}

impl Tolerances {
    /// The built-in defaults.
    pub fn builtin() -> Self {
        toml::from_str(TOLERANCES).expect("embedded tolerance file parses")
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Malformed(format!("tolerance file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Missing(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecompactOptions {
    pub eps: f64,
    /// Fixed bound on `diam^-`; when absent the last member may exceed the
    /// earlier maximum by at most `growth` (relative).
    pub diam_bound: Option<f64>,
    pub growth: f64,
    /// Fixed bound on `N(eps)`; when absent `N` is held to the same
    /// tail test.
    pub n_bound: Option<usize>,
}

impl Default for PrecompactOptions {
    fn default() -> Self {
        let t = Tolerances::builtin().precompact;
        PrecompactOptions { eps: t.eps, diam_bound: None, growth: t.growth, n_bound: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrecompactReport {
    pub diameters: Vec<f64>,
    /// Size of the `eps`-approximant found for each space.
    pub n_eps: Vec<usize>,
    /// `dist_minus / 2` of the approximating correspondence.
    pub approx: Vec<f64>,
    pub diameter_ok: bool,
    pub cardinality_ok: bool,
}

/// True when the last value exceeds every earlier one by more than the
/// relative `growth`.
fn grows(values: &[f64], growth: f64) -> bool {
    match values.split_last() {
        Some((last, earlier)) if !earlier.is_empty() => {
            let top = earlier.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            *last > top * (1.0 + growth) + 1e-12
        }
        _ => false,
    }
}

fn assignment_distortion(x: &FiniteLorentzSpace, centers: &[usize]) -> (Vec<usize>, f64) {
    let n = x.len();
    let assign: Vec<usize> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ri = x.sigma.row(i);
            let dp = |c: usize| x.sigma.row(c).iter().zip(ri).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            *centers.iter().min_by(|&&a, &&b| dp(a).total_cmp(&dp(b)).then(a.cmp(&b))).expect("nonempty")
        })
        .collect();
    let dis = (0..n)
        .into_par_iter()
        .map(|i| {
            let ai = assign[i];
            (0..n).fold(0.0f64, |m, j| m.max((x.s(i, j) - x.s(ai, assign[j])).abs()))
        })
        .reduce(|| 0.0, f64::max);
    (assign, dis)
}

/// Subset `A` by farthest-point insertion in the `d^+` metric, each point
/// matched to its nearest centre, grown until the correspondence has
/// `dist_minus / 2 < eps`, then pruned: centres are dropped (latest first)
/// whenever the reassigned correspondence still qualifies.
pub fn eps_approximant(x: &FiniteLorentzSpace, eps: f64) -> (Vec<usize>, f64) {
    let n = x.len();
    if n == 0 {
        return (vec![], 0.0);
    }
    let dplus_from = |c: usize| -> Vec<f64> {
        let rc = x.sigma.row(c);
        (0..n)
            .into_par_iter()
            .map(|y| x.sigma.row(y).iter().zip(rc).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())))
            .collect()
    };
    let mut centers = vec![0usize];
    let mut near = dplus_from(0);
    let mut dis = assignment_distortion(x, &centers).1;
    while dis / 2.0 >= eps && centers.len() < n {
        let far = (0..n).max_by(|&a, &b| near[a].total_cmp(&near[b]).then(b.cmp(&a))).expect("nonempty");
        centers.push(far);
        for (i, d) in dplus_from(far).into_iter().enumerate() {
            near[i] = near[i].min(d);
        }
        dis = assignment_distortion(x, &centers).1;
    }
    let mut k = centers.len();
    while k > 1 {
        k -= 1;
        let mut trial = centers.clone();
        trial.remove(k);
        let (_, d) = assignment_distortion(x, &trial);
        if d / 2.0 < eps {
            centers = trial;
            dis = d;
        }
    }
    (centers, dis / 2.0)
}

/// The uniform `diam^-` bound and bounded-cardinality `eps`-approximant
/// conditions evaluated on a family.
pub fn precompactness_predicates(family: &[FiniteLorentzSpace], opts: &PrecompactOptions) -> PrecompactReport {
    let diameters: Vec<f64> = family.iter().map(|x| x.diam_minus()).collect();
    let approx: Vec<(Vec<usize>, f64)> = family.iter().map(|x| eps_approximant(x, opts.eps)).collect();
    let n_eps: Vec<usize> = approx.iter().map(|a| a.0.len()).collect();
    let diameter_ok = match opts.diam_bound {
        Some(b) => diameters.iter().all(|&d| d <= b),
        None => !grows(&diameters, opts.growth),
    };
    let ns: Vec<f64> = n_eps.iter().map(|&k| k as f64).collect();
    let cardinality_ok = match opts.n_bound {
        Some(b) => n_eps.iter().all(|&k| k <= b),
        None => !grows(&ns, opts.growth),
    };
    PrecompactReport { diameters, approx: approx.iter().map(|a| a.1).collect(), n_eps, diameter_ok, cardinality_ok }
}

/// `dist_minus` of the ball correspondence between `lattice(n, r, s)` and
/// `lattice(reference_n, r, s)`.
pub fn lattice_distortion(n: usize, reference_n: usize, r: f64, s: f64) -> Result<f64> {
    let l = lattice(n, r, s)?;
    let reference = lattice(reference_n, r, s)?;
    let c = lattice_correspondence(&l, &reference, n)?;
    dist_minus(&c, &l, &reference)
}

fn arc(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(std::f64::consts::TAU);
    d.min(std::f64::consts::TAU - d)
}

/// Cylinder over the `k`-point circle net at the given times with uniform
/// weights `(2π/k) · Δt`.
pub fn cylinder_model(k: usize, times: &[f64]) -> Result<(FiniteLorentzSpace, Vec<f64>)> {
    let x = causal_cylinder(&circle_net(k), times)?;
    let dt = if times.len() > 1 { (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64 } else { 1.0 };
    let w = std::f64::consts::TAU / k as f64 * dt;
    let n = x.len();
    Ok((x, vec![w; n]))
}

/// Correspondence lifting the nearest-angle relation between a `k`-net and
/// a `k_ref`-net to cylinders over the same times.
pub fn lifted_correspondence(k: usize, k_ref: usize, levels: usize) -> Result<Correspondence> {
    let step = std::f64::consts::TAU / k as f64;
    let step_ref = std::f64::consts::TAU / k_ref as f64;
    let reach = 0.5 * step.max(step_ref) + 1e-12;
    let mut pairs = Vec::new();
    for t in 0..levels {
        for i in 0..k {
            for j in 0..k_ref {
                if arc(i as f64 * step, j as f64 * step_ref) <= reach {
                    pairs.push((t * k + i, t * k_ref + j));
                }
            }
        }
    }
    Correspondence::new(k * levels, k_ref * levels, pairs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CylinderRow {
    pub k: usize,
    pub dist_minus: f64,
    pub dist_times: f64,
}

pub fn cylinder_convergence(ks: &[usize], k_ref: usize, times: &[f64]) -> Result<Vec<CylinderRow>> {
    let (reference, w_ref) = cylinder_model(k_ref, times)?;
    let ref_cones = Cones::from_space(&reference, w_ref, DEFAULT_TOL)?;
    ks.par_iter()
        .map(|&k| {
            let (x, w) = cylinder_model(k, times)?;
            let cones = Cones::from_space(&x, w, DEFAULT_TOL)?;
            let c = lifted_correspondence(k, k_ref, times.len())?;
            Ok(CylinderRow {
                k,
                dist_minus: dist_minus(&c, &x, &reference)?,
                dist_times: dist_times(&c, &cones, &ref_cones)?,
            })
        })
        .collect()
}

/// Median relative error of `σ̂` over pairs with `σ ≥ fraction · max σ`.
pub fn reconstruction_error(coords: &[Vec<f64>], sigma_hat: &FiniteLorentzSpace, fraction: f64) -> f64 {
    let n = coords.len();
    let truth = Square::from_fn(n, |i, j| mink(&coords[i], &coords[j]));
    let max = truth.max_abs();
    let mut errs: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter_map(|(i, j)| {
            let t = truth.at(i, j);
            (t >= fraction * max && t > 0.0).then(|| (sigma_hat.s(i, j) - t).abs() / t)
        })
        .collect();
    if errs.is_empty() {
        return f64::NAN;
    }
    errs.sort_by(f64::total_cmp);
    errs[errs.len() / 2]
}

/// Index of the point closest to `c` in coordinates.
pub fn nearest_point(coords: &[Vec<f64>], c: &[f64]) -> usize {
    let d = |p: &Vec<f64>| p.iter().zip(c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
    (0..coords.len()).min_by(|&a, &b| d(&coords[a]).total_cmp(&d(&coords[b])).then(a.cmp(&b))).unwrap_or(0)
}

/// Dm at the centre of a sprinkled diamond holding about `n` points.
pub fn dm_at_center(dim: usize, n: f64, seed: u64, opts: &DmOptions) -> Result<f64> {
    let region = Region::diamond(1.0, dim - 1);
    let (pom, coords) = sprinkle_pom(&region, n / region.volume(), seed)?;
    let b = nearest_point(&coords, &vec![0.0; dim]);
    Ok(dm_dimension(&pom, b, opts)?.extrapolated)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    #[serde(default)]
    pub seed: u64,
    /// Experiment-specific parameters; missing keys take defaults.
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub name: String,
    pub seed: u64,
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

pub const REPORT_SCHEMA: u32 = 1;

pub const EXPERIMENTS: [&str; 7] =
    ["lattice-convergence", "cylinder-convergence", "scaling", "dm-recovery", "reconstruction", "collapse", "rcf-audit"];

impl ExperimentReport {
    /// Writes one CSV per table plus `summary.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let io = |e: std::io::Error| Error::Missing(format!("{}: {e}", dir.display()));
        fs::create_dir_all(dir).map_err(io)?;
        let mut out = Vec::new();
        for t in &self.tables {
            let path = dir.join(format!("{}.csv", t.name));
            let mut w = csv::Writer::from_path(&path).map_err(|e| Error::Missing(e.to_string()))?;
            w.write_record(&t.header).map_err(|e| Error::Malformed(e.to_string()))?;
            for row in &t.rows {
                w.write_record(row.iter().map(|v| format!("{v}"))).map_err(|e| Error::Malformed(e.to_string()))?;
            }
            w.flush().map_err(io)?;
            out.push(path);
        }
        let path = dir.join("summary.json");
        let text = serde_json::to_string_pretty(self).map_err(|e| Error::Malformed(e.to_string()))?;
        fs::write(&path, text).map_err(io)?;
        out.push(path);
        Ok(out)
    }
}

fn param<T: for<'de> Deserialize<'de>>(spec: &ExperimentSpec, key: &str, default: T) -> Result<T> {
    match spec.params.get(key) {
        None => Ok(default),
        Some(v) => serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(format!("parameter {key}: {e}"))),
    }
}

fn check(name: &str, value: f64, pass: bool) -> Check {
    Check { name: name.into(), value, pass }
}

fn table(name: &str, header: &[&str], rows: Vec<Vec<f64>>) -> Table {
    Table { name: name.into(), header: header.iter().map(|h| h.to_string()).collect(), rows }
}

pub fn run_experiment(spec: &ExperimentSpec, tol: &Tolerances) -> Result<ExperimentReport> {
    let (tables, checks) = match spec.name.as_str() {
        "lattice-convergence" => lattice_experiment(spec, tol)?,
        "cylinder-convergence" => cylinder_experiment(spec)?,
        "scaling" => scaling_experiment(spec, tol)?,
        "dm-recovery" => dm_experiment(spec, tol)?,
        "reconstruction" => reconstruction_experiment(spec, tol)?,
        "collapse" => collapse_experiment(spec)?,
        "rcf-audit" => rcf_experiment(spec, tol)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown experiment {other}; known: {}",
                EXPERIMENTS.join(", ")
            )))
        }
    };
    let pass = checks.iter().all(|c| c.pass);
    Ok(ExperimentReport { schema: REPORT_SCHEMA, name: spec.name.clone(), seed: spec.seed, tables, checks, pass })
}

type Outcome = (Vec<Table>, Vec<Check>);

fn lattice_experiment(spec: &ExperimentSpec, tol: &Tolerances) -> Result<Outcome> {
    let ns: Vec<usize> = param(spec, "n", vec![4, 8, 16])?;
    let reference: usize = param(spec, "reference", 32)?;
    let s: f64 = param(spec, "s", 1.0)?;
    let widths: Vec<f64> = param(spec, "widths", vec![1.0, 2.0, 4.0])?;
    let width_n: usize = param(spec, "width_n", 4)?;
    let width_reference: usize = param(spec, "width_reference", 16)?;
    let d: Vec<f64> = ns.par_iter().map(|&n| lattice_distortion(n, reference, 1.0, s)).collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (k, (&n, &v)) in ns.iter().zip(&d).enumerate() {
        let ratio = if k > 0 { v / d[k - 1] } else { f64::NAN };
        rows.push(vec![n as f64, v, ratio]);
        if k > 0 {
            checks.push(check(&format!("decreasing_{n}"), v, v < d[k - 1]));
            checks.push(check(
                &format!("ratio_{n}"),
                ratio,
                (tol.lattice.ratio_min..=tol.lattice.ratio_max).contains(&ratio),
            ));
        }
    }
    let w: Vec<f64> =
        widths.par_iter().map(|&s| lattice_distortion(width_n, width_reference, 1.0, s)).collect::<Result<_>>()?;
    let wrows = widths.iter().zip(&w).map(|(s, v)| vec![*s, *v]).collect();
    if w.len() > 1 {
        let (first, last) = (w[0], w[w.len() - 1]);
        checks.push(check("no_decay_in_width", last / first, last >= first));
    }
    Ok((
        vec![table("distortion", &["n", "dist_minus", "ratio"], rows), table("width", &["s", "dist_minus"], wrows)],
        checks,
    ))
}

fn cylinder_experiment(spec: &ExperimentSpec) -> Result<Outcome> {
    let ks: Vec<usize> = param(spec, "k", vec![8, 16, 32])?;
    let reference: usize = param(spec, "reference", 96)?;
    let times: Vec<f64> = param(spec, "times", (0..=8).map(|i| i as f64 * std::f64::consts::PI / 8.0).collect())?;
    let rows = cylinder_convergence(&ks, reference, &times)?;
    let mut checks = Vec::new();
    for w in rows.windows(2) {
        checks.push(check(&format!("dist_minus_{}", w[1].k), w[1].dist_minus, w[1].dist_minus < w[0].dist_minus));
        checks.push(check(&format!("dist_times_{}", w[1].k), w[1].dist_times, w[1].dist_times < w[0].dist_times));
    }
    let t = rows.iter().map(|r| vec![r.k as f64, r.dist_minus, r.dist_times]).collect();
    Ok((vec![table("cylinder", &["k", "dist_minus", "dist_times"], t)], checks))
}

fn scaling_experiment(spec: &ExperimentSpec, tol: &Tolerances) -> Result<Outcome> {
    let rs: Vec<f64> = param(spec, "r", vec![0.5, 1.0, 1.5, 2.0])?;
    let n: f64 = param(spec, "points", 60.0)?;
    let region = Region::diamond(1.0, 1);
    let x = crate::models::sprinkle(&region, n / region.volume(), spec.seed)?;
    let max = x.sigma.max_abs();
    let id = Correspondence::identity(x.len());
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for &r in &rs {
        let y = scale(&x, r)?;
        let d = dist_minus(&id, &x, &y)?;
        let bound = (r - 1.0).abs() * max;
        rows.push(vec![r, d, bound]);
        checks.push(check(&format!("bound_{r}"), d, d <= bound + tol.validation.tol));
    }
    Ok((vec![table("scaling", &["r", "dist_minus", "bound"], rows)], checks))
}

fn dm_experiment(spec: &ExperimentSpec, tol: &Tolerances) -> Result<Outcome> {
    let sizes: Vec<f64> = param(spec, "points", vec![5000.0, 10000.0, 20000.0])?;
    let opts = DmOptions::default();
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (dim, range) in [(2usize, tol.dm.dim2), (3, tol.dm.dim3)] {
        let mut last = f64::NAN;
        for &n in &sizes {
            last = dm_at_center(dim, n, spec.seed, &opts)?;
            rows.push(vec![dim as f64, n, last]);
        }
        checks.push(check(&format!("dim_{dim}"), last, (range[0]..=range[1]).contains(&last)));
    }
    Ok((vec![table("dm", &["dim", "points", "dm"], rows)], checks))
}

fn reconstruction_experiment(spec: &ExperimentSpec, tol: &Tolerances) -> Result<Outcome> {
    let sizes: Vec<f64> = param(spec, "points", vec![1000.0, 2500.0, 5000.0])?;
    let floor: usize = param(spec, "noise_floor", DEFAULT_NOISE_FLOOR)?;
    let region = Region::diamond(1.0, 1);
    let mut rows = Vec::new();
    let mut last = f64::NAN;
    for &n in &sizes {
        let (pom, coords) = sprinkle_pom(&region, n / region.volume(), spec.seed)?;
        let s = reconstruct_pom(&pom, &DmField::Constant(2.0), floor)?;
        last = reconstruction_error(&coords, &s, tol.reconstruction.sigma_fraction);
        rows.push(vec![pom.len() as f64, last]);
    }
    let checks = vec![check("median_relative", last, last < tol.reconstruction.median_relative)];
    Ok((vec![table("reconstruction", &["points", "median_relative_error"], rows)], checks))
}

fn collapse_experiment(spec: &ExperimentSpec) -> Result<Outcome> {
    let radii: Vec<f64> = param(spec, "radius", vec![1.0, 0.5, 0.25, 0.125])?;
    let k: usize = param(spec, "k", 15)?;
    let times: Vec<f64> = param(spec, "times", (0..=6).map(|i| i as f64 * 0.25).collect())?;
    let level: usize = param(spec, "level", 3)?;
    let rows: Vec<Vec<f64>> = radii
        .par_iter()
        .map(|&rho| {
            let net = circle_net(k);
            let m = FiniteMetricSpace::from_matrix(net.d.map(|v| v * rho));
            let x = causal_cylinder(&m, &times)?;
            let d = noldus_metric(&x, 1.0)?;
            let idx: Vec<usize> = (level * k..(level + 1) * k).collect();
            let lvl = d.subspace(&idx);
            let intrinsic = intrinsify(&lvl, default_connect_radius(&lvl))?;
            let diam = (0..k).flat_map(|i| (0..k).map(move |j| (i, j))).fold(0.0f64, |a, (i, j)| a.max(intrinsic.at(i, j)));
            // GH distance to a point is half the diameter
            Ok(vec![rho, diam, diam / 2.0])
        })
        .collect::<Result<_>>()?;
    let mut checks: Vec<Check> = rows
        .windows(2)
        .map(|w| check(&format!("non_increasing_{}", w[1][0]), w[1][2], w[1][2] <= w[0][2] + 1e-12))
        .collect();
    if let (Some(first), Some(last)) = (rows.first(), rows.last()) {
        checks.push(check("collapses", last[2], rows.len() > 1 && last[2] < first[2]));
    }
    Ok((vec![table("collapse", &["radius", "level_diameter", "gh_to_point"], rows)], checks))
}

fn rcf_experiment(spec: &ExperimentSpec, tol: &Tolerances) -> Result<Outcome> {
    let n: f64 = param(spec, "points", 2000.0)?;
    let region = Region::slab(0.5, 1.0, 1);
    let coords = sprinkle_coords(&region, n / region.volume(), spec.seed)?;
    let x = crate::models::minkowski_space(coords.clone())?;
    let causal = derived_causal(&x, tol.validation.tol)?;
    let t0: Vec<f64> = coords.iter().map(|c| c[0]).collect();
    let s = CauchySubset::from_level(&causal, &t0, 0.0)?;
    let d = noldus_metric(&x, 1.0)?;
    let ct = build_cauchy_time(&x, &s, &d, tol.validation.tol)?;
    let zero = (0..x.len()).all(|i| (ct.values[i] == 0.0) == s.contains(i));
    let increasing = ct.anti_lipschitz.ok && (0..x.len()).all(|i| {
        crate::matrix::ones(causal.row(i)).all(|j| j == i || ct.values[j] > ct.values[i])
    });
    let rows = vec![vec![
        x.len() as f64,
        s.points.len() as f64,
        ct.anti_lipschitz.checked as f64,
        ct.anti_lipschitz.violations.len() as f64,
        ct.height_weight,
    ]];
    let checks = vec![
        check("zero_locus", zero as u8 as f64, zero),
        check("anti_lipschitz", ct.anti_lipschitz.worst, ct.anti_lipschitz.ok),
        check("increasing", increasing as u8 as f64, increasing),
        check("rushing", ct.rushing.worst, ct.rushing.ok),
    ];
    Ok((vec![table("rcf", &["points", "cauchy_points", "pairs", "violations", "height_weight"], rows)], checks))
}
