//! Finite Lorentzian spaces, ordered measure spaces and metric spaces.
//!
//! `sigma` is the signed Lorentzian distance: positive exactly on
//! chronologically related pairs in time order, negative on the reversed
//! pairs and zero otherwise. Null relations can only be carried by the
//! optional causal matrix.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{ones, BitMatrix, BitSet, Square};

/// Strictness tolerance used for `sigma > 0` style tests.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Opaque point identifier; integers and strings both round-trip through JSON.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointId {
    Int(i64),
    Name(String),
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointId::Int(i) => write!(f, "{i}"),
            PointId::Name(s) => write!(f, "{s}"),
        }
    }
}

pub fn default_ids(n: usize) -> Vec<PointId> {
    (0..n as i64).map(PointId::Int).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLorentzSpace {
    pub points: Vec<PointId>,
    pub sigma: Square<f64>,
    pub causal: Option<BitMatrix>,
    pub labels: Option<Vec<Vec<f64>>>,
}

impl FiniteLorentzSpace {
    pub fn new(points: Vec<PointId>, sigma: Square<f64>) -> Result<Self> {
        if points.len() != sigma.n() {
            return Err(Error::Malformed(format!(
                "{} point ids for a {}x{} sigma matrix",
                points.len(),
                sigma.n(),
                sigma.n()
            )));
        }
        Ok(FiniteLorentzSpace { points, sigma, causal: None, labels: None })
    }

    pub fn from_sigma(sigma: Square<f64>) -> Self {
        let n = sigma.n();
        FiniteLorentzSpace { points: default_ids(n), sigma, causal: None, labels: None }
    }

    pub fn with_causal(mut self, causal: BitMatrix) -> Result<Self> {
        if causal.n() != self.len() {
            return Err(Error::Malformed("causal matrix size mismatch".into()));
        }
        self.causal = Some(causal);
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != self.len() {
            return Err(Error::Malformed("label count mismatch".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.sigma.n()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn s(&self, i: usize, j: usize) -> f64 {
        self.sigma.at(i, j)
    }

    /// Subspace on `idx`, keeping ids, causal matrix and labels.
    pub fn subspace(&self, idx: &[usize]) -> Self {
        FiniteLorentzSpace {
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            sigma: self.sigma.select(idx),
            causal: self.causal.as_ref().map(|c| c.select(idx)),
            labels: self.labels.as_ref().map(|l| idx.iter().map(|&i| l[i].clone()).collect()),
        }
    }

    /// `diam^-(X) = sup |sigma|`.
    pub fn diam_minus(&self) -> f64 {
        self.sigma.max_abs()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    Diagonal { x: usize, value: f64 },
    Antisymmetry { x: usize, y: usize, xy: f64, yx: f64 },
    ReverseTriangle { x: usize, y: usize, z: usize, deficit: f64 },
    CausalNotReflexive { x: usize },
    CausalNotAntisymmetric { x: usize, y: usize },
    CausalNotTransitive { x: usize, y: usize, z: usize },
    CausalMissesChronology { x: usize, y: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// True when reporting stopped at `MAX_REPORTED` entries.
    pub truncated: bool,
}

impl ValidationReport {
    pub const MAX_REPORTED: usize = 10_000;

    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, v: Violation) -> bool {
        if self.violations.len() >= Self::MAX_REPORTED {
            self.truncated = true;
            return false;
        }
        self.violations.push(v);
        true
    }
}

pub fn validate_lorentz(space: &FiniteLorentzSpace, tol: f64) -> Result<ValidationReport> {
    let n = space.len();
    if space.points.len() != n {
        return Err(Error::Malformed("point ids and sigma disagree in size".into()));
    }
    if let Some((k, v)) = space.sigma.as_slice().iter().enumerate().find(|(_, v)| !v.is_finite()) {
        return Err(Error::Malformed(format!(
            "non-finite sigma entry {v} at ({}, {})",
            k / n.max(1),
            k % n.max(1)
        )));
    }
    let mut rep = ValidationReport::default();
    let s = &space.sigma;
    for x in 0..n {
        let d = s.at(x, x);
        if d.abs() > tol && !rep.push(Violation::Diagonal { x, value: d }) {
            return Ok(rep);
        }
    }
    for x in 0..n {
        for y in x + 1..n {
            let (a, b) = (s.at(x, y), s.at(y, x));
            if (a + b).abs() > tol && !rep.push(Violation::Antisymmetry { x, y, xy: a, yx: b }) {
                return Ok(rep);
            }
        }
    }
    let chron = chronological_pairs(space, tol);
    for x in 0..n {
        for y in ones(chron.row(x)) {
            let sxy = s.at(x, y);
            for z in ones(chron.row(y)) {
                let deficit = sxy + s.at(y, z) - s.at(x, z);
                if deficit > tol && !rep.push(Violation::ReverseTriangle { x, y, z, deficit }) {
                    return Ok(rep);
                }
            }
        }
    }
    if let Some(c) = &space.causal {
        if c.n() != n {
            return Err(Error::Malformed("causal matrix size mismatch".into()));
        }
        causal_violations(c, &mut rep);
        for x in 0..n {
            for y in ones(chron.row(x)) {
                if !c.get(x, y) && !rep.push(Violation::CausalMissesChronology { x, y }) {
                    return Ok(rep);
                }
            }
        }
    }
    Ok(rep)
}

fn causal_violations(c: &BitMatrix, rep: &mut ValidationReport) {
    let n = c.n();
    for x in 0..n {
        if !c.get(x, x) && !rep.push(Violation::CausalNotReflexive { x }) {
            return;
        }
    }
    for x in 0..n {
        for y in ones(c.row(x)) {
            if y > x && c.get(y, x) && !rep.push(Violation::CausalNotAntisymmetric { x, y }) {
                return;
            }
        }
    }
    for x in 0..n {
        for y in ones(c.row(x)) {
            if y == x {
                continue;
            }
            // every z reachable from y must be reachable from x
            let rx = c.row(x);
            for (k, (&a, &b)) in c.row(y).iter().zip(rx).enumerate() {
                let mut miss = a & !b;
                while miss != 0 {
                    let z = k * 64 + miss.trailing_zeros() as usize;
                    miss &= miss - 1;
                    if !rep.push(Violation::CausalNotTransitive { x, y, z }) {
                        return;
                    }
                }
            }
        }
    }
}

/// `x ≪ y` iff `sigma(x, y) > tol`.
pub fn chronological_pairs(space: &FiniteLorentzSpace, tol: f64) -> BitMatrix {
    let n = space.len();
    let mut m = BitMatrix::new(n);
    for i in 0..n {
        let row = space.sigma.row(i);
        for (j, &v) in row.iter().enumerate() {
            if v > tol {
                m.set(i, j, true);
            }
        }
    }
    m
}

/// The supplied causal matrix (checked), or the reflexive-transitive closure
/// of the chronological relation.
pub fn derived_causal(space: &FiniteLorentzSpace, tol: f64) -> Result<BitMatrix> {
    let chron = chronological_pairs(space, tol);
    match &space.causal {
        Some(c) => {
            let mut rep = ValidationReport::default();
            causal_violations(c, &mut rep);
            if !rep.is_valid() {
                return Err(Error::InvalidArgument(format!(
                    "supplied causal matrix is not a partial order: {:?}",
                    rep.violations.first()
                )));
            }
            if !chron.is_subset_of(c) {
                return Err(Error::InvalidArgument(
                    "supplied causal matrix misses chronological pairs".into(),
                ));
            }
            Ok(c.clone())
        }
        None => Ok(chron.reflexive_transitive_closure()),
    }
}

/// Points with nonempty chronological past and future.
pub fn restrict_underline(space: &FiniteLorentzSpace, tol: f64) -> FiniteLorentzSpace {
    let (past, future) = boundary_sets(space, tol);
    let mut drop = BitSet::new(space.len());
    for i in past.into_iter().chain(future) {
        drop.insert(i);
    }
    let keep: Vec<usize> = (0..space.len()).filter(|&i| !drop.contains(i)).collect();
    space.subspace(&keep)
}

/// `(∂^-X, ∂^+X)`: points with empty chronological past, resp. future.
pub fn boundary_sets(space: &FiniteLorentzSpace, tol: f64) -> (Vec<usize>, Vec<usize>) {
    let n = space.len();
    let mut past = Vec::new();
    let mut future = Vec::new();
    for i in 0..n {
        let row = space.sigma.row(i);
        if !row.iter().any(|&v| v < -tol) {
            past.push(i);
        }
        if !row.iter().any(|&v| v > tol) {
            future.push(i);
        }
    }
    (past, future)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeDiameter {
    /// inf over y in ∂^+ of sup over x in ∂^- of sigma(x, y).
    pub value: f64,
    /// inf over x in ∂^- of sup over y in ∂^+ of sigma(x, y).
    pub dual: f64,
}

pub fn tdiam(space: &FiniteLorentzSpace, tol: f64) -> Result<TimeDiameter> {
    let (past, future) = boundary_sets(space, tol);
    if past.is_empty() || future.is_empty() {
        return Err(Error::Empty("boundary set".into()));
    }
    let inf_sup = |outer: &[usize], inner: &[usize], f: &dyn Fn(usize, usize) -> f64| {
        outer
            .iter()
            .map(|&o| inner.iter().fold(0.0f64, |m, &i| m.max(f(o, i))))
            .fold(f64::INFINITY, f64::min)
    };
    let value = inf_sup(&future, &past, &|y, x| space.s(x, y));
    let dual = inf_sup(&past, &future, &|x, y| space.s(x, y));
    Ok(TimeDiameter { value, dual })
}

/// Finite ordered measure space.
#[derive(Clone, Debug, PartialEq)]
pub struct FinitePOM {
    pub points: Vec<PointId>,
    pub leq: BitMatrix,
    pub mu: Vec<f64>,
}

impl FinitePOM {
    pub fn new(points: Vec<PointId>, leq: BitMatrix, mu: Vec<f64>) -> Result<Self> {
        let pom = FinitePOM { points, leq, mu };
        pom.validate()?;
        Ok(pom)
    }

    /// Causal order of `space` with the given point weights.
    pub fn from_space(space: &FiniteLorentzSpace, mu: Vec<f64>, tol: f64) -> Result<Self> {
        if mu.len() != space.len() {
            return Err(Error::Malformed("weight count mismatch".into()));
        }
        FinitePOM::new(space.points.clone(), derived_causal(space, tol)?, mu)
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.mu.len();
        if self.points.len() != n || self.leq.n() != n {
            return Err(Error::Malformed("POM components disagree in size".into()));
        }
        if let Some(w) = self.mu.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::Malformed(format!("weight {w} is not a nonnegative real")));
        }
        let mut rep = ValidationReport::default();
        causal_violations(&self.leq, &mut rep);
        if !rep.is_valid() {
            return Err(Error::Malformed(format!("order violation: {:?}", rep.violations[0])));
        }
        Ok(())
    }

    pub fn measure(&self, set: &[u64]) -> f64 {
        crate::matrix::weight(set, &self.mu)
    }

    /// `J(p, q) = J^+(p) ∩ J^-(q)` as a packed set.
    pub fn interval(&self, up: &BitMatrix, p: usize, q: usize) -> BitSet {
        let mut s = BitSet::from_words(self.len(), self.leq.row(p));
        s.intersect_with(up.row(q));
        s
    }
}

/// Finite (extended) metric space; `f64::INFINITY` marks disconnected pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    pub points: Vec<PointId>,
    pub d: Square<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum MetricViolation {
    Negative { x: usize, y: usize },
    Diagonal { x: usize },
    Symmetry { x: usize, y: usize },
    Triangle { x: usize, y: usize, z: usize, excess: f64 },
}

impl FiniteMetricSpace {
    pub fn new(points: Vec<PointId>, d: Square<f64>) -> Result<Self> {
        if points.len() != d.n() {
            return Err(Error::Malformed("metric size mismatch".into()));
        }
        if d.as_slice().iter().any(|v| v.is_nan()) {
            return Err(Error::Malformed("NaN distance".into()));
        }
        Ok(FiniteMetricSpace { points, d })
    }

    pub fn from_matrix(d: Square<f64>) -> Self {
        FiniteMetricSpace { points: default_ids(d.n()), d }
    }

    pub fn len(&self) -> usize {
        self.d.n()
    }

    pub fn is_empty(&self) -> bool {
        self.d.n() == 0
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.d.at(i, j)
    }

    pub fn subspace(&self, idx: &[usize]) -> Self {
        FiniteMetricSpace {
            points: idx.iter().map(|&i| self.points[i].clone()).collect(),
            d: self.d.select(idx),
        }
    }

    /// Pseudometric axioms within `tol`; a zero distance between distinct
    /// points is allowed.
    pub fn violations(&self, tol: f64) -> Vec<MetricViolation> {
        let n = self.len();
        let mut out = Vec::new();
        for x in 0..n {
            if self.at(x, x).abs() > tol {
                out.push(MetricViolation::Diagonal { x });
            }
            for y in 0..n {
                let v = self.at(x, y);
                if v < -tol {
                    out.push(MetricViolation::Negative { x, y });
                }
                if y > x && !close_ext(v, self.at(y, x), tol) {
                    out.push(MetricViolation::Symmetry { x, y });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let dxy = self.at(x, y);
                for z in 0..n {
                    let excess = dxy - self.at(x, z) - self.at(z, y);
                    if excess > tol * (1.0 + dxy.abs()) {
                        out.push(MetricViolation::Triangle { x, y, z, excess });
                    }
                }
            }
        }
        out
    }
}

fn close_ext(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        a == b
    } else {
        (a - b).abs() <= tol
    }
}

/// Index sequence whose consecutive entries are strictly related.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CausalChain(pub Vec<usize>);

impl CausalChain {
    /// Consecutive pairs strictly related under `leq`.
    pub fn is_chain_in(&self, leq: &BitMatrix) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1] && leq.get(w[0], w[1]))
    }

    /// Consecutive pairs with `sigma > tol`.
    pub fn is_chronological_in(&self, space: &FiniteLorentzSpace, tol: f64) -> bool {
        self.0.windows(2).all(|w| space.s(w[0], w[1]) > tol)
    }
}
