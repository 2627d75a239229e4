//! Finite models of synthetic Lorentzian geometry.

pub mod cauchy;
pub mod error;
pub mod experiments;
pub mod gh;
pub mod io;
pub mod matrix;
pub mod mcs;
pub mod models;
pub mod orderdim;
pub mod pom;
pub mod space;

pub use error::{Error, Result};
pub use matrix::{BitMatrix, BitSet, Square};
pub use space::{
    CausalChain, FiniteLorentzSpace, FiniteMetricSpace, FinitePOM, PointId, DEFAULT_TOL,
};
