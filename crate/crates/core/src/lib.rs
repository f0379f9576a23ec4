//! Worst-case amplitudes of linear recurrences with roots in polydiscs,
//! computed through hook Schur polynomials, together with brute-force
//! oracles, a vertex method for Reinhardt root domains, and numerical scans
//! of related interpolation-error conjectures.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the
//! `*64` / `*32` aliases below fix the scalar.

pub mod amplitude;
pub mod conjectures;
pub mod error;
pub mod oracle;
pub mod reinhardt;
pub mod scalar;
pub mod symfunc;

pub use error::{Error, Result};
pub use num_complex::{Complex32, Complex64};
pub use scalar::Real;

pub type SymTable64 = symfunc::SymTable<f64>;
pub type SymTable32 = symfunc::SymTable<f32>;
pub type RecurrenceSpec64 = amplitude::RecurrenceSpec<f64>;
pub type RecurrenceSpec32 = amplitude::RecurrenceSpec<f32>;
pub type InterpCoeffs64 = amplitude::InterpCoeffs<f64>;
pub type InterpCoeffs32 = amplitude::InterpCoeffs<f32>;
pub type AmplitudeQuery64 = amplitude::AmplitudeQuery<f64>;
pub type AmplitudeQuery32 = amplitude::AmplitudeQuery<f32>;
pub type OracleConfig64 = oracle::OracleConfig<f64>;
pub type OracleResult64 = oracle::OracleResult<f64>;
pub type LogAffineRootDomain64 = reinhardt::LogAffineRootDomain<f64>;
pub type ReinhardtSolution64 = reinhardt::ReinhardtSolution<f64>;
pub type SelfConjugateGrid64 = conjectures::SelfConjugateGrid<f64>;
pub type QReport64 = conjectures::QReport<f64>;
pub type KallioniemiEstimate64 = conjectures::KallioniemiEstimate<f64>;
