//! Numerical laboratory for linear combinations of Dirichlet L-functions.
//!
//! The crate is organised around five subsystems:
//!
//! * [`lfunc`]: L-function specs (Riemann zeta and Dirichlet L-functions), their
//!   Euler-product coefficients, pointwise evaluation and Selberg prime sums.
//! * [`zeros`]: argument-principle zero counting, zero refinement and the
//!   Littlewood-lemma identity.
//! * [`random_model`]: random Euler products driven by unit-circle phases and
//!   Monte Carlo estimators built on them.
//! * [`density`]: characteristic functions of the random model, density
//!   inversion, Gaussian asymptotics and the constant `K0`.
//! * [`discrepancy`]: empirical value distributions on vertical segments, box
//!   discrepancy against the random model and the Beurling–Selberg toolkit.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cache;
pub mod character;
pub mod density;
pub mod discrepancy;
mod error;
pub mod hurwitz;
pub mod lfunc;
pub mod numerics;
pub mod primes;
pub mod random_model;
pub mod stats;
pub mod zeros;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
