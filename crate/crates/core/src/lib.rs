//! Numerical and exact machinery for q-deformed special functions.
//!
//! The crate implements the q-calculus primitives, basic and bibasic
//! hypergeometric series, Rogers-Szegő polynomials and their operator
//! algebra, the `(q, mu)` and `(p, q, mu, nu)` deformed exponentials,
//! closed-form oscillator matrix elements together with a brute-force
//! operator oracle, and Gaussian-quadrature checks of the Fourier-Gauss
//! transforms of `E^{(zeta)}_{p,q}`.

// Tolerance checks are written `!(err <= tol)` on purpose so that a NaN
// error counts as a failure.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod deformed_exp;
pub mod error;
pub mod fourier_gauss;
pub mod matrix_elements;
pub mod oscillator;
pub mod par;
pub mod params;
pub mod poly;
pub mod qcore;
pub mod qseries;
pub mod report;
pub mod rogers_szego;
pub mod scalar;
pub mod series;
pub mod verify;

pub use error::{QError, Result};
pub use params::DeformationParams;
pub use poly::QPolynomial;
pub use scalar::{DoubleDouble, ExactRational, QField, Scalar};
pub use series::{SeriesEval, SeriesPolicy};
