//! Numerical laboratory for the semilinear Euler–Poisson–Darboux equation
//!
//! ```text
//! u_tt − Δu + (μ/t) u_t = t^(−α) |u|^p
//! ```
//!
//! The crate is layered bottom-up:
//!
//! * [`special_functions`]: real-order Bessel functions, Watson's second-kind
//!   function and the gamma function.
//! * [`exponents`]: closed-form critical exponents and decay rates.
//! * [`kernel`]: the Fourier symbol of the fundamental solution and the
//!   singular-problem multiplier.
//! * [`solver`]: 1D periodic spectral solvers (exact linear propagation,
//!   adaptive method of lines, Duhamel reconstruction, Tricomi bridge).
//! * [`analysis`]: norms, log-log fitting and rate comparison.

// negated comparisons are how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod error;
pub mod exponents;
pub mod kernel;
pub mod solver;
pub mod special_functions;

pub use error::{Error, Result};
