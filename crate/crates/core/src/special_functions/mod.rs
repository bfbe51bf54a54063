//! Bessel functions, Watson's 𝐘_n and the gamma function.

mod bessel;
pub mod dd;
mod gamma;

pub use bessel::{
    bessel_big_y, bessel_big_y_prime, bessel_j, bessel_j_prime, bessel_j_series,
    bessel_jy_asymptotic, bessel_y, eval_branch, hankel_pq, hankel_symbol, switch_point,
    wronskian_residual, BesselOrder, Branch, EvalBranch, INTEGER_TOL, MAX_ORDER,
};
pub(crate) use bessel::{big_y_prime_unchecked, j_normalized, j_prime_unchecked, j_unchecked, y_unchecked};
pub use gamma::{cos_pi, gamma, rgamma, sin_pi};
