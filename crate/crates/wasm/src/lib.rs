//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function has a plain Rust twin (`*_values`) that returns
//! `Result<_, String>`; the bindings only convert errors to JS exceptions.

// negated comparisons are how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use epd_core::exponents::{p_crit, DissipationParams};
use epd_core::kernel::KernelBatch;
use epd_core::solver::{solve_linear_exact, DataProfile, GridSpec, RunConfig};
use wasm_bindgen::prelude::*;

fn js(e: String) -> JsValue {
    JsValue::from_str(&e)
}

/// Evenly spaced points on [lo, hi].
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect(),
    }
}

/// K̂(t, s, ξ) for ξ on [0, xi_max].
pub fn kernel_values(mu: f64, s: f64, t: f64, xi_max: f64, count: usize) -> Result<Vec<f64>, String> {
    if !(xi_max > 0.0) || count < 2 {
        return Err("need xi_max > 0 and at least two points".into());
    }
    let xi = linspace(0.0, xi_max, count);
    let batch = KernelBatch::new(mu, s, &xi).map_err(|e| e.to_string())?;
    Ok(batch
        .k_values(t)
        .map_err(|e| e.to_string())?
        .into_iter()
        .map(|v| v.k)
        .collect())
}

#[wasm_bindgen]
pub fn kernel_curve(mu: f64, s: f64, t: f64, xi_max: f64, count: usize) -> Result<Vec<f64>, JsValue> {
    kernel_values(mu, s, t, xi_max, count).map_err(js)
}

/// Rows `[mu, p_fujita_mod, p_strauss_mod, p_crit]` for μ on [mu_lo, mu_hi],
/// flattened. Parameters outside the theory give NaN rows.
pub fn exponent_values(n: u32, alpha: f64, mu_lo: f64, mu_hi: f64, count: usize) -> Result<Vec<f64>, String> {
    if !(mu_hi > mu_lo) || count < 2 {
        return Err("need mu_hi > mu_lo and at least two points".into());
    }
    let mut out = Vec::with_capacity(4 * count);
    for mu in linspace(mu_lo, mu_hi, count) {
        match p_crit(&DissipationParams::new(n, mu).with_alpha(alpha)) {
            Ok(r) => out.extend([mu, r.p_fujita_mod, r.p_strauss_mod, r.p_crit]),
            Err(_) => out.extend([mu, f64::NAN, f64::NAN, f64::NAN]),
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn exponent_curve(n: u32, alpha: f64, mu_lo: f64, mu_hi: f64, count: usize) -> Result<Vec<f64>, JsValue> {
    exponent_values(n, alpha, mu_lo, mu_hi, count).map_err(js)
}

/// u(t, x) of the linear problem on the grid x_j = −L + 2Lj/N.
///
/// Regular problem: u(1) = 0, u_t(1) = plateau. Singular problem:
/// u(0) = plateau, u_t(0) = 0.
pub fn profile_values(mu: f64, t: f64, singular: bool, n_modes: usize, half_length: f64) -> Result<Vec<f64>, String> {
    let t0 = if singular { 0.0 } else { 1.0 };
    let mut cfg = RunConfig::new(DissipationParams::new(1, mu).with_t0(t0));
    cfg.grid = GridSpec::new(n_modes, half_length);
    cfg.data_profile = DataProfile::Plateau {
        amplitude: 1.0,
        radius: 1.0,
        edge: 1.0,
    };
    cfg.t_final = t;
    cfg.output_times = vec![t];
    cfg.validate().map_err(|e| e.to_string())?;
    let out = solve_linear_exact(&cfg).map_err(|e| e.to_string())?;
    out.final_state.map(|s| s.u()).ok_or_else(|| "no final state".to_string())
}

#[wasm_bindgen]
pub fn linear_profile(mu: f64, t: f64, singular: bool, n_modes: usize, half_length: f64) -> Result<Vec<f64>, JsValue> {
    profile_values(mu, t, singular, n_modes, half_length).map_err(js)
}
