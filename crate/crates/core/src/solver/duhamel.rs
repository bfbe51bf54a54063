//! Rebuilds the final state of a method-of-lines run from its stored slices
//! through the Duhamel formula and reports the mismatch.

use super::config::RunConfig;
use super::grid::FieldState;
use super::run::{nonlinear_term, Equation, RunOutcome};
use crate::error::{Error, Result};
use crate::kernel::{KernelBatch, Propagator};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Fewest slices accepted for the quadrature.
pub const MIN_SLICES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DuhamelReport {
    /// ‖û_rebuilt − û_mol‖ / ‖û_mol‖ at the last slice.
    pub residual: f64,
    /// Same comparison restricted to the part beyond the linear evolution.
    pub nonlinear_residual: f64,
    pub slices: usize,
    pub time: f64,
    pub via_reflection: bool,
}

/// Weights of composite Simpson on the nodes `x`, which need not be equally spaced.
pub fn simpson_weights(x: &[f64]) -> Vec<f64> {
    let m = x.len() - 1;
    let mut w = vec![0.0; x.len()];
    if m == 1 {
        let h = x[1] - x[0];
        return vec![h / 2.0, h / 2.0];
    }
    let h: Vec<f64> = x.windows(2).map(|p| p[1] - p[0]).collect();
    let mut i = 1;
    while i < m {
        let (h0, h1) = (h[i - 1], h[i]);
        let hph = h0 + h1;
        w[i - 1] += hph / 6.0 * (2.0 - h1 / h0);
        w[i] += hph / 6.0 * hph * hph / (h0 * h1);
        w[i + 1] += hph / 6.0 * (2.0 - h0 / h1);
        i += 2;
    }
    if m % 2 == 1 {
        // last interval on the parabola through the final three nodes
        let (h0, h1) = (h[m - 2], h[m - 1]);
        w[m] += (2.0 * h1 * h1 + 3.0 * h1 * h0) / (6.0 * (h0 + h1));
        w[m - 1] += (h1 * h1 + 3.0 * h1 * h0) / (6.0 * h0);
        w[m - 2] -= h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    }
    w
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Duhamel check with the direct kernel.
pub fn duhamel_check(config: &RunConfig, outcome: &RunOutcome) -> Result<DuhamelReport> {
    duhamel_check_with(config, outcome, false)
}

/// Duhamel check; with `via_reflection` every kernel is taken from the
/// reflected problem with damping 2 − μ.
pub fn duhamel_check_with(config: &RunConfig, outcome: &RunOutcome, via_reflection: bool) -> Result<DuhamelReport> {
    let mut slices: Vec<&FieldState> = Vec::with_capacity(outcome.slices.len());
    for s in &outcome.slices {
        // the start state may be stored twice when it is also an output time
        if slices.last().map_or(true, |p| s.time > p.time) {
            slices.push(s);
        }
    }
    if slices.len() < MIN_SLICES + 1 {
        return Err(Error::Insufficient(format!(
            "Duhamel check needs at least {} slices, run stored {}",
            MIN_SLICES + 1,
            slices.len()
        )));
    }
    let first = slices[0];
    let last = *slices.last().unwrap();
    let grid = last.grid;
    let big_t = last.time;
    let n = grid.n_modes;
    let mu = config.params.mu;
    let eq = Equation::from_config(config);
    let xi = grid.xi_half();

    // damping of the kernels actually evaluated, and the factors (T/s)^(1−μ)
    let kmu = if via_reflection { 2.0 - mu } else { mu };
    let weight = |s: f64| if via_reflection { (big_t / s).powf(1.0 - mu) } else { 1.0 };

    let s0 = first.time;
    let props: Vec<Propagator> = KernelBatch::new(kmu, s0, &xi)?.propagators(big_t)?;
    let mut linear = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let m = &props[grid.half_index(k)].m;
        let (u, v) = (first.u_hat[k], first.v_hat[k]);
        linear[k] = if via_reflection {
            // u♯ = s^(μ−1)u, u♯_t = (μ−1)s^(μ−2)u + s^(μ−1)u_t, u = T^(1−μ)u♯
            let a = s0.powf(mu - 1.0);
            let us = u * a;
            let vs = u * ((mu - 1.0) * a / s0) + v * a;
            (us * m[0][0] + vs * m[0][1]) * big_t.powf(1.0 - mu)
        } else {
            u * m[0][0] + v * m[0][1]
        };
    }

    let nodes: Vec<f64> = slices.iter().map(|s| s.time.ln()).collect();
    let w = simpson_weights(&nodes);
    let mut integral = vec![Complex64::new(0.0, 0.0); n];
    let mut f_hat = vec![Complex64::new(0.0, 0.0); n];
    for (&slice, &wi) in slices.iter().zip(&w) {
        let s = slice.time;
        if s >= big_t {
            continue; // K(T, T) = 0
        }
        nonlinear_term(&eq, &grid, s, &slice.u_hat, &mut f_hat);
        let ks = KernelBatch::new(kmu, s, &xi)?.k_values(big_t)?;
        // integrand in ln s carries an extra factor s
        let scale = wi * s * weight(s);
        for k in 0..n {
            integral[k] += f_hat[k] * (ks[grid.half_index(k)].k * scale);
        }
    }

    let rebuilt: Vec<Complex64> = linear.iter().zip(&integral).map(|(a, b)| a + b).collect();
    let reference = l2(&last.u_hat);
    let residual = diff_norm(&rebuilt, &last.u_hat) / reference;
    let beyond: Vec<Complex64> = last.u_hat.iter().zip(&linear).map(|(a, b)| a - b).collect();
    let beyond_norm = l2(&beyond);
    let nonlinear_residual = if beyond_norm == 0.0 {
        l2(&integral)
    } else {
        diff_norm(&beyond, &integral) / beyond_norm
    };
    Ok(DuhamelReport {
        residual,
        nonlinear_residual,
        slices: slices.len(),
        time: big_t,
        via_reflection,
    })
}

/// Free evolution of `first` up to time t.
pub fn linear_part(config: &RunConfig, first: &FieldState, t: f64) -> Result<FieldState> {
    let grid = first.grid;
    let props = KernelBatch::new(config.params.mu, first.time, &grid.xi_half())?.propagators(t)?;
    let mut st = FieldState::zeros(grid, t);
    for k in 0..grid.n_modes {
        let m = &props[grid.half_index(k)].m;
        st.u_hat[k] = first.u_hat[k] * m[0][0] + first.v_hat[k] * m[0][1];
        st.v_hat[k] = first.u_hat[k] * m[1][0] + first.v_hat[k] * m[1][1];
    }
    Ok(st)
}
