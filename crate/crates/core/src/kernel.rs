//! Fourier symbol of the fundamental solution.
//!
//! For ν = (μ−1)/2 the functions Φ₁(t) = t^(−ν)J_ν(tξ) and Φ₂(t) = t^(−ν)J_(−ν)(tξ)
//! (or t^(−ν)𝐘_ν(tξ) at integer ν) span the solutions of
//! `K_tt + (μ/t)K_t + ξ²K = 0`, with Wronskian `c·t^(−μ)`. The kernel K̂(t,s,ξ)
//! is the solution with K̂(s) = 0, K̂_t(s) = 1; the companion solution with
//! value 1 and slope 0 at s completes the two-point propagator.
//!
//! Very low frequencies (tξ < 1e−4) use the ξ = 0 closed forms plus their ξ²
//! correction, since the Bessel bracket degenerates there.

use crate::error::{domain, Result};
use crate::special_functions::{
    big_y_prime_unchecked, j_normalized, j_prime_unchecked, j_unchecked, sin_pi, y_unchecked,
    BesselOrder,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Below this value of tξ the small-frequency expansion replaces the Bessel formula.
pub const LOW_FREQUENCY: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelQuery {
    pub mu: f64,
    pub s: f64,
    pub t: f64,
    pub xi: f64,
}

impl KernelQuery {
    pub fn new(mu: f64, s: f64, t: f64, xi: f64) -> Self {
        KernelQuery { mu, s, t, xi }
    }
}

/// K̂ and ∂_tK̂.
#[derive(Clone, Copy, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct KernelValue {
    pub k: f64,
    pub k_t: f64,
}

/// Maps (v(s), v_t(s)) to (v(t), v_t(t)) for one frequency.
///
/// Column 0 is the solution with data (1, 0), column 1 the kernel K̂.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Propagator {
    pub m: [[f64; 2]; 2],
}

impl Propagator {
    pub const IDENTITY: Propagator = Propagator {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    pub fn apply(&self, v: f64, v_t: f64) -> (f64, f64) {
        (
            self.m[0][0] * v + self.m[0][1] * v_t,
            self.m[1][0] * v + self.m[1][1] * v_t,
        )
    }

    pub fn kernel(&self) -> KernelValue {
        KernelValue {
            k: self.m[0][1],
            k_t: self.m[1][1],
        }
    }

    /// `self` after `first`: propagate s→m with `first`, then m→t with `self`.
    pub fn compose(&self, first: &Propagator) -> Propagator {
        let a = &self.m;
        let b = &first.m;
        let mut m = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Propagator { m }
    }
}

/// The Bessel basis for a given μ.
#[derive(Clone, Copy, Debug)]
struct Basis {
    nu: f64,
    /// |ν| when ν is routed to the integer branch.
    integer: Option<u32>,
    /// Wronskian constant: W[Φ₁, Φ₂](t) = c·t^(−μ).
    c: f64,
}

impl Basis {
    fn new(mu: f64) -> Result<Self> {
        let order = BesselOrder::from_mu(mu)?;
        if order.nu.abs() > crate::special_functions::MAX_ORDER - 1.0 {
            return Err(domain("kernel", format!("mu = {mu} gives an order beyond the supported range")));
        }
        Ok(if order.is_integer() {
            let n = order.nearest_integer();
            Basis {
                nu: n as f64,
                integer: Some(n.unsigned_abs() as u32),
                c: 2.0,
            }
        } else {
            Basis {
                nu: order.nu,
                integer: None,
                c: -2.0 * sin_pi(order.nu) / PI,
            }
        })
    }

    /// [Φ₁, Φ₁', Φ₂, Φ₂'] at time t, derivatives in t.
    fn eval(&self, t: f64, xi: f64) -> [f64; 4] {
        let z = t * xi;
        let w = t.powf(-self.nu);
        let (z1, dz1, z2, dz2) = match self.integer {
            Some(n) => (
                j_unchecked(n as f64, z),
                j_prime_unchecked(n as f64, z),
                PI * y_unchecked(n, z),
                big_y_prime_unchecked(n, z),
            ),
            None => (
                j_unchecked(self.nu, z),
                j_prime_unchecked(self.nu, z),
                j_unchecked(-self.nu, z),
                j_prime_unchecked(-self.nu, z),
            ),
        };
        let p1 = w * z1;
        let p2 = w * z2;
        [
            p1,
            -self.nu / t * p1 + w * xi * dz1,
            p2,
            -self.nu / t * p2 + w * xi * dz2,
        ]
    }

    fn propagator(&self, mu: f64, s: f64, a: &[f64; 4], b: &[f64; 4]) -> Propagator {
        let f = s.powf(mu) / self.c;
        let [p1s, d1s, p2s, d2s] = *a;
        let [p1t, d1t, p2t, d2t] = *b;
        Propagator {
            m: [
                [f * (d2s * p1t - d1s * p2t), f * (p1s * p2t - p2s * p1t)],
                [f * (d2s * d1t - d1s * d2t), f * (p1s * d2t - p2s * d1t)],
            ],
        }
    }
}

/// (t^a − s^a)/a, continuous through a = 0.
fn power_diff(a: f64, s: f64, t: f64) -> f64 {
    let l = (t / s).ln();
    if a == 0.0 {
        l
    } else {
        s.powf(a) * (a * l).exp_m1() / a
    }
}

/// ξ⁰ and ξ² coefficients of the propagator for μ away from −1, 1, 3.
fn low_frequency_terms(mu: f64, s: f64, t: f64) -> ([[f64; 2]; 2], [[f64; 2]; 2]) {
    let a = 1.0 - mu;
    let sm = s.powf(mu);
    let tm = t.powf(-mu);
    let pd = power_diff(a, s, t);
    let k0 = sm * pd;
    let k0_t = (s / t).powf(mu);
    // L₁ solves (t^μ L₁')' = −t^μ, K₁ solves (t^μ K₁')' = −t^μ K₀, both with zero data at s
    let l1 = -((t * t - s * s) / 2.0 - s.powf(mu + 1.0) * pd) / (mu + 1.0);
    let l1_t = -(t - s.powf(mu + 1.0) * tm) / (mu + 1.0);
    let p2 = (t.powf(3.0 - mu) - s.powf(3.0 - mu)) / (3.0 - mu);
    let k1 = -(sm * p2 / 2.0 - s * (t * t - s * s) / (2.0 * (mu + 1.0))
        + s.powf(mu + 2.0) * (t.powf(a) - s.powf(a)) / (2.0 * (mu + 1.0)))
        / a;
    let k1_t = -tm * (sm * (t * t - s * s) / 2.0 - s * (t.powf(mu + 1.0) - s.powf(mu + 1.0)) / (mu + 1.0)) / a;
    ([[1.0, k0], [0.0, k0_t]], [[l1, k1], [l1_t, k1_t]])
}

fn low_frequency(mu: f64, s: f64, t: f64, xi: f64) -> Propagator {
    const H: f64 = 2e-3;
    let (m0, m1) = match [-1.0, 1.0, 3.0].into_iter().find(|c| (mu - c).abs() < 1e-3) {
        // the ξ² coefficient has removable singularities here; interpolate across
        Some(c) => {
            let lo1 = low_frequency_terms(c - H, s, t).1;
            let hi1 = low_frequency_terms(c + H, s, t).1;
            let w = (mu - c) / (2.0 * H) + 0.5;
            let mix = |lo: [[f64; 2]; 2], hi: [[f64; 2]; 2]| {
                let mut m = [[0.0; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        m[i][j] = (1.0 - w) * lo[i][j] + w * hi[i][j];
                    }
                }
                m
            };
            let exact0 = low_frequency_terms(mu, s, t).0;
            (exact0, mix(lo1, hi1))
        }
        None => low_frequency_terms(mu, s, t),
    };
    let x2 = xi * xi;
    let mut m = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = m0[i][j] + x2 * m1[i][j];
        }
    }
    Propagator { m }
}

fn check_regular(op: &'static str, mu: f64, s: f64, t: f64, xi: f64) -> Result<()> {
    if !mu.is_finite() {
        return Err(domain(op, format!("mu = {mu} is not finite")));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(domain(op, format!("s = {s} must be > 0")));
    }
    if !(t >= s) || !t.is_finite() {
        return Err(domain(op, format!("need t ≥ s, got t = {t}, s = {s}")));
    }
    if !(xi >= 0.0) || !xi.is_finite() {
        return Err(domain(op, format!("xi = {xi} must be finite and ≥ 0")));
    }
    Ok(())
}

fn propagator_unchecked(basis: &Basis, mu: f64, s: f64, t: f64, xi: f64) -> Propagator {
    if t == s {
        return Propagator::IDENTITY;
    }
    if t * xi < LOW_FREQUENCY {
        return low_frequency(mu, s, t, xi);
    }
    let p = basis.propagator(mu, s, &basis.eval(s, xi), &basis.eval(t, xi));
    #[cfg(debug_assertions)]
    near_integer_check(basis, mu, s, t, xi, &p);
    p
}

/// Between 1e−9 and 1e−4 of an integer order both formulas must agree.
#[cfg(debug_assertions)]
fn near_integer_check(basis: &Basis, mu: f64, s: f64, t: f64, xi: f64, p: &Propagator) {
    let dn = basis.nu - basis.nu.round();
    if basis.integer.is_some() || dn.abs() >= 1e-4 || dn.abs() <= crate::special_functions::INTEGER_TOL {
        return;
    }
    let int_mu = 2.0 * basis.nu.round() + 1.0;
    let ib = Basis::new(int_mu).expect("integer order is valid");
    let q = ib.propagator(int_mu, s, &ib.eval(s, xi), &ib.eval(t, xi));
    let k = p.kernel().k;
    let ki = q.kernel().k;
    let scale = ki.abs() + (t - s) * (1.0 + (t / s).powf(mu.abs()));
    debug_assert!(
        (k - ki).abs() <= 1e-2 * scale,
        "integer and non-integer kernels disagree near mu = {mu}: {k} vs {ki}"
    );
}

/// Two-point propagator of the linear equation from s to t at frequency ξ.
pub fn propagator(mu: f64, s: f64, t: f64, xi: f64) -> Result<Propagator> {
    check_regular("propagator", mu, s, t, xi)?;
    Ok(propagator_unchecked(&Basis::new(mu)?, mu, s, t, xi))
}

/// K̂(t,s,ξ) and its t-derivative.
pub fn k_hat(q: KernelQuery) -> Result<KernelValue> {
    check_regular("k_hat", q.mu, q.s, q.t, q.xi)?;
    let basis = Basis::new(q.mu)?;
    Ok(propagator_unchecked(&basis, q.mu, q.s, q.t, q.xi).kernel())
}

/// K̂ for μ evaluated through the reflected problem μ♯ = 2−μ.
pub fn k_hat_reflected(q: KernelQuery) -> Result<KernelValue> {
    let sharp = k_hat(KernelQuery { mu: 2.0 - q.mu, ..q })?;
    let a = 1.0 - q.mu;
    let f = (q.t / q.s).powf(a);
    Ok(KernelValue {
        k: f * sharp.k,
        k_t: f * (a / q.t * sharp.k + sharp.k_t),
    })
}

/// M̂(t,ξ) = Γ(1+ν)(tξ/2)^(−ν)J_ν(tξ), the propagator of the singular problem.
pub fn singular_multiplier(mu: f64, t: f64, xi: f64) -> Result<f64> {
    Ok(singular_value(mu, t, xi)?.k)
}

/// M̂ and ∂_tM̂.
pub fn singular_value(mu: f64, t: f64, xi: f64) -> Result<KernelValue> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain("singular_multiplier", format!("mu = {mu} must be > 0")));
    }
    if !(t > 0.0) || !t.is_finite() {
        return Err(domain("singular_multiplier", format!("t = {t} must be > 0")));
    }
    if !(xi >= 0.0) || !xi.is_finite() {
        return Err(domain("singular_multiplier", format!("xi = {xi} must be ≥ 0")));
    }
    let nu = 0.5 * (mu - 1.0);
    if nu > crate::special_functions::MAX_ORDER - 1.0 {
        return Err(domain("singular_multiplier", format!("mu = {mu} beyond the supported order")));
    }
    let z = t * xi;
    Ok(KernelValue {
        k: j_normalized(nu, z),
        k_t: -xi * z / (2.0 * (nu + 1.0)) * j_normalized(nu + 1.0, z),
    })
}

/// A sample (v, v_t) of a solution at time t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub value: f64,
    pub derivative: f64,
    pub t: f64,
}

/// v♯ = t^(μ−1)v: maps a solution of the μ-problem to one of the (2−μ)-problem.
///
/// Returns μ♯ with the mapped sample. Applying it again with μ♯ is the inverse.
pub fn reflect_mu(mu: f64, sample: Sample) -> Result<(f64, Sample)> {
    if !mu.is_finite() || !(sample.t > 0.0) {
        return Err(domain("reflect_mu", format!("need finite mu and t > 0, got {mu}, {}", sample.t)));
    }
    let e = mu - 1.0;
    let w = sample.t.powf(e);
    Ok((
        2.0 - mu,
        Sample {
            value: w * sample.value,
            derivative: e / sample.t * w * sample.value + w * sample.derivative,
            t: sample.t,
        },
    ))
}

/// |K̂_tt + ξ²K̂ + (μ/t)K̂_t| with fourth-order central differences of K̂ in t.
pub fn kernel_ode_residual(q: KernelQuery, h: f64) -> Result<f64> {
    if !(h > 0.0) || !(q.t - q.s > 2.0 * h) {
        return Err(domain("kernel_ode_residual", format!("need t − s > 2h, got h = {h}")));
    }
    check_regular("kernel_ode_residual", q.mu, q.s, q.t, q.xi)?;
    let basis = Basis::new(q.mu)?;
    let k = |dt: f64| propagator_unchecked(&basis, q.mu, q.s, q.t + dt, q.xi).m[0][1];
    let (m2, m1, c0, p1, p2) = (k(-2.0 * h), k(-h), k(0.0), k(h), k(2.0 * h));
    let k_t = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let k_tt = (-m2 + 16.0 * m1 - 30.0 * c0 + 16.0 * p1 - p2) / (12.0 * h * h);
    Ok((k_tt + q.xi * q.xi * c0 + q.mu / q.t * k_t).abs())
}

/// Kernel evaluation over a frequency grid with the s-side Bessel values cached.
#[derive(Clone, Debug)]
pub struct KernelBatch {
    mu: f64,
    s: f64,
    xi: Vec<f64>,
    basis: Basis,
    at_s: Vec<[f64; 4]>,
}

impl KernelBatch {
    pub fn new(mu: f64, s: f64, xi: &[f64]) -> Result<Self> {
        for &x in xi {
            check_regular("KernelBatch", mu, s, s, x)?;
        }
        let basis = Basis::new(mu)?;
        let at_s = map_grid(xi, |x| basis.eval(s, x));
        Ok(KernelBatch {
            mu,
            s,
            xi: xi.to_vec(),
            basis,
            at_s,
        })
    }

    pub fn xi(&self) -> &[f64] {
        &self.xi
    }

    /// Propagators from s to t for every frequency.
    pub fn propagators(&self, t: f64) -> Result<Vec<Propagator>> {
        check_regular("KernelBatch::propagators", self.mu, self.s, t, 0.0)?;
        let idx: Vec<usize> = (0..self.xi.len()).collect();
        Ok(map_grid_idx(&idx, |i| {
            let x = self.xi[i];
            if t == self.s {
                Propagator::IDENTITY
            } else if t * x < LOW_FREQUENCY {
                low_frequency(self.mu, self.s, t, x)
            } else {
                let b = self.basis.eval(t, x);
                self.basis.propagator(self.mu, self.s, &self.at_s[i], &b)
            }
        }))
    }

    pub fn k_values(&self, t: f64) -> Result<Vec<KernelValue>> {
        Ok(self.propagators(t)?.iter().map(Propagator::kernel).collect())
    }
}

#[cfg(feature = "parallel")]
fn map_grid<T: Send>(xi: &[f64], f: impl Fn(f64) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    xi.par_iter().map(|&x| f(x)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_grid<T>(xi: &[f64], f: impl Fn(f64) -> T) -> Vec<T> {
    xi.iter().map(|&x| f(x)).collect()
}

#[cfg(feature = "parallel")]
fn map_grid_idx<T: Send>(idx: &[usize], f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    use rayon::prelude::*;
    idx.par_iter().map(|&i| f(i)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_grid_idx<T>(idx: &[usize], f: impl Fn(usize) -> T) -> Vec<T> {
    idx.iter().map(|&i| f(i)).collect()
}
