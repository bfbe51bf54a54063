//! Bessel functions of the first kind for real order and Watson's
//! second-kind function for integer order.
//!
//! Below the switch point `z = 14 + |ν|` the power series is summed in
//! double-double arithmetic (the terms grow to ~e^z before cancelling).
//! Above it the Hankel expansion is used with optimal truncation; for
//! |ν| > 5 the expansion is only evaluated at base orders in (−2, 2) and
//! the requested order is reached by three-term recurrence, which is stable
//! there because |order| < z.

use super::dd::Dd;
use super::gamma::{cos_pi, gamma, rgamma, sin_pi};
use crate::error::{domain, Error, Result};
use std::f64::consts::PI;

/// Largest supported |ν|.
pub const MAX_ORDER: f64 = 50.0;
/// Orders within this distance of an integer are treated as integers.
pub const INTEGER_TOL: f64 = 1e-9;
/// |ν| above which the large-argument branch goes through recurrence.
const ASYMPTOTIC_MAX_ORDER: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BesselOrder {
    pub nu: f64,
}

impl BesselOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if !nu.is_finite() {
            return Err(domain("BesselOrder", format!("order {nu} is not finite")));
        }
        Ok(BesselOrder { nu })
    }

    /// The order ν = (μ−1)/2 attached to a dissipation parameter.
    pub fn from_mu(mu: f64) -> Result<Self> {
        Self::new(0.5 * (mu - 1.0))
    }

    pub fn is_integer(&self) -> bool {
        (self.nu - self.nu.round()).abs() <= INTEGER_TOL
    }

    pub fn nearest_integer(&self) -> i64 {
        self.nu.round() as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Series,
    Asymptotic,
    Recurrence,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalBranch {
    pub branch: Branch,
    pub switch_point: f64,
}

pub fn switch_point(nu: f64) -> f64 {
    14.0 + nu.abs()
}

/// Which algorithm `bessel_j(nu, z)` uses.
pub fn eval_branch(nu: f64, z: f64) -> EvalBranch {
    let switch_point = switch_point(nu);
    let branch = if z < switch_point {
        Branch::Series
    } else if nu.abs() <= ASYMPTOTIC_MAX_ORDER {
        Branch::Asymptotic
    } else {
        Branch::Recurrence
    };
    EvalBranch {
        branch,
        switch_point,
    }
}

fn check_order(op: &'static str, nu: f64) -> Result<()> {
    if !nu.is_finite() || nu.abs() > MAX_ORDER {
        return Err(domain(op, format!("order {nu} outside [-{MAX_ORDER}, {MAX_ORDER}]")));
    }
    Ok(())
}

fn is_exact_negative_integer(nu: f64) -> bool {
    nu < 0.0 && nu == nu.round()
}

fn parity(n: i64) -> f64 {
    if n % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Σ_m (−z²/4)^m / (m! (ν+1)_m) in double-double; J_ν = (z/2)^ν/Γ(ν+1) times this.
fn reduced_series(nu: f64, z: f64) -> Dd {
    let half = 0.5 * z;
    let q = -Dd::prod(half, half);
    let mut term = Dd::ONE;
    let mut sum = Dd::ONE;
    let m_min = (half + nu.abs()) as usize + 2;
    for m in 0..400usize {
        let k = (m + 1) as f64;
        let denom = (Dd::new(k) + Dd::new(nu)) * k;
        term = term * q / denom;
        sum = sum + term;
        if m > m_min && term.hi.abs() < 1e-33 * sum.hi.abs() {
            break;
        }
    }
    sum
}

/// J_ν(z) by the power series, any order, z > 0.
pub fn bessel_j_series(nu: f64, z: f64) -> f64 {
    if is_exact_negative_integer(nu) {
        let n = -nu as i64;
        return parity(n) * bessel_j_series(-nu, z);
    }
    let lead = (0.5 * z).powf(nu) * rgamma(nu + 1.0);
    lead * reduced_series(nu, z).to_f64()
}

/// Hankel's P and Q sums with optimal truncation, plus the first omitted term.
pub fn hankel_pq(nu: f64, z: f64) -> (f64, f64, f64) {
    let mu4 = 4.0 * nu * nu;
    let mut a = 1.0f64;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut omitted = 0.0;
    for m in 0..200u32 {
        let odd = (2 * m + 1) as f64;
        let next = a * (mu4 - odd * odd) / (8.0 * z * (m + 1) as f64);
        if next.abs() > a.abs() {
            omitted = a.abs();
            break;
        }
        let idx = m + 1;
        let sign = if (idx / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if idx % 2 == 0 {
            p += sign * next;
        } else {
            q += sign * next;
        }
        a = next;
        if a == 0.0 || a.abs() < 1e-18 * p.abs() {
            omitted = a.abs();
            break;
        }
    }
    (p, q, omitted)
}

/// (J_ν(z), Y_ν(z)) from the large-argument expansion (modern Y).
pub fn bessel_jy_asymptotic(nu: f64, z: f64) -> (f64, f64) {
    let (p, q, _) = hankel_pq(nu, z);
    let c = 0.5 * nu + 0.25;
    let (sz, cz) = z.sin_cos();
    let (sc, cc) = (sin_pi(c), cos_pi(c));
    let cos_w = cz * cc + sz * sc;
    let sin_w = sz * cc - cz * sc;
    let amp = (2.0 / (PI * z)).sqrt();
    (amp * (p * cos_w - q * sin_w), amp * (p * sin_w + q * cos_w))
}

fn bessel_j_recurrence(nu: f64, z: f64) -> f64 {
    if nu >= 0.0 {
        let base = nu - nu.floor();
        let steps = nu.floor() as usize;
        let mut prev = bessel_jy_asymptotic(base, z).0;
        if steps == 0 {
            return prev;
        }
        let mut cur = bessel_jy_asymptotic(base + 1.0, z).0;
        for k in 1..steps {
            let rho = base + k as f64;
            let next = 2.0 * rho / z * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    } else {
        let base = nu - nu.ceil();
        let steps = (-nu.ceil()) as usize;
        let mut prev = bessel_jy_asymptotic(base, z).0;
        if steps == 0 {
            return prev;
        }
        let mut cur = bessel_jy_asymptotic(base - 1.0, z).0;
        for k in 1..steps {
            let rho = base - k as f64;
            let next = 2.0 * rho / z * cur - prev;
            prev = cur;
            cur = next;
        }
        cur
    }
}

/// J_ν(z) for z > 0 without range checks.
pub(crate) fn j_unchecked(nu: f64, z: f64) -> f64 {
    if is_exact_negative_integer(nu) {
        let n = -nu as i64;
        return parity(n) * j_unchecked(-nu, z);
    }
    match eval_branch(nu, z).branch {
        Branch::Series => bessel_j_series(nu, z),
        Branch::Asymptotic => bessel_jy_asymptotic(nu, z).0,
        Branch::Recurrence => bessel_j_recurrence(nu, z),
    }
}

/// J_ν(z).
///
/// At z = 0 with negative non-integer ν the function diverges; the error
/// carries the signed infinite limit.
pub fn bessel_j(nu: f64, z: f64) -> Result<f64> {
    check_order("bessel_j", nu)?;
    if !(z >= 0.0) || !z.is_finite() {
        return Err(domain("bessel_j", format!("argument {z} must be finite and ≥ 0")));
    }
    if z == 0.0 {
        return if nu == 0.0 {
            Ok(1.0)
        } else if nu > 0.0 || is_exact_negative_integer(nu) {
            Ok(0.0)
        } else {
            Err(Error::Pole {
                op: "bessel_j",
                limit: rgamma(nu + 1.0).signum() * f64::INFINITY,
            })
        };
    }
    Ok(j_unchecked(nu, z))
}

/// Γ(1+ν)(z/2)^(−ν) J_ν(z) for ν > −1, z ≥ 0; equals 1 at z = 0.
pub(crate) fn j_normalized(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else if z < switch_point(nu) {
        reduced_series(nu, z).to_f64()
    } else {
        gamma(nu + 1.0) * (0.5 * z).powf(-nu) * j_unchecked(nu, z)
    }
}

pub(crate) fn j_prime_unchecked(nu: f64, z: f64) -> f64 {
    j_unchecked(nu - 1.0, z) - nu / z * j_unchecked(nu, z)
}

/// J'_ν(z) = J_{ν−1}(z) − (ν/z) J_ν(z).
pub fn bessel_j_prime(nu: f64, z: f64) -> Result<f64> {
    check_order("bessel_j_prime", nu)?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("bessel_j_prime", format!("argument {z} must be finite and > 0")));
    }
    Ok(j_prime_unchecked(nu, z))
}

/// Modern Y_n for n ∈ {0, 1} by the series, in double-double where it matters.
fn bessel_y01_series(n: u32, z: f64) -> f64 {
    let half = 0.5 * z;
    let q = -Dd::prod(half, half);
    let nf = n as f64;
    // c_k = (−q)^k / (k!(n+k)!), starting at 1/n!
    let mut c = Dd::ONE;
    let mut harm_k = Dd::ZERO;
    let mut harm_nk = (1..=n).fold(Dd::ZERO, |h, j| h + Dd::ONE / Dd::new(j as f64));
    let mut a = Dd::ONE;
    let mut b = harm_nk;
    for k in 1..400u32 {
        let kf = k as f64;
        c = c * q / (Dd::new(kf) * (kf + nf));
        harm_k = harm_k + Dd::ONE / Dd::new(kf);
        harm_nk = harm_nk + Dd::ONE / Dd::new(kf + nf);
        a = a + c;
        b = b + (harm_k + harm_nk) * c;
        if kf > half + 2.0 && c.hi.abs() < 1e-33 * a.hi.abs().max(1e-300) {
            break;
        }
    }
    let lead = half.powi(n as i32);
    let j = lead * a.to_f64();
    let finite = if n == 1 { 2.0 / z } else { 0.0 };
    (-finite + 2.0 * ((half).ln() + Dd::EULER_GAMMA.hi) * j - lead * b.to_f64()) / PI
}

/// Modern Y_n(z), z > 0, by series or asymptotics for n ≤ 1 and forward recurrence above.
pub(crate) fn y_unchecked(n: u32, z: f64) -> f64 {
    let base = |k: u32| {
        if z < switch_point(k as f64) {
            bessel_y01_series(k, z)
        } else {
            bessel_jy_asymptotic(k as f64, z).1
        }
    };
    let y0 = base(0);
    if n == 0 {
        return y0;
    }
    let mut prev = y0;
    let mut cur = base(1);
    for k in 1..n {
        let next = 2.0 * k as f64 / z * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

fn check_integer_order(op: &'static str, n: u32, z: f64) -> Result<()> {
    if n as f64 > MAX_ORDER {
        return Err(domain(op, format!("order {n} exceeds {MAX_ORDER}")));
    }
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain(op, format!("argument {z} must be finite and > 0")));
    }
    Ok(())
}

/// Modern second-kind function Y_n(z).
pub fn bessel_y(n: u32, z: f64) -> Result<f64> {
    check_integer_order("bessel_y", n, z)?;
    Ok(y_unchecked(n, z))
}

/// Watson's 𝐘_n(z) = π Y_n(z), normalized so W[J_n, 𝐘_n](z) = 2/z.
pub fn bessel_big_y(n: u32, z: f64) -> Result<f64> {
    check_integer_order("bessel_big_y", n, z)?;
    Ok(PI * y_unchecked(n, z))
}

pub(crate) fn big_y_prime_unchecked(n: u32, z: f64) -> f64 {
    if n == 0 {
        -PI * y_unchecked(1, z)
    } else {
        PI * (y_unchecked(n - 1, z) - n as f64 / z * y_unchecked(n, z))
    }
}

/// d/dz 𝐘_n(z).
pub fn bessel_big_y_prime(n: u32, z: f64) -> Result<f64> {
    check_integer_order("bessel_big_y_prime", n, z)?;
    Ok(big_y_prime_unchecked(n, z))
}

/// Watson's symbol (ν, m) = Γ(ν+m+½)/(m! Γ(ν−m+½)) = Π_{k=1}^m (4ν²−(2k−1)²)/(4k).
pub fn hankel_symbol(nu: f64, m: u32) -> Result<f64> {
    if m > 30 {
        return Err(domain("hankel_symbol", format!("m = {m} exceeds the overflow guard 30")));
    }
    let mu4 = 4.0 * nu * nu;
    Ok((1..=m).fold(1.0, |acc, k| {
        let odd = (2 * k - 1) as f64;
        acc * (mu4 - odd * odd) / (4.0 * k as f64)
    }))
}

/// |computed Wronskian − closed form| for the pair (J_ν, J_{−ν}) or, at integer
/// order, (J_n, 𝐘_n).
pub fn wronskian_residual(nu: f64, z: f64) -> Result<f64> {
    check_order("wronskian_residual", nu)?;
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("wronskian_residual", format!("argument {z} must be > 0")));
    }
    let order = BesselOrder { nu };
    if order.is_integer() {
        let n = order.nearest_integer().unsigned_abs() as u32;
        let nf = n as f64;
        let w = j_unchecked(nf, z) * big_y_prime_unchecked(n, z)
            - j_prime_unchecked(nf, z) * PI * y_unchecked(n, z);
        Ok((w - 2.0 / z).abs())
    } else {
        let w = j_unchecked(nu, z) * j_prime_unchecked(-nu, z)
            - j_prime_unchecked(nu, z) * j_unchecked(-nu, z);
        Ok((w + 2.0 * sin_pi(nu) / (PI * z)).abs())
    }
}
