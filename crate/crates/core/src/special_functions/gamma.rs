//! Gamma function via a Lanczos approximation (g = 671/128, 14 terms),
//! reflection below 1/2.

// coefficients are quoted as published
#![allow(clippy::excessive_precision)]

use std::f64::consts::PI;

const LANCZOS_G: f64 = 5.2421875;
const LANCZOS_C0: f64 = 0.999999999999997092;
const LANCZOS: [f64; 14] = [
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
];
const SQRT_TWO_PI: f64 = 2.5066282746310005;

/// sin(πx) with exact zeros at the integers.
pub fn sin_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = x - 2.0 * (0.5 * x).round();
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * r).sin()
}

/// cos(πx) with exact zeros at the half-integers.
pub fn cos_pi(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let r = (x - 2.0 * (0.5 * x).round()).abs();
    if r <= 0.5 {
        (PI * (0.5 - r)).sin()
    } else {
        -(PI * (r - 0.5)).sin()
    }
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.round()
}

fn small_factorial(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

/// Γ(x) for x ≥ 1/2.
fn gamma_right(x: f64) -> f64 {
    if x == x.round() && x <= 23.0 {
        return small_factorial(x as u32 - 1);
    }
    let tmp = x + LANCZOS_G;
    let mut ser = LANCZOS_C0;
    let mut y = x;
    for c in LANCZOS {
        y += 1.0;
        ser += c / y;
    }
    let half = tmp.powf(0.5 * (x + 0.5));
    SQRT_TWO_PI * ser / x * half * (half * (-tmp).exp())
}

/// Γ(x). Returns ±∞ at the poles (sign of the limit from the right).
pub fn gamma(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if is_nonpositive_integer(x) {
        return if x == 0.0 { f64::INFINITY } else { f64::NAN };
    }
    if x >= 0.5 {
        gamma_right(x)
    } else {
        PI / (sin_pi(x) * gamma_right(1.0 - x))
    }
}

/// 1/Γ(x), entire: zero at the poles of Γ.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x >= 0.5 {
        let g = gamma_right(x);
        if g.is_infinite() {
            0.0
        } else {
            1.0 / g
        }
    } else {
        sin_pi(x) * gamma_right(1.0 - x) / PI
    }
}
