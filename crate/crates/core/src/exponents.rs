//! Critical exponents, thresholds and predicted decay rates.
//!
//! Every function here is a closed formula; nothing is simulated. Rates are
//! expressed as powers of the initial time `s` and the current time `t`, so
//! a bound reads `C · s^s_exp · t^t_exp · (1 + log(t/s))^log_power`.

use crate::error::{domain, Error, Result};
use serde::{Deserialize, Serialize};

/// Which norms of the data are assumed small.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum DataClass {
    /// Data small in L¹ ∩ L² (the default setting).
    #[default]
    L1L2,
    /// Data small in L² only.
    L2Only,
}

/// Problem parameters: the single source of truth for a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DissipationParams {
    pub n: u32,
    pub mu: f64,
    pub alpha: f64,
    /// Initial time; zero selects the singular problem.
    pub t0: f64,
    /// Power of the nonlinearity; `None` for linear runs.
    pub p: Option<f64>,
    #[serde(default)]
    pub data_class: DataClass,
}

impl DissipationParams {
    /// Linear regular problem in dimension `n` starting at t₀ = 1.
    pub fn new(n: u32, mu: f64) -> Self {
        DissipationParams {
            n,
            mu,
            alpha: 0.0,
            t0: 1.0,
            p: None,
            data_class: DataClass::L1L2,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = t0;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    pub fn is_singular(&self) -> bool {
        self.t0 == 0.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("n must be a positive integer".into()));
        }
        if !self.mu.is_finite() {
            return Err(Error::Config(format!("mu = {} is not finite", self.mu)));
        }
        if !(0.0..2.0).contains(&self.alpha) {
            return Err(Error::Config(format!("alpha = {} must lie in [0, 2)", self.alpha)));
        }
        if !(self.t0 >= 0.0) || !self.t0.is_finite() {
            return Err(Error::Config(format!("t0 = {} must be finite and ≥ 0", self.t0)));
        }
        if let Some(p) = self.p {
            if !(p > 1.0) || !p.is_finite() {
                return Err(Error::Config(format!("p = {p} must be finite and > 1")));
            }
        }
        if self.is_singular() && self.mu <= 0.0 {
            return Err(Error::Config("the singular problem needs mu > 0".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// The modified Fujita exponent is critical.
    HeatLike,
    /// The shifted Strauss exponent is critical, μ ≥ 1.
    WaveLike,
    /// The shifted Strauss exponent is critical, μ < 1.
    LowDissipation,
}

/// The two higher-dimensional exponents (α = 0, n ≥ 3) with their validity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HighDimExponents {
    /// 1 + 2/n for small L¹ ∩ L² data.
    pub fujita: f64,
    pub fujita_valid: bool,
    pub fujita_constraint: String,
    /// 1 + 4/n for small L² data.
    pub l2_data: f64,
    pub l2_data_valid: bool,
    pub l2_data_constraint: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    pub n: u32,
    pub mu: f64,
    pub alpha: f64,
    pub p_fujita_mod: f64,
    pub p_strauss_mod: f64,
    pub p_crit: f64,
    pub mu_bar: f64,
    pub regime: Regime,
    /// Blow-up below the Strauss branch is conjectural when α > 0.
    pub conjecture: bool,
    pub high_dim: Option<HighDimExponents>,
}

/// One term of a decay estimate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RatePart {
    /// Norm of the data this term multiplies, e.g. "L^1".
    pub data_norm: String,
    pub s_exp: f64,
    pub t_exp: f64,
    pub log_power: u32,
}

/// A predicted decay rate `s^s_exp t^t_exp (1+log(t/s))^log_power`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecayRate {
    pub s_exp: f64,
    pub t_exp: f64,
    pub log_power: u32,
    /// The rate only holds up to an arbitrarily small loss t^δ.
    pub delta_slack: bool,
    pub conditions: Vec<String>,
    pub branch_ref: String,
    /// All terms when the estimate has more than one; empty otherwise.
    pub parts: Vec<RatePart>,
}

/// Default δ at which slack rates are evaluated.
pub const DEFAULT_DELTA: f64 = 0.01;

impl DecayRate {
    fn single(s_exp: f64, t_exp: f64, log_power: u32, branch_ref: &str) -> Self {
        DecayRate {
            s_exp,
            t_exp,
            log_power,
            delta_slack: false,
            conditions: Vec::new(),
            branch_ref: branch_ref.to_string(),
            parts: Vec::new(),
        }
    }

    fn with_parts(parts: Vec<RatePart>, delta_slack: bool, branch_ref: &str) -> Self {
        // slowest decay wins; near-ties keep the earlier part unless a log breaks them
        let lead = parts
            .iter()
            .fold(None::<&RatePart>, |best, p| match best {
                Some(b) if p.t_exp > b.t_exp + EPS => Some(p),
                Some(b) if (p.t_exp - b.t_exp).abs() <= EPS && p.log_power > b.log_power => Some(p),
                Some(b) => Some(b),
                None => Some(p),
            })
            .expect("at least one part");
        DecayRate {
            s_exp: lead.s_exp,
            t_exp: lead.t_exp,
            log_power: lead.log_power,
            delta_slack,
            conditions: Vec::new(),
            branch_ref: branch_ref.to_string(),
            parts,
        }
    }

    fn condition(mut self, c: impl Into<String>) -> Self {
        self.conditions.push(c.into());
        self
    }

    fn slack(mut self, on: bool) -> Self {
        self.delta_slack = on;
        self
    }

    /// t-exponent with the δ loss applied when the rate carries slack.
    pub fn t_exp_at(&self, delta: f64) -> f64 {
        if self.delta_slack {
            self.t_exp + delta
        } else {
            self.t_exp
        }
    }
}

/// Weight exponent γ_q and energy profile defining the solution space.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceWeight {
    pub q: f64,
    pub gamma_q: f64,
    /// γ_q is to be reduced by a small δ.
    pub delta_slack: bool,
    pub g_profile: DecayRate,
}

impl SpaceWeight {
    pub fn gamma_at(&self, delta: f64) -> f64 {
        if self.delta_slack {
            self.gamma_q - delta
        } else {
            self.gamma_q
        }
    }
}

fn pos(x: f64) -> f64 {
    x.max(0.0)
}

fn inv(q: f64) -> f64 {
    if q.is_infinite() {
        0.0
    } else {
        1.0 / q
    }
}

const EPS: f64 = 1e-12;

/// d(r,q) = (n−1)(1/min{r,q'} − ½) + 1/r − 1/q.
pub fn d_rq(n: u32, r: f64, q: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("d_rq", "n must be ≥ 1"));
    }
    if !(r >= 1.0) || !(r <= q) || r.is_nan() || q.is_nan() {
        return Err(domain("d_rq", format!("need 1 ≤ r ≤ q, got r = {r}, q = {q}")));
    }
    let inv_min = inv(r).max(1.0 - inv(q));
    Ok((n as f64 - 1.0) * (inv_min - 0.5) + inv(r) - inv(q))
}

fn cor22_q_range(n: u32, q: f64) -> Option<String> {
    let nf = n as f64;
    let ok = match n {
        1 => false,
        2 => q > 2.0 && q <= 6.0 + EPS,
        3 => q > 1.0 && q <= 4.0 + EPS,
        _ => q >= 2.0 * (nf - 1.0) / (nf + 1.0) - EPS && q <= 2.0 * (nf + 1.0) / (nf - 1.0) + EPS,
    };
    if ok {
        None
    } else {
        Some(match n {
            1 => "no r₂ with d(r₂,q) = 1 exists for n = 1".to_string(),
            2 => format!("q = {q} outside (2, 6]"),
            3 => format!("q = {q} outside (1, 4]"),
            _ => format!(
                "q = {q} outside [{}, {}]",
                2.0 * (nf - 1.0) / (nf + 1.0),
                2.0 * (nf + 1.0) / (nf - 1.0)
            ),
        })
    }
}

/// r₂ with d(r₂,q) = 1 on the branch r₂ ≤ q', i.e. n/r₂ = (n+1)/2 + 1/q.
pub fn solve_r2(n: u32, q: f64) -> Result<f64> {
    if let Some(why) = cor22_q_range(n, q) {
        return Err(domain("solve_r2", why));
    }
    let nf = n as f64;
    let r2 = nf / ((nf + 1.0) / 2.0 + inv(q));
    let q_dual = if q.is_infinite() { 1.0 } else { q / (q - 1.0) };
    if !(r2 > 1.0 && r2 <= q.min(q_dual) + EPS) {
        return Err(domain("solve_r2", format!("r₂ = {r2} not in (1, min(q, q')]")));
    }
    Ok(r2)
}

/// p₀(1+μ) = 1 + (2 − μ + √(μ²+12μ+4))/(2μ).
pub fn strauss_shifted(mu: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain("strauss_shifted", format!("mu = {mu} must be > 0")));
    }
    let root = (mu * mu + 12.0 * mu + 4.0).sqrt();
    Ok(if mu > 2.0 {
        // rationalized: 2 − μ + √D = 16μ/(√D + μ − 2)
        1.0 + 8.0 / (root + mu - 2.0)
    } else {
        1.0 + (2.0 - mu + root) / (2.0 * mu)
    })
}

/// The defining function (k−1)/2·(p−1) − (1−α) − 1/p of p₀(k, α).
pub fn strauss_defect(k: f64, alpha: f64, p: f64) -> f64 {
    0.5 * (k - 1.0) * (p - 1.0) - (1.0 - alpha) - 1.0 / p
}

/// p₀(k, α): the root > 1 of (k−1)p² − (k−1+2(1−α))p − 2 = 0.
pub fn strauss_mod(k: f64, alpha: f64) -> Result<f64> {
    if !(k > 1.0) || !k.is_finite() {
        return Err(domain("strauss_mod", format!("k = {k} must be > 1")));
    }
    if !(alpha < 2.0) || alpha.is_nan() {
        return Err(domain("strauss_mod", format!("no root > 1 for alpha = {alpha} ≥ 2")));
    }
    let a = k - 1.0;
    let b = -(a + 2.0 * (1.0 - alpha));
    let disc = (b * b + 8.0 * a).sqrt();
    let mut p = if b > 0.0 {
        4.0 / (b + disc)
    } else {
        (-b + disc) / (2.0 * a)
    };
    if a < 1e-6 {
        // bracket the root of the increasing defect and bisect
        let (mut lo, mut hi) = (1.0, p.max(2.0));
        while strauss_defect(k, alpha, hi) < 0.0 {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if strauss_defect(k, alpha, mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        p = 0.5 * (lo + hi);
    }
    if !(p > 1.0) {
        return Err(domain("strauss_mod", format!("no root > 1 for k = {k}, alpha = {alpha}")));
    }
    Ok(p)
}

/// Threshold μ̄ at which the Fujita and Strauss branches meet.
pub fn mu_bar(n: u32, alpha: f64) -> Result<f64> {
    match n {
        0 => Err(domain("mu_bar", "n must be ≥ 1")),
        1 => Ok(2.0 * (2.0 - alpha) / (3.0 - alpha)),
        2 => Ok(2.0 - alpha / (4.0 - alpha)),
        _ if alpha == 0.0 => Ok(n as f64 - 1.0 + 4.0 / (n as f64 + 2.0)),
        _ => Err(Error::Unsupported(format!(
            "no critical exponent is known for n = {n} ≥ 3 with alpha = {alpha} > 0"
        ))),
    }
}

/// All critical exponents and the regime for the given parameters.
pub fn p_crit(params: &DissipationParams) -> Result<ExponentReport> {
    let (n, mu, alpha) = (params.n, params.mu, params.alpha);
    if n == 0 || !mu.is_finite() || !(0.0..2.0).contains(&alpha) {
        return Err(domain("p_crit", format!("invalid parameters n = {n}, mu = {mu}, alpha = {alpha}")));
    }
    if n >= 3 && alpha > 0.0 {
        return Err(Error::Unsupported(format!(
            "no critical exponent is known for n = {n} ≥ 3 with alpha = {alpha} > 0 \
             (the time-weighted nonlinearity is only treated for n = 1, 2)"
        )));
    }
    let nf = n as f64;
    let denom = nf - 1.0 + mu.min(1.0);
    if denom <= 0.0 {
        return Err(domain("p_crit", format!("n − 1 + min(1, mu) = {denom} must be > 0")));
    }
    let p_fujita_mod = 1.0 + (2.0 - alpha) / denom;
    let p_strauss_mod = strauss_mod(nf + mu, alpha)?;
    let p_crit = p_fujita_mod.max(p_strauss_mod);
    let regime = if p_fujita_mod >= p_strauss_mod {
        Regime::HeatLike
    } else if mu < 1.0 {
        Regime::LowDissipation
    } else {
        Regime::WaveLike
    };
    let high_dim = (n >= 3).then(|| {
        let l2_threshold = 2.0 * nf / (nf + 3.0);
        HighDimExponents {
            fujita: 1.0 + 2.0 / nf,
            fujita_valid: mu >= nf && n <= 5,
            fujita_constraint: format!("mu ≥ {n}, n ≤ 5, small L¹ ∩ L² data, p ≤ 1 + 2/(n−2)"),
            l2_data: 1.0 + 4.0 / nf,
            l2_data_valid: mu >= l2_threshold,
            l2_data_constraint: format!("mu ≥ {l2_threshold}, small L² data, p ≤ 1 + 4/(n−1)"),
        }
    });
    Ok(ExponentReport {
        n,
        mu,
        alpha,
        p_fujita_mod,
        p_strauss_mod,
        p_crit,
        mu_bar: mu_bar(n, alpha)?,
        regime,
        conjecture: alpha > 0.0,
        high_dim,
    })
}

/// Λ(t) = t^(ℓ+1)/(ℓ+1), the time change taking the Tricomi equation to EPD form.
pub fn tricomi_time(ell: f64, t: f64) -> f64 {
    t.powf(ell + 1.0) / (ell + 1.0)
}

/// Inverse of [`tricomi_time`].
pub fn tricomi_time_inverse(ell: f64, tau: f64) -> f64 {
    ((ell + 1.0) * tau).powf(1.0 / (ell + 1.0))
}

/// EPD parameters equivalent to w_tt − t^(2ℓ)w_xx + (ν/t)w_t = f(w).
///
/// The returned t₀ = Λ(1) corresponds to the Tricomi start time t₁ = 1.
pub fn tricomi_map(ell: f64, nu_damp: f64) -> Result<DissipationParams> {
    if !(ell > 0.0) || !ell.is_finite() {
        return Err(domain("tricomi_map", format!("ell = {ell} must be > 0")));
    }
    if !(nu_damp > -ell) || !nu_damp.is_finite() {
        return Err(domain("tricomi_map", format!("nu = {nu_damp} must exceed −ell = {}", -ell)));
    }
    Ok(DissipationParams {
        n: 1,
        mu: (nu_damp + ell) / (ell + 1.0),
        alpha: 2.0 * ell / (ell + 1.0),
        t0: tricomi_time(ell, 1.0),
        p: None,
        data_class: DataClass::L1L2,
    })
}

fn check_q_range(n: u32, q: f64) -> Result<()> {
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::Inadmissible(format!("q = {q} must lie in (1, ∞)")));
    }
    if n >= 4 {
        let nf = n as f64;
        let (lo, hi) = (2.0 * (nf - 1.0) / (nf + 1.0), 2.0 * (nf - 1.0) / (nf - 3.0));
        if q < lo - EPS || q > hi + EPS {
            return Err(Error::Inadmissible(format!(
                "q = {q} outside [{lo}, {hi}] required for n = {n}"
            )));
        }
    }
    Ok(())
}

fn check_r(n: u32, r: f64, q: f64, bound: &str) -> Result<f64> {
    if !(r >= 1.0) || r > q {
        return Err(Error::Inadmissible(format!("r = {r} must lie in [1, q = {q}]")));
    }
    let d = d_rq(n, r, q)?;
    if r == 1.0 {
        if d >= 1.0 {
            return Err(Error::Inadmissible(format!(
                "d(1,q) = {d} must be < 1 ({bound})"
            )));
        }
    } else if d > 1.0 + EPS {
        return Err(Error::Inadmissible(format!("d(r,q) = {d} must be ≤ 1 ({bound})")));
    }
    Ok(d)
}

/// L^{r₁} ∩ L^{r₂} → L^q decay rate of the linear regular problem.
///
/// `r1 == r2` gives the single-norm estimate; `r1 == 1` with d(r₂,q) = 1 and
/// μ ≥ 2 gives the simplified two-norm estimate; any other pair gives the
/// general two-term estimate.
pub fn linear_rate(n: u32, mu: f64, r1: f64, r2: f64, q: f64) -> Result<DecayRate> {
    if n == 0 || !mu.is_finite() {
        return Err(domain("linear_rate", format!("invalid n = {n} or mu = {mu}")));
    }
    check_q_range(n, q)?;
    let log = u32::from(mu == 1.0);
    let big_m = mu.max(2.0 - mu);
    let scaling = |r: f64| -(n as f64) * (inv(r) - inv(q));
    let q_cond = format!("q = {q} in the admissible range for n = {n}");

    if r1 == r2 {
        let r = r1;
        let d = check_r(n, r, q, "single-norm estimate")?;
        let good = if r == 1.0 { d < big_m / 2.0 } else { d <= big_m / 2.0 + EPS };
        let rate = if good {
            DecayRate::single(mu.min(1.0), pos(1.0 - mu) + scaling(r), log, "rq-good")
                .condition(format!("d(r,q) = {d} ≤ max(mu, 2−mu)/2 = {}", big_m / 2.0))
        } else {
            DecayRate::single(1.0 - d + mu / 2.0, scaling(r) + d - mu / 2.0, log, "rq-bad")
                .condition(format!("d(r,q) = {d} > max(mu, 2−mu)/2 = {}", big_m / 2.0))
                .slack(r == 1.0)
        };
        return Ok(rate.condition(q_cond));
    }

    let d2 = check_r(n, r2, q, "high-frequency norm")?;
    if r1 == 1.0 && (d2 - 1.0).abs() < 1e-9 && mu >= 2.0 {
        if let Some(why) = cor22_q_range(n, q) {
            return Err(Error::Inadmissible(why));
        }
        let nf = n as f64;
        let shift = (nf - 1.0) / 2.0 - inv(q);
        let threshold = nf + 1.0 - 2.0 * inv(q);
        let rate = if mu > threshold {
            let t = -nf * (1.0 - inv(q));
            DecayRate::with_parts(
                vec![
                    RatePart { data_norm: "L^1".into(), s_exp: 1.0, t_exp: t, log_power: 0 },
                    RatePart { data_norm: format!("L^{r2}"), s_exp: 1.0 + shift, t_exp: t, log_power: 0 },
                ],
                false,
                "l1-r2-good",
            )
            .condition(format!("mu = {mu} > n + 1 − 2/q = {threshold}"))
        } else {
            let t = -(nf - 1.0) * (0.5 - inv(q)) - mu / 2.0;
            DecayRate::with_parts(
                vec![
                    RatePart { data_norm: "L^1".into(), s_exp: mu / 2.0 - shift, t_exp: t, log_power: 0 },
                    RatePart { data_norm: format!("L^{r2}"), s_exp: mu / 2.0, t_exp: t, log_power: 0 },
                ],
                true,
                "l1-r2-bad",
            )
            .condition(format!("2 ≤ mu = {mu} ≤ n + 1 − 2/q = {threshold}"))
        };
        return Ok(rate.condition(q_cond).condition("d(r₂,q) = 1, mu ≥ 2"));
    }

    let d1 = check_r(n, r1, q, "intermediate-frequency norm")?;
    let excess = d1 - big_m / 2.0;
    let slack1 = r1 == 1.0 && excess >= 0.0;
    let slack2 = r2 == 1.0;
    let part1 = RatePart {
        data_norm: format!("L^{r1}"),
        s_exp: mu.min(1.0) - pos(excess),
        t_exp: pos(1.0 - mu) + scaling(r1) + pos(excess),
        log_power: log,
    };
    let part2 = RatePart {
        data_norm: format!("L^{r2}"),
        s_exp: 1.0 - d2 + mu / 2.0,
        t_exp: scaling(r2) + d2 - mu / 2.0,
        log_power: 0,
    };
    Ok(DecayRate::with_parts(vec![part1, part2], slack1 || slack2, "two-norm")
        .condition(q_cond)
        .condition(format!("d(r₂,q) = {d2} ≤ 1")))
}

/// Energy rate ‖(∇v, v_t)‖_{L²} as an (L¹-part, L²-part) pair.
pub fn energy_rate(n: u32, mu: f64) -> Result<(DecayRate, DecayRate)> {
    if n == 0 || !mu.is_finite() {
        return Err(domain("energy_rate", format!("invalid n = {n} or mu = {mu}")));
    }
    let nf = n as f64;
    let top = nf + 2.0;
    let pair = if mu > top {
        let t = -nf / 2.0 - 1.0;
        (
            DecayRate::single(1.0, t, 0, "energy-high").condition(format!("mu > n + 2 = {top}")),
            DecayRate::single(1.0 + nf / 2.0, t, 0, "energy-high"),
        )
    } else if mu == top {
        let t = -mu / 2.0;
        (
            DecayRate::single(1.0, t, 1, "energy-threshold").condition(format!("mu = n + 2 = {top}")),
            DecayRate::single(1.0 + nf / 2.0, t, 1, "energy-threshold"),
        )
    } else if mu == 1.0 {
        (
            DecayRate::single(-(nf - 1.0) / 2.0, -0.5, 1, "energy-log").condition("mu = 1"),
            DecayRate::single(0.5, -0.5, 0, "energy-log"),
        )
    } else if mu > -nf {
        (
            DecayRate::single((mu - nf) / 2.0, -mu / 2.0, 0, "energy-mid")
                .condition("−n < mu < n + 2, mu ≠ 1"),
            DecayRate::single(mu / 2.0, -mu / 2.0, 0, "energy-mid"),
        )
    } else {
        return Err(Error::Unsupported(format!("no energy estimate for mu = {mu} ≤ −n")));
    };
    Ok(pair)
}

/// L^r → L^q rate of the singular problem (data at t = 0).
pub fn singular_rate(n: u32, mu: f64, r: f64, q: f64) -> Result<DecayRate> {
    if !(mu > 0.0) {
        return Err(domain("singular_rate", format!("mu = {mu} must be > 0")));
    }
    if !(q > 1.0) || !q.is_finite() {
        return Err(Error::Inadmissible(format!("q = {q} must lie in (1, ∞)")));
    }
    let d = d_rq(n, r, q)?;
    let ok = if r == 1.0 { d < mu / 2.0 } else { d <= mu / 2.0 + EPS };
    if !ok {
        let rel = if r == 1.0 { "<" } else { "≤" };
        return Err(Error::Inadmissible(format!(
            "need d(r,q) {rel} mu/2, got d(r,q) = {d} and mu/2 = {}",
            mu / 2.0
        )));
    }
    Ok(
        DecayRate::single(0.0, -(n as f64) * (inv(r) - inv(q)), 0, "singular")
            .condition(format!("d(r,q) = {d} vs mu/2 = {}", mu / 2.0)),
    )
}

fn energy_profile(params: &DissipationParams) -> Result<DecayRate> {
    let mut g = energy_rate(params.n, params.mu)?.0;
    if params.is_singular() && params.n == 1 && params.mu == 3.0 {
        // the singular problem trades the logarithm for a δ loss
        g.log_power = 0;
        g.delta_slack = true;
    }
    Ok(g)
}

/// Weight γ_q and energy profile g of the solution space for `params` at `q`.
pub fn solution_weights(params: &DissipationParams, q: f64) -> Result<SpaceWeight> {
    let (n, mu) = (params.n, params.mu);
    let nf = n as f64;
    if !(mu > 0.0) {
        return Err(domain("solution_weights", format!("mu = {mu} must be > 0")));
    }
    if params.data_class == DataClass::L2Only {
        if n < 3 {
            return Err(Error::Unsupported("L²-only weights are given for n ≥ 3".into()));
        }
        let (q0, q1) = (2.0 + 4.0 / (nf + 1.0), 2.0 + 4.0 / (nf - 1.0));
        if q < q0 - EPS || q > q1 + EPS {
            return Err(Error::Inadmissible(format!("q = {q} outside [{q0}, {q1}]")));
        }
        let g = energy_rate(n, mu)?.1;
        return Ok(SpaceWeight {
            q,
            gamma_q: 0.5 * (nf * (1.0 - 2.0 / q)).min(mu),
            delta_slack: false,
            g_profile: g,
        });
    }
    let report = p_crit(params)?;
    match n {
        1 => {
            if q < report.p_crit - EPS || !q.is_finite() {
                return Err(Error::Inadmissible(format!(
                    "q = {q} outside [p_crit = {}, ∞)",
                    report.p_crit
                )));
            }
            let big_m = mu.max(2.0 - mu);
            let (gamma_q, delta_slack) = if 2.0 - 2.0 / q < big_m {
                (1.0 - 1.0 / q - pos(1.0 - mu), false)
            } else {
                (mu / 2.0, true)
            };
            Ok(SpaceWeight { q, gamma_q, delta_slack, g_profile: energy_profile(params)? })
        }
        2..=5 => {
            let q_hi = 2.0 + 4.0 / (nf - 1.0);
            let pc = 1.0 + 2.0 / nf;
            if q < pc - EPS || q > q_hi + EPS {
                return Err(Error::Inadmissible(format!("q = {q} outside [{pc}, {q_hi}]")));
            }
            let (gamma_q, delta_slack) = if mu > nf + 1.0 - 2.0 / q {
                (nf * (1.0 - 1.0 / q), false)
            } else {
                ((mu + nf - 1.0) / 2.0 - (nf - 1.0) / q, true)
            };
            Ok(SpaceWeight { q, gamma_q, delta_slack, g_profile: energy_profile(params)? })
        }
        _ => Err(Error::Unsupported(format!(
            "L¹ ∩ L² solution weights are only given for n ≤ 5, got n = {n}"
        ))),
    }
}
