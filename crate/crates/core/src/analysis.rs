//! Norms of solution states, decay-rate fitting and comparison with predictions.

use crate::error::{Error, Result};
use crate::exponents::{DecayRate, DEFAULT_DELTA};
use crate::solver::FieldState;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};

/// ‖u‖_{L^q} by the periodic trapezoid rule; q = ∞ gives the grid maximum.
pub fn lq_norm(state: &FieldState, q: f64) -> Result<f64> {
    lq_norm_samples(&state.u(), state.grid.dx(), q)
}

pub fn lq_norm_samples(u: &[f64], dx: f64, q: f64) -> Result<f64> {
    if !(q >= 1.0) {
        return Err(Error::Config(format!("q = {q} must be ≥ 1")));
    }
    if q.is_infinite() {
        return Ok(u.iter().fold(0.0f64, |m, v| m.max(v.abs())));
    }
    // scale by the maximum to keep large q from overflowing
    let m = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if m == 0.0 || !m.is_finite() {
        return Ok(m);
    }
    let sum: f64 = u.iter().map(|v| (v.abs() / m).powf(q)).sum();
    Ok(m * (sum * dx).powf(1.0 / q))
}

/// ‖u‖_{L²} from the Fourier coefficients by Parseval.
pub fn l2_norm_spectral(state: &FieldState) -> f64 {
    let n = state.grid.n_modes as f64;
    let s: f64 = state.u_hat.iter().map(|z| z.norm_sqr()).sum();
    (state.grid.dx() * s / n).sqrt()
}

/// E(t) = ½‖u_t‖² + ½·t^(2ℓ)‖u_x‖², computed in Fourier space.
///
/// `speed_power` is ℓ for the Tricomi equation and 0 for the EPD equation.
pub fn energy(state: &FieldState, speed_power: f64) -> f64 {
    let g = &state.grid;
    let n = g.n_modes;
    let w = if speed_power == 0.0 {
        1.0
    } else {
        state.time.powf(2.0 * speed_power)
    };
    let mut s = 0.0;
    for k in 0..n {
        let xi = g.xi(k);
        s += state.v_hat[k].norm_sqr() + w * xi * xi * state.u_hat[k].norm_sqr();
    }
    g.half_length * s / (n * n) as f64
}

/// Time series of energy and L^q norms.
#[derive(Clone, Debug, PartialEq, Default, Serialize, Deserialize)]
pub struct NormSeries {
    pub times: Vec<f64>,
    pub energy: Vec<f64>,
    /// Keyed by the column label (`L2`, `L3`, `Linf`, ...).
    pub lq_norms: BTreeMap<String, Vec<f64>>,
    #[serde(with = "crate::solver::q_list_serde")]
    pub q_list: Vec<f64>,
}

/// Column label for an exponent: `L2`, `L2.5`, `Linf`.
pub fn q_label(q: f64) -> String {
    if q.is_infinite() {
        "Linf".into()
    } else {
        format!("L{q}")
    }
}

/// Which quantity of a norm series a fit uses.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Energy,
    Lq(f64),
}

impl Channel {
    pub fn label(&self) -> String {
        match self {
            Channel::Energy => "E".into(),
            Channel::Lq(q) => q_label(*q),
        }
    }

    /// Parses `E`, `energy`, `L3`, `Linf`, `3` or `inf`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("e") || t.eq_ignore_ascii_case("energy") {
            return Ok(Channel::Energy);
        }
        let body = t.strip_prefix('L').or_else(|| t.strip_prefix('l')).unwrap_or(t);
        let q = if body.eq_ignore_ascii_case("inf") {
            f64::INFINITY
        } else {
            body.parse::<f64>()
                .map_err(|_| Error::Config(format!("unknown channel `{s}`")))?
        };
        if !(q >= 1.0) {
            return Err(Error::Config(format!("channel exponent {q} must be ≥ 1")));
        }
        Ok(Channel::Lq(q))
    }
}

impl NormSeries {
    pub fn new(q_list: &[f64]) -> Self {
        NormSeries {
            times: Vec::new(),
            energy: Vec::new(),
            lq_norms: q_list.iter().map(|&q| (q_label(q), Vec::new())).collect(),
            q_list: q_list.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Appends the norms of `state` at its time.
    pub fn record(&mut self, state: &FieldState, speed_power: f64) -> Result<()> {
        let u = state.u();
        let dx = state.grid.dx();
        self.times.push(state.time);
        self.energy.push(energy(state, speed_power));
        for &q in &self.q_list {
            let v = lq_norm_samples(&u, dx, q)?;
            self.lq_norms.get_mut(&q_label(q)).expect("label registered").push(v);
        }
        Ok(())
    }

    /// Appends a row of already computed values.
    pub fn push_row(&mut self, t: f64, energy: f64, norms: &[f64]) {
        self.times.push(t);
        self.energy.push(energy);
        for (q, v) in self.q_list.iter().zip(norms) {
            self.lq_norms.get_mut(&q_label(*q)).expect("label registered").push(*v);
        }
    }

    pub fn channel(&self, ch: Channel) -> Result<&[f64]> {
        match ch {
            Channel::Energy => Ok(&self.energy),
            Channel::Lq(q) => self
                .lq_norms
                .get(&q_label(q))
                .map(|v| v.as_slice())
                .ok_or_else(|| Error::Config(format!("series has no {} column", q_label(q)))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.times.len();
        if self.energy.len() != n || self.lq_norms.values().any(|v| v.len() != n) {
            return Err(Error::Config("norm series columns differ in length".into()));
        }
        if self.times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("norm series times must be strictly increasing".into()));
        }
        Ok(())
    }

    /// CSV with header `t,E,L2,...` in q_list order.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec!["t".to_string(), "E".to_string()];
        header.extend(self.q_list.iter().map(|&q| q_label(q)));
        out.write_record(&header)?;
        for i in 0..self.times.len() {
            let mut row = vec![fmt(self.times[i]), fmt(self.energy[i])];
            for &q in &self.q_list {
                row.push(fmt(self.lq_norms[&q_label(q)][i]));
            }
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.clone();
        if header.get(0) != Some("t") || header.get(1) != Some("E") {
            return Err(Error::Config("norm series CSV must start with columns t,E".into()));
        }
        let mut q_list = Vec::new();
        for h in header.iter().skip(2) {
            match Channel::parse(h)? {
                Channel::Lq(q) => q_list.push(q),
                Channel::Energy => return Err(Error::Config("duplicate energy column".into())),
            }
        }
        let mut series = NormSeries::new(&q_list);
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let vals: std::result::Result<Vec<f64>, _> = rec.iter().map(|s| s.trim().parse::<f64>()).collect();
            let vals = vals.map_err(|e| Error::Config(format!("row {}: {e}", line + 2)))?;
            if vals.len() != header.len() {
                return Err(Error::Config(format!("row {}: wrong number of fields", line + 2)));
            }
            series.push_row(vals[0], vals[1], &vals[2..]);
        }
        series.validate()?;
        Ok(series)
    }
}

/// Shortest representation that round-trips.
fn fmt(v: f64) -> String {
    format!("{v:e}")
}

/// Least-squares fit of log(value) − k·log(1 + log t) against log t.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub stderr: f64,
    pub log_corrected: bool,
    pub log_power: u32,
    pub window: (f64, f64),
    pub samples: usize,
}

pub const MIN_FIT_SAMPLES: usize = 8;

pub fn fit_decay(series: &NormSeries, channel: Channel, window: (f64, f64), expected_log_power: u32) -> Result<FitResult> {
    let values = series.channel(channel)?;
    let (lo, hi) = window;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &v) in series.times.iter().zip(values) {
        if t < lo * (1.0 - 1e-12) || t > hi * (1.0 + 1e-12) {
            continue;
        }
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Insufficient(format!(
                "nonpositive or non-finite {} value {v} at t = {t}",
                channel.label()
            )));
        }
        if expected_log_power > 0 && !(t > 1.0) {
            return Err(Error::Insufficient(format!(
                "log-corrected fits need t > 1, window starts at {t}"
            )));
        }
        let corr = if expected_log_power > 0 {
            expected_log_power as f64 * (1.0 + t.ln()).ln()
        } else {
            0.0
        };
        xs.push(t.ln());
        ys.push(v.ln() - corr);
    }
    let n = xs.len();
    if n < MIN_FIT_SAMPLES {
        return Err(Error::Insufficient(format!(
            "{n} samples in window [{lo}, {hi}], need at least {MIN_FIT_SAMPLES}"
        )));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Insufficient("all samples at the same time".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - intercept - slope * x;
            r * r
        })
        .sum();
    let stderr = if n > 2 { (sse / (nf - 2.0) / sxx).sqrt() } else { 0.0 };
    Ok(FitResult {
        slope,
        intercept,
        stderr,
        log_corrected: expected_log_power > 0,
        log_power: expected_log_power,
        window,
        samples: n,
    })
}

/// Outcome of comparing a fitted slope with a predicted rate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub fitted: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub delta_allowance: f64,
    pub diagnostic: String,
}

/// Expected log power of the fitted channel: doubled for the energy.
pub fn expected_log_power(channel: Channel, predicted: &DecayRate) -> u32 {
    match channel {
        Channel::Energy => 2 * predicted.log_power,
        Channel::Lq(_) => predicted.log_power,
    }
}

/// Passes iff the slope is within `tol` of the prediction (twice the norm
/// exponent for the energy, which is the square of the bounded norm).
/// Rates with δ slack get the extra allowance δ = 0.01.
pub fn compare_rates(fit: &FitResult, channel: Channel, predicted: &DecayRate, tol: f64) -> Verdict {
    let factor = if channel == Channel::Energy { 2.0 } else { 1.0 };
    let expected = factor * predicted.t_exp;
    let delta_allowance = if predicted.delta_slack { factor * DEFAULT_DELTA } else { 0.0 };
    let dev = (fit.slope - expected).abs();
    let pass = dev <= tol + delta_allowance;
    let want_log = expected_log_power(channel, predicted);
    let mut diagnostic = format!(
        "{} slope {:.4} ± {:.4} vs expected {:.4} (|Δ| = {:.4}, tol {:.3}{})",
        channel.label(),
        fit.slope,
        fit.stderr,
        expected,
        dev,
        tol,
        if delta_allowance > 0.0 { format!(" + δ {delta_allowance}") } else { String::new() }
    );
    if fit.log_power != want_log {
        diagnostic.push_str(&format!(
            "; fitted with log power {} but the prediction carries {}",
            fit.log_power, want_log
        ));
    }
    Verdict {
        pass,
        fitted: fit.slope,
        expected,
        tolerance: tol,
        delta_allowance,
        diagnostic,
    }
}
