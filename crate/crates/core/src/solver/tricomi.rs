//! Tricomi-type equation w_tt − t^(2ℓ)w_xx + (ν/t)w_t = |w|^p solved twice:
//! directly, and through the time change τ = Λ(t) to an EPD problem.

use super::config::RunConfig;
use super::grid::FieldState;
use super::run::{data_hat, integrate_mol, Equation, ExactLinear, MolSettings, RunOutcome, RunStatus};
use crate::analysis::NormSeries;
use crate::error::{Error, Result};
use crate::exponents::{tricomi_map, tricomi_time, tricomi_time_inverse, DissipationParams};
use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub struct TricomiOutcome {
    /// Direct method of lines in the original time.
    pub direct: RunOutcome,
    /// EPD solution pulled back to the original time and variables.
    pub mapped: RunOutcome,
    /// The EPD parameters used by the mapped path.
    pub epd_params: DissipationParams,
    /// (t, relative L2 mismatch of w) at every output time both paths reached.
    pub mismatch: Vec<(f64, f64)>,
    pub mismatch_final: f64,
    pub mismatch_max: f64,
}

fn rel_mismatch(a: &FieldState, b: &FieldState) -> f64 {
    let num: f64 = a.u_hat.iter().zip(&b.u_hat).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.u_hat.iter().map(|z| z.norm_sqr()).sum();
    if den == 0.0 {
        num.sqrt()
    } else {
        (num / den).sqrt()
    }
}

/// Solves the Tricomi problem with w(t₁) = 0, w_t(t₁) = w₁.
///
/// From `config` this uses t₁ = `params.t0`, the exponent `params.p`, the
/// datum, grid, t_final, output times (all in the original time),
/// tolerances, q_list and blow-up threshold. `params.mu` and `params.alpha`
/// are ignored.
pub fn solve_tricomi(ell: f64, nu_damp: f64, config: &RunConfig) -> Result<TricomiOutcome> {
    let t1 = config.params.t0;
    if !(t1 > 0.0) {
        return Err(Error::Config(format!("Tricomi start time t0 = {t1} must be > 0")));
    }
    config.validate()?;
    let mut epd = tricomi_map(ell, nu_damp)?;
    epd.t0 = tricomi_time(ell, t1);
    epd.p = config.params.p;
    let datum = data_hat(config)?;
    let grid = config.grid;
    let set = MolSettings {
        tolerances: config.tolerances,
        blowup_threshold: config.blowup_threshold,
        q_list: &config.q_list,
        store_slices: true,
    };

    let mut start = FieldState::zeros(grid, t1);
    start.v_hat = datum.clone();
    let direct_eq = Equation {
        damping: nu_damp,
        speed_power: ell,
        alpha: 0.0,
        p: config.params.p,
        coeff: 1.0,
    };
    let mut direct = integrate_mol(&direct_eq, start, &config.output_times, &set)?;

    // w_t(t₁) = t₁^ℓ u_τ(τ₀)
    let scaled: Vec<Complex64> = datum.iter().map(|z| z / t1.powf(ell)).collect();
    let taus: Vec<f64> = config.output_times.iter().map(|&t| tricomi_time(ell, t)).collect();
    let mut mapped = match epd.p {
        None => {
            let exact = ExactLinear::new(grid, epd.mu, epd.t0, scaled)?;
            let mut slices = vec![exact.initial()];
            for &tau in &taus {
                slices.push(if tau == epd.t0 { exact.initial() } else { exact.state(tau)? });
            }
            RunOutcome {
                status: RunStatus::Completed,
                norm_series: NormSeries::new(&config.q_list),
                final_state: None,
                slices,
                warnings: Vec::new(),
                steps: 0,
                rejected_steps: 0,
                duhamel: None,
            }
        }
        Some(_) => {
            let mut start = FieldState::zeros(grid, epd.t0);
            start.v_hat = scaled;
            let eq = Equation {
                damping: epd.mu,
                speed_power: 0.0,
                alpha: epd.alpha,
                p: epd.p,
                coeff: (ell + 1.0).powf(-epd.alpha),
            };
            integrate_mol(&eq, start, &taus, &set)?
        }
    };

    // back to (t, w, w_t); times are snapped to the requested output times
    let mut series = NormSeries::new(&config.q_list);
    let mut pulled = Vec::with_capacity(mapped.slices.len());
    for (i, st) in mapped.slices.iter().enumerate() {
        let t = if i == 0 { t1 } else { config.output_times[i - 1] };
        let factor = t.powf(ell);
        let back = FieldState {
            grid,
            u_hat: st.u_hat.clone(),
            v_hat: st.v_hat.iter().map(|z| z * factor).collect(),
            time: t,
        };
        if i > 0 {
            series.record(&back, ell)?;
        }
        pulled.push(back);
    }
    if let RunStatus::BlowupDetected { time } = mapped.status {
        // the blow-up row comes from the EPD series; carry it over in original time
        let tb = tricomi_time_inverse(ell, time);
        mapped.status = RunStatus::BlowupDetected { time: tb };
        series.push_row(tb, f64::INFINITY, &vec![f64::INFINITY; config.q_list.len()]);
    }
    if let RunStatus::StepUnderflow { time } = mapped.status {
        mapped.status = RunStatus::StepUnderflow {
            time: tricomi_time_inverse(ell, time),
        };
    }
    mapped.final_state = match mapped.status {
        RunStatus::Completed => pulled.last().cloned(),
        _ => None,
    };
    mapped.norm_series = series;
    mapped.slices = pulled;

    let mismatch: Vec<(f64, f64)> = direct
        .slices
        .iter()
        .zip(&mapped.slices)
        .skip(1)
        .map(|(a, b)| (a.time, rel_mismatch(a, b)))
        .collect();
    let mismatch_final = mismatch.last().map(|m| m.1).unwrap_or(f64::NAN);
    let mismatch_max = mismatch.iter().fold(0.0f64, |m, x| m.max(x.1));

    let reach = config.data_profile.support_radius() + tricomi_time(ell, config.t_final) - epd.t0;
    if reach > grid.half_length {
        let w = format!(
            "light cone radius {reach:.3} exceeds half_length {}: the solution wraps around",
            grid.half_length
        );
        direct.warnings.push(w.clone());
        mapped.warnings.push(w);
    }
    if !config.store_slices {
        direct.slices.clear();
        mapped.slices.clear();
    }
    Ok(TricomiOutcome {
        direct,
        mapped,
        epd_params: epd,
        mismatch,
        mismatch_final,
        mismatch_max,
    })
}
