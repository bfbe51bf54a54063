use super::config::{DataSlot, Integrator, RunConfig, Tolerances};
use super::dopri::{Dopri5, SegmentEnd, StepControl};
use super::grid::{fft, ifft, FieldState, GridSpec};
use crate::analysis::NormSeries;
use crate::error::{Error, Result};
use crate::kernel::{singular_value, KernelBatch};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    BlowupDetected { time: f64 },
    StepUnderflow { time: f64 },
}

/// Everything a run produces.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub norm_series: NormSeries,
    /// State at t_final; absent when the run stopped early.
    pub final_state: Option<FieldState>,
    /// States at the start time and every output time, when requested.
    pub slices: Vec<FieldState>,
    pub warnings: Vec<String>,
    pub steps: usize,
    pub rejected_steps: usize,
    pub duhamel: Option<super::duhamel::DuhamelReport>,
}

/// û_tt + t^(2ℓ)ξ²û + (μ/t)û_t = c·t^(−α)·(|u|^p)^.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Equation {
    pub damping: f64,
    pub speed_power: f64,
    pub alpha: f64,
    pub p: Option<f64>,
    pub coeff: f64,
}

impl Equation {
    pub fn from_config(config: &RunConfig) -> Self {
        Equation {
            damping: config.params.mu,
            speed_power: 0.0,
            alpha: config.params.alpha,
            p: config.params.p,
            coeff: 1.0,
        }
    }
}

/// c·t^(−α)·(|u|^p)^ with the dealiasing cut applied.
pub(crate) fn nonlinear_term(eq: &Equation, grid: &GridSpec, t: f64, u_hat: &[Complex64], out: &mut [Complex64]) {
    let p = match eq.p {
        Some(p) => p,
        None => {
            out.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            return;
        }
    };
    out.copy_from_slice(u_hat);
    ifft(out);
    for z in out.iter_mut() {
        *z = Complex64::new(z.re.abs().powf(p), 0.0);
    }
    fft(out);
    let scale = eq.coeff * if eq.alpha == 0.0 { 1.0 } else { t.powf(-eq.alpha) };
    for (k, z) in out.iter_mut().enumerate() {
        *z = if grid.keeps(k) { *z * scale } else { Complex64::new(0.0, 0.0) };
    }
}

pub(crate) struct MolSettings<'a> {
    pub tolerances: Tolerances,
    pub blowup_threshold: f64,
    pub q_list: &'a [f64],
    pub store_slices: bool,
}

fn sup_norm(u_hat: &[Complex64]) -> f64 {
    let mut c = u_hat.to_vec();
    ifft(&mut c);
    let mut m = 0.0f64;
    for z in &c {
        if !z.re.is_finite() {
            return f64::INFINITY;
        }
        m = m.max(z.re.abs());
    }
    m
}

fn split(grid: GridSpec, y: &[Complex64], t: f64) -> FieldState {
    let n = grid.n_modes;
    FieldState {
        grid,
        u_hat: y[..n].to_vec(),
        v_hat: y[n..].to_vec(),
        time: t,
    }
}

/// Method of lines from `start` through `output_times`.
pub(crate) fn integrate_mol(eq: &Equation, start: FieldState, output_times: &[f64], set: &MolSettings) -> Result<RunOutcome> {
    let grid = start.grid;
    let n = grid.n_modes;
    let xi2: Vec<f64> = (0..n).map(|k| grid.xi(k).powi(2)).collect();
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let eqc = *eq;
    let rhs = move |t: f64, y: &[Complex64], d: &mut [Complex64]| {
        let (u, v) = y.split_at(n);
        let (du, dv) = d.split_at_mut(n);
        du.copy_from_slice(v);
        nonlinear_term(&eqc, &grid, t, u, &mut scratch);
        let damp = eqc.damping / t;
        let speed = if eqc.speed_power == 0.0 { 1.0 } else { t.powf(2.0 * eqc.speed_power) };
        for k in 0..n {
            dv[k] = scratch[k] - u[k] * (speed * xi2[k]) - v[k] * damp;
        }
    };
    let mut y = start.u_hat.clone();
    y.extend_from_slice(&start.v_hat);
    let ctl = StepControl {
        rtol: set.tolerances.rel,
        // tolerances refer to normalized coefficients û/N
        atol: set.tolerances.abs * n as f64,
        h_min: 1e-12,
        max_steps: 50_000_000,
    };
    let mut ode = Dopri5::new(rhs, start.time, y, ctl);
    let mut series = NormSeries::new(set.q_list);
    let mut slices = Vec::new();
    if set.store_slices {
        slices.push(start.clone());
    }
    let mut status = RunStatus::Completed;
    let threshold = set.blowup_threshold;
    for &t_out in output_times {
        if t_out <= start.time {
            if t_out == start.time {
                series.record(&start, eq.speed_power)?;
                if set.store_slices {
                    slices.push(start.clone());
                }
            }
            continue;
        }
        let mut blown = false;
        let end = ode.advance(t_out, |_, y| {
            let s = sup_norm(&y[..n]);
            blown = !(s < threshold);
            !blown
        });
        match end {
            SegmentEnd::Reached => {
                let st = split(grid, &ode.y, ode.t);
                series.record(&st, eq.speed_power)?;
                if set.store_slices {
                    slices.push(st);
                }
            }
            SegmentEnd::Stopped(t) => {
                let st = split(grid, &ode.y, t);
                if st.is_finite() {
                    series.record(&st, eq.speed_power)?;
                } else {
                    let row = vec![f64::INFINITY; set.q_list.len()];
                    series.push_row(t, f64::INFINITY, &row);
                }
                debug_assert!(blown);
                status = RunStatus::BlowupDetected { time: t };
                break;
            }
            SegmentEnd::Underflow(t) => {
                status = RunStatus::StepUnderflow { time: t };
                break;
            }
        }
    }
    let final_state = (status == RunStatus::Completed).then(|| split(grid, &ode.y, ode.t));
    Ok(RunOutcome {
        status,
        norm_series: series,
        final_state,
        slices,
        warnings: Vec::new(),
        steps: ode.steps,
        rejected_steps: ode.rejected,
        duhamel: None,
    })
}

/// Datum sampled on the grid and transformed.
pub(crate) fn data_hat(config: &RunConfig) -> Result<Vec<Complex64>> {
    let d = config.data_profile.sample(&config.grid)?;
    Ok(super::grid::to_spectral(&d))
}

/// Exact state of the linear problem at time t (t ≥ t₀, or t > 0 when singular).
pub(crate) struct ExactLinear {
    grid: GridSpec,
    mu: f64,
    t0: f64,
    singular: bool,
    datum: Vec<Complex64>,
    batch: Option<KernelBatch>,
}

impl ExactLinear {
    pub fn new(grid: GridSpec, mu: f64, t0: f64, datum: Vec<Complex64>) -> Result<Self> {
        let singular = t0 == 0.0;
        let batch = if singular {
            None
        } else {
            Some(KernelBatch::new(mu, t0, &grid.xi_half())?)
        };
        Ok(ExactLinear {
            grid,
            mu,
            t0,
            singular,
            datum,
            batch,
        })
    }

    pub fn state(&self, t: f64) -> Result<FieldState> {
        let g = self.grid;
        let half: Vec<(f64, f64)> = match &self.batch {
            Some(b) => b.k_values(t)?.into_iter().map(|v| (v.k, v.k_t)).collect(),
            None => g
                .xi_half()
                .iter()
                .map(|&x| singular_value(self.mu, t, x).map(|v| (v.k, v.k_t)))
                .collect::<Result<_>>()?,
        };
        let n = g.n_modes;
        let mut st = FieldState::zeros(g, t);
        for k in 0..n {
            let (m, m_t) = half[g.half_index(k)];
            st.u_hat[k] = self.datum[k] * m;
            st.v_hat[k] = self.datum[k] * m_t;
        }
        Ok(st)
    }

    /// State at the start time: (0, u₁) at t₀, or (u₀, 0) at t = 0.
    pub fn initial(&self) -> FieldState {
        let mut st = FieldState::zeros(self.grid, self.t0);
        if self.singular {
            st.u_hat = self.datum.clone();
        } else {
            st.v_hat = self.datum.clone();
        }
        st
    }
}

/// Linear run by mode-wise propagation with the exact kernel.
pub fn solve_linear_exact(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    if config.params.p.is_some() {
        return Err(Error::Config("solve_linear_exact needs a linear run (no p)".into()));
    }
    let exact = ExactLinear::new(config.grid, config.params.mu, config.params.t0, data_hat(config)?)?;
    let mut series = NormSeries::new(&config.q_list);
    let mut slices = Vec::new();
    if config.store_slices {
        slices.push(exact.initial());
    }
    let mut last = None;
    for &t in &config.output_times {
        let st = if t == config.params.t0 { exact.initial() } else { exact.state(t)? };
        series.record(&st, 0.0)?;
        if config.store_slices && t > config.params.t0 {
            slices.push(st.clone());
        }
        last = Some(st);
    }
    let final_state = match last {
        Some(st) if st.time == config.t_final => st,
        _ => exact.state(config.t_final)?,
    };
    Ok(RunOutcome {
        status: RunStatus::Completed,
        norm_series: series,
        final_state: Some(final_state),
        slices,
        warnings: config.cone_warning().into_iter().collect(),
        steps: 0,
        rejected_steps: 0,
        duhamel: None,
    })
}

/// Method-of-lines run; a missing p gives the linear equation.
pub fn solve_semilinear(config: &RunConfig) -> Result<RunOutcome> {
    config.validate()?;
    let datum = data_hat(config)?;
    let start = match config.data_slot {
        DataSlot::InitialVelocity => {
            let mut st = FieldState::zeros(config.grid, config.params.t0);
            st.v_hat = datum;
            st
        }
        // exact linear propagation to t_ε; the nonlinear correction there is O(t_ε²)
        DataSlot::InitialDisplacement => {
            ExactLinear::new(config.grid, config.params.mu, 0.0, datum)?.state(config.singular_start)?
        }
    };
    let set = MolSettings {
        tolerances: config.tolerances,
        blowup_threshold: config.blowup_threshold,
        q_list: &config.q_list,
        store_slices: config.store_slices || config.integrator == Integrator::DuhamelCheck,
    };
    let mut out = integrate_mol(&Equation::from_config(config), start, &config.output_times, &set)?;
    if out.status == RunStatus::Completed {
        let reached = out.final_state.as_ref().map(|s| s.time).unwrap_or(0.0);
        if reached < config.t_final {
            // output times stop short of t_final: finish the run
            let rest = integrate_mol(
                &Equation::from_config(config),
                out.final_state.take().expect("completed run has a state"),
                &[config.t_final],
                &MolSettings { store_slices: false, ..set },
            )?;
            out.status = rest.status;
            out.final_state = rest.final_state;
            out.steps += rest.steps;
        }
    }
    out.warnings.extend(config.cone_warning());
    Ok(out)
}

/// Runs `config` with its integrator.
pub fn solve(config: &RunConfig) -> Result<RunOutcome> {
    match config.integrator {
        Integrator::ExactLinear => solve_linear_exact(config),
        Integrator::MethodOfLines => solve_semilinear(config),
        Integrator::DuhamelCheck => {
            let mut out = solve_semilinear(config)?;
            if out.status == RunStatus::Completed {
                out.duhamel = Some(super::duhamel::duhamel_check(config, &out)?);
            }
            Ok(out)
        }
    }
}
