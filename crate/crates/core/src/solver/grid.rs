use crate::error::{Error, Result};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::f64::consts::PI;

/// Periodic grid on [−L, L) with `n_modes` points.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub n_modes: usize,
    pub half_length: f64,
    /// Fraction of the wavenumber range kept in the nonlinear term.
    pub dealias_fraction: f64,
}

impl GridSpec {
    pub fn new(n_modes: usize, half_length: f64) -> Self {
        GridSpec {
            n_modes,
            half_length,
            dealias_fraction: 2.0 / 3.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_modes < 8 || !self.n_modes.is_power_of_two() {
            return Err(Error::Config(format!(
                "n_modes = {} must be a power of two ≥ 8",
                self.n_modes
            )));
        }
        if !(self.half_length > 0.0) || !self.half_length.is_finite() {
            return Err(Error::Config(format!("half_length = {} must be > 0", self.half_length)));
        }
        if !(self.dealias_fraction > 0.5 && self.dealias_fraction <= 1.0) {
            return Err(Error::Config(format!(
                "dealias_fraction = {} must lie in (1/2, 1]",
                self.dealias_fraction
            )));
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_length / self.n_modes as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_modes).map(|j| self.x(j)).collect()
    }

    /// Signed mode number of FFT slot k.
    pub fn mode(&self, k: usize) -> i64 {
        let n = self.n_modes;
        if k <= n / 2 {
            k as i64
        } else {
            k as i64 - n as i64
        }
    }

    /// |ξ| for FFT slot k.
    pub fn xi(&self, k: usize) -> f64 {
        PI / self.half_length * self.mode(k).unsigned_abs() as f64
    }

    /// |ξ| for slots 0..=N/2; slot k and N−k share the entry min(k, N−k).
    pub fn xi_half(&self) -> Vec<f64> {
        (0..=self.n_modes / 2).map(|k| self.xi(k)).collect()
    }

    pub fn half_index(&self, k: usize) -> usize {
        self.mode(k).unsigned_abs() as usize
    }

    pub fn xi_max(&self) -> f64 {
        self.xi(self.n_modes / 2)
    }

    /// Whether slot k survives the dealiasing cut.
    pub fn keeps(&self, k: usize) -> bool {
        (self.mode(k).unsigned_abs() as f64) <= self.dealias_fraction * (self.n_modes / 2) as f64
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// Unnormalized forward transform, in place.
pub fn fft(data: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(data.len()));
    plan.process(data);
}

/// Inverse transform including the 1/N factor, in place.
pub fn ifft(data: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(data.len()));
    plan.process(data);
    let s = 1.0 / data.len() as f64;
    for z in data.iter_mut() {
        *z *= s;
    }
}

pub fn to_spectral(values: &[f64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut c);
    c
}

pub fn to_physical(coeffs: &[Complex64]) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    ifft(&mut c);
    c.into_iter().map(|z| z.re).collect()
}

/// Spectral state of a solution: unnormalized DFT coefficients of u and u_t.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldState {
    pub grid: GridSpec,
    pub u_hat: Vec<Complex64>,
    pub v_hat: Vec<Complex64>,
    pub time: f64,
}

impl FieldState {
    pub fn from_physical(grid: GridSpec, u: &[f64], v: &[f64], time: f64) -> Self {
        FieldState {
            grid,
            u_hat: to_spectral(u),
            v_hat: to_spectral(v),
            time,
        }
    }

    pub fn zeros(grid: GridSpec, time: f64) -> Self {
        let z = vec![Complex64::new(0.0, 0.0); grid.n_modes];
        FieldState {
            grid,
            u_hat: z.clone(),
            v_hat: z,
            time,
        }
    }

    pub fn u(&self) -> Vec<f64> {
        to_physical(&self.u_hat)
    }

    pub fn v(&self) -> Vec<f64> {
        to_physical(&self.v_hat)
    }

    /// Largest |Im| of the inverse transform relative to the largest |Re|.
    pub fn reality_defect(&self) -> f64 {
        let mut c = self.u_hat.clone();
        ifft(&mut c);
        let re = c.iter().fold(0.0f64, |m, z| m.max(z.re.abs()));
        let im = c.iter().fold(0.0f64, |m, z| m.max(z.im.abs()));
        if re == 0.0 {
            im
        } else {
            im / re
        }
    }

    /// max_k |û(−k) − conj û(k)| relative to max |û|.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n_modes;
        let scale = self.u_hat.iter().fold(0.0f64, |m, z| m.max(z.norm()));
        let mut worst = 0.0f64;
        for k in 1..n {
            worst = worst.max((self.u_hat[n - k] - self.u_hat[k].conj()).norm());
        }
        if scale == 0.0 {
            worst
        } else {
            worst / scale
        }
    }

    pub fn is_finite(&self) -> bool {
        self.u_hat.iter().chain(&self.v_hat).all(|z| z.re.is_finite() && z.im.is_finite())
    }
}
