//! Dormand–Prince 5(4) with first-same-as-last and step-size control.

use num_complex::Complex64;

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Difference between the fifth- and fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

#[derive(Clone, Copy, Debug)]
pub struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub h_min: f64,
    pub max_steps: usize,
}

/// How an integration segment ended.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SegmentEnd {
    Reached,
    /// The acceptance callback asked to stop at this time.
    Stopped(f64),
    /// The step size fell below `h_min` at this time.
    Underflow(f64),
}

/// Integrator state carried across output segments.
pub struct Dopri5<F> {
    rhs: F,
    ctl: StepControl,
    pub t: f64,
    pub y: Vec<Complex64>,
    h: f64,
    k: Vec<Vec<Complex64>>,
    fsal_valid: bool,
    pub steps: usize,
    pub rejected: usize,
}

impl<F: FnMut(f64, &[Complex64], &mut [Complex64])> Dopri5<F> {
    pub fn new(rhs: F, t: f64, y: Vec<Complex64>, ctl: StepControl) -> Self {
        let n = y.len();
        Dopri5 {
            rhs,
            ctl,
            t,
            y,
            h: 0.0,
            k: vec![vec![Complex64::new(0.0, 0.0); n]; 7],
            fsal_valid: false,
            steps: 0,
            rejected: 0,
        }
    }

    fn err_norm(&self, y0: &[Complex64], y1: &[Complex64], e: &[Complex64]) -> f64 {
        let (rtol, atol) = (self.ctl.rtol, self.ctl.atol);
        let mut acc = 0.0;
        for i in 0..e.len() {
            let sr = atol + rtol * y0[i].re.abs().max(y1[i].re.abs());
            let si = atol + rtol * y0[i].im.abs().max(y1[i].im.abs());
            acc += (e[i].re / sr).powi(2) + (e[i].im / si).powi(2);
        }
        (acc / (2 * e.len()) as f64).sqrt()
    }

    fn initial_step(&mut self, t_end: f64) -> f64 {
        // Hairer–Nørsett–Wanner starting step
        let n = self.y.len();
        let y0 = self.y.clone();
        let f0 = self.k[0].clone();
        let d0 = self.err_norm(&y0, &y0, &y0);
        let d1 = self.err_norm(&y0, &y0, &f0);
        let mut h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0 = h0.min((t_end - self.t).abs());
        let y1: Vec<Complex64> = y0.iter().zip(&f0).map(|(y, f)| y + f * h0).collect();
        let mut f1 = vec![Complex64::new(0.0, 0.0); n];
        (self.rhs)(self.t + h0, &y1, &mut f1);
        let df: Vec<Complex64> = f1.iter().zip(&f0).map(|(a, b)| a - b).collect();
        let d2 = self.err_norm(&y0, &y0, &df) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min((t_end - self.t).abs())
    }

    /// Advance to `t_end`, calling `on_accept(t, y)` after every accepted step;
    /// returning `false` from it stops the integration.
    #[allow(clippy::needless_range_loop)]
    pub fn advance(&mut self, t_end: f64, mut on_accept: impl FnMut(f64, &[Complex64]) -> bool) -> SegmentEnd {
        let n = self.y.len();
        if !self.fsal_valid {
            let mut k0 = std::mem::take(&mut self.k[0]);
            (self.rhs)(self.t, &self.y, &mut k0);
            self.k[0] = k0;
            self.fsal_valid = true;
        }
        if self.h == 0.0 {
            self.h = self.initial_step(t_end);
        }
        let mut stage = vec![Complex64::new(0.0, 0.0); n];
        let mut y_new = vec![Complex64::new(0.0, 0.0); n];
        let mut err = vec![Complex64::new(0.0, 0.0); n];
        while self.t < t_end {
            if self.steps >= self.ctl.max_steps {
                return SegmentEnd::Underflow(self.t);
            }
            let remaining = t_end - self.t;
            let last = self.h >= remaining * (1.0 - 1e-12);
            let h = if last { remaining } else { self.h };
            if h < self.ctl.h_min && !last {
                return SegmentEnd::Underflow(self.t);
            }
            for s in 1..7 {
                for i in 0..n {
                    let mut acc = self.y[i];
                    for j in 0..s {
                        let a = A[s][j];
                        if a != 0.0 {
                            acc += self.k[j][i] * (h * a);
                        }
                    }
                    stage[i] = acc;
                }
                let mut ks = std::mem::take(&mut self.k[s]);
                (self.rhs)(self.t + C[s] * h, &stage, &mut ks);
                self.k[s] = ks;
                if s == 6 {
                    y_new.copy_from_slice(&stage);
                }
            }
            for i in 0..n {
                let mut e = Complex64::new(0.0, 0.0);
                for j in 0..7 {
                    if E[j] != 0.0 {
                        e += self.k[j][i] * (h * E[j]);
                    }
                }
                err[i] = e;
            }
            let en = self.err_norm(&self.y, &y_new, &err);
            let finite = en.is_finite();
            if finite && en <= 1.0 {
                self.t = if last { t_end } else { self.t + h };
                std::mem::swap(&mut self.y, &mut y_new);
                self.k.swap(0, 6);
                self.steps += 1;
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                if !last || fac < 1.0 {
                    self.h = h * fac;
                }
                if !on_accept(self.t, &self.y) {
                    return SegmentEnd::Stopped(self.t);
                }
            } else {
                self.rejected += 1;
                let fac = if finite { (0.9 * en.powf(-0.2)).clamp(0.1, 1.0) } else { 0.1 };
                self.h = h * fac;
                if self.h < self.ctl.h_min {
                    return SegmentEnd::Underflow(self.t);
                }
            }
        }
        SegmentEnd::Reached
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctl(rtol: f64) -> StepControl {
        StepControl {
            rtol,
            atol: rtol * 1e-3,
            h_min: 1e-12,
            max_steps: 1_000_000,
        }
    }

    #[test]
    fn harmonic_oscillator() {
        // y'' = −y as a first-order system in one complex slot each
        let rhs = |_t: f64, y: &[Complex64], d: &mut [Complex64]| {
            d[0] = y[1];
            d[1] = -y[0];
        };
        let y0 = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 2.0)];
        let mut ode = Dopri5::new(rhs, 0.0, y0, ctl(1e-10));
        for &t in &[1.0, 5.0, 10.0] {
            assert_eq!(ode.advance(t, |_, _| true), SegmentEnd::Reached);
            assert_eq!(ode.t, t);
            let exact = Complex64::new(1.0, 2.0) * t.sin();
            assert!((ode.y[0] - exact).norm() < 1e-8);
        }
    }

    #[test]
    fn stops_on_request_and_underflows_at_blowup() {
        // y' = y², y(0) = 1 blows up at t = 1
        let rhs = |_t: f64, y: &[Complex64], d: &mut [Complex64]| d[0] = y[0] * y[0];
        let mut ode = Dopri5::new(rhs, 0.0, vec![Complex64::new(1.0, 0.0)], ctl(1e-8));
        let end = ode.advance(2.0, |_, y| y[0].re < 1e6);
        match end {
            SegmentEnd::Stopped(t) => assert!((t - 1.0).abs() < 1e-5),
            other => panic!("{other:?}"),
        }
    }
}
