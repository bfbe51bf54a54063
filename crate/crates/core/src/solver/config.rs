use super::grid::GridSpec;
use crate::error::{Error, Result};
use crate::exponents::DissipationParams;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Shape of the initial datum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataProfile {
    /// a·exp(−x²/w²)
    Gaussian { amplitude: f64, width: f64 },
    /// a on |x| ≤ radius, smoothly switched off over `edge`; compactly supported.
    Plateau { amplitude: f64, radius: f64, edge: f64 },
    /// Two-column text file `x value`, linearly interpolated, zero outside its range.
    Custom { path: PathBuf },
}

impl Default for DataProfile {
    fn default() -> Self {
        DataProfile::Gaussian {
            amplitude: 1e-2,
            width: 1.0,
        }
    }
}

/// e^(−1/y) based C^∞ step from 0 (y ≤ 0) to 1 (y ≥ 1).
fn smooth_step(y: f64) -> f64 {
    let psi = |y: f64| if y > 0.0 { (-1.0 / y).exp() } else { 0.0 };
    let a = psi(y);
    let b = psi(1.0 - y);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

impl DataProfile {
    pub fn sample(&self, grid: &GridSpec) -> Result<Vec<f64>> {
        let xs = grid.points();
        match self {
            DataProfile::Gaussian { amplitude, width } => Ok(xs
                .iter()
                .map(|x| amplitude * (-(x / width) * (x / width)).exp())
                .collect()),
            DataProfile::Plateau {
                amplitude,
                radius,
                edge,
            } => Ok(xs
                .iter()
                .map(|x| amplitude * (1.0 - smooth_step((x.abs() - radius) / edge)))
                .collect()),
            DataProfile::Custom { path } => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                let table = parse_table(&text)
                    .map_err(|m| Error::Config(format!("{}: {m}", path.display())))?;
                Ok(xs.iter().map(|&x| interpolate(&table, x)).collect())
            }
        }
    }

    /// Radius outside which the datum is negligible (below 1e−16 relative).
    pub fn support_radius(&self) -> f64 {
        match self {
            DataProfile::Gaussian { width, .. } => 6.1 * width,
            DataProfile::Plateau { radius, edge, .. } => radius + edge,
            DataProfile::Custom { path } => std::fs::read_to_string(path)
                .ok()
                .and_then(|t| parse_table(&t).ok())
                .map(|t| t.iter().fold(0.0f64, |m, p| m.max(p.0.abs())))
                .unwrap_or(0.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self {
            DataProfile::Gaussian { amplitude, width } => amplitude.is_finite() && *width > 0.0,
            DataProfile::Plateau {
                amplitude,
                radius,
                edge,
            } => amplitude.is_finite() && *radius >= 0.0 && *edge > 0.0,
            DataProfile::Custom { .. } => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid data profile {self:?}")))
        }
    }
}

fn parse_table(text: &str) -> std::result::Result<Vec<(f64, f64)>, String> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty());
        let parse = |s: Option<&str>| s.and_then(|s| s.parse::<f64>().ok());
        match (parse(it.next()), parse(it.next())) {
            (Some(x), Some(v)) => rows.push((x, v)),
            _ => return Err(format!("line {}: expected two numbers", i + 1)),
        }
    }
    if rows.len() < 2 {
        return Err("need at least two samples".into());
    }
    if rows.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err("x values must be strictly increasing".into());
    }
    Ok(rows)
}

fn interpolate(table: &[(f64, f64)], x: f64) -> f64 {
    if x < table[0].0 || x > table[table.len() - 1].0 {
        return 0.0;
    }
    let i = table.partition_point(|p| p.0 <= x).clamp(1, table.len() - 1);
    let (x0, y0) = table[i - 1];
    let (x1, y1) = table[i];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Where the datum is placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataSlot {
    /// u(0) = u₀, u_t(0) = 0 (singular problem).
    InitialDisplacement,
    /// u(t₀) = 0, u_t(t₀) = u₁ (regular problem).
    InitialVelocity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    /// Mode-wise propagation with the exact kernel (linear runs only).
    ExactLinear,
    /// Adaptive Dormand–Prince 5(4) on the Fourier system.
    MethodOfLines,
    /// Method of lines followed by a Duhamel reconstruction of the final state.
    DuhamelCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rel: f64,
    pub abs: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rel: 1e-9,
            abs: 1e-13,
        }
    }
}

/// Default start of the time stepping for the singular problem.
pub const SINGULAR_START: f64 = 1e-3;
pub const DEFAULT_BLOWUP: f64 = 1e6;

/// Everything that determines a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub params: DissipationParams,
    pub data_profile: DataProfile,
    pub data_slot: DataSlot,
    pub grid: GridSpec,
    pub t_final: f64,
    pub output_times: Vec<f64>,
    pub integrator: Integrator,
    pub tolerances: Tolerances,
    pub blowup_threshold: f64,
    /// Lebesgue exponents recorded in the norm series; `inf` is the sup norm.
    #[serde(with = "q_list_serde")]
    pub q_list: Vec<f64>,
    /// Keep the state at every output time (needed by the Duhamel check).
    pub store_slices: bool,
    /// Time at which stepping of the singular problem begins.
    pub singular_start: f64,
    /// Fit window; `None` means [T/10, T].
    pub fit_window: Option<(f64, f64)>,
}

impl RunConfig {
    /// Defaults for the given parameters: small Gaussian data, 2048 modes, T = 100.
    pub fn new(params: DissipationParams) -> Self {
        let singular = params.is_singular();
        let t_final = 100.0;
        let linear = params.p.is_none();
        let mut cfg = RunConfig {
            data_slot: if singular {
                DataSlot::InitialDisplacement
            } else {
                DataSlot::InitialVelocity
            },
            params,
            data_profile: DataProfile::default(),
            grid: GridSpec::new(2048, 128.0),
            t_final,
            output_times: Vec::new(),
            integrator: if linear {
                Integrator::ExactLinear
            } else {
                Integrator::MethodOfLines
            },
            tolerances: Tolerances::default(),
            blowup_threshold: DEFAULT_BLOWUP,
            q_list: vec![2.0, 3.0, f64::INFINITY],
            store_slices: false,
            singular_start: SINGULAR_START,
            fit_window: None,
        };
        cfg.output_times = cfg.default_output_times(96);
        cfg
    }

    /// First time at which the state is available.
    pub fn t_start(&self) -> f64 {
        if self.params.is_singular() {
            if self.integrator == Integrator::ExactLinear {
                0.0
            } else {
                self.singular_start
            }
        } else {
            self.params.t0
        }
    }

    /// `count` log-spaced times ending at t_final.
    pub fn default_output_times(&self, count: usize) -> Vec<f64> {
        let lo = if self.params.is_singular() {
            self.singular_start.max(self.t_final * 1e-3)
        } else {
            self.params.t0
        };
        let mut times = log_spaced(lo, self.t_final, count + 1);
        if !self.params.is_singular() {
            times.remove(0);
        }
        times
    }

    pub fn fit_window(&self) -> (f64, f64) {
        self.fit_window.unwrap_or((self.t_final / 10.0, self.t_final))
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.grid.validate()?;
        self.data_profile.validate()?;
        let p = &self.params;
        if p.n != 1 {
            return Err(Error::Unsupported(format!(
                "the solver is one-dimensional, got n = {}",
                p.n
            )));
        }
        let expected = if p.is_singular() {
            DataSlot::InitialDisplacement
        } else {
            DataSlot::InitialVelocity
        };
        if self.data_slot != expected {
            return Err(Error::Config(format!(
                "data_slot {:?} does not match t0 = {}",
                self.data_slot, p.t0
            )));
        }
        if self.integrator == Integrator::ExactLinear && p.p.is_some() {
            return Err(Error::Config("exact_linear needs a linear run (no p)".into()));
        }
        if p.is_singular() && p.p.is_some() && p.alpha != 0.0 {
            return Err(Error::Unsupported(
                "the semilinear singular problem is only treated with alpha = 0".into(),
            ));
        }
        if p.is_singular() && !(self.singular_start > 0.0 && self.singular_start < self.t_final) {
            return Err(Error::Config(format!(
                "singular_start = {} must lie in (0, t_final)",
                self.singular_start
            )));
        }
        let t_start = self.t_start();
        if !(self.t_final > t_start) || !self.t_final.is_finite() {
            return Err(Error::Config(format!(
                "t_final = {} must exceed the start time {t_start}",
                self.t_final
            )));
        }
        if self.output_times.is_empty() {
            return Err(Error::Config("output_times is empty".into()));
        }
        if self.output_times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("output_times must be strictly increasing".into()));
        }
        let (first, last) = (self.output_times[0], *self.output_times.last().unwrap());
        if first < t_start || last > self.t_final * (1.0 + 1e-12) || (p.is_singular() && first <= 0.0) {
            return Err(Error::Config(format!(
                "output_times must lie in [{t_start}, {}]",
                self.t_final
            )));
        }
        if !(self.tolerances.rel > 0.0 && self.tolerances.abs > 0.0) {
            return Err(Error::Config("tolerances must be positive".into()));
        }
        if !(self.blowup_threshold > 0.0) {
            return Err(Error::Config("blowup_threshold must be positive".into()));
        }
        if self.q_list.iter().any(|q| !(*q >= 1.0)) {
            return Err(Error::Config("every q in q_list must be ≥ 1".into()));
        }
        Ok(())
    }

    /// Warning text when the light cone from the data reaches the periodic boundary.
    pub fn cone_warning(&self) -> Option<String> {
        let reach = self.data_profile.support_radius() + (self.t_final - self.t_start());
        (reach > self.grid.half_length).then(|| {
            format!(
                "light cone radius {reach:.3} exceeds half_length {}: the solution wraps around",
                self.grid.half_length
            )
        })
    }
}

/// `count` points from lo to hi, equally spaced in log t.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![hi];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut v: Vec<f64> = (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect();
    v[0] = lo;
    v[count - 1] = hi;
    v
}

/// Lebesgue exponents with ∞ written as the string "inf".
pub mod q_list_serde {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Q {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(q: &[f64], s: S) -> Result<S::Ok, S::Error> {
        q.iter()
            .map(|&v| {
                if v.is_infinite() {
                    Q::Text("inf".into())
                } else {
                    Q::Num(v)
                }
            })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        Vec::<Q>::deserialize(d)?
            .into_iter()
            .map(|q| match q {
                Q::Num(v) => Ok(v),
                Q::Text(t) if t == "inf" => Ok(f64::INFINITY),
                Q::Text(t) => Err(D::Error::custom(format!("bad exponent {t}"))),
            })
            .collect()
    }
}
