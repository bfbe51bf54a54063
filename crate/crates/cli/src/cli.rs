use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RateKind {
    /// Regular problem, L^r1 ∩ L^r2 → L^q.
    Linear,
    /// Energy estimate (L¹ and L² parts).
    Energy,
    /// Singular problem, L^r1 → L^q.
    Singular,
}

/// Numerical laboratory for the Euler–Poisson–Darboux equation
/// u_tt − Δu + (μ/t)u_t = t^(−α)|u|^p.
#[derive(Debug, Parser)]
#[command(name = "epd-lab", version)]
pub struct Cli {
    /// Directory for run artifacts.
    #[arg(long, global = true, default_value = "epd-out")]
    pub output_dir: PathBuf,
    /// Worker threads for verify and sweep (capped by EPD_LAB_THREADS).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Output format on stdout.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Critical exponent and regime for the given parameters.
    Exponents {
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        mu: Option<f64>,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        /// Tricomi exponent ℓ: report the equivalent EPD problem instead.
        #[arg(long, conflicts_with = "mu")]
        ell: Option<f64>,
        /// Damping ν of the Tricomi equation (with --ell).
        #[arg(long, default_value_t = 0.0, requires = "ell")]
        nu: f64,
    },
    /// Predicted decay rates as CSV.
    Rates {
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// One or more values, comma separated.
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        mu: Vec<f64>,
        #[arg(long, default_value_t = 0.0)]
        alpha: f64,
        #[arg(long, value_enum, default_value_t = RateKind::Linear)]
        kind: RateKind,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        r1: Vec<f64>,
        /// Defaults to r1 (single-norm estimate).
        #[arg(long, value_delimiter = ',')]
        r2: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "2")]
        q: Vec<f64>,
    },
    /// Fundamental solution K̂(t, s, ξ) over a frequency grid.
    KernelEval {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
        /// lo:hi:count
        #[arg(long)]
        xi_grid: String,
    },
    /// J_ν, J_ν' and Watson's 𝐘_ν over a grid.
    #[command(hide = true)]
    BesselEval {
        #[arg(long, allow_negative_numbers = true)]
        nu: f64,
        /// lo:hi:count
        #[arg(long)]
        z_grid: String,
    },
    /// Run one configuration file (or a manifest.json from an earlier run).
    Solve {
        config: PathBuf,
        /// Override a key, e.g. --set params.mu=3
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Solve a Tricomi problem directly and through its EPD form.
    Tricomi {
        config: PathBuf,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Fit a power law to one column of a norm-series CSV.
    Fit {
        input: PathBuf,
        /// E, L2, L3, Linf, ...
        #[arg(long, default_value = "E")]
        channel: String,
        /// lo:hi; defaults to the last decade of the series.
        #[arg(long)]
        window: Option<String>,
        /// Power k in (1 + log t)^k divided out before fitting.
        #[arg(long)]
        log_power: Option<u32>,
        /// Compare with the rate predicted for this damping.
        #[arg(long, allow_negative_numbers = true)]
        mu: Option<f64>,
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Start time of the run; 0 for the singular problem.
        #[arg(long, default_value_t = 1.0)]
        t0: f64,
        #[arg(long, default_value_t = 0.15)]
        tol: f64,
    },
    /// Run a verification matrix (the shipped acceptance matrix by default).
    Verify { matrix: Option<PathBuf> },
    /// Run a configuration for several values of one key.
    Sweep {
        config: PathBuf,
        /// Key to vary, e.g. params.mu
        #[arg(long)]
        param: String,
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        values: Vec<String>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
}
