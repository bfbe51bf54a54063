//! Subcommand implementations. Each returns the process exit code.

use crate::cli::{Command, Format, RateKind};
use crate::error::{CliError, CliResult, EXIT_BLOWUP, EXIT_FAILURE, EXIT_OK};
use crate::matrix::{parse_matrix, predicted_rate, rate_verdict, run_matrix, Row, ACCEPTANCE_MATRIX};
use crate::output::{emit, emit_one, table, to_csv};
use crate::runcfg::{load_run_text, parse_overrides, RunFile, TricomiSpec};
use epd_core::analysis::{expected_log_power, fit_decay, Channel, FitResult, NormSeries};
use epd_core::exponents::{
    energy_rate, linear_rate, p_crit, singular_rate, tricomi_map, DecayRate, DissipationParams,
};
use epd_core::kernel::{k_hat, kernel_ode_residual, KernelQuery};
use epd_core::solver::{solve, solve_tricomi, write_slice, DuhamelReport, RunConfig, RunOutcome, RunStatus};
use epd_core::special_functions::{bessel_big_y, bessel_j, bessel_j_prime, cos_pi, sin_pi, BesselOrder};
use serde::{Deserialize, Serialize};
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

pub const TOOL: &str = "epd-lab";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Settings shared by all subcommands.
pub struct Ctx<'a> {
    pub output_dir: PathBuf,
    pub jobs: usize,
    pub format: Option<Format>,
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn warn(&mut self, msg: impl std::fmt::Display) {
        let _ = writeln!(self.err, "warning: {msg}");
    }
}

/// Worker count: `--jobs` (default: available cores) capped by EPD_LAB_THREADS.
pub fn effective_jobs(flag: Option<usize>, env: Option<&str>) -> CliResult<usize> {
    let base = flag.unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    let cap = match env.map(str::trim).filter(|s| !s.is_empty()) {
        None => usize::MAX,
        Some(s) => s
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Config(format!("EPD_LAB_THREADS = `{s}` is not a positive integer")))?,
    };
    Ok(base.min(cap).max(1))
}

pub fn dispatch(cmd: Command, ctx: &mut Ctx) -> CliResult<i32> {
    match cmd {
        Command::Exponents { n, mu, alpha, ell, nu } => exponents(ctx, n, mu, alpha, ell, nu),
        Command::Rates {
            n,
            mu,
            alpha,
            kind,
            r1,
            r2,
            q,
        } => rates(ctx, n, &mu, alpha, kind, &r1, &r2, &q),
        Command::KernelEval { mu, s, t, xi_grid } => kernel_eval(ctx, mu, s, t, &xi_grid),
        Command::BesselEval { nu, z_grid } => bessel_eval(ctx, nu, &z_grid),
        Command::Solve { config, set } => solve_cmd(ctx, &config, &set),
        Command::Tricomi { config, set } => tricomi_cmd(ctx, &config, &set),
        Command::Fit {
            input,
            channel,
            window,
            log_power,
            mu,
            n,
            t0,
            tol,
        } => fit_cmd(ctx, &input, &channel, window.as_deref(), log_power, mu, n, t0, tol),
        Command::Verify { matrix } => verify(ctx, matrix.as_deref()),
        Command::Sweep {
            config,
            param,
            values,
            set,
        } => sweep(ctx, &config, &param, &values, &set),
    }
}

// ---------------------------------------------------------------- exponents

#[derive(Serialize)]
struct TricomiReport {
    ell: f64,
    nu: f64,
    epd: epd_core::exponents::ExponentReport,
}

fn exponents(ctx: &mut Ctx, n: u32, mu: Option<f64>, alpha: f64, ell: Option<f64>, nu: f64) -> CliResult<i32> {
    let format = ctx.format.unwrap_or(Format::Json);
    match (ell, mu) {
        (Some(ell), _) => {
            let mut params = tricomi_map(ell, nu)?;
            if n != 1 {
                return Err(CliError::Unsupported(format!(
                    "the Tricomi reduction is only available for n = 1, got n = {n}"
                )));
            }
            params.n = n;
            let epd = p_crit(&params)?;
            emit_one(ctx.out, &TricomiReport { ell, nu, epd }, format)?;
        }
        (None, Some(mu)) => {
            let params = DissipationParams::new(n, mu).with_alpha(alpha);
            emit_one(ctx.out, &p_crit(&params)?, format)?;
        }
        (None, None) => return Err(CliError::Config("give --mu, or --ell for a Tricomi problem".into())),
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- rates

#[derive(Serialize)]
struct RateRow {
    n: u32,
    mu: f64,
    alpha: f64,
    r1: f64,
    r2: f64,
    q: f64,
    s_exp: f64,
    t_exp: f64,
    log_power: u32,
    delta_slack: bool,
    branch_ref: String,
}

fn rate_row(n: u32, mu: f64, alpha: f64, (r1, r2, q): (f64, f64, f64), r: &DecayRate) -> RateRow {
    RateRow {
        n,
        mu,
        alpha,
        r1,
        r2,
        q,
        // + 0.0 turns −0 into 0
        s_exp: r.s_exp + 0.0,
        t_exp: r.t_exp + 0.0,
        log_power: r.log_power,
        delta_slack: r.delta_slack,
        branch_ref: r.branch_ref.clone(),
    }
}

#[allow(clippy::too_many_arguments)]
fn rates(ctx: &mut Ctx, n: u32, mus: &[f64], alpha: f64, kind: RateKind, r1s: &[f64], r2s: &[f64], qs: &[f64]) -> CliResult<i32> {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &mu in mus {
        match kind {
            RateKind::Energy => {
                let (l1, l2) = energy_rate(n, mu)?;
                rows.push(rate_row(n, mu, alpha, (1.0, 2.0, 2.0), &l1));
                rows.push(rate_row(n, mu, alpha, (2.0, 2.0, 2.0), &l2));
            }
            RateKind::Linear | RateKind::Singular => {
                for &r1 in r1s {
                    let r2_list: Vec<f64> = if r2s.is_empty() { vec![r1] } else { r2s.to_vec() };
                    for &r2 in &r2_list {
                        for &q in qs {
                            let rate = if kind == RateKind::Linear {
                                linear_rate(n, mu, r1, r2, q)
                            } else {
                                singular_rate(n, mu, r1, q)
                            };
                            match rate {
                                Ok(r) => rows.push(rate_row(n, mu, alpha, (r1, r2, q), &r)),
                                Err(e) => failures.push(format!("mu = {mu}, r1 = {r1}, r2 = {r2}, q = {q}: {e}")),
                            }
                        }
                        if kind == RateKind::Singular {
                            break;
                        }
                    }
                }
            }
        }
    }
    if rows.is_empty() {
        return Err(CliError::Unsupported(failures.join("; ")));
    }
    for f in failures {
        ctx.warn(format!("skipped {f}"));
    }
    emit(ctx.out, &rows, ctx.format.unwrap_or(Format::Csv))?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- kernel and Bessel tables

/// `lo:hi:count`, evenly spaced and inclusive.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Config(format!("grid `{spec}` is not of the form lo:hi:count"));
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
    let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
    if count == 0 || !lo.is_finite() || !hi.is_finite() || (count > 1 && hi < lo) {
        return Err(bad());
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (count - 1) as f64;
    Ok((0..count).map(|i| if i + 1 == count { hi } else { lo + step * i as f64 }).collect())
}

#[derive(Serialize)]
struct KernelRow {
    xi: f64,
    k: f64,
    k_t: f64,
    residual: f64,
}

fn kernel_eval(ctx: &mut Ctx, mu: f64, s: f64, t: f64, grid: &str) -> CliResult<i32> {
    let mut rows = Vec::new();
    for xi in parse_grid(grid)? {
        let q = KernelQuery::new(mu, s, t, xi);
        let v = k_hat(q)?;
        // the residual stencil needs four steps between s and t
        let residual = if t > s {
            kernel_ode_residual(q, (1e-3 * t).min((t - s) / 4.0))?
        } else {
            f64::NAN
        };
        rows.push(KernelRow {
            xi,
            k: v.k,
            k_t: v.k_t,
            residual,
        });
    }
    emit(ctx.out, &rows, ctx.format.unwrap_or(Format::Csv))?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct BesselRow {
    z: f64,
    j: f64,
    jprime: f64,
    #[serde(rename = "bigY")]
    big_y: f64,
}

/// Watson's 𝐘_ν; at non-integer order π(J_ν cos νπ − J_{−ν})/sin νπ.
fn big_y(nu: f64, z: f64) -> CliResult<f64> {
    let order = BesselOrder::new(nu)?;
    if order.is_integer() {
        let m = order.nearest_integer();
        let sign = if m < 0 && m % 2 != 0 { -1.0 } else { 1.0 };
        return Ok(sign * bessel_big_y(m.unsigned_abs() as u32, z)?);
    }
    Ok(std::f64::consts::PI * (bessel_j(nu, z)? * cos_pi(nu) - bessel_j(-nu, z)?) / sin_pi(nu))
}

fn bessel_eval(ctx: &mut Ctx, nu: f64, grid: &str) -> CliResult<i32> {
    let mut rows = Vec::new();
    for z in parse_grid(grid)? {
        rows.push(BesselRow {
            z,
            j: bessel_j(nu, z)?,
            jprime: bessel_j_prime(nu, z)?,
            big_y: if z > 0.0 { big_y(nu, z)? } else { f64::NAN },
        });
    }
    emit(ctx.out, &rows, ctx.format.unwrap_or(Format::Csv))?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- run files and manifests

/// Energy fit recorded in a manifest.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FitSummary {
    pub channel: String,
    pub window: (f64, f64),
    pub slope: f64,
    pub stderr: f64,
    /// Slope predicted for the linear problem, when one applies.
    pub expected: Option<f64>,
    pub pass: Option<bool>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// The pipeline has no random input; identical configs give identical output.
    pub deterministic: bool,
    pub config: RunConfig,
    pub tricomi: Option<TricomiSpec>,
    pub status: RunStatus,
    pub steps: usize,
    pub rejected_steps: usize,
    pub warnings: Vec<String>,
    pub duhamel: Option<DuhamelReport>,
    pub fit: Option<FitSummary>,
    pub mismatch_final: Option<f64>,
    pub mismatch_max: Option<f64>,
    pub files: Vec<String>,
}

impl Manifest {
    fn new(command: &str, config: &RunConfig, out: &RunOutcome) -> Self {
        Manifest {
            tool: TOOL.into(),
            version: VERSION.into(),
            command: command.into(),
            deterministic: true,
            config: config.clone(),
            tricomi: None,
            status: out.status,
            steps: out.steps,
            rejected_steps: out.rejected_steps,
            warnings: out.warnings.clone(),
            duhamel: out.duhamel,
            fit: None,
            mismatch_final: None,
            mismatch_max: None,
            files: Vec::new(),
        }
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// A run file or an earlier manifest (recognised by its `.json` extension).
pub fn load_config(path: &Path, set: &[String], want_tricomi: bool) -> CliResult<RunFile> {
    let text = read_text(path)?;
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        if !set.is_empty() {
            return Err(CliError::Config("--set does not apply to a manifest; edit a run file instead".into()));
        }
        let m: Manifest = serde_json::from_str(&text)
            .map_err(|e| CliError::Config(format!("{}: not a run manifest: {e}", path.display())))?;
        if want_tricomi != m.tricomi.is_some() {
            return Err(CliError::Config(format!(
                "{} was written by `{}` and cannot be replayed here",
                path.display(),
                m.command
            )));
        }
        if !want_tricomi {
            m.config.validate()?;
        }
        return Ok(RunFile {
            config: m.config,
            tricomi: m.tricomi,
        });
    }
    let base = path.parent().unwrap_or(Path::new("."));
    load_run_text(&text, base, &parse_overrides(set)?, want_tricomi)
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_series(dir: &Path, name: &str, series: &NormSeries) -> CliResult<String> {
    let mut w = create(&dir.join(name))?;
    series.write_csv(&mut w)?;
    w.flush()?;
    Ok(name.to_string())
}

fn write_manifest(dir: &Path, m: &Manifest) -> CliResult<()> {
    let mut w = create(&dir.join("manifest.json"))?;
    serde_json::to_writer_pretty(&mut w, m)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn make_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

fn energy_fit(config: &RunConfig, series: &NormSeries) -> Option<FitSummary> {
    let window = config.fit_window();
    let linear = config.params.p.is_none();
    let predicted = if linear { predicted_rate(&config.params, Channel::Energy).ok() } else { None };
    match predicted {
        Some(pred) => {
            let k = expected_log_power(Channel::Energy, &pred);
            let fit = fit_decay(series, Channel::Energy, window, k).ok()?;
            let (pass, _, expected, detail) = rate_verdict(series, Channel::Energy, window, &pred, 0.15).ok()?;
            Some(FitSummary {
                channel: "E".into(),
                window,
                slope: fit.slope,
                stderr: fit.stderr,
                expected: Some(expected),
                pass: Some(pass),
                detail,
            })
        }
        None => {
            let fit = fit_decay(series, Channel::Energy, window, 0).ok()?;
            Some(FitSummary {
                channel: "E".into(),
                window,
                slope: fit.slope,
                stderr: fit.stderr,
                expected: None,
                pass: None,
                detail: "no linear prediction applies to a semilinear run".into(),
            })
        }
    }
}

fn status_code(s: &RunStatus) -> i32 {
    match s {
        RunStatus::Completed => EXIT_OK,
        RunStatus::BlowupDetected { .. } | RunStatus::StepUnderflow { .. } => EXIT_BLOWUP,
    }
}

/// Runs `config` and writes its artifacts into `dir`.
pub fn run_to_dir(config: &RunConfig, dir: &Path) -> CliResult<Manifest> {
    let out = solve(config)?;
    make_dir(dir)?;
    let mut m = Manifest::new("solve", config, &out);
    m.files.push(write_series(dir, "norms.csv", &out.norm_series)?);
    if !out.slices.is_empty() {
        make_dir(&dir.join("slices"))?;
        for (i, s) in out.slices.iter().enumerate() {
            let name = format!("slices/slice_{i:04}.bin");
            let mut w = create(&dir.join(&name))?;
            write_slice(&mut w, s)?;
            w.flush()?;
            m.files.push(name);
        }
    }
    if out.status == RunStatus::Completed {
        m.fit = energy_fit(config, &out.norm_series);
    }
    m.files.push("manifest.json".into());
    write_manifest(dir, &m)?;
    Ok(m)
}

#[derive(Serialize)]
struct RunSummary<'a> {
    status: String,
    output_dir: String,
    steps: usize,
    rejected_steps: usize,
    warnings: &'a [String],
    energy_slope: Option<f64>,
    expected_slope: Option<f64>,
    duhamel_residual: Option<f64>,
}

fn status_label(s: &RunStatus) -> String {
    match s {
        RunStatus::Completed => "completed".into(),
        RunStatus::BlowupDetected { time } => format!("blowup_detected at t = {time}"),
        RunStatus::StepUnderflow { time } => format!("step_underflow at t = {time}"),
    }
}

fn solve_cmd(ctx: &mut Ctx, path: &Path, set: &[String]) -> CliResult<i32> {
    let file = load_config(path, set, false)?;
    if let Some(w) = file.config.cone_warning() {
        ctx.warn(w);
    }
    let m = run_to_dir(&file.config, &ctx.output_dir)?;
    let summary = RunSummary {
        status: status_label(&m.status),
        output_dir: ctx.output_dir.display().to_string(),
        steps: m.steps,
        rejected_steps: m.rejected_steps,
        warnings: &m.warnings,
        energy_slope: m.fit.as_ref().map(|f| f.slope),
        expected_slope: m.fit.as_ref().and_then(|f| f.expected),
        duhamel_residual: m.duhamel.map(|d| d.residual),
    };
    emit_one(ctx.out, &summary, ctx.format.unwrap_or(Format::Table))?;
    Ok(status_code(&m.status))
}

#[derive(Serialize)]
struct MismatchRow {
    t: f64,
    mismatch: f64,
}

fn tricomi_cmd(ctx: &mut Ctx, path: &Path, set: &[String]) -> CliResult<i32> {
    let file = load_config(path, set, true)?;
    let spec = file.tricomi.expect("tricomi section was required");
    let cfg = &file.config;
    let out = solve_tricomi(spec.ell, spec.nu, cfg)?;
    let dir = ctx.output_dir.clone();
    make_dir(&dir)?;
    let mut m = Manifest::new("tricomi", cfg, &out.direct);
    m.tricomi = Some(spec);
    m.mismatch_final = Some(out.mismatch_final);
    m.mismatch_max = Some(out.mismatch_max);
    for w in &out.mapped.warnings {
        if !m.warnings.contains(w) {
            m.warnings.push(w.clone());
        }
    }
    m.files.push(write_series(&dir, "direct.csv", &out.direct.norm_series)?);
    m.files.push(write_series(&dir, "mapped.csv", &out.mapped.norm_series)?);
    let rows: Vec<MismatchRow> = out.mismatch.iter().map(|&(t, mismatch)| MismatchRow { t, mismatch }).collect();
    fs::write(dir.join("mismatch.csv"), to_csv(&rows)?)?;
    m.files.push("mismatch.csv".into());
    if out.direct.status == RunStatus::Completed {
        m.fit = fit_decay(&out.direct.norm_series, Channel::Energy, cfg.fit_window(), 0)
            .ok()
            .map(|f| FitSummary {
                channel: "E".into(),
                window: f.window,
                slope: f.slope,
                stderr: f.stderr,
                expected: None,
                pass: None,
                detail: format!("energy of the direct path; growth is bounded by t^{}", spec.ell),
            });
    }
    m.files.push("manifest.json".into());
    write_manifest(&dir, &m)?;

    #[derive(Serialize)]
    struct Summary {
        status: String,
        epd_mu: f64,
        epd_alpha: f64,
        mismatch_final: f64,
        mismatch_max: f64,
        energy_slope: Option<f64>,
    }
    let s = Summary {
        status: status_label(&out.direct.status),
        epd_mu: out.epd_params.mu,
        epd_alpha: out.epd_params.alpha,
        mismatch_final: out.mismatch_final,
        mismatch_max: out.mismatch_max,
        energy_slope: m.fit.as_ref().map(|f| f.slope),
    };
    emit_one(ctx.out, &s, ctx.format.unwrap_or(Format::Table))?;
    Ok(status_code(&out.direct.status))
}

// ---------------------------------------------------------------- fit

#[derive(Serialize)]
struct FitReport {
    input: String,
    channel: String,
    fit: FitResult,
    verdict: Option<epd_core::analysis::Verdict>,
}

fn gnuplot_script(data: &Path, column: usize, channel: &str, fit: &FitResult) -> String {
    let k = fit.log_power;
    let model = if k == 0 {
        format!("exp({:e}) * x**({:e})", fit.intercept, fit.slope)
    } else {
        format!("exp({:e}) * x**({:e}) * (1 + log(x))**{k}", fit.intercept, fit.slope)
    };
    format!(
        "# {channel} against t with the fitted power law\n\
         set datafile separator ','\n\
         set logscale xy\n\
         set key top right\n\
         set xlabel 't'\n\
         set ylabel '{channel}'\n\
         set arrow from {lo:e}, graph 0 to {lo:e}, graph 1 nohead dt 2\n\
         set arrow from {hi:e}, graph 0 to {hi:e}, graph 1 nohead dt 2\n\
         f(x) = {model}\n\
         plot '{data}' skip 1 using 1:{column} with points title '{channel}', \\\n\
         \x20    f(x) with lines title sprintf('slope %.4f', {slope:e})\n",
        lo = fit.window.0,
        hi = fit.window.1,
        data = data.display(),
        slope = fit.slope,
    )
}

#[allow(clippy::too_many_arguments)]
fn fit_cmd(
    ctx: &mut Ctx,
    input: &Path,
    channel: &str,
    window: Option<&str>,
    log_power: Option<u32>,
    mu: Option<f64>,
    n: u32,
    t0: f64,
    tol: f64,
) -> CliResult<i32> {
    let series = NormSeries::read_csv(File::open(input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?)?;
    let channel = Channel::parse(channel)?;
    let window = match window {
        Some(w) => {
            let (a, b) = w
                .split_once(':')
                .or_else(|| w.split_once(','))
                .ok_or_else(|| CliError::Config(format!("window `{w}` is not of the form lo:hi")))?;
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Config(format!("window `{w}` is not of the form lo:hi")))
            };
            (parse(a)?, parse(b)?)
        }
        None => {
            let last = *series.times.last().ok_or_else(|| CliError::Config("empty series".into()))?;
            (last / 10.0, last)
        }
    };
    let predicted = match mu {
        Some(mu) => Some(predicted_rate(&DissipationParams::new(n, mu).with_t0(t0), channel)?),
        None => None,
    };
    let k = log_power.unwrap_or_else(|| predicted.as_ref().map(|p| expected_log_power(channel, p)).unwrap_or(0));
    let fit = fit_decay(&series, channel, window, k)?;
    let verdict = predicted
        .as_ref()
        .map(|p| epd_core::analysis::compare_rates(&fit, channel, p, tol));

    make_dir(&ctx.output_dir)?;
    let column = 1 + match channel {
        Channel::Energy => 1,
        Channel::Lq(q) => {
            2 + series
                .q_list
                .iter()
                .position(|&x| x == q)
                .ok_or_else(|| CliError::Config(format!("no column {} in {}", channel.label(), input.display())))?
        }
    };
    let data = fs::canonicalize(input).unwrap_or_else(|_| input.to_path_buf());
    fs::write(ctx.output_dir.join("fit.gp"), gnuplot_script(&data, column, &channel.label(), &fit))?;
    let report = FitReport {
        input: input.display().to_string(),
        channel: channel.label(),
        fit,
        verdict,
    };
    fs::write(ctx.output_dir.join("fit.json"), serde_json::to_string_pretty(&report)? + "\n")?;
    emit_one(ctx.out, &report, ctx.format.unwrap_or(Format::Json))?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- verify and sweep

fn verify(ctx: &mut Ctx, matrix: Option<&Path>) -> CliResult<i32> {
    let entries = match matrix {
        Some(p) => parse_matrix(&read_text(p)?, p.parent().unwrap_or(Path::new(".")))?,
        None => parse_matrix(ACCEPTANCE_MATRIX, Path::new("."))?,
    };
    make_dir(&ctx.output_dir)?;
    if entries.is_empty() {
        ctx.warn("the matrix has no entries; nothing to verify");
    }
    let rows = run_matrix(&entries, ctx.jobs)?;
    fs::write(ctx.output_dir.join("verify.json"), serde_json::to_string_pretty(&rows)? + "\n")?;
    fs::write(ctx.output_dir.join("verify.csv"), to_csv(&rows)?)?;
    match ctx.format.unwrap_or(Format::Table) {
        Format::Table => ctx.out.write_all(verify_table(&rows).as_bytes())?,
        f => emit(ctx.out, &rows, f)?,
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    if failed > 0 {
        let _ = writeln!(ctx.err, "{failed} of {} entries failed", rows.len());
        Ok(EXIT_FAILURE)
    } else {
        Ok(EXIT_OK)
    }
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "-".into()
    } else if x != 0.0 && (x.abs() < 1e-3 || x.abs() >= 1e4) {
        format!("{x:.3e}")
    } else {
        format!("{x:.4}")
    }
}

pub fn verify_table(rows: &[Row]) -> String {
    let header: Vec<String> = ["entry", "kind", "result", "measured", "expected", "tol", "time [s]", "detail"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let body: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.id.clone(),
                r.kind.clone(),
                if r.pass { "PASS" } else { "FAIL" }.into(),
                num(r.measured),
                num(r.expected),
                num(r.tolerance),
                format!("{:.1}", r.seconds),
                r.detail.clone(),
            ]
        })
        .collect();
    table(&header, &body)
}

#[derive(Serialize)]
struct SweepRow {
    value: String,
    status: String,
    blowup_time: Option<f64>,
    steps: Option<usize>,
    energy_final: Option<f64>,
    energy_slope: Option<f64>,
    output: String,
    error: Option<String>,
}

fn sweep(ctx: &mut Ctx, path: &Path, param: &str, values: &[String], set: &[String]) -> CliResult<i32> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
        return Err(CliError::Config("sweep takes a run file, not a manifest".into()));
    }
    if values.is_empty() {
        return Err(CliError::Config("--values is empty".into()));
    }
    // every configuration is checked before anything runs
    let mut configs = Vec::new();
    for v in values {
        let mut s = set.to_vec();
        s.push(format!("{param}={v}"));
        let cfg = load_config(path, &s, false)
            .map_err(|e| match e {
                CliError::Config(m) => CliError::Config(format!("{param} = {v}: {m}")),
                other => other,
            })?
            .config;
        let dir_name: String = format!("{param}_{v}")
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' })
            .collect();
        configs.push((v.clone(), cfg, ctx.output_dir.join(dir_name)));
    }
    make_dir(&ctx.output_dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(ctx.jobs)
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    let rows: Vec<SweepRow> = pool.install(|| {
        use rayon::prelude::*;
        configs
            .par_iter()
            .map(|(v, cfg, dir)| {
                let output = dir.display().to_string();
                match run_to_dir(cfg, dir) {
                    Ok(m) => {
                        let series = read_series(&dir.join("norms.csv")).ok();
                        SweepRow {
                            value: v.clone(),
                            status: match m.status {
                                RunStatus::Completed => "completed",
                                RunStatus::BlowupDetected { .. } => "blowup_detected",
                                RunStatus::StepUnderflow { .. } => "step_underflow",
                            }
                            .into(),
                            blowup_time: match m.status {
                                RunStatus::BlowupDetected { time } | RunStatus::StepUnderflow { time } => Some(time),
                                RunStatus::Completed => None,
                            },
                            steps: Some(m.steps),
                            energy_final: series.and_then(|s| s.energy.last().copied()),
                            energy_slope: m.fit.map(|f| f.slope),
                            output,
                            error: None,
                        }
                    }
                    Err(e) => SweepRow {
                        value: v.clone(),
                        status: "error".into(),
                        blowup_time: None,
                        steps: None,
                        energy_final: None,
                        energy_slope: None,
                        output,
                        error: Some(e.to_string()),
                    },
                }
            })
            .collect()
    });
    fs::write(ctx.output_dir.join("sweep.csv"), to_csv(&rows)?)?;
    emit(ctx.out, &rows, ctx.format.unwrap_or(Format::Table))?;
    Ok(if rows.iter().any(|r| r.error.is_some()) { EXIT_FAILURE } else { EXIT_OK })
}

fn read_series(path: &Path) -> CliResult<NormSeries> {
    Ok(NormSeries::read_csv(File::open(path)?)?)
}
