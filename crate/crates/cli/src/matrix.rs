//! Verification matrices: one `[name]` section per entry.
//!
//! Every entry has a `kind` and the run keys of a run file without section
//! prefixes (`mu`, `p`, `n_modes`, `t_final`, ...). Kinds:
//!
//! - `rate`: fit `channel` over `window` and compare with the predicted rate,
//!   or with `expect` when given; tolerance `tol`.
//! - `bounded`: t^γ_q‖u‖_q over `window` varies by less than `max_ratio`.
//! - `blowup`: BlowupDetected before `before` (default t_final).
//! - `duhamel`: Duhamel reconstruction residual below `max_residual`.
//! - `tricomi`: the two Tricomi paths differ by less than `max_mismatch`;
//!   with `expect` the direct energy slope over `window` is checked too.

use crate::error::{CliError, CliResult};
use crate::kv::{self, Table};
use crate::runcfg::{build_run_config, Layout};
use epd_core::analysis::{compare_rates, expected_log_power, fit_decay, Channel, NormSeries};
use epd_core::exponents::{energy_rate, linear_rate, singular_rate, solution_weights, DecayRate, DissipationParams, DEFAULT_DELTA};
use epd_core::solver::{duhamel_check, solve, solve_tricomi, Integrator, RunConfig, RunStatus};
use serde::{Deserialize, Serialize};
use std::path::Path;
use std::time::Instant;

#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    Rate {
        channel: Channel,
        expect: Option<f64>,
        tol: f64,
    },
    Bounded {
        q: f64,
        max_ratio: f64,
    },
    Blowup {
        before: f64,
    },
    Duhamel {
        max_residual: f64,
    },
    Tricomi {
        ell: f64,
        nu: f64,
        max_mismatch: f64,
        energy: Option<(f64, f64)>,
    },
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::Rate { .. } => "rate",
            Check::Bounded { .. } => "bounded",
            Check::Blowup { .. } => "blowup",
            Check::Duhamel { .. } => "duhamel",
            Check::Tricomi { .. } => "tricomi",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixEntry {
    pub id: String,
    pub config: RunConfig,
    pub window: (f64, f64),
    pub check: Check,
}

/// Result row of one entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub id: String,
    pub kind: String,
    pub pass: bool,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub detail: String,
    pub seconds: f64,
}

pub fn parse_matrix(text: &str, base_dir: &Path) -> CliResult<Vec<MatrixEntry>> {
    let doc = kv::parse(text)?;
    if let Some(e) = doc.entries.iter().find(|e| e.section.is_none()) {
        return Err(CliError::at_line(e.line, "every key of a matrix belongs to an `[entry]` section"));
    }
    doc.sections
        .iter()
        .map(|(id, line)| {
            let mut t = Table::from_section(&doc, id);
            if t.raw("kind").map(|k| k.0 == "tricomi").unwrap_or(false) && !t.contains("mu") {
                // Tricomi entries have no EPD damping of their own
                t.set("mu", "0");
            }
            parse_entry(id, &t, base_dir).map_err(|e| match e {
                CliError::Config(m) if !m.starts_with("line") => {
                    CliError::Config(format!("entry [{id}] (line {line}): {m}"))
                }
                other => other,
            })
        })
        .collect()
}

fn parse_entry(id: &str, t: &Table, base_dir: &Path) -> CliResult<MatrixEntry> {
    let kind: String = t.require("kind")?;
    let tricomi = kind == "tricomi";
    let mut config = build_run_config(t, Layout::Flat, base_dir)?;
    let window = t.pair("window")?.unwrap_or_else(|| config.fit_window());
    let check = match kind.as_str() {
        "rate" => {
            let label: String = t.require("channel")?;
            Check::Rate {
                channel: Channel::parse(&label)?,
                expect: t.get("expect")?,
                tol: t.require("tol")?,
            }
        }
        "bounded" => Check::Bounded {
            q: t.get_or("q", 3.0)?,
            max_ratio: t.require("max_ratio")?,
        },
        "blowup" => Check::Blowup {
            before: t.get_or("before", config.t_final)?,
        },
        "duhamel" => {
            config.integrator = Integrator::DuhamelCheck;
            Check::Duhamel {
                max_residual: t.require("max_residual")?,
            }
        }
        "tricomi" => {
            let expect: Option<f64> = t.get("expect")?;
            let tol: Option<f64> = t.get("tol")?;
            let energy = match (expect, tol) {
                (Some(e), Some(tol)) => Some((e, tol)),
                (None, None) => None,
                _ => return Err(CliError::Config("`expect` and `tol` go together".into())),
            };
            Check::Tricomi {
                ell: t.require("ell")?,
                nu: t.get_or("nu", 0.0)?,
                max_mismatch: t.get_or("max_mismatch", f64::INFINITY)?,
                energy,
            }
        }
        other => {
            return Err(CliError::Config(format!(
                "unknown kind `{other}`, expected rate, bounded, blowup, duhamel or tricomi"
            )))
        }
    };
    t.finish()?;
    if !tricomi {
        config.validate()?;
    }
    Ok(MatrixEntry {
        id: id.to_string(),
        config,
        window,
        check,
    })
}

/// Predicted rate of `channel` for the linear problem with these parameters.
pub fn predicted_rate(params: &DissipationParams, channel: Channel) -> CliResult<DecayRate> {
    let (n, mu) = (params.n, params.mu);
    Ok(match channel {
        Channel::Energy => energy_rate(n, mu)?.0,
        Channel::Lq(q) if params.is_singular() => singular_rate(n, mu, 1.0, q)?,
        Channel::Lq(q) => linear_rate(n, mu, 1.0, 1.0, q)?,
    })
}

fn row(entry: &MatrixEntry, pass: bool, measured: f64, expected: f64, tolerance: f64, detail: String) -> Row {
    Row {
        id: entry.id.clone(),
        kind: entry.check.kind().to_string(),
        pass,
        measured,
        expected,
        tolerance,
        detail,
        seconds: 0.0,
    }
}

fn failed(entry: &MatrixEntry, detail: String) -> Row {
    row(entry, false, f64::NAN, f64::NAN, f64::NAN, detail)
}

fn status_text(s: &RunStatus) -> String {
    match s {
        RunStatus::Completed => "completed".into(),
        RunStatus::BlowupDetected { time } => format!("blow-up at t = {time:.4}"),
        RunStatus::StepUnderflow { time } => format!("step underflow at t = {time:.4}"),
    }
}

/// Compares the fitted slope with the prediction. A predicted logarithm is
/// an upper-bound factor: the entry passes if either the plain fit or the
/// log-corrected fit lies within tolerance, and both are reported.
pub fn rate_verdict(series: &NormSeries, channel: Channel, window: (f64, f64), predicted: &DecayRate, tol: f64) -> CliResult<(bool, f64, f64, String)> {
    let plain = fit_decay(series, channel, window, 0)?;
    let v_plain = compare_rates(&plain, channel, predicted, tol);
    let k = expected_log_power(channel, predicted);
    if k == 0 {
        return Ok((v_plain.pass, plain.slope, v_plain.expected, v_plain.diagnostic));
    }
    let corrected = fit_decay(series, channel, window, k)?;
    let v_corr = compare_rates(&corrected, channel, predicted, tol);
    let (pass, used) = if v_corr.pass {
        (true, &v_corr)
    } else if v_plain.pass {
        (true, &v_plain)
    } else {
        (false, &v_corr)
    };
    let detail = format!(
        "{}; slope with (1+log t)^{k} removed {:.4}, without {:.4}{}",
        used.diagnostic,
        corrected.slope,
        plain.slope,
        if !v_corr.pass && v_plain.pass { " (logarithm of the bound not attained)" } else { "" }
    );
    Ok((pass, used.fitted, used.expected, detail))
}

fn evaluate(entry: &MatrixEntry) -> CliResult<Row> {
    let cfg = &entry.config;
    match &entry.check {
        Check::Rate { channel, expect, tol } => {
            let out = solve(cfg)?;
            if out.status != RunStatus::Completed {
                return Ok(failed(entry, status_text(&out.status)));
            }
            match expect {
                Some(e) => {
                    let fit = fit_decay(&out.norm_series, *channel, entry.window, 0)?;
                    let pass = (fit.slope - e).abs() <= *tol;
                    Ok(row(
                        entry,
                        pass,
                        fit.slope,
                        *e,
                        *tol,
                        format!("{} slope {:.4} vs given {e}", channel.label(), fit.slope),
                    ))
                }
                None => {
                    let predicted = predicted_rate(&cfg.params, *channel)?;
                    let (pass, measured, expected, detail) =
                        rate_verdict(&out.norm_series, *channel, entry.window, &predicted, *tol)?;
                    Ok(row(entry, pass, measured, expected, *tol, format!("{detail} [{}]", predicted.branch_ref)))
                }
            }
        }
        Check::Bounded { q, max_ratio } => {
            let out = solve(cfg)?;
            if out.status != RunStatus::Completed {
                return Ok(failed(entry, status_text(&out.status)));
            }
            let gamma = solution_weights(&cfg.params, *q)?.gamma_at(DEFAULT_DELTA);
            let norms = out.norm_series.channel(Channel::Lq(*q))?;
            let (lo, hi) = entry.window;
            let weighted: Vec<f64> = out
                .norm_series
                .times
                .iter()
                .zip(norms)
                .filter(|(t, _)| **t >= lo * (1.0 - 1e-12) && **t <= hi * (1.0 + 1e-12))
                .map(|(t, v)| t.powf(gamma) * v)
                .collect();
            if weighted.len() < 2 {
                return Ok(failed(entry, format!("fewer than two samples in [{lo}, {hi}]")));
            }
            let max = weighted.iter().cloned().fold(f64::MIN, f64::max);
            let min = weighted.iter().cloned().fold(f64::MAX, f64::min);
            let ratio = max / min;
            Ok(row(
                entry,
                ratio < *max_ratio,
                ratio,
                1.0,
                *max_ratio,
                format!("max/min of t^{gamma:.4}·L{q} over [{lo}, {hi}] = {ratio:.4}"),
            ))
        }
        Check::Blowup { before } => {
            let out = solve(cfg)?;
            match out.status {
                RunStatus::BlowupDetected { time } => Ok(row(
                    entry,
                    time < *before,
                    time,
                    *before,
                    0.0,
                    format!("blow-up at t = {time:.4} (required before {before})"),
                )),
                s => Ok(row(entry, false, f64::NAN, *before, 0.0, status_text(&s))),
            }
        }
        Check::Duhamel { max_residual } => {
            let out = solve(cfg)?;
            if out.status != RunStatus::Completed {
                return Ok(failed(entry, status_text(&out.status)));
            }
            let rep = match out.duhamel {
                Some(r) => r,
                None => duhamel_check(cfg, &out)?,
            };
            Ok(row(
                entry,
                rep.residual < *max_residual,
                rep.residual,
                0.0,
                *max_residual,
                format!("Duhamel residual {:.3e} over {} slices", rep.residual, rep.slices),
            ))
        }
        Check::Tricomi {
            ell,
            nu,
            max_mismatch,
            energy,
        } => {
            let out = solve_tricomi(*ell, *nu, cfg)?;
            if out.direct.status != RunStatus::Completed {
                return Ok(failed(entry, format!("direct path: {}", status_text(&out.direct.status))));
            }
            let mut pass = out.mismatch_final < *max_mismatch;
            let mut detail = format!("path mismatch at t = {}: {:.3e}", cfg.output_times.last().unwrap(), out.mismatch_final);
            let (mut measured, mut expected, mut tolerance) = (out.mismatch_final, 0.0, *max_mismatch);
            if let Some((e, tol)) = energy {
                let fit = fit_decay(&out.direct.norm_series, Channel::Energy, entry.window, 0)?;
                let ok = (fit.slope - e).abs() <= *tol;
                pass &= ok;
                detail.push_str(&format!("; energy slope {:.4} vs {e} ± {tol}", fit.slope));
                measured = fit.slope;
                expected = *e;
                tolerance = *tol;
            }
            Ok(row(entry, pass, measured, expected, tolerance, detail))
        }
    }
}

/// Runs one entry; errors become failed rows.
pub fn run_entry(entry: &MatrixEntry) -> Row {
    let start = Instant::now();
    let mut r = evaluate(entry).unwrap_or_else(|e| failed(entry, e.to_string()));
    r.seconds = start.elapsed().as_secs_f64();
    r
}

/// Runs all entries on a pool of `jobs` workers; rows come back in matrix order.
pub fn run_matrix(entries: &[MatrixEntry], jobs: usize) -> CliResult<Vec<Row>> {
    use rayon::prelude::*;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    Ok(pool.install(|| entries.par_iter().map(run_entry).collect()))
}

/// The matrix shipped with the crate.
pub const ACCEPTANCE_MATRIX: &str = include_str!("../../../acceptance.matrix");

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_matrix_parses() {
        let entries = parse_matrix(ACCEPTANCE_MATRIX, Path::new(".")).unwrap();
        assert!(entries.len() >= 9);
        let mut ids: Vec<&str> = entries.iter().map(|e| e.id.as_str()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), entries.len());
    }

    #[test]
    fn entry_errors_name_the_entry() {
        let e = parse_matrix("[a]\nkind = rate\nmu = 2\ntol = 0.1\n", Path::new(".")).unwrap_err().to_string();
        assert!(e.contains("[a]") && e.contains("channel"), "{e}");
        let e = parse_matrix("[a]\nkind = fly\nmu = 2\n", Path::new(".")).unwrap_err().to_string();
        assert!(e.contains("fly"), "{e}");
        let e = parse_matrix("kind = rate\n", Path::new(".")).unwrap_err().to_string();
        assert!(e.contains("line 1"), "{e}");
    }

    #[test]
    fn empty_matrix() {
        assert!(parse_matrix("# nothing\n", Path::new(".")).unwrap().is_empty());
    }
}
