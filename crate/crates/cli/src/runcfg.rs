//! RunConfig from the key-value grammar.
//!
//! Run files use sections `[params]`, `[data]`, `[grid]`, `[run]` and, for the
//! `tricomi` command, `[tricomi]`. Matrix entries use the same key names
//! without sections.

use crate::error::{CliError, CliResult};
use crate::kv::{self, Table};
use epd_core::exponents::{DataClass, DissipationParams};
use serde::{Deserialize, Serialize};
use epd_core::solver::{DataProfile, DataSlot, GridSpec, Integrator, RunConfig, Tolerances};
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Sectioned,
    Flat,
}

impl Layout {
    fn key(self, section: &str, name: &str) -> String {
        match self {
            Layout::Sectioned => format!("{section}.{name}"),
            Layout::Flat => name.to_string(),
        }
    }
}

/// Tricomi parameters: w_tt − t^(2ℓ)w_xx + (ν/t)w_t = |w|^p.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TricomiSpec {
    pub ell: f64,
    pub nu: f64,
}

fn parse_enum<T>(t: &Table, key: &str, options: &[(&str, T)]) -> CliResult<Option<T>>
where
    T: Copy,
{
    match t.raw(key) {
        None => Ok(None),
        Some((v, line)) => options
            .iter()
            .find(|(name, _)| name.eq_ignore_ascii_case(v))
            .map(|(_, x)| Some(*x))
            .ok_or_else(|| {
                let names: Vec<&str> = options.iter().map(|o| o.0).collect();
                let msg = format!("`{key}`: unknown value `{v}`, expected one of {}", names.join(", "));
                if line == 0 {
                    CliError::Config(msg)
                } else {
                    CliError::at_line(line, msg)
                }
            }),
    }
}

pub fn build_run_config(t: &Table, layout: Layout, base_dir: &Path) -> CliResult<RunConfig> {
    let k = |s: &str, n: &str| layout.key(s, n);

    let mut params = DissipationParams::new(t.get_or(&k("params", "n"), 1u32)?, t.require(&k("params", "mu"))?)
        .with_alpha(t.get_or(&k("params", "alpha"), 0.0)?)
        .with_t0(t.get_or(&k("params", "t0"), 1.0)?);
    if let Some(p) = t.get::<f64>(&k("params", "p"))? {
        params = params.with_p(p);
    }
    if let Some(dc) = parse_enum(
        t,
        &k("params", "data_class"),
        &[("l1l2", DataClass::L1L2), ("l2only", DataClass::L2Only)],
    )? {
        params.data_class = dc;
    }

    let mut cfg = RunConfig::new(params);

    let profile = t.string(&k("data", "profile")).unwrap_or_else(|| "gaussian".into());
    let amplitude = t.get_or(&k("data", "amplitude"), 1e-2)?;
    cfg.data_profile = match profile.to_ascii_lowercase().as_str() {
        "gaussian" => DataProfile::Gaussian {
            amplitude,
            width: t.get_or(&k("data", "width"), 1.0)?,
        },
        "plateau" => DataProfile::Plateau {
            amplitude,
            radius: t.get_or(&k("data", "radius"), 1.0)?,
            edge: t.get_or(&k("data", "edge"), 1.0)?,
        },
        "custom" => {
            let path: PathBuf = t
                .string(&k("data", "path"))
                .ok_or_else(|| CliError::Config(format!("missing required field `{}`", k("data", "path"))))?
                .into();
            DataProfile::Custom {
                path: if path.is_relative() { base_dir.join(path) } else { path },
            }
        }
        other => {
            let line = t.line_of(&k("data", "profile")).unwrap_or(0);
            return Err(CliError::at_line(
                line,
                format!("unknown profile `{other}`, expected gaussian, plateau or custom"),
            ));
        }
    };
    if let Some(slot) = parse_enum(
        t,
        &k("data", "slot"),
        &[
            ("initial_displacement", DataSlot::InitialDisplacement),
            ("initial_velocity", DataSlot::InitialVelocity),
        ],
    )? {
        cfg.data_slot = slot;
    }

    let mut grid = GridSpec::new(
        t.get_or(&k("grid", "n_modes"), cfg.grid.n_modes)?,
        t.get_or(&k("grid", "half_length"), cfg.grid.half_length)?,
    );
    grid.dealias_fraction = t.get_or(&k("grid", "dealias_fraction"), grid.dealias_fraction)?;
    cfg.grid = grid;

    cfg.t_final = t.get_or(&k("run", "t_final"), cfg.t_final)?;
    cfg.singular_start = t.get_or(&k("run", "singular_start"), cfg.singular_start)?;
    if let Some(i) = parse_enum(
        t,
        &k("run", "integrator"),
        &[
            ("exact_linear", Integrator::ExactLinear),
            ("method_of_lines", Integrator::MethodOfLines),
            ("duhamel_check", Integrator::DuhamelCheck),
        ],
    )? {
        cfg.integrator = i;
    }
    cfg.tolerances = Tolerances {
        rel: t.get_or(&k("run", "rel_tol"), cfg.tolerances.rel)?,
        abs: t.get_or(&k("run", "abs_tol"), cfg.tolerances.abs)?,
    };
    cfg.blowup_threshold = t.get_or(&k("run", "blowup_threshold"), cfg.blowup_threshold)?;
    if let Some(q) = t.list(&k("run", "q_list"))? {
        cfg.q_list = q;
    }
    cfg.store_slices = t.bool_or(&k("run", "store_slices"), false)?;
    cfg.fit_window = t.pair(&k("run", "fit_window"))?;
    let times_key = k("run", "output_times");
    let count_key = k("run", "output_count");
    if t.contains(&times_key) && t.contains(&count_key) {
        return Err(CliError::Config(format!("give either `{times_key}` or `{count_key}`, not both")));
    }
    cfg.output_times = match t.list(&times_key)? {
        Some(times) => times,
        None => cfg.default_output_times(t.get_or(&count_key, 96usize)?),
    };
    Ok(cfg)
}

pub fn build_tricomi(t: &Table, layout: Layout) -> CliResult<TricomiSpec> {
    Ok(TricomiSpec {
        ell: t.require(&layout.key("tricomi", "ell"))?,
        nu: t.get_or(&layout.key("tricomi", "nu"), 0.0)?,
    })
}

/// A run file, with `section.key=value` overrides applied on top.
#[derive(Clone, Debug)]
pub struct RunFile {
    pub config: RunConfig,
    pub tricomi: Option<TricomiSpec>,
}

pub fn parse_overrides(overrides: &[String]) -> CliResult<Vec<(String, String)>> {
    overrides
        .iter()
        .map(|o| {
            o.split_once('=')
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .ok_or_else(|| CliError::Config(format!("override `{o}` is not of the form key=value")))
        })
        .collect()
}

pub fn load_run_text(text: &str, base_dir: &Path, overrides: &[(String, String)], want_tricomi: bool) -> CliResult<RunFile> {
    let doc = kv::parse(text)?;
    for (name, line) in &doc.sections {
        if !["params", "data", "grid", "run", "tricomi"].contains(&name.as_str()) {
            return Err(CliError::at_line(*line, format!("unknown section [{name}]")));
        }
    }
    let mut t = Table::from_doc(&doc);
    for (key, value) in overrides {
        t.set(key, value);
    }
    if want_tricomi && !t.contains("params.mu") {
        // the Tricomi problem has no EPD damping of its own
        t.set("params.mu", "0");
    }
    let config = build_run_config(&t, Layout::Sectioned, base_dir)?;
    let tricomi = if want_tricomi { Some(build_tricomi(&t, Layout::Sectioned)?) } else { None };
    t.finish()?;
    if !want_tricomi {
        config.validate()?;
    }
    Ok(RunFile { config, tricomi })
}
