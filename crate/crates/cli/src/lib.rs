//! Command-line front end of the EPD laboratory: run files, manifests,
//! verification matrices and the `epd-lab` subcommands.

// negated comparisons are how NaN gets rejected
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod commands;
pub mod error;
pub mod kv;
pub mod matrix;
pub mod output;
pub mod runcfg;

use clap::Parser;
use std::ffi::OsString;
use std::io::Write;

/// Parses `args` (program name first) and runs the command. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match cli::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { error::EXIT_FAILURE } else { error::EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let env = std::env::var("EPD_LAB_THREADS").ok();
    let jobs = match commands::effective_jobs(cli.jobs, env.as_deref()) {
        Ok(j) => j,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let mut ctx = commands::Ctx {
        output_dir: cli.output_dir,
        jobs,
        format: cli.format,
        out,
        err,
    };
    match commands::dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            e.exit_code()
        }
    }
}
