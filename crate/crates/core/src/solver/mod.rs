//! Spectral solvers for the one-dimensional problem on a periodic box.

mod config;
mod dopri;
mod duhamel;
mod grid;
mod io;
mod run;
mod tricomi;

pub use config::{log_spaced, q_list_serde, DataProfile, DataSlot, Integrator, RunConfig, Tolerances, DEFAULT_BLOWUP, SINGULAR_START};
pub use dopri::{Dopri5, SegmentEnd, StepControl};
pub use duhamel::{duhamel_check, duhamel_check_with, linear_part, simpson_weights, DuhamelReport, MIN_SLICES};
pub use grid::{fft, ifft, to_physical, to_spectral, FieldState, GridSpec};
pub use io::{read_slice, write_slice, SliceRecord};
pub use run::{solve, solve_linear_exact, solve_semilinear, RunOutcome, RunStatus};
pub use tricomi::{solve_tricomi, TricomiOutcome};
