//! Binary solution slices: n_modes (u64), half_length (f64), time (f64),
//! then n_modes samples of u (f64), all little-endian.

use super::grid::{FieldState, GridSpec};
use crate::error::{Error, Result};
use std::io::{Read, Write};

/// One slice as stored on disk: physical samples of u at a single time.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceRecord {
    pub grid: GridSpec,
    pub time: f64,
    pub u: Vec<f64>,
}

impl SliceRecord {
    pub fn from_state(state: &FieldState) -> Self {
        SliceRecord {
            grid: state.grid,
            time: state.time,
            u: state.u(),
        }
    }
}

pub fn write_slice<W: Write>(mut w: W, state: &FieldState) -> Result<()> {
    let u = state.u();
    let mut buf = Vec::with_capacity(24 + 8 * u.len());
    buf.extend_from_slice(&(state.grid.n_modes as u64).to_le_bytes());
    buf.extend_from_slice(&state.grid.half_length.to_le_bytes());
    buf.extend_from_slice(&state.time.to_le_bytes());
    for v in u {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_slice<R: Read>(mut r: R) -> Result<SliceRecord> {
    let mut word = [0u8; 8];
    let mut next = |r: &mut R| -> Result<[u8; 8]> {
        r.read_exact(&mut word)
            .map_err(|e| Error::Io(format!("truncated slice: {e}")))?;
        Ok(word)
    };
    let n = u64::from_le_bytes(next(&mut r)?);
    let half_length = f64::from_le_bytes(next(&mut r)?);
    let time = f64::from_le_bytes(next(&mut r)?);
    if n == 0 || n > 1 << 26 {
        return Err(Error::Io(format!("implausible slice length {n}")));
    }
    let mut u = Vec::with_capacity(n as usize);
    for _ in 0..n {
        u.push(f64::from_le_bytes(next(&mut r)?));
    }
    Ok(SliceRecord {
        grid: GridSpec::new(n as usize, half_length),
        time,
        u,
    })
}
