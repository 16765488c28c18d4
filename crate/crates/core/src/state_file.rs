//! State file: a JSON header `{n1, n2, lo1, hi1, lo2, hi2}` followed by a CSV
//! body of `n1` rows with `n2` amplitude samples each.
//!
//! ```text
//! {"n1": 3, "n2": 2, "lo1": 0.0, "hi1": 1.0, "lo2": -1.0, "hi2": 1.0}
//! 0.1,0.2
//! 0.3,0.4
//! 0.5,0.6
//! ```
//!
//! Samples are raw values of `psi` at the cell midpoints. They need not be
//! normalized; [`read_state`] scales by `sqrt(cell area)` and renormalizes.

use crate::discretize::{DiscretizedState, GridSpec};
use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    n1: usize,
    n2: usize,
    lo1: f64,
    hi1: f64,
    lo2: f64,
    hi2: f64,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, column, message: message.into() }
}

/// Parses a state file into the grid and the raw sample matrix.
pub fn parse_samples(text: &str) -> Result<(GridSpec, DMatrix<f64>)> {
    let mut stream = serde_json::Deserializer::from_str(text).into_iter::<Header>();
    let header = match stream.next() {
        Some(Ok(h)) => h,
        Some(Err(e)) => return Err(parse_err(e.line(), e.column(), format!("bad header: {e}"))),
        None => return Err(parse_err(1, 1, "missing JSON header")),
    };
    let mut offset = stream.byte_offset();
    // The body starts on the line after the header.
    let rest_of_line = text[offset..].find('\n').map_or(text.len() - offset, |i| i + 1);
    if !text[offset..offset + rest_of_line].trim().is_empty() {
        let line = text[..offset].matches('\n').count() + 1;
        let tail = &text[offset..];
        let skip = tail.len() - tail.trim_start_matches([' ', '\t']).len();
        let column = offset + skip - text[..offset].rfind('\n').map_or(0, |i| i + 1) + 1;
        return Err(parse_err(line, column, "CSV body must start on the line after the header"));
    }
    offset += rest_of_line;
    let grid = GridSpec::new(header.n1, header.n2, header.lo1, header.hi1, header.lo2, header.hi2)
        .map_err(|e| parse_err(1, 1, e.to_string()))?;

    let header_lines = text[..offset].matches('\n').count();
    let body = &text[offset..];

    let mut reader =
        csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).flexible(true).from_reader(body.as_bytes());

    let mut values = Vec::with_capacity(grid.n1 * grid.n2);
    let mut rows = 0usize;
    let mut last_line = header_lines;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
            parse_err(header_lines + line, 1, e.to_string())
        })?;
        let line = header_lines + record.position().map(|p| p.line() as usize).unwrap_or(rows + 1);
        last_line = line;
        if record.iter().all(|f| f.is_empty()) {
            continue;
        }
        if rows == grid.n1 {
            return Err(parse_err(line, 1, format!("expected {} rows, found more", grid.n1)));
        }
        if record.len() != grid.n2 {
            return Err(parse_err(
                line,
                record.len().min(grid.n2) + 1,
                format!("expected {} columns, found {}", grid.n2, record.len()),
            ));
        }
        for (c, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| parse_err(line, c + 1, format!("not a number: {field:?}")))?;
            if !v.is_finite() {
                return Err(parse_err(line, c + 1, format!("non-finite value {field:?}")));
            }
            values.push(v);
        }
        rows += 1;
    }
    if rows != grid.n1 {
        return Err(parse_err(last_line + 1, 1, format!("expected {} rows, found {rows}", grid.n1)));
    }
    Ok((grid, DMatrix::from_row_slice(grid.n1, grid.n2, &values)))
}

/// Parses and normalizes a state.
pub fn parse_state(text: &str) -> Result<DiscretizedState> {
    let (grid, samples) = parse_samples(text)?;
    DiscretizedState::from_samples(grid, samples)
}

pub fn read_state(path: impl AsRef<Path>) -> Result<DiscretizedState> {
    parse_state(&std::fs::read_to_string(path)?)
}

/// Writes raw samples in the state file format, with 17 significant digits.
pub fn write_samples<W: Write>(mut out: W, grid: &GridSpec, samples: &DMatrix<f64>) -> Result<()> {
    let header = Header { n1: grid.n1, n2: grid.n2, lo1: grid.lo1, hi1: grid.hi1, lo2: grid.lo2, hi2: grid.hi2 };
    serde_json::to_writer(&mut out, &header).map_err(std::io::Error::from)?;
    writeln!(out)?;
    for r in 0..samples.nrows() {
        let row: Vec<String> = samples.row(r).iter().map(|v| format!("{v:.16e}")).collect();
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}

/// Writes a state as function samples, undoing the cell-area scaling.
pub fn write_state<W: Write>(out: W, state: &DiscretizedState) -> Result<()> {
    let samples = state.amplitudes() / state.grid().cell_area().sqrt();
    write_samples(out, state.grid(), &samples)
}
