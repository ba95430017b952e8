//! Matrix Market coordinate files for symmetric real matrices.
//!
//! Entries are written for the lower triangle with 1-based indices and 17
//! significant digits, column by column. Exact zeros are skipped.

use std::io::{BufRead, Write};

use super::{OscillatorConfig, SparseSymmetric};
use crate::error::{Error, Result};

pub const HEADER: &str = "%%MatrixMarket matrix coordinate real symmetric";

/// Write `matrix`; `cfg`, when given, is recorded in a comment line.
pub fn write<W: Write>(mut w: W, matrix: &SparseSymmetric, cfg: Option<&OscillatorConfig>) -> Result<usize> {
    let entries: Vec<(usize, usize, f64)> =
        matrix.iter_upper().filter(|&(_, _, v)| v != 0.0).collect();
    writeln!(w, "{HEADER}")?;
    if let Some(c) = cfg {
        writeln!(
            w,
            "% confined oscillator Hamiltonian d={} N={} lambda={:e} epsilon={:e}; entries in units of epsilon",
            c.d(),
            c.n(),
            c.lambda(),
            c.epsilon()
        )?;
    }
    writeln!(w, "{} {} {}", matrix.dim(), matrix.dim(), entries.len())?;
    for &(row, col, v) in &entries {
        // upper (row, col) is lower (col, row)
        writeln!(w, "{} {} {:.16e}", col + 1, row + 1, v)?;
    }
    w.flush()?;
    Ok(entries.len())
}

/// Read a `coordinate real symmetric` file.
pub fn read<R: BufRead>(r: R) -> Result<SparseSymmetric> {
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty file".into()))??;
    let fields: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if fields.len() != 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::Parse(format!("not a Matrix Market header: {header}")));
    }
    if fields[2] != "coordinate" || fields[3] != "real" || fields[4] != "symmetric" {
        return Err(Error::Parse(format!(
            "only 'coordinate real symmetric' is supported, got '{} {} {}'",
            fields[2], fields[3], fields[4]
        )));
    }

    let mut size: Option<(usize, usize)> = None;
    let mut triplets = Vec::new();
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut it = trimmed.split_whitespace();
        let mut next = |what: &str| {
            it.next()
                .ok_or_else(|| Error::Parse(format!("line {}: missing {what}", lineno + 2)))
        };
        match size {
            None => {
                let rows: usize = parse(next("rows")?, lineno)?;
                let cols: usize = parse(next("cols")?, lineno)?;
                let nnz: usize = parse(next("nnz")?, lineno)?;
                if rows != cols {
                    return Err(Error::Parse(format!("symmetric matrix must be square, got {rows}x{cols}")));
                }
                size = Some((rows, nnz));
                triplets.reserve(nnz);
            }
            Some((dim, _)) => {
                let i: usize = parse(next("row index")?, lineno)?;
                let j: usize = parse(next("column index")?, lineno)?;
                let v: f64 = parse(next("value")?, lineno)?;
                if i == 0 || j == 0 || i > dim || j > dim {
                    return Err(Error::Parse(format!("line {}: index ({i}, {j}) out of range", lineno + 2)));
                }
                if j > i {
                    return Err(Error::Parse(format!(
                        "line {}: symmetric files store the lower triangle, found ({i}, {j})",
                        lineno + 2
                    )));
                }
                triplets.push((i - 1, j - 1, v));
            }
        }
    }
    let (dim, nnz) = size.ok_or_else(|| Error::Parse("missing size line".into()))?;
    if triplets.len() != nnz {
        return Err(Error::Parse(format!("expected {nnz} entries, found {}", triplets.len())));
    }
    SparseSymmetric::from_triplets(dim, triplets)
}

fn parse<T: std::str::FromStr>(s: &str, lineno: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::Parse(format!("line {}: cannot parse '{s}'", lineno + 2)))
}
