use super::OscillatorConfig;
use crate::error::{Error, Result};
use crate::indexing::Shape;
use crate::linalg::{DenseMatrix, SymmetricOperator};

/// Upper triangle (diagonal included) of a symmetric matrix in compressed
/// row form. Products mirror the strictly upper part.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseSymmetric {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseSymmetric {
    /// Stores every structural coupling of `cfg`, zero-valued ones included.
    pub(crate) fn assemble(cfg: &OscillatorConfig) -> Self {
        let dim = cfg.dim();
        let nnz = Self::upper_nnz(cfg).unwrap_or(0) as usize;
        let mut row_ptr = Vec::with_capacity(dim + 1);
        let mut cols = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        row_ptr.push(0);
        for s in 0..dim {
            cfg.for_each_in_row(s, |t, v| {
                if t >= s {
                    cols.push(t);
                    vals.push(v);
                }
            });
            row_ptr.push(cols.len());
        }
        SparseSymmetric { dim, row_ptr, cols, vals }
    }

    /// Number of stored upper-triangle entries for `cfg`, without assembling:
    /// `N^d + d·N^(d−1)·P(N)` with `P(N)` the number of unordered same-parity
    /// pairs in `[0, N)`.
    pub fn upper_nnz(cfg: &OscillatorConfig) -> Option<u128> {
        let n = cfg.n() as u128;
        let even = n.div_ceil(2);
        let odd = n / 2;
        let pairs = even * even.saturating_sub(1) / 2 + odd * odd.saturating_sub(1) / 2;
        let per_axis = n.checked_pow(cfg.d() as u32 - 1)?.checked_mul(pairs)?;
        (cfg.dim() as u128).checked_add(per_axis.checked_mul(cfg.d() as u128)?)
    }

    /// Bytes needed for values, column indices and row pointers.
    pub fn estimated_bytes(cfg: &OscillatorConfig) -> Option<u128> {
        let nnz = Self::upper_nnz(cfg)?;
        let entry = (std::mem::size_of::<f64>() + std::mem::size_of::<usize>()) as u128;
        nnz.checked_mul(entry)?
            .checked_add((cfg.dim() as u128 + 1) * std::mem::size_of::<usize>() as u128)
    }

    /// Build from `(row, col, value)` triplets in either triangle. Duplicate
    /// positions are summed; lower-triangle entries are moved to the upper.
    pub fn from_triplets(dim: usize, triplets: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::new();
        for (i, j, v) in triplets {
            if i >= dim || j >= dim {
                return Err(Error::Domain(format!("entry ({i}, {j}) outside a {dim}x{dim} matrix")));
            }
            entries.push((i.min(j), i.max(j), v));
        }
        entries.sort_by_key(|e| (e.0, e.1));
        let mut row_ptr = vec![0; dim + 1];
        let mut cols = Vec::with_capacity(entries.len());
        let mut vals: Vec<f64> = Vec::with_capacity(entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in entries {
            if last == Some((i, j)) {
                *vals.last_mut().expect("duplicate follows an entry") += v;
                continue;
            }
            last = Some((i, j));
            cols.push(j);
            vals.push(v);
            row_ptr[i + 1] += 1;
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(SparseSymmetric { dim, row_ptr, cols, vals })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Stored entries (upper triangle).
    pub fn nnz_upper(&self) -> usize {
        self.vals.len()
    }

    /// Stored `(row, col, value)` with `col ≥ row`, row-major.
    pub fn iter_upper(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |s| {
            (self.row_ptr[s]..self.row_ptr[s + 1]).map(move |k| (s, self.cols[k], self.vals[k]))
        })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (r, c) = (i.min(j), i.max(j));
        let row = &self.cols[self.row_ptr[r]..self.row_ptr[r + 1]];
        match row.binary_search(&c) {
            Ok(k) => self.vals[self.row_ptr[r] + k],
            Err(_) => 0.0,
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.dim);
        for (i, j, v) in self.iter_upper() {
            m.set(i, j, v);
            m.set(j, i, v);
        }
        m
    }
}

impl SymmetricOperator for SparseSymmetric {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for s in 0..self.dim {
            let mut acc = 0.0;
            for k in self.row_ptr[s]..self.row_ptr[s + 1] {
                let (t, a) = (self.cols[k], self.vals[k]);
                acc += a * x[t];
                if t != s {
                    y[t] += a * x[s];
                }
            }
            y[s] += acc;
        }
    }
}

/// Column indices of the structurally nonzero entries of every row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityPattern {
    rows: Vec<Vec<usize>>,
}

impl SparsityPattern {
    /// Diagonal plus, per axis, every partner differing only on that axis by
    /// an even nonzero amount.
    pub fn of(cfg: &OscillatorConfig) -> Self {
        let rows = (0..cfg.dim())
            .map(|s| {
                let mut row = Vec::new();
                cfg.for_each_in_row(s, |t, _| row.push(t));
                row
            })
            .collect();
        SparsityPattern { rows }
    }

    /// Pattern of `|h_element(s, t)| > 0` over all pairs, by brute force.
    pub fn scan_nonzero(cfg: &OscillatorConfig) -> Self {
        let rows = (0..cfg.dim())
            .map(|s| (0..cfg.dim()).filter(|&t| cfg.h_unchecked(s, t) != 0.0).collect())
            .collect();
        SparsityPattern { rows }
    }

    /// Expected nonzeros in row `s`:
    /// `1 + Σ_i (⌈(N − p_i)/2⌉ − 1)` with `p_i` the parity of digit `s_i`.
    pub fn expected_row_len(shape: &Shape, s: usize) -> usize {
        1 + (1..=shape.d())
            .map(|axis| (shape.n() - shape.digit(s, axis) % 2).div_ceil(2) - 1)
            .sum::<usize>()
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn row(&self, s: usize) -> &[usize] {
        &self.rows[s]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Entries on or below the diagonal, as written to a symmetric file.
    pub fn lower_nnz(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .map(|(s, row)| row.iter().filter(|&&t| t <= s).count())
            .sum()
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.rows[s].binary_search(&t).is_ok()
    }
}
