//! Dense integer materialization of the `α_i`, `α` and `c_i` structure
//! matrices, for checking their algebraic identities exactly.
//!
//! Only meant for small shapes; materialization refuses anything above
//! [`MATERIALIZE_CAP`] basis states.

use super::Shape;
use crate::error::{Error, Result};

/// Largest `N^d` for which a structure matrix may be materialized.
pub const MATERIALIZE_CAP: usize = 4096;

/// Prime modulus used by [`IntMatrix::rank_mod_p`] (`2^61 − 1`).
pub const RANK_MODULUS: u64 = (1 << 61) - 1;

/// Square matrix of exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        IntMatrix { dim, data: vec![0; dim * dim] }
    }

    /// The all-ones matrix `J`.
    pub fn ones(dim: usize) -> Self {
        IntMatrix { dim, data: vec![1; dim * dim] }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> i64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i * dim + j] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.dim + j]
    }

    pub fn trace(&self) -> i64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn matmul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn scale(&self, factor: i64) -> IntMatrix {
        IntMatrix { dim: self.dim, data: self.data.iter().map(|v| v * factor).collect() }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.dim, other.dim, "add dimension mismatch");
        IntMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    /// Rank over the field `Z / (2^61 − 1)`.
    ///
    /// A lower bound on the rational rank, equal to it unless the modulus
    /// divides every maximal nonzero minor.
    pub fn rank_mod_p(&self) -> usize {
        let p = RANK_MODULUS as u128;
        let n = self.dim;
        let mut a: Vec<u64> = self
            .data
            .iter()
            .map(|&v| v.rem_euclid(RANK_MODULUS as i64) as u64)
            .collect();
        let mulmod = |x: u64, y: u64| ((x as u128 * y as u128) % p) as u64;
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..n).find(|&r| a[r * n + col] != 0) else {
                continue;
            };
            if pivot != rank {
                for j in 0..n {
                    a.swap(pivot * n + j, rank * n + j);
                }
            }
            let inv = pow_mod(a[rank * n + col], RANK_MODULUS - 2);
            for r in (rank + 1)..n {
                let f = a[r * n + col];
                if f == 0 {
                    continue;
                }
                let factor = mulmod(f, inv);
                for j in col..n {
                    let sub = mulmod(factor, a[rank * n + j]);
                    a[r * n + j] = (a[r * n + j] + RANK_MODULUS - sub) % RANK_MODULUS;
                }
            }
            rank += 1;
        }
        rank
    }
}

fn pow_mod(base: u64, mut exp: u64) -> u64 {
    let p = RANK_MODULUS as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        exp >>= 1;
    }
    acc as u64
}

fn check_cap(shape: &Shape) -> Result<()> {
    if shape.size() > MATERIALIZE_CAP {
        return Err(Error::Size(format!(
            "refusing to materialize a {0}x{0} structure matrix (cap {MATERIALIZE_CAP})",
            shape.size()
        )));
    }
    Ok(())
}

/// `α_i` with entries `δ(s_i, t_i)`.
pub fn alpha_matrix(shape: &Shape, axis: usize) -> Result<IntMatrix> {
    check_cap(shape)?;
    shape.alpha_element(axis, 0, 0)?;
    Ok(IntMatrix::from_fn(shape.size(), |s, t| {
        i64::from(shape.digit(s, axis) == shape.digit(t, axis))
    }))
}

/// `α = Σ_i α_i`, whose entries are the agreement counts.
pub fn alpha_sum_matrix(shape: &Shape) -> Result<IntMatrix> {
    check_cap(shape)?;
    Ok(IntMatrix::from_fn(shape.size(), |s, t| shape.agreement_unchecked(s, t) as i64))
}

/// `c_i` in its product-of-deltas form.
pub fn c_matrix(shape: &Shape, axis: usize) -> Result<IntMatrix> {
    check_cap(shape)?;
    shape.c_element(axis, 0, 0)?;
    let mut m = IntMatrix::zeros(shape.size());
    for s in 0..shape.size() {
        for t in 0..shape.size() {
            m.data[s * shape.size() + t] = i64::from(shape.c_element(axis, s, t)?);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_known_matrices() {
        assert_eq!(IntMatrix::ones(5).rank_mod_p(), 1);
        assert_eq!(IntMatrix::zeros(4).rank_mod_p(), 0);
        let id = IntMatrix::from_fn(6, |i, j| i64::from(i == j));
        assert_eq!(id.rank_mod_p(), 6);
        // rows 0 and 2 are dependent
        let m = IntMatrix::from_fn(3, |i, j| [[1, 2, 3], [0, 1, 4], [2, 4, 6]][i][j]);
        assert_eq!(m.rank_mod_p(), 2);
        let neg = IntMatrix::from_fn(2, |i, j| [[-1, 2], [3, -7]][i][j]);
        assert_eq!(neg.rank_mod_p(), 2);
    }

    #[test]
    fn cap_is_enforced() {
        let big = Shape::new(65, 2).unwrap();
        assert!(matches!(alpha_matrix(&big, 1), Err(Error::Size(_))));
        assert!(matches!(c_matrix(&big, 1), Err(Error::Size(_))));
    }

    #[test]
    fn axis_is_validated() {
        let sh = Shape::new(2, 2).unwrap();
        assert!(alpha_matrix(&sh, 3).is_err());
        assert!(c_matrix(&sh, 0).is_err());
    }
}
