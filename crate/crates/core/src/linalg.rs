//! Dense storage and small vector kernels shared by assembly and the solvers.

use crate::error::{Error, Result};

/// A symmetric linear operator known only through its action on vectors.
pub trait SymmetricOperator {
    fn dim(&self) -> usize;

    /// `y ← A x`. Both slices have length [`SymmetricOperator::dim`].
    fn apply(&self, x: &[f64], y: &mut [f64]);

    /// Checked `A x`.
    fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: x.len() });
        }
        let mut y = vec![0.0; self.dim()];
        self.apply(x, &mut y);
        Ok(y)
    }
}

/// Square row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        DenseMatrix { n, data }
    }

    /// Build from row-major data; `data.len()` must be a perfect square.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, actual: data.len() });
        }
        Ok(DenseMatrix { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Bitwise symmetry, `a_ij == a_ji` for every pair.
    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).to_bits() == self.get(j, i).to_bits()))
    }

    /// Frobenius norm, an upper bound on the spectral norm.
    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let (n, m) = (self.n, other.n);
        DenseMatrix::from_fn(n * m, |i, j| self.get(i / m, j / m) * other.get(i % m, j % m))
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n);
        DenseMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl SymmetricOperator for DenseMatrix {
    fn dim(&self) -> usize {
        self.n
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = dot(self.row(i), x);
        }
    }
}

/// Eight independent partial sums so the loop vectorizes.
#[inline]
pub fn dot(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len().min(y.len());
    let (x, y) = (&x[..n], &y[..n]);
    let mut acc = [0.0; 8];
    let xs = x.chunks_exact(8);
    let ys = y.chunks_exact(8);
    let tail: f64 = xs.remainder().iter().zip(ys.remainder()).map(|(a, b)| a * b).sum();
    for (cx, cy) in xs.zip(ys) {
        for i in 0..8 {
            acc[i] += cx[i] * cy[i];
        }
    }
    (acc[0] + acc[4]) + (acc[1] + acc[5]) + (acc[2] + acc[6]) + (acc[3] + acc[7]) + tail
}

#[inline]
pub fn norm(x: &[f64]) -> f64 {
    dot(x, x).sqrt()
}

/// `y ← y + a x`.
#[inline]
pub fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// `‖A v − λ v‖₂`.
pub fn residual_norm<A: SymmetricOperator + ?Sized>(a: &A, value: f64, v: &[f64]) -> f64 {
    let mut av = vec![0.0; a.dim()];
    a.apply(v, &mut av);
    av.iter().zip(v).map(|(x, y)| (x - value * y).powi(2)).sum::<f64>().sqrt()
}

/// Largest relative deviation `‖a − b‖_∞ / max(‖b‖_∞, tiny)`.
pub fn relative_max_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_with_identity() {
        let a = DenseMatrix::from_fn(2, |i, j| (i * 2 + j) as f64 + 1.0);
        let k = a.kron(&DenseMatrix::identity(2));
        assert_eq!(k.get(0, 0), 1.0);
        assert_eq!(k.get(1, 1), 1.0);
        assert_eq!(k.get(0, 2), 2.0);
        assert_eq!(k.get(1, 3), 2.0);
        assert_eq!(k.get(0, 1), 0.0);
        assert_eq!(k.get(3, 3), 4.0);
    }

    #[test]
    fn matvec_checks_length() {
        let a = DenseMatrix::identity(3);
        assert!(a.matvec(&[1.0, 2.0]).is_err());
        assert_eq!(a.matvec(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn residual_of_exact_pair_is_zero() {
        let a = DenseMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        let v = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()];
        assert!(residual_norm(&a, 3.0, &v) < 1e-15);
    }
}
