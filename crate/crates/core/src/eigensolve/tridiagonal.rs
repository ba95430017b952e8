//! Householder reduction to tridiagonal form followed by the implicit-shift
//! QL iteration, after the EISPACK `tred2`/`tql2` pair as found in JAMA.
//!
//! Eigenvectors are returned as the columns of a row-major `n × n` array.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Sweeps allowed per eigenvalue before the QL iteration gives up.
const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

/// Full eigendecomposition of a symmetric matrix.
///
/// Returns ascending eigenvalues and the matrix whose column `j` is the unit
/// eigenvector of eigenvalue `j`. Only the lower triangle of `a` is read.
pub fn symmetric_eigen(a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = a.n();
    if n == 0 {
        return Ok((Vec::new(), DenseMatrix::zeros(0)));
    }
    let mut v: Vec<f64> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            if i >= j { a.get(i, j) } else { a.get(j, i) }
        })
        .collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tred2(n, &mut v, &mut d, &mut e);
    tql2(n, n, &mut v, &mut d, &mut e)?;
    Ok((d, DenseMatrix::from_row_major(n, v)?))
}

/// Eigenpairs of the symmetric tridiagonal matrix with diagonal `diag` and
/// off-diagonal `off` (`off[i]` couples `i` and `i + 1`).
pub fn tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = diag.len();
    assert!(off.len() + 1 >= n, "off-diagonal too short");
    if n == 0 {
        return Ok((Vec::new(), DenseMatrix::zeros(0)));
    }
    let mut v = DenseMatrix::identity(n).as_slice().to_vec();
    let mut d = diag.to_vec();
    // tql2 expects the subdiagonal in e[1..n]
    let mut e = vec![0.0; n];
    e[1..n].copy_from_slice(&off[..n - 1]);
    tql2(n, n, &mut v, &mut d, &mut e)?;
    Ok((d, DenseMatrix::from_row_major(n, v)?))
}

/// Eigenvalues of a symmetric tridiagonal matrix together with selected
/// rows of its eigenvector matrix.
///
/// Row `i` of the result holds component `rows[i]` of every eigenvector, in
/// ascending eigenvalue order. Asking only for the last row costs `O(n²)`.
pub fn tridiagonal_eigen_rows(diag: &[f64], off: &[f64], rows: &[usize]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = diag.len();
    assert!(off.len() + 1 >= n, "off-diagonal too short");
    if n == 0 {
        return Ok((Vec::new(), vec![Vec::new(); rows.len()]));
    }
    let mut v = vec![0.0; rows.len() * n];
    for (i, &r) in rows.iter().enumerate() {
        assert!(r < n, "row {r} out of range for n = {n}");
        v[i * n + r] = 1.0;
    }
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[1..n].copy_from_slice(&off[..n - 1]);
    tql2(n, rows.len(), &mut v, &mut d, &mut e)?;
    Ok((d, v.chunks_exact(n).map(<[f64]>::to_vec).collect()))
}

fn tred2(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    let at = |i: usize, j: usize| i * n + j;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }

    for i in (1..n).rev() {
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        let mut h = 0.0;
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for dk in d[..i].iter_mut() {
                *dk /= scale;
                h += *dk * *dk;
            }
            let mut f = d[i - 1];
            let mut g = h.sqrt();
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].iter_mut().for_each(|x| *x = 0.0);

            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in (j + 1)..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// `v` holds `rows` rows of length `n`; every rotation is applied to each.
fn tql2(n: usize, rows: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let at = |i: usize, j: usize| i * n + j;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    let eps = f64::EPSILON;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }

        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
                    return Err(Error::NonConvergence { index: l, iterations: sweeps - 1 });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d[(l + 2)..n].iter_mut() {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..rows {
                        let vk1 = v[at(k, i + 1)];
                        let vk = v[at(k, i)];
                        v[at(k, i + 1)] = s * vk + c * vk1;
                        v[at(k, i)] = c * vk - s * vk1;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    // selection sort keeps the pass deterministic and stable for ties
    for i in 0..n.saturating_sub(1) {
        let mut k = i;
        let mut p = d[i];
        for (j, &dj) in d.iter().enumerate().skip(i + 1) {
            if dj < p {
                k = j;
                p = dj;
            }
        }
        if k != i {
            d[k] = d[i];
            d[i] = p;
            for row in 0..rows {
                v.swap(at(row, i), at(row, k));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::residual_norm;

    fn column(m: &DenseMatrix, j: usize) -> Vec<f64> {
        (0..m.n()).map(|i| m.get(i, j)).collect()
    }

    #[test]
    fn two_by_two() {
        let a = DenseMatrix::from_fn(2, |i, j| if i == j { 2.0 } else { 1.0 });
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-15);
        assert!((vals[1] - 3.0).abs() < 1e-15);
        assert!(residual_norm(&a, vals[1], &column(&vecs, 1)) < 1e-14);
    }

    #[test]
    fn one_by_one_and_empty() {
        let a = DenseMatrix::from_fn(1, |_, _| -4.5);
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        assert_eq!(vals, vec![-4.5]);
        assert_eq!(vecs.get(0, 0).abs(), 1.0);
        assert!(symmetric_eigen(&DenseMatrix::zeros(0)).unwrap().0.is_empty());
    }

    #[test]
    fn diagonal_input_is_sorted() {
        let diag = [5.0, -1.0, 3.0, 3.0, 0.0];
        let a = DenseMatrix::from_fn(5, |i, j| if i == j { diag[i] } else { 0.0 });
        let (vals, _) = symmetric_eigen(&a).unwrap();
        assert_eq!(vals, vec![-1.0, 0.0, 3.0, 3.0, 5.0]);
    }

    #[test]
    fn laplacian_path_graph() {
        // eigenvalues of tridiag(-1, 2, -1) of size n: 2 − 2cos(kπ/(n+1))
        let n = 12;
        let (vals, vecs) = tridiagonal_eigen(&vec![2.0; n], &vec![-1.0; n - 1]).unwrap();
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!((v - exact).abs() < 1e-14);
        }
        let a = DenseMatrix::from_fn(n, |i, j| match i.abs_diff(j) {
            0 => 2.0,
            1 => -1.0,
            _ => 0.0,
        });
        let (dense_vals, _) = symmetric_eigen(&a).unwrap();
        for (x, y) in vals.iter().zip(&dense_vals) {
            assert!((x - y).abs() < 1e-13);
        }
        for (j, &v) in vals.iter().enumerate() {
            assert!(residual_norm(&a, v, &column(&vecs, j)) < 1e-13);
        }
    }

    #[test]
    fn selected_rows_match_full_vectors() {
        let diag: Vec<f64> = (0..15).map(|i| (i as f64 * 0.7).cos() * 4.0).collect();
        let off: Vec<f64> = (0..14).map(|i| 0.3 + (i as f64).sin()).collect();
        let (vals, vecs) = tridiagonal_eigen(&diag, &off).unwrap();
        let (vals2, rows) = tridiagonal_eigen_rows(&diag, &off, &[14, 3]).unwrap();
        assert_eq!(vals, vals2);
        for (j, (a, b)) in rows[0].iter().zip(&rows[1]).enumerate() {
            assert!((a - vecs.get(14, j)).abs() < 1e-13);
            assert!((b - vecs.get(3, j)).abs() < 1e-13);
        }
        assert!(tridiagonal_eigen_rows(&diag, &off, &[]).unwrap().1.is_empty());
    }

    #[test]
    fn random_symmetric_reconstruction() {
        let n = 30;
        let a = DenseMatrix::from_fn(n, |i, j| {
            let (lo, hi) = (i.min(j) as f64, i.max(j) as f64);
            ((lo * 1.3 + hi * 0.7).sin() * 3.0).round() / 3.0 + if i == j { lo } else { 0.0 }
        });
        let (vals, vecs) = symmetric_eigen(&a).unwrap();
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
        for (j, &v) in vals.iter().enumerate() {
            assert!(residual_norm(&a, v, &column(&vecs, j)) < 1e-12);
            for k in 0..n {
                let ip: f64 = (0..n).map(|i| vecs.get(i, j) * vecs.get(i, k)).sum();
                let expected = if j == k { 1.0 } else { 0.0 };
                assert!((ip - expected).abs() < 1e-13);
            }
        }
    }
}
