//! Lanczos iteration with full reorthogonalization for the lowest
//! eigenpairs of a symmetric operator.
//!
//! A single Krylov chain cannot see more than one direction of an exactly
//! degenerate eigenspace, and the confined oscillator has many of those
//! (every `d ≥ 2` level with permuted labels). Converged pairs are therefore
//! locked and a new chain is started orthogonal to them; the run sequence
//! ends when such a probe chain finds nothing below the `k`-th locked value.
//! Each chain is orthogonalized against itself and the locked vectors, so its
//! projection stays tridiagonal and convergence checks cost `O(m²)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{tridiagonal, SolverKind, SolverMetadata, Spectrum};
use crate::error::{Error, Result};
use crate::linalg::{axpy, dot, norm, SymmetricOperator};

pub const DEFAULT_SEED: u64 = 0x5eed_c0de;

/// Relative size below which an orthogonalized vector counts as lost.
const BREAKDOWN: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LanczosOptions {
    /// Number of lowest eigenpairs wanted.
    pub k: usize,
    /// Absolute residual target `‖Hv − Ev‖₂`.
    pub tol: f64,
    /// Total Krylov vectors over all chains; `None` picks [`default_max_iter`].
    pub max_iter: Option<usize>,
    /// Longest single chain; `None` picks [`default_max_basis`].
    pub max_basis: Option<usize>,
    pub seed: u64,
}

impl LanczosOptions {
    pub fn new(k: usize) -> Self {
        LanczosOptions { k, tol: 1e-10, max_iter: None, max_basis: None, seed: DEFAULT_SEED }
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = Some(max_iter);
        self
    }

    pub fn max_basis(mut self, max_basis: usize) -> Self {
        self.max_basis = Some(max_basis);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// `max(5000, 100k)`.
pub fn default_max_iter(k: usize) -> usize {
    (100 * k).max(5000)
}

/// `min(n, 1500)` vectors per chain.
///
/// The lowest levels of an `N^d` box converge slowly because the spectrum
/// spreads to `dεN²` while the low gaps stay `O(ε)`; several hundred vectors
/// per chain are typical at `d = 3`.
pub fn default_max_basis(n: usize) -> usize {
    n.min(1500)
}

/// Bytes held by the longest chain plus `k` locked vectors.
pub fn memory_estimate(n: usize, opts: &LanczosOptions) -> u128 {
    let basis = opts.max_basis.unwrap_or_else(|| default_max_basis(n)).min(n);
    (basis + opts.k + 2) as u128 * n as u128 * std::mem::size_of::<f64>() as u128
}

struct Pair {
    value: f64,
    vector: Vec<f64>,
    residual: f64,
}

struct Chain {
    pairs: Vec<Pair>,
    steps: usize,
    /// Stopped by a length or budget limit before converging.
    truncated: bool,
}

/// Classical Gram–Schmidt against `locked` and `basis`, repeated once when
/// the first pass removes more than `1 − 1/√2` of the norm.
fn orthogonalize(w: &mut [f64], locked: &[Pair], basis: &[Vec<f64>]) {
    for _ in 0..2 {
        let before = norm(w);
        let against = locked.iter().map(|p| &p.vector).chain(basis);
        let coeffs: Vec<f64> = against.clone().map(|q| dot(q, w)).collect();
        for (c, q) in coeffs.iter().zip(against) {
            axpy(-c, q, w);
        }
        if norm(w) > std::f64::consts::FRAC_1_SQRT_2 * before {
            break;
        }
    }
}

fn random_start(rng: &mut ChaCha8Rng, n: usize, locked: &[Pair]) -> Option<Vec<f64>> {
    for _ in 0..8 {
        let mut w: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let before = norm(&w);
        orthogonalize(&mut w, locked, &[]);
        let after = norm(&w);
        if after > BREAKDOWN * before {
            w.iter_mut().for_each(|x| *x /= after);
            return Some(w);
        }
    }
    None
}

/// How many of the lowest `theta` belong to the lowest `k` of
/// `locked ∪ theta`; at least one.
fn wanted(theta: &[f64], locked: &[Pair], k: usize) -> usize {
    let (mut i, mut j, mut taken) = (0, 0, 0);
    while i + j < k && i < theta.len() {
        if j < locked.len() && locked[j].value <= theta[i] {
            j += 1;
        } else {
            i += 1;
        }
        taken = i;
    }
    taken.max(1).min(theta.len())
}

/// One chain from `start` until the Ritz pairs it contributes converge.
fn run_chain<A: SymmetricOperator + ?Sized>(
    op: &A,
    start: Vec<f64>,
    locked: &[Pair],
    opts: &LanczosOptions,
    max_len: usize,
    budget: usize,
) -> Result<Chain> {
    let mut q = vec![start];
    let (mut alpha, mut beta): (Vec<f64>, Vec<f64>) = (Vec::new(), Vec::new());
    let mut next_check = opts.k.clamp(5, 50);
    loop {
        let m = q.len();
        let mut w = op.matvec(&q[m - 1])?;
        let scale = norm(&w);
        let a = dot(&q[m - 1], &w);
        alpha.push(a);
        axpy(-a, &q[m - 1], &mut w);
        if m >= 2 {
            axpy(-beta[m - 2], &q[m - 2], &mut w);
        }
        orthogonalize(&mut w, locked, &q);
        let b = norm(&w);
        let breakdown = b <= BREAKDOWN * scale.max(f64::MIN_POSITIVE);
        let limited = m >= max_len || m >= budget;

        if m >= next_check || breakdown || limited {
            next_check = m + (m / 10).max(5);
            let (theta, bottom) = tridiagonal::tridiagonal_eigen_rows(&alpha, &beta, &[m - 1])?;
            let want = wanted(&theta, locked, opts.k);
            let estimate = |i: usize| if breakdown { 0.0 } else { (b * bottom[0][i]).abs() };
            if breakdown || limited || (0..want).all(|i| estimate(i) <= opts.tol) {
                let rows: Vec<usize> = (0..m).collect();
                let (theta, s) = tridiagonal::tridiagonal_eigen_rows(&alpha, &beta, &rows)?;
                let mut pairs = Vec::with_capacity(want);
                for (i, &value) in theta.iter().enumerate().take(want) {
                    let mut y = vec![0.0; op.dim()];
                    for (row, qi) in s.iter().zip(&q) {
                        axpy(row[i], qi, &mut y);
                    }
                    let ny = norm(&y);
                    y.iter_mut().for_each(|x| *x /= ny);
                    let mut r = op.matvec(&y)?;
                    axpy(-value, &y, &mut r);
                    pairs.push(Pair { value, vector: y, residual: norm(&r) });
                }
                let settled = pairs.iter().all(|p| p.residual <= opts.tol);
                if settled || breakdown || limited {
                    return Ok(Chain { pairs, steps: m, truncated: !settled && !breakdown });
                }
            }
        }
        w.iter_mut().for_each(|x| *x /= b);
        beta.push(b);
        q.push(w);
    }
}

/// Lowest `opts.k` eigenpairs of `op` using only matrix–vector products.
///
/// If a chain or the total budget runs out, the best pairs found so far are
/// returned with `metadata.converged == false`.
pub fn lanczos_lowest<A: SymmetricOperator + ?Sized>(op: &A, opts: &LanczosOptions) -> Result<Spectrum> {
    let n = op.dim();
    if opts.k == 0 || opts.k > n {
        return Err(Error::Contract(format!("k = {} must lie in 1..={n}", opts.k)));
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Error::Domain(format!("tol must be positive, got {}", opts.tol)));
    }
    let max_iter = opts.max_iter.unwrap_or_else(|| default_max_iter(opts.k)).max(1);
    let max_basis = opts.max_basis.unwrap_or_else(|| default_max_basis(n)).max(1);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut locked: Vec<Pair> = Vec::new();
    let mut steps = 0;
    let mut chains = 0;
    let mut truncated = false;
    let mut confirmed = false;

    while steps < max_iter {
        let Some(start) = random_start(&mut rng, n, &locked) else {
            // the locked vectors span everything
            confirmed = locked.len() == opts.k;
            break;
        };
        let max_len = max_basis.min(n - locked.len());
        let chain = run_chain(op, start, &locked, opts, max_len, max_iter - steps)?;
        steps += chain.steps;
        chains += 1;
        truncated |= chain.truncated;

        let kth = if locked.len() == opts.k { locked[opts.k - 1].value } else { f64::INFINITY };
        let margin = opts.tol * kth.abs().max(1.0);
        let new_levels = chain.pairs.iter().any(|p| p.value < kth - margin);
        locked.extend(chain.pairs);
        locked.sort_by(|a, b| a.value.total_cmp(&b.value));
        locked.truncate(opts.k);

        confirmed = chains >= 2 && !new_levels && locked.len() == opts.k;
        if truncated || confirmed {
            break;
        }
    }

    let converged = confirmed && !truncated && locked.iter().all(|p| p.residual <= opts.tol);
    Ok(Spectrum {
        eigenvalues: locked.iter().map(|p| p.value).collect(),
        residuals: locked.iter().map(|p| p.residual).collect(),
        eigenvectors: Some(locked.into_iter().map(|p| p.vector).collect()),
        metadata: SolverMetadata {
            solver: SolverKind::Lanczos,
            seed: Some(opts.seed),
            iterations: steps,
            tol: opts.tol,
            converged,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolve::dense_eigen;
    use crate::hamiltonian::{HamiltonianMatrix, OscillatorConfig};

    fn cfg(d: usize, n: usize, lambda: f64) -> OscillatorConfig {
        OscillatorConfig::new(d, n, lambda).unwrap()
    }

    #[test]
    fn free_ground_state_is_d() {
        for d in 1..=3 {
            let h = HamiltonianMatrix::matrix_free(&cfg(d, 6, 0.0));
            let spec = lanczos_lowest(&h, &LanczosOptions::new(1)).unwrap();
            assert!(spec.metadata.converged);
            assert!((spec.eigenvalues[0] - d as f64).abs() < 1e-10);
        }
    }

    #[test]
    fn finds_both_members_of_exact_doublets() {
        let c = cfg(2, 8, 0.0);
        let spec = lanczos_lowest(&HamiltonianMatrix::matrix_free(&c), &LanczosOptions::new(6)).unwrap();
        assert!(spec.metadata.converged);
        let expected = [2.0, 5.0, 5.0, 8.0, 10.0, 10.0];
        for (x, y) in spec.eigenvalues.iter().zip(expected) {
            assert!((x - y).abs() < 1e-9, "{:?}", spec.eigenvalues);
        }
    }

    #[test]
    fn matches_dense_lowest_five() {
        let c = cfg(2, 10, 1.0);
        let dense = dense_eigen(&HamiltonianMatrix::assemble_dense(&c).unwrap()).unwrap();
        let sparse = HamiltonianMatrix::assemble_sparse(&c).unwrap();
        let spec = lanczos_lowest(&sparse, &LanczosOptions::new(5)).unwrap();
        assert!(spec.metadata.converged);
        for (x, y) in spec.eigenvalues.iter().zip(&dense.eigenvalues) {
            assert!((x - y).abs() < 1e-8);
        }
        assert!(spec.max_residual() <= 1e-8);
        assert!(spec.orthonormality_defect().unwrap() < 1e-10);
    }

    #[test]
    fn full_spectrum_when_k_is_dimension() {
        let c = cfg(2, 6, 2.0);
        let dense = dense_eigen(&HamiltonianMatrix::assemble_dense(&c).unwrap()).unwrap();
        let spec =
            lanczos_lowest(&HamiltonianMatrix::matrix_free(&c), &LanczosOptions::new(c.dim())).unwrap();
        assert!(spec.metadata.converged);
        for (x, y) in spec.eigenvalues.iter().zip(&dense.eigenvalues) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn same_seed_same_result() {
        let h = HamiltonianMatrix::matrix_free(&cfg(1, 40, 3.0));
        let opts = LanczosOptions::new(3).seed(7);
        let a = lanczos_lowest(&h, &opts).unwrap();
        let b = lanczos_lowest(&h, &opts).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.metadata, b.metadata);
    }

    #[test]
    fn budget_exhaustion_is_flagged() {
        let h = HamiltonianMatrix::matrix_free(&cfg(1, 200, 30.0));
        let spec = lanczos_lowest(&h, &LanczosOptions::new(3).tol(1e-14).max_iter(6)).unwrap();
        assert!(!spec.metadata.converged);
        assert_eq!(spec.eigenvalues.len(), 3);
    }

    #[test]
    fn rejects_bad_k() {
        let h = HamiltonianMatrix::matrix_free(&cfg(1, 3, 1.0));
        assert!(lanczos_lowest(&h, &LanczosOptions::new(0)).is_err());
        assert!(lanczos_lowest(&h, &LanczosOptions::new(4)).is_err());
    }
}
