//! Symmetric eigensolvers: a dense full-spectrum path and an iterative
//! Lanczos path for the lowest levels.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianMatrix, OscillatorConfig};
use crate::linalg::{residual_norm, DenseMatrix, SymmetricOperator};
use crate::numerics::DoubleDouble;

mod lanczos;
pub mod tridiagonal;

pub use lanczos::{default_max_basis, default_max_iter, lanczos_lowest, memory_estimate, LanczosOptions, DEFAULT_SEED};

/// Eigenvalues closer than this (relative to `max(1, |E|)`) form one level.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// Dense residuals must stay below this multiple of the matrix norm.
pub const DENSE_RESIDUAL_FACTOR: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Dense,
    Lanczos,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolverMetadata {
    pub solver: SolverKind,
    /// Seed of the starting vectors; `None` for deterministic direct solvers.
    pub seed: Option<u64>,
    /// QL sweeps (dense) or Krylov vectors generated (Lanczos).
    pub iterations: usize,
    /// Residual threshold every returned pair was checked against.
    pub tol: f64,
    pub converged: bool,
}

/// One group of (numerically) equal eigenvalues.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub multiplicity: usize,
}

/// Ascending eigenvalues with optional eigenvectors and per-pair residuals.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvectors, one per eigenvalue.
    pub eigenvectors: Option<Vec<Vec<f64>>>,
    /// `‖H v − E v‖₂` per pair.
    pub residuals: Vec<f64>,
    pub metadata: SolverMetadata,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Keep only the lowest `k` pairs.
    pub fn truncate(&mut self, k: usize) {
        self.eigenvalues.truncate(k);
        self.residuals.truncate(k);
        if let Some(v) = self.eigenvectors.as_mut() {
            v.truncate(k);
        }
    }

    /// Consecutive eigenvalues grouped when their gap is at most
    /// [`DEGENERACY_TOL`]` · max(1, |E|)`.
    pub fn levels(&self) -> Vec<Level> {
        let mut out: Vec<Level> = Vec::new();
        let mut prev: Option<f64> = None;
        for &e in &self.eigenvalues {
            match (prev, out.last_mut()) {
                (Some(p), Some(level)) if e - p <= DEGENERACY_TOL * p.abs().max(1.0) => {
                    level.multiplicity += 1;
                }
                _ => out.push(Level { energy: e, multiplicity: 1 }),
            }
            prev = Some(e);
        }
        out
    }

    /// Multiplicity of the level each eigenvalue belongs to, aligned with
    /// [`Spectrum::eigenvalues`].
    pub fn multiplicities(&self) -> Vec<usize> {
        self.levels()
            .iter()
            .flat_map(|l| std::iter::repeat_n(l.multiplicity, l.multiplicity))
            .collect()
    }

    /// Largest `|⟨v_i, v_j⟩ − δ_ij|` over the returned eigenvectors.
    pub fn orthonormality_defect(&self) -> Option<f64> {
        let vecs = self.eigenvectors.as_ref()?;
        let mut worst: f64 = 0.0;
        for (i, a) in vecs.iter().enumerate() {
            for (j, b) in vecs.iter().enumerate().skip(i) {
                let ip: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((ip - target).abs());
            }
        }
        Some(worst)
    }

    pub fn report(&self, cfg: &OscillatorConfig, timestamp: Option<u64>) -> SpectrumReport {
        SpectrumReport {
            config: *cfg,
            eigenvalues: self.eigenvalues.clone(),
            multiplicities: self.multiplicities(),
            residuals: self.residuals.clone(),
            solver_metadata: self.metadata.clone(),
            timestamp,
        }
    }
}

/// Serialized form of a [`Spectrum`].
#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub config: OscillatorConfig,
    pub eigenvalues: Vec<f64>,
    pub multiplicities: Vec<usize>,
    pub residuals: Vec<f64>,
    pub solver_metadata: SolverMetadata,
    /// Seconds since the Unix epoch; excluded from reproducibility checks.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl SpectrumReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// CSV with columns `index,energy,multiplicity,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,energy,multiplicity,residual\n");
        for (i, ((e, m), r)) in self
            .eigenvalues
            .iter()
            .zip(&self.multiplicities)
            .zip(&self.residuals)
            .enumerate()
        {
            out.push_str(&format!("{i},{e:.17e},{m},{r:.3e}\n"));
        }
        out
    }
}

/// Seam for swapping the dense kernel.
pub trait DenseEigensolver {
    /// Ascending eigenvalues and unit eigenvectors as matrix columns.
    fn eigh(&self, a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)>;
}

/// The built-in Householder + implicit QL kernel.
#[derive(Clone, Copy, Debug, Default)]
pub struct HouseholderQl;

impl DenseEigensolver for HouseholderQl {
    fn eigh(&self, a: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
        tridiagonal::symmetric_eigen(a)
    }
}

/// Full spectrum of a densely stored Hamiltonian.
pub fn dense_eigen(h: &HamiltonianMatrix) -> Result<Spectrum> {
    let a = h.as_dense().ok_or_else(|| {
        Error::Contract("dense_eigen needs dense storage; assemble with assemble_dense".into())
    })?;
    dense_eigen_matrix(a)
}

/// Full spectrum of any symmetric dense matrix with the built-in kernel.
pub fn dense_eigen_matrix(a: &DenseMatrix) -> Result<Spectrum> {
    dense_eigen_with(a, &HouseholderQl)
}

pub fn dense_eigen_with<S: DenseEigensolver + ?Sized>(a: &DenseMatrix, solver: &S) -> Result<Spectrum> {
    let (values, vectors) = solver.eigh(a)?;
    let n = a.n();
    let columns: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| vectors.get(i, j)).collect()).collect();
    let residuals: Vec<f64> =
        values.iter().zip(&columns).map(|(&e, v)| residual_norm(a, e, v)).collect();
    let tol = DENSE_RESIDUAL_FACTOR * a.frobenius_norm().max(f64::MIN_POSITIVE);
    let converged = residuals.iter().all(|&r| r <= tol);
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors: Some(columns),
        residuals,
        metadata: SolverMetadata {
            solver: SolverKind::Dense,
            seed: None,
            iterations: n,
            tol,
            converged,
        },
    })
}

/// Rayleigh quotient `vᵀAv / vᵀv`, accumulated in double-double precision.
///
/// For an eigenvector accurate to `δ` the quotient is accurate to `O(δ²)`
/// plus the rounding of the final quotient, which recovers eigenvalues well
/// below the backward error of the decomposition.
pub fn rayleigh_quotient(a: &DenseMatrix, v: &[f64]) -> Result<f64> {
    if v.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), actual: v.len() });
    }
    let mut num = DoubleDouble::default();
    let mut den = DoubleDouble::default();
    for (i, &vi) in v.iter().enumerate() {
        den = den.add_prod(vi, vi);
        let row = a.row(i);
        let mut acc = DoubleDouble::default();
        for (&aij, &vj) in row.iter().zip(v) {
            acc = acc.add_prod(aij, vj);
        }
        // vi · (hi + lo)
        num = num.add_prod(vi, acc.hi).add_prod(vi, acc.lo);
    }
    Ok(num.value() / den.value())
}

/// Residual-checked eigenpairs of any operator, for callers that already
/// have candidate vectors.
pub fn residuals<A: SymmetricOperator + ?Sized>(a: &A, values: &[f64], vectors: &[Vec<f64>]) -> Vec<f64> {
    values.iter().zip(vectors).map(|(&e, v)| residual_norm(a, e, v)).collect()
}
