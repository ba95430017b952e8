//! Closed-form matrix elements of the confined oscillator Hamiltonian in the
//! particle-in-a-box product basis, and assembly of the full operator.
//!
//! All energies are in units of the box energy `ε = π²ħ²/(8mL²)`, which is
//! carried by [`OscillatorConfig::epsilon`] and defaults to 1. The only
//! physical parameter entering the elements is the dimensionless coupling
//! `λ = ħω/ε`.
//!
//! For labels `s`, `t` with digits `s_i`, `t_i`:
//!
//! * `T_st = ε δ_st Σ_i (s_i + 1)²`
//! * `V_st = (λ²ε/8) δ_st [π²d/6 − Σ_i 1/(s_i+1)²]` on the diagonal,
//! * `V_st = (λ²ε/2) [1/(s_k−t_k)² − 1/(s_k+t_k+2)²]` when the labels differ
//!   only on axis `k` and `s_k − t_k` is even,
//! * zero otherwise.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::indexing::Shape;
use crate::linalg::{DenseMatrix, SymmetricOperator};

pub mod market;
mod sparse;

pub use sparse::{SparseSymmetric, SparsityPattern};

/// `ζ(2) = π²/6`.
pub(crate) const ZETA_2: f64 = PI * PI / 6.0;

/// Default cap on `N^d` for dense assembly.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Default memory budget for sparse assembly, in bytes.
pub const DEFAULT_SPARSE_BUDGET: usize = 2 << 30;

/// Dimension, basis size, coupling and energy unit of one oscillator problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OscillatorConfig {
    d: usize,
    #[serde(rename = "N")]
    n: usize,
    lambda: f64,
    epsilon: f64,
    #[serde(skip)]
    shape: Shape,
}

impl OscillatorConfig {
    /// `ε = 1`. Fails on `N < 1`, `d < 1`, overflowing `N^d`, or invalid `λ`.
    pub fn new(d: usize, n: usize, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::Domain(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        let shape = Shape::new(n, d)?;
        Ok(OscillatorConfig { d, n, lambda, epsilon: 1.0, shape })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::Domain(format!("epsilon must be finite and > 0, got {epsilon}")));
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_lambda(self, lambda: f64) -> Result<Self> {
        Self::new(self.d, self.n, lambda)?.with_epsilon(self.epsilon)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Number of basis states, `N^d`.
    pub fn dim(&self) -> usize {
        self.shape.size()
    }

    fn check_labels(&self, s: usize, t: usize) -> Result<()> {
        for label in [s, t] {
            if label >= self.dim() {
                return Err(Error::Domain(format!("label {label} outside [0, {})", self.dim())));
            }
        }
        Ok(())
    }

    /// Kinetic element `T_st`.
    pub fn t_element(&self, s: usize, t: usize) -> Result<f64> {
        self.check_labels(s, t)?;
        Ok(if s == t { self.kinetic_diagonal(s) } else { 0.0 })
    }

    /// Potential element `V_st`.
    pub fn v_element(&self, s: usize, t: usize) -> Result<f64> {
        self.check_labels(s, t)?;
        Ok(self.v_unchecked(s, t))
    }

    /// Hamiltonian element `H_st = T_st + V_st`.
    pub fn h_element(&self, s: usize, t: usize) -> Result<f64> {
        self.check_labels(s, t)?;
        Ok(self.h_unchecked(s, t))
    }

    /// `ε Σ_i (s_i + 1)²`, exact for `ε = 1`.
    pub(crate) fn kinetic_diagonal(&self, s: usize) -> f64 {
        self.kinetic_quanta(s) as f64 * self.epsilon
    }

    /// `Σ_i (s_i + 1)²` as an integer.
    pub fn kinetic_quanta(&self, s: usize) -> u64 {
        self.shape.digits(s).map(|r| (r as u64 + 1).pow(2)).sum()
    }

    pub(crate) fn potential_diagonal(&self, s: usize) -> f64 {
        let inv_sq: f64 = self.shape.digits(s).map(|r| 1.0 / ((r as f64 + 1.0).powi(2))).sum();
        self.lambda * self.lambda * self.epsilon / 8.0 * (self.d as f64 * ZETA_2 - inv_sq)
    }

    pub(crate) fn v_unchecked(&self, s: usize, t: usize) -> f64 {
        if s == t {
            return self.potential_diagonal(s);
        }
        if self.shape.agreement_unchecked(s, t) + 1 != self.d {
            return 0.0;
        }
        let k = self.shape.differing_axis_unchecked(s, t);
        v_element_1d(self.shape.digit(s, k), self.shape.digit(t, k), self.lambda, self.epsilon)
    }

    #[inline]
    pub(crate) fn h_unchecked(&self, s: usize, t: usize) -> f64 {
        if s == t {
            self.kinetic_diagonal(s) + self.potential_diagonal(s)
        } else {
            self.v_unchecked(s, t)
        }
    }

    /// `H_ss − shift`, with the kinetic part shifted before the potential is
    /// added so that no bits of `V_ss` are lost when the shift cancels `T_ss`.
    pub(crate) fn shifted_diagonal(&self, s: usize, shift: f64) -> f64 {
        (self.kinetic_diagonal(s) - shift) + self.potential_diagonal(s)
    }

    /// Visit every structurally nonzero `(t, H_st)` in row `s`: the diagonal
    /// and all single-axis partners of equal parity, in ascending `t`.
    pub(crate) fn for_each_in_row(&self, s: usize, mut f: impl FnMut(usize, f64)) {
        let mut cols: Vec<usize> = Vec::with_capacity(1 + self.d * self.n.div_ceil(2));
        cols.push(s);
        for axis in 1..=self.d {
            let stride = self.shape.stride(axis);
            let digit = self.shape.digit(s, axis);
            let base = s - digit * stride;
            let mut partner = digit % 2;
            while partner < self.n {
                if partner != digit {
                    cols.push(base + partner * stride);
                }
                partner += 2;
            }
        }
        cols.sort_unstable();
        for t in cols {
            f(t, self.h_unchecked(s, t));
        }
    }
}

/// One-axis potential element between box levels `a` and `b`:
///
/// * `a = b`: `(λ²ε/8)(π²/6 − 1/(a+1)²)`
/// * `a − b` even: `(λ²ε/2)(1/(a−b)² − 1/(a+b+2)²)`
/// * `a − b` odd: 0
pub fn v_element_1d(a: usize, b: usize, lambda: f64, epsilon: f64) -> f64 {
    let scale = lambda * lambda * epsilon;
    if a == b {
        return scale / 8.0 * (ZETA_2 - 1.0 / (a as f64 + 1.0).powi(2));
    }
    if (a + b) % 2 == 1 {
        return 0.0;
    }
    let diff = a.abs_diff(b) as f64;
    let sum = (a + b + 2) as f64;
    scale / 2.0 * (1.0 / (diff * diff) - 1.0 / (sum * sum))
}

/// Conversion from physical constants to `(ε, λ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhysicalUnits {
    pub hbar: f64,
    pub mass: f64,
    /// Box half-width `L`.
    pub half_width: f64,
    pub omega: f64,
}

impl PhysicalUnits {
    pub fn new(hbar: f64, mass: f64, half_width: f64, omega: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("m", mass), ("L", half_width)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Domain(format!("{name} must be positive, got {v}")));
            }
        }
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::Domain(format!("omega must be >= 0, got {omega}")));
        }
        Ok(PhysicalUnits { hbar, mass, half_width, omega })
    }

    /// `ε = π²ħ²/(8mL²)`.
    pub fn epsilon(&self) -> f64 {
        PI * PI * self.hbar * self.hbar / (8.0 * self.mass * self.half_width * self.half_width)
    }

    /// `λ = ħω/ε`.
    pub fn lambda(&self) -> f64 {
        self.hbar * self.omega / self.epsilon()
    }

    /// Configuration for these constants, with energies measured in `ε`.
    pub fn config(&self, d: usize, n: usize) -> Result<OscillatorConfig> {
        OscillatorConfig::new(d, n, self.lambda())
    }
}

/// Size limits checked before any assembly allocates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AssemblyLimits {
    /// Largest `N^d` accepted by dense assembly.
    pub dense_cap: usize,
    /// Largest estimated sparse footprint, in bytes.
    pub sparse_budget: usize,
}

impl Default for AssemblyLimits {
    fn default() -> Self {
        AssemblyLimits { dense_cap: DEFAULT_DENSE_CAP, sparse_budget: DEFAULT_SPARSE_BUDGET }
    }
}

impl AssemblyLimits {
    pub fn check_dense(&self, cfg: &OscillatorConfig) -> Result<()> {
        if cfg.dim() > self.dense_cap {
            return Err(Error::Size(format!(
                "N^d = {} exceeds the dense cap {}; use the sparse or matrix-free path",
                cfg.dim(),
                self.dense_cap
            )));
        }
        Ok(())
    }

    pub fn check_sparse(&self, cfg: &OscillatorConfig) -> Result<()> {
        let bytes = SparseSymmetric::estimated_bytes(cfg);
        if bytes.is_none_or(|b| b > self.sparse_budget as u128) {
            return Err(Error::Size(format!(
                "sparse storage for N^d = {} needs ~{} bytes, above the budget of {} bytes",
                cfg.dim(),
                bytes.map_or("overflowing".to_string(), |b| b.to_string()),
                self.sparse_budget
            )));
        }
        Ok(())
    }
}

/// How the operator is held in memory.
#[derive(Clone, Debug)]
pub enum Storage {
    /// Full square array, bitwise symmetric.
    Dense(DenseMatrix),
    /// Upper triangle of the structurally nonzero entries.
    Sparse(SparseSymmetric),
    /// Nothing stored; elements are regenerated on every product.
    MatrixFree,
}

/// The Hamiltonian of one configuration in some storage format.
#[derive(Clone, Debug)]
pub struct HamiltonianMatrix {
    cfg: OscillatorConfig,
    storage: Storage,
}

impl HamiltonianMatrix {
    /// Dense assembly with the default cap.
    pub fn assemble_dense(cfg: &OscillatorConfig) -> Result<Self> {
        Self::assemble_dense_with(cfg, &AssemblyLimits::default())
    }

    pub fn assemble_dense_with(cfg: &OscillatorConfig, limits: &AssemblyLimits) -> Result<Self> {
        Self::assemble_dense_shifted(cfg, 0.0, limits)
    }

    /// Dense assembly of `H − shift·I`.
    ///
    /// The shift is applied to the kinetic diagonal before the potential is
    /// added, so with `shift = ε(r+1)²` the low-lying entries keep the full
    /// precision of `V`.
    pub fn assemble_dense_shifted(
        cfg: &OscillatorConfig,
        shift: f64,
        limits: &AssemblyLimits,
    ) -> Result<Self> {
        limits.check_dense(cfg)?;
        let n = cfg.dim();
        let mut m = DenseMatrix::zeros(n);
        for s in 0..n {
            cfg.for_each_in_row(s, |t, v| {
                if t >= s {
                    let v = if t == s { cfg.shifted_diagonal(s, shift) } else { v };
                    m.set(s, t, v);
                    m.set(t, s, v);
                }
            });
        }
        Ok(HamiltonianMatrix { cfg: *cfg, storage: Storage::Dense(m) })
    }

    /// Sparse assembly with the default budget.
    pub fn assemble_sparse(cfg: &OscillatorConfig) -> Result<Self> {
        Self::assemble_sparse_with(cfg, &AssemblyLimits::default())
    }

    pub fn assemble_sparse_with(cfg: &OscillatorConfig, limits: &AssemblyLimits) -> Result<Self> {
        limits.check_sparse(cfg)?;
        Ok(HamiltonianMatrix { cfg: *cfg, storage: Storage::Sparse(SparseSymmetric::assemble(cfg)) })
    }

    pub fn matrix_free(cfg: &OscillatorConfig) -> Self {
        HamiltonianMatrix { cfg: *cfg, storage: Storage::MatrixFree }
    }

    pub fn config(&self) -> &OscillatorConfig {
        &self.cfg
    }

    pub fn storage(&self) -> &Storage {
        &self.storage
    }

    pub fn as_dense(&self) -> Option<&DenseMatrix> {
        match &self.storage {
            Storage::Dense(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_sparse(&self) -> Option<&SparseSymmetric> {
        match &self.storage {
            Storage::Sparse(m) => Some(m),
            _ => None,
        }
    }

    /// Structural nonzeros of every row.
    pub fn sparsity_pattern(&self) -> SparsityPattern {
        SparsityPattern::of(&self.cfg)
    }
}

impl SymmetricOperator for HamiltonianMatrix {
    fn dim(&self) -> usize {
        self.cfg.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        match &self.storage {
            Storage::Dense(m) => m.apply(x, y),
            Storage::Sparse(m) => m.apply(x, y),
            Storage::MatrixFree => {
                for (s, ys) in y.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    self.cfg.for_each_in_row(s, |t, v| acc += v * x[t]);
                    *ys = acc;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::relative_max_diff;

    fn cfg(d: usize, n: usize, lambda: f64) -> OscillatorConfig {
        OscillatorConfig::new(d, n, lambda).unwrap()
    }

    #[test]
    fn config_validation() {
        assert!(OscillatorConfig::new(1, 4, -1.0).is_err());
        assert!(OscillatorConfig::new(1, 4, f64::NAN).is_err());
        assert!(OscillatorConfig::new(0, 4, 1.0).is_err());
        assert!(OscillatorConfig::new(64, 4, 1.0).is_err());
        assert!(cfg(1, 4, 1.0).with_epsilon(0.0).is_err());
        let c = cfg(2, 3, 1.0).with_epsilon(2.0).unwrap().with_lambda(3.0).unwrap();
        assert_eq!((c.lambda(), c.epsilon(), c.dim()), (3.0, 2.0, 9));
    }

    #[test]
    fn t_element_examples() {
        assert_eq!(cfg(3, 4, 1.0).t_element(0, 0).unwrap(), 3.0);
        assert_eq!(cfg(2, 2, 1.0).t_element(3, 3).unwrap(), 8.0);
        assert_eq!(cfg(2, 4, 1.0).t_element(0, 2).unwrap(), 0.0);
        assert_eq!(cfg(1, 4, 1.0).with_epsilon(0.5).unwrap().t_element(2, 2).unwrap(), 4.5);
        assert!(cfg(1, 4, 1.0).t_element(4, 0).is_err());
    }

    #[test]
    fn v_element_1d_examples() {
        let l = 1.7;
        let e = 0.9;
        let diag = v_element_1d(0, 0, l, e);
        assert!((diag - l * l * e / 8.0 * (PI * PI / 6.0 - 1.0)).abs() < 1e-15);
        assert!((v_element_1d(0, 2, 1.0, 1.0) - 3.0 / 32.0).abs() < 1e-16);
        assert_eq!(v_element_1d(0, 1, 1.0, 1.0), 0.0);
        assert_eq!(v_element_1d(5, 2, 3.0, 1.0), 0.0);
        assert_eq!(v_element_1d(7, 3, 2.0, 1.0), v_element_1d(3, 7, 2.0, 1.0));
    }

    #[test]
    fn v_element_examples() {
        let c = cfg(2, 3, 1.0);
        let expected = (PI * PI / 3.0 - 2.0) / 8.0;
        assert!((c.v_element(0, 0).unwrap() - expected).abs() < 1e-15);
        // (0,0) vs (2,2): two axes differ
        assert_eq!(c.v_element(0, 8).unwrap(), 0.0);
        // (0,0) vs (0,2): only axis 2
        assert!((c.v_element(0, 2).unwrap() - 3.0 / 32.0).abs() < 1e-16);
    }

    #[test]
    fn one_dimensional_reduction() {
        // 1-D form: diagonal plus (1 − δ) off-diagonal with the parity factor
        let lambda = 1.3;
        let c = cfg(1, 10, lambda);
        for s in 0..10 {
            for t in 0..10 {
                let (sf, tf) = (s as f64, t as f64);
                let delta = if s == t { 1.0 } else { 0.0 };
                let parity = if (s + t) % 2 == 0 { 1.0 } else { 0.0 };
                let expected = lambda * lambda / 8.0 * delta * (PI * PI / 6.0 - 1.0 / (sf + 1.0).powi(2))
                    + lambda * lambda / 2.0
                        * ((1.0 - delta) / ((sf - tf).powi(2) + delta)
                            - (1.0 - delta) / (sf + tf + 2.0).powi(2))
                        * parity;
                let got = c.v_element(s, t).unwrap();
                assert!((got - expected).abs() <= 1e-15 * expected.abs().max(1.0), "{s} {t}");
            }
        }
    }

    #[test]
    fn h_element_examples() {
        let free = cfg(2, 4, 0.0);
        for s in 0..16 {
            for t in 0..16 {
                assert_eq!(free.h_element(s, t).unwrap(), free.t_element(s, t).unwrap());
            }
        }
        let c = cfg(1, 5, 1.0);
        let expected = 1.0 + (PI * PI / 6.0 - 1.0) / 8.0;
        assert!((c.h_element(0, 0).unwrap() - expected).abs() < 1e-15);
        assert!((c.h_element(0, 2).unwrap() - 3.0 / 32.0).abs() < 1e-16);
    }

    #[test]
    fn physical_units() {
        let u = PhysicalUnits::new(1.0, 1.0, 1.0, 10.0).unwrap();
        assert!((u.epsilon() - PI * PI / 8.0).abs() < 1e-15);
        assert!((u.lambda() - 80.0 / (PI * PI)).abs() < 1e-13);
        assert!(PhysicalUnits::new(1.0, -1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn dense_examples() {
        let h = HamiltonianMatrix::assemble_dense(&cfg(1, 2, 1.0)).unwrap();
        let m = h.as_dense().unwrap();
        assert!((m.get(0, 0) - (1.0 + (PI * PI / 6.0 - 1.0) / 8.0)).abs() < 1e-15);
        assert!((m.get(1, 1) - (4.0 + (PI * PI / 6.0 - 0.25) / 8.0)).abs() < 1e-15);
        assert_eq!(m.get(0, 1), 0.0);

        let one = HamiltonianMatrix::assemble_dense(&cfg(1, 1, 1.0)).unwrap();
        assert_eq!(one.as_dense().unwrap().n(), 1);

        let too_big = AssemblyLimits { dense_cap: 8, ..Default::default() };
        assert!(matches!(
            HamiltonianMatrix::assemble_dense_with(&cfg(2, 3, 1.0), &too_big),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn dense_matches_elements_and_is_symmetric() {
        let c = cfg(3, 4, 0.7);
        let h = HamiltonianMatrix::assemble_dense(&c).unwrap();
        let m = h.as_dense().unwrap();
        assert!(m.is_symmetric());
        for s in 0..c.dim() {
            for t in 0..c.dim() {
                assert_eq!(m.get(s, t).to_bits(), c.h_element(s, t).unwrap().to_bits());
            }
        }
    }

    #[test]
    fn shifted_assembly_only_moves_diagonal() {
        let c = cfg(1, 6, 0.3);
        let h = HamiltonianMatrix::assemble_dense(&c).unwrap();
        let shifted =
            HamiltonianMatrix::assemble_dense_shifted(&c, 1.0, &AssemblyLimits::default()).unwrap();
        let (a, b) = (h.as_dense().unwrap(), shifted.as_dense().unwrap());
        assert!((b.get(0, 0) - c.v_element(0, 0).unwrap()).abs() < 1e-18);
        for s in 0..6 {
            for t in 0..6 {
                let expected = a.get(s, t) - if s == t { 1.0 } else { 0.0 };
                assert!((b.get(s, t) - expected).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn matvec_paths_agree() {
        let c = cfg(2, 3, 1.0);
        let dense = HamiltonianMatrix::assemble_dense(&c).unwrap();
        let sparse = HamiltonianMatrix::assemble_sparse(&c).unwrap();
        let free = HamiltonianMatrix::matrix_free(&c);
        let x: Vec<f64> = (0..9).map(|i| ((i * 7 + 3) % 11) as f64 / 11.0 - 0.4).collect();
        let yd = dense.matvec(&x).unwrap();
        assert!(relative_max_diff(&sparse.matvec(&x).unwrap(), &yd) < 1e-13);
        assert!(relative_max_diff(&free.matvec(&x).unwrap(), &yd) < 1e-13);
        assert!(free.matvec(&x[..4]).is_err());
        assert!(dense.matvec(&[0.0; 9]).unwrap().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn free_particle_matvec_on_unit_vector() {
        let c = cfg(3, 3, 0.0);
        let h = HamiltonianMatrix::matrix_free(&c);
        for s in 0..c.dim() {
            let mut e = vec![0.0; c.dim()];
            e[s] = 1.0;
            let y = h.matvec(&e).unwrap();
            for (t, v) in y.iter().enumerate() {
                let expected = if t == s { c.kinetic_quanta(s) as f64 } else { 0.0 };
                assert_eq!(*v, expected);
            }
        }
    }
}
