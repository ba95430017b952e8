//! Named invariant checks, grouped into suites, run at fixed small sizes.
//!
//! Every check is deterministic; random vectors come from a seeded ChaCha
//! stream.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basis::{
    kinetic_quadrature, phi, phi_single_cosine, potential_quadrature, quad_inner, BoxGeometry, GaussLegendre,
    DEFAULT_QUADRATURE_ORDER,
};
use crate::eigensolve::{dense_eigen, dense_eigen_matrix, lanczos_lowest, LanczosOptions};
use crate::error::{Error, Result};
use crate::hamiltonian::{market, HamiltonianMatrix, OscillatorConfig, SparsityPattern};
use crate::indexing::structure::{alpha_matrix, alpha_sum_matrix, c_matrix, IntMatrix};
use crate::indexing::Shape;
use crate::linalg::{relative_max_diff, DenseMatrix, SymmetricOperator};
use crate::perturbation::direct::{
    appendix_e2, combined_summand, e2_summand, even_level_summand, odd_level_summand, E2_DEFAULT_CUTOFF,
    E3_DEFAULT_CUTOFF,
};
use crate::perturbation::{fit_loglog_slope, series_deviation, Oscillator1d};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algebra,
    Basis,
    Hamiltonian,
    Eigensolve,
    Perturbation,
}

impl Suite {
    pub const ALL: [Suite; 5] =
        [Suite::Algebra, Suite::Basis, Suite::Hamiltonian, Suite::Eigensolve, Suite::Perturbation];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Basis => "basis",
            Suite::Hamiltonian => "hamiltonian",
            Suite::Eigensolve => "eigensolve",
            Suite::Perturbation => "perturbation",
        }
    }

    fn checks(self) -> &'static [(&'static str, CheckFn)] {
        match self {
            Suite::Algebra => ALGEBRA,
            Suite::Basis => BASIS,
            Suite::Hamiltonian => HAMILTONIAN,
            Suite::Eigensolve => EIGENSOLVE,
            Suite::Perturbation => PERTURBATION,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

/// Outcome of one named check.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {}::{} ({:.2?}) {}", self.suite, self.name, self.elapsed, self.detail)
    }
}

type CheckFn = fn() -> Outcome;

/// `Ok(detail)` on success, `Err(reason)` on failure.
type Outcome = std::result::Result<String, String>;

pub fn run_suite(suite: Suite) -> Vec<CheckResult> {
    suite
        .checks()
        .iter()
        .map(|&(name, check)| {
            let start = Instant::now();
            let outcome = check();
            let elapsed = start.elapsed();
            let (passed, detail) = match outcome {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckResult { suite, name, passed, detail, elapsed }
        })
        .collect()
}

pub fn run_all() -> Vec<CheckResult> {
    Suite::ALL.into_iter().flat_map(run_suite).collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn random_vector(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

// ---------------------------------------------------------------- algebra

const ALGEBRA: &[(&str, CheckFn)] = &[
    ("round_trip", round_trip),
    ("alpha_product_rule", alpha_product_rule),
    ("alpha_spectrum", alpha_spectrum),
    ("alpha_square_rule", alpha_square_rule),
    ("c_powers_trace_rank", c_powers_trace_rank),
    ("contraction", contraction),
    ("piecewise_c_sum", piecewise_c_sum),
    ("c_forms_agree", c_forms_agree),
];

/// `(N, d) ∈ {2,3,4} × {1,2,3}`.
pub fn algebra_shapes() -> impl Iterator<Item = Shape> {
    (2..=4).flat_map(|n| (1..=3).map(move |d| Shape::new(n, d).expect("small shape")))
}

fn round_trip() -> Outcome {
    let mut total = 0;
    for (n, d) in [(2, 1), (3, 4), (10, 6), (1000, 2), (2, 19), (7, 7)] {
        let shape = lib(Shape::new(n, d))?;
        for s in 0..shape.size() {
            let m = lib(shape.decompose(s))?;
            ensure(lib(shape.compose(&m))? == s, || format!("N={n} d={d} s={s}"))?;
        }
        total += shape.size();
    }
    Ok(format!("{total} labels"))
}

fn pow(n: usize, e: i64) -> i64 {
    (n as i64).pow(e as u32)
}

fn alpha_product_rule() -> Outcome {
    for shape in algebra_shapes() {
        let (n, d) = (shape.n(), shape.d());
        let alphas: Vec<IntMatrix> = (1..=d).map(|i| alpha_matrix(&shape, i)).collect::<Result<_>>().map_err(|e| e.to_string())?;
        let ones = IntMatrix::ones(shape.size());
        for i in 0..d {
            for j in 0..d {
                let lhs = alphas[i].matmul(&alphas[j]);
                let rhs = if i == j {
                    alphas[i].scale(pow(n, d as i64 - 1))
                } else {
                    ones.scale(pow(n, d as i64 - 2))
                };
                ensure(lhs == rhs, || format!("N={n} d={d} i={} j={}", i + 1, j + 1))?;
                ensure(lhs == alphas[j].matmul(&alphas[i]), || format!("commutation N={n} d={d}"))?;
            }
        }
    }
    Ok("9 shapes".into())
}

fn alpha_spectrum() -> Outcome {
    for shape in algebra_shapes() {
        let (n, d) = (shape.n(), shape.d());
        for i in 1..=d {
            let a = lib(alpha_matrix(&shape, i))?;
            let top = pow(n, d as i64 - 1);
            ensure(a.trace() == pow(n, d as i64), || format!("trace N={n} d={d} i={i}"))?;
            ensure(a.matmul(&a) == a.scale(top), || format!("idempotence N={n} d={d} i={i}"))?;
            // eigenvalues are 0 and N^(d−1); the latter has multiplicity trace/N^(d−1)
            let rank = a.rank_mod_p();
            ensure(rank == n && a.trace() / top == n as i64, || {
                format!("rank {rank} N={n} d={d} i={i}")
            })?;
        }
    }
    Ok("rank N, trace N^d, α_i² = N^(d−1) α_i".into())
}

fn alpha_square_rule() -> Outcome {
    for shape in algebra_shapes() {
        let (n, d) = (shape.n(), shape.d());
        let alpha = lib(alpha_sum_matrix(&shape))?;
        let j_coeff = if d >= 2 { pow(n, d as i64 - 2) * (d * (d - 1)) as i64 } else { 0 };
        let rhs = alpha.scale(pow(n, d as i64 - 1)).add(&IntMatrix::ones(shape.size()).scale(j_coeff));
        ensure(alpha.matmul(&alpha) == rhs, || format!("N={n} d={d}"))?;
        let from_axes = (1..=d).try_fold(IntMatrix::zeros(shape.size()), |acc, i| {
            alpha_matrix(&shape, i).map(|a| acc.add(&a))
        });
        ensure(lib(from_axes)? == alpha, || format!("α ≠ Σα_i at N={n} d={d}"))?;
    }
    Ok("9 shapes".into())
}

fn c_powers_trace_rank() -> Outcome {
    for shape in algebra_shapes() {
        let (n, d) = (shape.n(), shape.d());
        for i in 1..=d {
            let c = lib(c_matrix(&shape, i))?;
            ensure(c.is_symmetric(), || format!("symmetry N={n} d={d} i={i}"))?;
            ensure(c.matmul(&c) == c.scale(n as i64), || format!("c² = Nc at N={n} d={d} i={i}"))?;
            let c3 = c.matmul(&c).matmul(&c);
            ensure(c3 == c.scale((n * n) as i64), || format!("c³ = N²c at N={n} d={d} i={i}"))?;
            ensure(c.trace() == pow(n, d as i64), || format!("trace N={n} d={d} i={i}"))?;
            let rank = c.rank_mod_p();
            ensure(rank as i64 == pow(n, d as i64 - 1), || format!("rank {rank} N={n} d={d} i={i}"))?;
        }
    }
    Ok("c_i² = N c_i, trace N^d, rank N^(d−1)".into())
}

fn for_all_pairs(mut f: impl FnMut(&Shape, usize, usize) -> std::result::Result<(), String>) -> Outcome {
    let mut pairs = 0;
    for shape in algebra_shapes() {
        for s in 0..shape.size() {
            for t in 0..shape.size() {
                f(&shape, s, t)?;
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn contraction() -> Outcome {
    for_all_pairs(|shape, s, t| {
        for i in 1..=shape.d() {
            let prod = lib(shape.alpha_element(i, s, t))? * lib(shape.c_element(i, s, t))?;
            ensure(prod == u8::from(s == t), || format!("N={} d={} s={s} t={t} i={i}", shape.n(), shape.d()))?;
        }
        Ok(())
    })
}

fn piecewise_c_sum() -> Outcome {
    for_all_pairs(|shape, s, t| {
        let d = shape.d();
        let sum: usize = (1..=d).map(|i| shape.c_element(i, s, t).map(usize::from)).sum::<Result<usize>>().map_err(|e| e.to_string())?;
        let agreement = lib(shape.agreement(s, t))?;
        let expected = if s == t {
            d
        } else if agreement + 1 == d {
            1
        } else {
            0
        };
        ensure(sum == expected, || format!("N={} d={d} s={s} t={t}: {sum} vs {expected}", shape.n()))
    })
}

fn c_forms_agree() -> Outcome {
    for_all_pairs(|shape, s, t| {
        for i in 1..=shape.d() {
            let a = lib(shape.c_element(i, s, t))?;
            let b = lib(shape.c_element_via_alpha(i, s, t))?;
            ensure(a == b, || format!("N={} d={} s={s} t={t} i={i}", shape.n(), shape.d()))?;
        }
        Ok(())
    })
}

// ------------------------------------------------------------------ basis

const BASIS: &[(&str, CheckFn)] = &[
    ("orthonormality", orthonormality),
    ("kinetic_eigenrelation", kinetic_eigenrelation),
    ("parity", parity),
    ("single_cosine_form", single_cosine_form),
    ("dirichlet_walls", dirichlet_walls),
];

fn orthonormality() -> Outcome {
    let mut worst: f64 = 0.0;
    for l in [1.0, 2.5] {
        let g = lib(BoxGeometry::new(l))?;
        for r in 0..20 {
            for s in 0..20 {
                let ip = lib(quad_inner(
                    |x| phi(r, x, &g).unwrap_or(f64::NAN),
                    |x| phi(s, x, &g).unwrap_or(f64::NAN),
                    &g,
                    DEFAULT_QUADRATURE_ORDER,
                ))?;
                let err = (ip - f64::from(u8::from(r == s))).abs();
                worst = worst.max(err);
                ensure(err < 1e-10, || format!("L={l} r={r} s={s}: {ip}"))?;
            }
        }
    }
    Ok(format!("max |<φ_r|φ_s> − δ| = {worst:.1e}"))
}

fn kinetic_eigenrelation() -> Outcome {
    let rule = lib(GaussLegendre::new(DEFAULT_QUADRATURE_ORDER))?;
    let mut worst: f64 = 0.0;
    for l in [1.0, 0.7, 3.0] {
        let g = lib(BoxGeometry::new(l))?;
        for r in 0..10 {
            let exact = ((r + 1) * (r + 1)) as f64;
            let rel = (kinetic_quadrature(r, &g, &rule) - exact).abs() / exact;
            worst = worst.max(rel);
            ensure(rel < 1e-8, || format!("L={l} r={r}: relative error {rel:e}"))?;
        }
    }
    Ok(format!("max relative error {worst:.1e}"))
}

fn parity() -> Outcome {
    let g = lib(BoxGeometry::new(1.3))?;
    for r in 0..20 {
        for k in 0..=40 {
            let x = 1.3 * k as f64 / 40.0;
            let (p, m) = (lib(phi(r, x, &g))?, lib(phi(r, -x, &g))?);
            let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
            ensure(p == sign * m, || format!("r={r} x={x}"))?;
        }
    }
    Ok("φ_r(−x) = (−1)^r φ_r(x)".into())
}

fn single_cosine_form() -> Outcome {
    let mut worst: f64 = 0.0;
    for l in [1.0, 0.4, 5.0] {
        let g = lib(BoxGeometry::new(l))?;
        for r in 0..20 {
            for k in 0..=64 {
                let x = l * (2.0 * k as f64 / 64.0 - 1.0);
                let diff = (lib(phi(r, x, &g))? - phi_single_cosine(r, x, &g)).abs() * l.sqrt();
                worst = worst.max(diff);
                ensure(diff < 1e-14, || format!("L={l} r={r} x={x}: {diff:e}"))?;
            }
        }
    }
    Ok(format!("max |Δ|·√L = {worst:.1e}"))
}

fn dirichlet_walls() -> Outcome {
    let g = lib(BoxGeometry::new(2.0))?;
    for r in 0..40 {
        for x in [-2.0, 2.0] {
            let v = lib(phi(r, x, &g))?;
            ensure(v.abs() < 1e-14, || format!("r={r} x={x}: {v:e}"))?;
        }
    }
    ensure(phi(0, 2.01, &g).is_err(), || "x outside the box accepted".into())?;
    Ok("φ_r(±L) = 0 for r < 40".into())
}

// ------------------------------------------------------------ hamiltonian

const HAMILTONIAN: &[(&str, CheckFn)] = &[
    ("symmetry", symmetry),
    ("quadrature_oracle", quadrature_oracle),
    ("kronecker_sum", kronecker_sum),
    ("lambda_scaling", lambda_scaling),
    ("structural_zeros", structural_zeros),
    ("kinetic_floor", kinetic_floor),
    ("matvec_paths", matvec_paths),
    ("market_round_trip", market_round_trip),
];

fn small_configs(lambda: f64) -> impl Iterator<Item = OscillatorConfig> {
    [(1, 12), (1, 33), (2, 6), (2, 9), (3, 5), (4, 4), (5, 3)]
        .into_iter()
        .map(move |(d, n)| OscillatorConfig::new(d, n, lambda).expect("small config"))
}

fn symmetry() -> Outcome {
    for cfg in small_configs(1.3) {
        for s in 0..cfg.dim() {
            for t in s..cfg.dim() {
                let (a, b) = (lib(cfg.h_element(s, t))?, lib(cfg.h_element(t, s))?);
                ensure(a.to_bits() == b.to_bits(), || format!("d={} N={} s={s} t={t}", cfg.d(), cfg.n()))?;
            }
        }
    }
    Ok("bitwise H_st = H_ts".into())
}

/// Largest `|V_st(closed) − V_st(quadrature)|` for `d = 1`, `N`, `λ`, in the
/// phase convention of the closed form.
pub fn quadrature_oracle_deviation(n: usize, lambda: f64) -> Result<f64> {
    let cfg = OscillatorConfig::new(1, n, lambda)?;
    let rule = GaussLegendre::new(DEFAULT_QUADRATURE_ORDER)?;
    let mut worst: f64 = 0.0;
    for l in [1.0, 0.25, 3.0] {
        let g = BoxGeometry::new(l)?;
        for s in 0..n {
            for t in 0..n {
                let quad = potential_quadrature(s, t, lambda, &g, &rule, true);
                worst = worst.max((cfg.v_element(s, t)? - quad).abs());
            }
        }
    }
    Ok(worst)
}

fn quadrature_oracle() -> Outcome {
    let worst = lib(quadrature_oracle_deviation(12, 1.0))?;
    ensure(worst < 1e-9, || format!("max deviation {worst:e}"))?;
    Ok(format!("N=12, max |V − quad| = {worst:.1e}"))
}

/// Largest entrywise `|H − (H₁ ⊗ I + I ⊗ H₁)|` for `d = 2`.
pub fn kronecker_deviation(n: usize, lambda: f64) -> Result<f64> {
    let h2 = HamiltonianMatrix::assemble_dense(&OscillatorConfig::new(2, n, lambda)?)?;
    let h1 = HamiltonianMatrix::assemble_dense(&OscillatorConfig::new(1, n, lambda)?)?;
    let h1 = h1.as_dense().expect("dense");
    let id = DenseMatrix::identity(n);
    let sum = h1.kron(&id).add(&id.kron(h1));
    Ok(h2.as_dense().expect("dense").max_abs_diff(&sum))
}

fn kronecker_sum() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=8 {
        worst = worst.max(lib(kronecker_deviation(n, 1.0))?);
    }
    ensure(worst <= 1e-13, || format!("max deviation {worst:e}"))?;
    Ok(format!("N ≤ 8, max deviation {worst:.1e}"))
}

fn lambda_scaling() -> Outcome {
    for cfg in small_configs(1.0) {
        let twice = lib(cfg.with_lambda(2.0))?;
        for s in 0..cfg.dim().min(200) {
            for t in 0..cfg.dim().min(200) {
                let (a, b) = (lib(cfg.v_element(s, t))?, lib(twice.v_element(s, t))?);
                ensure(b == 4.0 * a, || format!("s={s} t={t}: {b} vs 4·{a}"))?;
            }
        }
    }
    Ok("V(λ=2) = 4 V(λ=1) exactly".into())
}

fn structural_zeros() -> Outcome {
    for cfg in small_configs(0.9) {
        let pattern = SparsityPattern::of(&cfg);
        ensure(pattern == SparsityPattern::scan_nonzero(&cfg), || {
            format!("pattern differs from scan at d={} N={}", cfg.d(), cfg.n())
        })?;
        for s in 0..cfg.dim() {
            ensure(pattern.row(s).len() == SparsityPattern::expected_row_len(cfg.shape(), s), || {
                format!("row length d={} N={} s={s}", cfg.d(), cfg.n())
            })?;
        }
    }
    Ok("pattern = brute-force scan, row counts match".into())
}

fn kinetic_floor() -> Outcome {
    for cfg in small_configs(2.0) {
        for s in 0..cfg.dim() {
            let h = lib(cfg.h_element(s, s))?;
            ensure(h.is_finite() && h >= cfg.d() as f64 * cfg.epsilon(), || format!("H_ss = {h} at s={s}"))?;
        }
    }
    Ok("H_ss ≥ dε".into())
}

fn matvec_paths() -> Outcome {
    let mut worst: f64 = 0.0;
    for (i, cfg) in small_configs(1.1).enumerate() {
        let dense = lib(HamiltonianMatrix::assemble_dense(&cfg))?;
        let sparse = lib(HamiltonianMatrix::assemble_sparse(&cfg))?;
        let free = HamiltonianMatrix::matrix_free(&cfg);
        for k in 0..3 {
            let v = random_vector(cfg.dim(), 100 * i as u64 + k);
            let a = lib(dense.matvec(&v))?;
            for other in [lib(sparse.matvec(&v))?, lib(free.matvec(&v))?] {
                let rel = relative_max_diff(&a, &other);
                worst = worst.max(rel);
                ensure(rel <= 1e-13, || format!("d={} N={}: {rel:e}", cfg.d(), cfg.n()))?;
            }
        }
        ensure(lib(dense.matvec(&vec![0.0; cfg.dim()]))?.iter().all(|&x| x == 0.0), || "H·0 ≠ 0".into())?;
    }
    Ok(format!("max relative deviation {worst:.1e}"))
}

/// Write `cfg` to Matrix Market, read it back and return the largest
/// relative matvec deviation over `trials` random vectors.
pub fn market_round_trip_deviation(cfg: &OscillatorConfig, trials: u64) -> Result<f64> {
    let h = HamiltonianMatrix::assemble_sparse(cfg)?;
    let original = h.as_sparse().expect("sparse");
    let mut buf = Vec::new();
    market::write(&mut buf, original, Some(cfg))?;
    let back = market::read(buf.as_slice())?;
    let mut worst: f64 = 0.0;
    for k in 0..trials {
        let v = random_vector(cfg.dim(), 7 + k);
        worst = worst.max(relative_max_diff(&h.matvec(&v)?, &back.matvec(&v)?));
    }
    Ok(worst)
}

fn market_round_trip() -> Outcome {
    let mut worst: f64 = 0.0;
    for cfg in small_configs(1.7) {
        worst = worst.max(lib(market_round_trip_deviation(&cfg, 3))?);
    }
    ensure(worst <= 1e-13, || format!("max relative deviation {worst:e}"))?;
    Ok(format!("max relative deviation {worst:.1e}"))
}

// ------------------------------------------------------------- eigensolve

const EIGENSOLVE: &[(&str, CheckFn)] = &[
    ("free_spectrum", free_spectrum),
    ("residuals_orthonormality", residuals_orthonormality),
    ("lanczos_vs_dense", lanczos_vs_dense),
    ("variational_monotonicity", variational_monotonicity),
    ("unconfined_limit", unconfined_limit),
];

fn free_spectrum() -> Outcome {
    for (d, n) in [(1, 10), (2, 6), (3, 4)] {
        let cfg = lib(OscillatorConfig::new(d, n, 0.0))?;
        let spec = lib(dense_eigen(&lib(HamiltonianMatrix::assemble_dense(&cfg))?))?;
        let mut expected: Vec<f64> = (0..cfg.dim()).map(|s| cfg.kinetic_quanta(s) as f64).collect();
        expected.sort_by(f64::total_cmp);
        let dev = spec.eigenvalues.iter().zip(&expected).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        ensure(dev <= 1e-12, || format!("d={d} N={n}: {dev:e}"))?;
        if d == 2 {
            let level = spec.levels().into_iter().find(|l| l.energy == 5.0);
            ensure(level.is_some_and(|l| l.multiplicity == 2), || "5ε doublet missing".into())?;
        }
    }
    Ok("λ=0 spectra exact, 5ε doublet at d=2".into())
}

fn residuals_orthonormality() -> Outcome {
    let cfg = lib(OscillatorConfig::new(2, 9, 1.5))?;
    let spec = lib(dense_eigen(&lib(HamiltonianMatrix::assemble_dense(&cfg))?))?;
    let defect = spec.orthonormality_defect().unwrap_or(f64::INFINITY);
    ensure(spec.metadata.converged, || format!("residual {:e} > {:e}", spec.max_residual(), spec.metadata.tol))?;
    ensure(defect <= 1e-10, || format!("orthonormality defect {defect:e}"))?;
    Ok(format!("max residual {:.1e}, defect {defect:.1e}", spec.max_residual()))
}

fn lanczos_vs_dense() -> Outcome {
    let cfg = lib(OscillatorConfig::new(2, 10, 1.0))?;
    let dense = lib(dense_eigen(&lib(HamiltonianMatrix::assemble_dense(&cfg))?))?;
    let sparse = lib(HamiltonianMatrix::assemble_sparse(&cfg))?;
    let spec = lib(lanczos_lowest(&sparse, &LanczosOptions::new(5)))?;
    let dev = spec.eigenvalues.iter().zip(&dense.eigenvalues).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    ensure(spec.metadata.converged && spec.max_residual() <= 1e-8, || {
        format!("residual {:e}", spec.max_residual())
    })?;
    ensure(dev <= 1e-8, || format!("deviation {dev:e}"))?;
    Ok(format!("lowest 5 agree to {dev:.1e}"))
}

fn variational_monotonicity() -> Outcome {
    let mut prev = f64::INFINITY;
    for n in [4, 8, 16, 32] {
        let cfg = lib(OscillatorConfig::new(1, n, 2.0))?;
        let e = lib(dense_eigen(&lib(HamiltonianMatrix::assemble_dense(&cfg))?))?.eigenvalues[0];
        ensure(e <= prev, || format!("ground level rose to {e} at N={n}"))?;
        prev = e;
    }
    Ok(format!("ground level {prev:.12} at N=32"))
}

/// Relative deviations of the lowest three levels from `λ(r + ½)`.
pub fn unconfined_deviation(n: usize, lambda: f64) -> Result<[f64; 3]> {
    let cfg = OscillatorConfig::new(1, n, lambda)?;
    let spec = dense_eigen(&HamiltonianMatrix::assemble_dense(&cfg)?)?;
    let mut out = [0.0; 3];
    for (r, slot) in out.iter_mut().enumerate() {
        let exact = lambda * (r as f64 + 0.5);
        *slot = (spec.eigenvalues[r] - exact).abs() / exact;
    }
    Ok(out)
}

fn unconfined_limit() -> Outcome {
    let dev = lib(unconfined_deviation(200, 100.0))?;
    ensure(dev.iter().all(|&x| x < 1e-3), || format!("relative deviations {dev:?}"))?;
    Ok(format!("relative deviations {:.1e} {:.1e} {:.1e}", dev[0], dev[1], dev[2]))
}

// ----------------------------------------------------------- perturbation

const PERTURBATION: &[(&str, CheckFn)] = &[
    ("e2_oracle", e2_oracle),
    ("e3_oracle", e3_oracle),
    ("appendix_even_odd", appendix_even_odd),
    ("combined_summands", combined_summands),
    ("series_consistency", series_consistency),
    ("convergence_order", convergence_order),
];

/// `(closed, direct, bound)` for each level, bound including closed-form rounding.
pub fn e2_oracle_rows(levels: &[usize], cutoff: usize) -> Result<Vec<(usize, f64, f64, f64)>> {
    let o = Oscillator1d::new(1.0)?;
    levels
        .iter()
        .map(|&r| {
            let est = o.e2_direct(r, cutoff)?;
            Ok((r, o.e2_closed(r), est.value, est.error_bound() + o.correction_rounding(r, 2)?))
        })
        .collect()
}

pub fn e3_oracle_rows(levels: &[usize], cutoff: usize) -> Result<Vec<(usize, f64, f64, f64)>> {
    let o = Oscillator1d::new(1.0)?;
    levels
        .iter()
        .map(|&r| {
            let est = o.e3_direct(r, cutoff)?;
            Ok((r, o.e3_closed(r), est.value, est.error_bound() + o.correction_rounding(r, 3)?))
        })
        .collect()
}

fn oracle_outcome(rows: Vec<(usize, f64, f64, f64)>) -> Outcome {
    let mut worst: f64 = 0.0;
    for (r, closed, direct, bound) in rows {
        let diff = (closed - direct).abs();
        ensure(diff <= bound, || format!("r={r}: |{closed:e} − {direct:e}| = {diff:e} > {bound:e}"))?;
        worst = worst.max(diff / bound.max(f64::MIN_POSITIVE));
    }
    Ok(format!("worst |Δ|/bound = {worst:.2}"))
}

fn e2_oracle() -> Outcome {
    oracle_outcome(lib(e2_oracle_rows(&[0, 1, 2, 5, 10], E2_DEFAULT_CUTOFF))?)
}

fn e3_oracle() -> Outcome {
    oracle_outcome(lib(e3_oracle_rows(&[0, 1, 2, 5], E3_DEFAULT_CUTOFF))?)
}

fn appendix_even_odd() -> Outcome {
    let o = lib(Oscillator1d::new(1.0))?;
    for q in 0..16 {
        let est = lib(o.e2_level_sum(q, 20_000))?;
        let closed = appendix_e2(&o, q);
        let slack = lib(o.correction_rounding(q, 2))?;
        ensure(est.contains(closed, slack), || format!("q={q}: {} vs {closed}", est.value))?;
        let parts = lib(o.e2_by_parts(q, 20_000))?;
        ensure(parts.contains(o.e2_closed(q), slack), || format!("A_q + B_q at q={q}"))?;
    }
    Ok("even and odd levels q < 16".into())
}

fn combined_summands() -> Outcome {
    for q in 2..=5 {
        let (r, p) = (q / 2, q % 2);
        for s in (0..=50).filter(|&s| s != r) {
            let combined = combined_summand(q, s);
            let level = if p == 0 { even_level_summand(r, s) } else { odd_level_summand(r, s) };
            let original = e2_summand(q, 2 * s + p);
            let tol = 4.0 * f64::EPSILON * combined.abs();
            ensure((combined - level).abs() <= tol && (combined - original).abs() <= tol, || {
                format!("q={q} s={s}")
            })?;
        }
    }
    Ok("q ∈ {2,3,4,5}, s ≤ 50".into())
}

/// Largest relative gap between the unified series and the sum of the four
/// closed-form corrections over `r < levels`.
pub fn series_consistency_deviation(lambdas: &[f64], levels: usize) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &lambda in lambdas {
        let o = Oscillator1d::new(lambda)?;
        for r in 0..levels {
            let total = o.e0(r) + o.e1(r) + o.e2_closed(r) + o.e3_closed(r);
            worst = worst.max((o.energy_series(r, 3)? - total).abs() / total.abs());
        }
    }
    Ok(worst)
}

fn series_consistency() -> Outcome {
    let worst = lib(series_consistency_deviation(&[0.1, 1.0, 3.0], 50))?;
    ensure(worst <= 1e-14, || format!("relative deviation {worst:e}"))?;
    Ok(format!("max relative deviation {worst:.1e}"))
}

/// Fitted log-log slopes of `Δ_m(λ)` for `m = 1, 2, 3` at level `r`.
pub fn convergence_slopes(n: usize, r: usize, lambdas: &[f64]) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (m, slot) in (1..=3).zip(out.iter_mut()) {
        let deltas = lambdas
            .iter()
            .map(|&l| series_deviation(&OscillatorConfig::new(1, n, l)?, r, m))
            .collect::<Result<Vec<_>>>()?;
        *slot = fit_loglog_slope(lambdas, &deltas)?;
    }
    Ok(out)
}

fn convergence_order() -> Outcome {
    let slopes = lib(convergence_slopes(60, 0, &[0.1, 0.2, 0.4]))?;
    for (m, &slope) in (1..=3).zip(&slopes) {
        let need = 2.0 * m as f64 + 1.5;
        ensure(slope >= need, || format!("m={m}: slope {slope:.3} < {need}"))?;
    }
    Ok(format!("slopes {:.3} {:.3} {:.3}", slopes[0], slopes[1], slopes[2]))
}

/// Dense eigenvalues for the literal-basis quadrature matrix of `d = 1`.
///
/// Used to confirm that the basis phase convention leaves the spectrum
/// unchanged.
pub fn literal_basis_spectrum(n: usize, lambda: f64) -> Result<Vec<f64>> {
    let rule = GaussLegendre::new(DEFAULT_QUADRATURE_ORDER)?;
    let g = BoxGeometry::unit();
    let m = DenseMatrix::from_fn(n, |s, t| {
        let kinetic = if s == t { ((s + 1) * (s + 1)) as f64 } else { 0.0 };
        kinetic + potential_quadrature(s, t, lambda, &g, &rule, false)
    });
    Ok(dense_eigen_matrix(&m)?.eigenvalues)
}
