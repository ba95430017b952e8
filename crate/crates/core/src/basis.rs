//! Particle-in-a-box eigenfunctions on `[−L, L]` and their products, plus
//! Gauss–Legendre inner products used to check matrix elements independently.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::indexing::Shape;

/// Default number of Gauss–Legendre nodes for [`quad_inner`].
pub const DEFAULT_QUADRATURE_ORDER: usize = 128;

/// Box `|x| ≤ L` with Dirichlet walls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxGeometry {
    half_width: f64,
}

impl BoxGeometry {
    pub fn new(half_width: f64) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::Domain(format!("box half-width must be positive, got {half_width}")));
        }
        Ok(BoxGeometry { half_width })
    }

    /// Unit half-width, `L = 1`.
    pub fn unit() -> Self {
        BoxGeometry { half_width: 1.0 }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    fn check(&self, x: f64) -> Result<()> {
        // one ulp of slack so that quadrature maps and ±L itself are accepted
        let l = self.half_width;
        if x.abs() > l + l * f64::EPSILON {
            return Err(Error::Domain(format!("x = {x} outside the box [-{l}, {l}]")));
        }
        Ok(())
    }

    /// Wave number `(r + 1)π / 2L` of level `r`.
    pub fn wave_number(&self, r: usize) -> f64 {
        (r as f64 + 1.0) * PI / (2.0 * self.half_width)
    }
}

/// Eigenfunction `φ_r(x)` of the kinetic operator, normalized on `[−L, L]`.
///
/// Even `r` gives `cos((r+1)πx/2L)/√L`, odd `r` gives `sin((r+1)πx/2L)/√L`.
pub fn phi(r: usize, x: f64, geom: &BoxGeometry) -> Result<f64> {
    geom.check(x)?;
    Ok(phi_unchecked(r, x, geom))
}

#[inline]
pub(crate) fn phi_unchecked(r: usize, x: f64, geom: &BoxGeometry) -> f64 {
    let arg = geom.wave_number(r) * x;
    let amp = if r.is_multiple_of(2) { arg.cos() } else { arg.sin() };
    amp / geom.half_width.sqrt()
}

/// `φ_r` written as a single phase-shifted cosine,
/// `cos(π/2 · sin²(rπ/2) − (r+1)πx/2L) / √L`.
pub fn phi_single_cosine(r: usize, x: f64, geom: &BoxGeometry) -> f64 {
    let shift = FRAC_PI_2 * (r as f64 * FRAC_PI_2).sin().powi(2);
    (shift - geom.wave_number(r) * x).cos() / geom.half_width.sqrt()
}

/// Sign `(−1)^⌊r/2⌋` relating [`phi`] to the basis in which the closed-form
/// Hamiltonian elements hold.
///
/// With `φ̃_r = (−1)^⌊r/2⌋ φ_r`, `⟨φ̃_s| x² |φ̃_t⟩` carries the sign of
/// `1/(s−t)² − 1/(s+t+2)²`, which is positive. In terms of `φ_r` itself the
/// off-diagonal elements alternate in sign with `(s−t)/2`. The two bases differ
/// by a diagonal ±1 similarity, so spectra are unaffected.
pub fn phase_convention(r: usize) -> f64 {
    if (r / 2).is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `φ̃_r = (−1)^⌊r/2⌋ φ_r`, the basis function the closed-form elements refer to.
pub fn phi_phased(r: usize, x: f64, geom: &BoxGeometry) -> Result<f64> {
    Ok(phase_convention(r) * phi(r, x, geom)?)
}

/// Analytic second derivative, `φ_r'' = −k_r² φ_r`.
pub fn phi_second_derivative(r: usize, x: f64, geom: &BoxGeometry) -> Result<f64> {
    let k = geom.wave_number(r);
    Ok(-k * k * phi(r, x, geom)?)
}

/// Product state `ψ_s(x⃗) = Π_i φ_{s_i}(x_i)`.
pub fn psi(s: usize, point: &[f64], shape: &Shape, geom: &BoxGeometry) -> Result<f64> {
    if point.len() != shape.d() {
        return Err(Error::DimensionMismatch { expected: shape.d(), actual: point.len() });
    }
    let digits = shape.decompose(s)?;
    digits
        .components()
        .iter()
        .zip(point)
        .try_fold(1.0, |acc, (&r, &x)| Ok(acc * phi(r, x, geom)?))
}

/// Gauss–Legendre nodes and weights on `[−1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Rule with `order` nodes, found by Newton iteration on `P_order`.
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::Domain(format!("quadrature order must be at least 2, got {order}")));
        }
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, dp) = legendre_with_derivative(n, x);
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f(x) dx`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum();
        half * sum
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `∫_{−L}^{L} f(x) g(x) dx` by Gauss–Legendre quadrature with `order` nodes.
pub fn quad_inner(
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    geom: &BoxGeometry,
    order: usize,
) -> Result<f64> {
    let rule = GaussLegendre::new(order)?;
    let l = geom.half_width();
    Ok(rule.integrate(-l, l, |x| f(x) * g(x)))
}

/// `⟨a| ½mω²x² |b⟩` in units of `ε`, i.e. `(λ²π²/16L²) ∫ φ_a x² φ_b dx`,
/// by quadrature. `phased` selects `φ̃_r` from [`phi_phased`] over `φ_r`.
pub fn potential_quadrature(
    a: usize,
    b: usize,
    lambda: f64,
    geom: &BoxGeometry,
    rule: &GaussLegendre,
    phased: bool,
) -> f64 {
    let l = geom.half_width();
    let sign = if phased { phase_convention(a) * phase_convention(b) } else { 1.0 };
    let integral = rule.integrate(-l, l, |x| phi_unchecked(a, x, geom) * x * x * phi_unchecked(b, x, geom));
    sign * lambda * lambda * PI * PI / (16.0 * l * l) * integral
}

/// `⟨r| −(ħ²/2m) d²/dx² |r⟩` in units of `ε` by quadrature, using the
/// analytic second derivative; `ħ²/2m = 4L²ε/π²`.
pub fn kinetic_quadrature(r: usize, geom: &BoxGeometry, rule: &GaussLegendre) -> f64 {
    let l = geom.half_width();
    let k = geom.wave_number(r);
    let integral = rule.integrate(-l, l, |x| {
        let p = phi_unchecked(r, x, geom);
        p * (-k * k * p)
    });
    -4.0 * l * l / (PI * PI) * integral
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_examples() {
        let g = BoxGeometry::new(2.5).unwrap();
        assert_eq!(phi(0, 0.0, &g).unwrap(), 1.0 / 2.5f64.sqrt());
        assert_eq!(phi(1, 0.0, &g).unwrap(), 0.0);
        assert!(phi(0, 2.5, &g).unwrap().abs() < 1e-16);
        assert!(phi(7, -2.5, &g).unwrap().abs() < 1e-15);
        assert!(matches!(phi(0, 2.6, &g), Err(Error::Domain(_))));
    }

    #[test]
    fn geometry_must_be_positive() {
        assert!(BoxGeometry::new(0.0).is_err());
        assert!(BoxGeometry::new(-1.0).is_err());
        assert!(BoxGeometry::new(f64::NAN).is_err());
    }

    #[test]
    fn psi_examples() {
        let g = BoxGeometry::new(0.5).unwrap();
        let sh = Shape::new(3, 2).unwrap();
        assert!((psi(0, &[0.0, 0.0], &sh, &g).unwrap() - 2.0).abs() < 1e-15);
        // (0,1): second digit odd
        assert_eq!(psi(1, &[0.0, 0.0], &sh, &g).unwrap(), 0.0);
        assert!(psi(0, &[0.5, 0.1], &sh, &g).unwrap().abs() < 1e-15);
        assert!(matches!(psi(0, &[0.0], &sh, &g), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn parity_and_single_cosine_form() {
        let g = BoxGeometry::new(1.7).unwrap();
        for r in 0..20 {
            for k in 0..=40 {
                let x = -1.7 + 3.4 * k as f64 / 40.0;
                let v = phi(r, x, &g).unwrap();
                let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
                assert!((phi(r, -x, &g).unwrap() - sign * v).abs() < 1e-14);
                assert!((phi_single_cosine(r, x, &g) - v).abs() < 1e-14, "r={r} x={x}");
            }
        }
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = GaussLegendre::new(5).unwrap();
        let wsum: f64 = rule.weights().iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
        // exact through degree 9
        let v = rule.integrate(-1.0, 1.0, |x| x.powi(8) + x.powi(3));
        assert!((v - 2.0 / 9.0).abs() < 1e-14);
        let v = rule.integrate(0.0, 2.0, |x| x * x);
        assert!((v - 8.0 / 3.0).abs() < 1e-14);
        assert!(GaussLegendre::new(1).is_err());
    }

    #[test]
    fn quad_inner_examples() {
        let g = BoxGeometry::unit();
        let p0 = |x| phi_unchecked(0, x, &g);
        let p1 = |x| phi_unchecked(1, x, &g);
        assert!((quad_inner(p0, p0, &g, 64).unwrap() - 1.0).abs() < 1e-12);
        assert!(quad_inner(p0, p1, &g, 64).unwrap().abs() < 1e-12);
        let x2p2 = |x: f64| x * x * phi_unchecked(2, x, &g);
        let integral = quad_inner(p0, x2p2, &g, 64).unwrap();
        // V_02 / ε = λ²π²/(16L²)·∫; φ_2 carries the phase −1
        let v = PI * PI / 16.0 * integral;
        assert!((v + 3.0 / 32.0).abs() < 1e-13, "{v}");
        let v_phased = phase_convention(0) * phase_convention(2) * v;
        assert!((v_phased - 3.0 / 32.0).abs() < 1e-13);
    }
    #[test]
    fn potential_and_kinetic_quadrature() {
        let rule = GaussLegendre::new(DEFAULT_QUADRATURE_ORDER).unwrap();
        for l in [1.0, 0.3, 4.0] {
            let g = BoxGeometry::new(l).unwrap();
            let v02 = potential_quadrature(0, 2, 1.0, &g, &rule, true);
            assert!((v02 - 3.0 / 32.0).abs() < 1e-13, "L={l} {v02}");
            assert!((potential_quadrature(0, 2, 1.0, &g, &rule, false) + 3.0 / 32.0).abs() < 1e-13);
            assert!(potential_quadrature(0, 1, 2.0, &g, &rule, true).abs() < 1e-13);
            for r in 0..10 {
                let t = kinetic_quadrature(r, &g, &rule);
                let exact = ((r + 1) * (r + 1)) as f64;
                assert!((t - exact).abs() < 1e-12 * exact);
            }
        }
    }
}
