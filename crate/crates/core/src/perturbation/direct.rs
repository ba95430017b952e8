//! Truncated direct sums for the second- and third-order corrections, with
//! integral-comparison tail bounds and floating-point rounding bounds.

use std::f64::consts::PI;

use super::Oscillator1d;
use crate::error::{Error, Result};
use crate::numerics::{CompensatedSum, UNIT_ROUNDOFF};

/// Relative rounding allowance per summand, in units of the unit roundoff.
const TERM_ROUNDING: f64 = 20.0;

/// Default cutoff for the second-order sum.
pub const E2_DEFAULT_CUTOFF: usize = 100_000;
/// Default cutoff for the third-order double sum.
pub const E3_DEFAULT_CUTOFF: usize = 10_000;

/// A truncated sum together with what truncation and rounding may have cost.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumEstimate {
    pub value: f64,
    /// Bound on the magnitude of the dropped tail.
    pub tail_bound: f64,
    /// Bound on the accumulated floating-point error of `value`.
    pub rounding_bound: f64,
    pub terms: usize,
}

impl SumEstimate {
    pub fn error_bound(&self) -> f64 {
        self.tail_bound + self.rounding_bound
    }

    /// Whether `exact` lies within the error bound, widened by `extra`.
    pub fn contains(&self, exact: f64, extra: f64) -> bool {
        (self.value - exact).abs() <= self.error_bound() + extra
    }

    fn scaled(self, factor: f64) -> SumEstimate {
        SumEstimate {
            value: self.value * factor,
            tail_bound: self.tail_bound * factor.abs(),
            rounding_bound: self.rounding_bound * factor.abs() + UNIT_ROUNDOFF * (self.value * factor).abs(),
            terms: self.terms,
        }
    }
}

fn estimate(acc: &CompensatedSum, tail_bound: f64, terms: usize) -> SumEstimate {
    SumEstimate {
        value: acc.value(),
        tail_bound,
        rounding_bound: TERM_ROUNDING * UNIT_ROUNDOFF * acc.abs_total(),
        terms,
    }
}

/// Split `Σ_{s=0}^{M} f(s)` into its even- and odd-index parts:
/// `Σ_{s=0}^{(M − M mod 2)/2} f(2s)` and `Σ_{s=0}^{(M + M mod 2)/2 − 1} f(2s+1)`.
pub fn parity_split(f: impl Fn(usize) -> f64, m: usize) -> (f64, f64) {
    let even: CompensatedSum = (0..=(m - m % 2) / 2).map(|s| f(2 * s)).collect();
    let odd: CompensatedSum = (0..(m + m % 2) / 2).map(|s| f(2 * s + 1)).collect();
    (even.value(), odd.value())
}

/// `(s+1)² / ((q−s)⁵ (q+s+2)⁵) · cos²((q−s)π/2)`, with the cosine as a
/// parity test. The excluded term `s = q` is returned as 0.
pub fn e2_summand(q: usize, s: usize) -> f64 {
    if s == q || (q + s) % 2 == 1 {
        return 0.0;
    }
    let diff = q as f64 - s as f64;
    let sum = (q + s + 2) as f64;
    ((s + 1) as f64).powi(2) / (diff.powi(5) * sum.powi(5))
}

/// The parity-unified summand shared by `A_q` and `B_q`:
/// `(2s+1+p)² / ((2r−2s)⁵ (q+2s+2+p)⁵)` with `p = q mod 2`, `r = ⌊q/2⌋`.
/// The excluded term `s = r` is returned as 0.
pub fn combined_summand(q: usize, s: usize) -> f64 {
    let (r, p) = (q / 2, q % 2);
    if s == r {
        return 0.0;
    }
    let diff = 2.0 * (r as f64 - s as f64);
    let sum = (q + 2 * s + 2 + p) as f64;
    ((2 * s + 1 + p) as f64).powi(2) / (diff.powi(5) * sum.powi(5))
}

/// Even-level summand `(2s+1)² / (2¹⁰ (r−s)⁵ (r+s+1)⁵)` for level `q = 2r`.
pub fn even_level_summand(r: usize, s: usize) -> f64 {
    if s == r {
        return 0.0;
    }
    let diff = r as f64 - s as f64;
    ((2 * s + 1) as f64).powi(2) / (1024.0 * diff.powi(5) * ((r + s + 1) as f64).powi(5))
}

/// Odd-level summand `4(s+1)² / (2¹⁰ (r−s)⁵ (r+s+2)⁵)` for level `q = 2r+1`.
pub fn odd_level_summand(r: usize, s: usize) -> f64 {
    if s == r {
        return 0.0;
    }
    let diff = r as f64 - s as f64;
    4.0 * ((s + 1) as f64).powi(2) / (1024.0 * diff.powi(5) * ((r + s + 2) as f64).powi(5))
}

/// `A_q = Σ_{s<r} combined_summand(q, s)`, a finite sum.
pub fn a_q(q: usize) -> f64 {
    (0..q / 2).map(|s| combined_summand(q, s)).collect::<CompensatedSum>().value()
}

/// `B_q` truncated at `s ≤ cutoff` (combined index).
pub fn b_q(q: usize, cutoff: usize) -> Result<SumEstimate> {
    let r = q / 2;
    if cutoff <= r {
        return Err(Error::Domain(format!("cutoff {cutoff} must exceed r = {r}")));
    }
    let acc: CompensatedSum = (r + 1..=cutoff).rev().map(|s| combined_summand(q, s)).collect();
    // combined index s is original index 2s + p
    let original = 2 * cutoff + q % 2;
    Ok(estimate(&acc, e2_tail(q, original), cutoff - r))
}

/// `Σ_{s > cutoff} 1/(s−q)⁸ ≤ 1/(7 (cutoff−q)⁷)`, bounding the tail of
/// [`e2_summand`] since `(s+1)²/(q+s+2)⁵ ≤ 1/(s−q)³` for `s > q`.
fn e2_tail(q: usize, cutoff: usize) -> f64 {
    1.0 / (7.0 * ((cutoff - q) as f64).powi(7))
}

/// Second-order correction from the Maple expression for level `q`,
/// `π⁴/(11520 n²) − 5π²/(768 n⁴) + 7/(128 n⁶)` with `n = q + 1`, times `λ⁴ε`.
pub fn appendix_e2(osc: &Oscillator1d, q: usize) -> f64 {
    let n2 = ((q + 1) as f64).powi(2);
    let l4 = osc.lambda().powi(4);
    l4 * osc.epsilon()
        * (PI.powi(4) / (11520.0 * n2) - 5.0 * PI * PI / (768.0 * n2 * n2) + 7.0 / (128.0 * n2 * n2 * n2))
}

impl Oscillator1d {
    /// `E_r^(2) = Σ_{s≠r} V_rs²/ε_rs` truncated at `s ≤ cutoff`.
    pub fn e2_direct(&self, r: usize, cutoff: usize) -> Result<SumEstimate> {
        if cutoff <= r {
            return Err(Error::Domain(format!("cutoff {cutoff} must exceed r = {r}")));
        }
        let acc: CompensatedSum = (0..=cutoff).rev().map(|s| e2_summand(r, s)).collect();
        let terms = (0..=cutoff).filter(|&s| s != r && (s + r).is_multiple_of(2)).count();
        Ok(estimate(&acc, e2_tail(r, cutoff), terms).scaled(self.e2_prefactor(r)))
    }

    /// `4λ⁴ε(q+1)²(A_q + B_q)` with `B_q` truncated at combined index `cutoff`.
    pub fn e2_by_parts(&self, q: usize, cutoff: usize) -> Result<SumEstimate> {
        let b = b_q(q, cutoff)?;
        let a = a_q(q);
        let mut acc = CompensatedSum::new();
        acc.add(a);
        acc.add(b.value);
        let sum = SumEstimate {
            value: acc.value(),
            tail_bound: b.tail_bound,
            // every A_q summand is positive, so Σ|terms| = A_q
            rounding_bound: b.rounding_bound + TERM_ROUNDING * UNIT_ROUNDOFF * a,
            terms: b.terms + q / 2,
        };
        Ok(sum.scaled(self.e2_prefactor(q)))
    }

    /// Level `q` via the even-level (`q = 2r`) or odd-level (`q = 2r+1`)
    /// summand, truncated at `s ≤ cutoff`.
    pub fn e2_level_sum(&self, q: usize, cutoff: usize) -> Result<SumEstimate> {
        let r = q / 2;
        if cutoff <= r {
            return Err(Error::Domain(format!("cutoff {cutoff} must exceed r = {r}")));
        }
        let summand = if q.is_multiple_of(2) { even_level_summand } else { odd_level_summand };
        let acc: CompensatedSum = (0..=cutoff).rev().map(|s| summand(r, s)).collect();
        let tail = e2_tail(q, 2 * cutoff + q % 2);
        Ok(estimate(&acc, tail, cutoff).scaled(self.e2_prefactor(q)))
    }

    fn e2_prefactor(&self, r: usize) -> f64 {
        4.0 * self.lambda().powi(4) * self.epsilon() * ((r + 1) as f64).powi(2)
    }

    /// `E_r^(3) = Σ_{s≠r} Σ_{t≠r} V_rs V_st V_tr / (ε_rs ε_rt) − V_rr Σ_{s≠r} V_rs²/ε_rs²`
    /// with both indices truncated at `cutoff`.
    ///
    /// With `a_s = V_rs/ε_rs` this is evaluated as
    /// `Σ_s a_s² (V_ss − V_rr) + 2 Σ_{s<t} a_s a_t V_st`, inner diagonal terms
    /// included.
    pub fn e3_direct(&self, r: usize, cutoff: usize) -> Result<SumEstimate> {
        if cutoff <= r {
            return Err(Error::Domain(format!("cutoff {cutoff} must exceed r = {r}")));
        }
        let l2 = self.lambda() * self.lambda();
        let eps = self.epsilon();
        let rp1 = (r + 1) as f64;
        let labels: Vec<usize> = (r % 2..=cutoff).step_by(2).filter(|&s| s != r).collect();
        let a: Vec<f64> = labels
            .iter()
            .map(|&s| {
                let diff = r as f64 - s as f64;
                let sum = (r + s + 2) as f64;
                2.0 * l2 * rp1 * (s + 1) as f64 / (diff.powi(3) * sum.powi(3))
            })
            .collect();

        let mut total = CompensatedSum::new();
        for (i, (&s, &a_s)) in labels.iter().zip(&a).enumerate() {
            let sp1 = (s + 1) as f64;
            // V_ss − V_rr
            let w = l2 * eps / 8.0 * (1.0 / (rp1 * rp1) - 1.0 / (sp1 * sp1));
            total.add(a_s * a_s * w);

            let mut inner = CompensatedSum::new();
            for (&t, &a_t) in labels[i + 1..].iter().zip(&a[i + 1..]) {
                let diff = (t - s) as f64;
                let sum = (s + t + 2) as f64;
                inner.add(a_t * (t + 1) as f64 / (diff * diff * sum * sum));
            }
            // 2 a_s Σ_t a_t V_st with V_st = 2λ²ε(s+1)(t+1)/((s−t)²(s+t+2)²)
            let factor = 4.0 * l2 * eps * a_s * sp1;
            total.add_bounded(factor * inner.value(), factor.abs() * inner.abs_total());
        }

        let gap = (cutoff - r) as f64;
        let tail_a = 2.0 * l2 * rp1 * (gap.powi(-4) / 4.0 + rp1 * gap.powi(-5) / 5.0);
        let partial_a: f64 = a.iter().map(|x| x.abs()).sum();
        let w_max = l2 * eps / 8.0;
        let tail = w_max * tail_a * (2.0 * partial_a * (1.0 + 4.0 * UNIT_ROUNDOFF) + tail_a);
        let pairs = labels.len() * (labels.len() + 1) / 2;
        Ok(estimate(&total, tail, pairs))
    }
}
