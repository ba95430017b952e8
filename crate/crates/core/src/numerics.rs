//! Compensated floating-point accumulation.

/// Unit roundoff of `f64` (half an ulp of 1).
pub const UNIT_ROUNDOFF: f64 = f64::EPSILON / 2.0;

/// Neumaier's variant of Kahan summation.
///
/// Also tracks `Σ|x|`, which bounds the rounding error of the sum together
/// with the magnitude of the individual terms.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
    abs: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
        self.abs += x.abs();
    }

    /// Add `x` that was itself computed from terms of total size
    /// `magnitude ≥ |x|`, so [`abs_total`](Self::abs_total) keeps bounding
    /// the rounding error.
    pub fn add_bounded(&mut self, x: f64, magnitude: f64) {
        self.add(x);
        self.abs += (magnitude - x.abs()).max(0.0);
    }

    /// Merge another partial sum into this one.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
        self.abs += other.abs - other.sum.abs() - other.comp.abs();
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }

    /// `Σ|x|` over everything added so far.
    pub fn abs_total(&self) -> f64 {
        self.abs
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Error-free transformation `a + b = s + e`.
#[inline]
pub fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

/// Error-free transformation `a · b = p + e`.
#[inline]
pub fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Unevaluated sum `hi + lo` carrying roughly twice the working precision.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub fn add_f64(self, x: f64) -> Self {
        let (s, e) = two_sum(self.hi, x);
        let (hi, lo) = two_sum(s, e + self.lo);
        DoubleDouble { hi, lo }
    }

    /// Accumulate the exact product `a · b`.
    pub fn add_prod(self, a: f64, b: f64) -> Self {
        let (p, pe) = two_prod(a, b);
        let (s, e) = two_sum(self.hi, p);
        let (hi, lo) = two_sum(s, e + pe + self.lo);
        DoubleDouble { hi, lo }
    }

    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// Dot product accumulated in double-double precision.
pub fn dot_dd(x: &[f64], y: &[f64]) -> DoubleDouble {
    x.iter().zip(y).fold(DoubleDouble::default(), |acc, (&a, &b)| acc.add_prod(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_cancelled_bits() {
        let mut acc = CompensatedSum::new();
        acc.add(1.0);
        for _ in 0..1000 {
            acc.add(1e-16);
        }
        acc.add(-1.0);
        assert!((acc.value() - 1e-13).abs() < 1e-25);
        let naive: f64 = std::iter::once(1.0)
            .chain(std::iter::repeat_n(1e-16, 1000))
            .chain(std::iter::once(-1.0))
            .sum();
        assert!((naive - 1e-13).abs() > 1e-15);
    }

    #[test]
    fn merge_matches_sequential() {
        let xs: Vec<f64> = (1..2000).map(|k| 1.0 / (k as f64).powi(3)).collect();
        let whole: CompensatedSum = xs.iter().copied().collect();
        let mut left: CompensatedSum = xs[..700].iter().copied().collect();
        let right: CompensatedSum = xs[700..].iter().copied().collect();
        left.merge(&right);
        assert!((whole.value() - left.value()).abs() <= 2.0 * f64::EPSILON * whole.value());
        assert!((whole.abs_total() - left.abs_total()).abs() < 1e-12);
    }

    #[test]
    fn error_free_transforms_are_exact() {
        let (s, e) = two_sum(1.0, 1e-20);
        assert_eq!(s, 1.0);
        assert_eq!(e, 1e-20);
        let a = 1.0 + f64::EPSILON;
        let (p, e) = two_prod(a, a);
        assert_eq!(p, 1.0 + 2.0 * f64::EPSILON);
        assert_eq!(e, f64::EPSILON * f64::EPSILON);
    }

    #[test]
    fn double_double_dot() {
        let x = [1.0, 1e-17, -1.0];
        let y = [1.0, 1.0, 1.0];
        assert_eq!(dot_dd(&x, &y).value(), 1e-17);
    }
}
