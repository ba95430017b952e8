//! Flat basis labels, their base-`N` multi-indices, and the binary coupling
//! predicates `α_i` and `c_i` between pairs of labels.
//!
//! A label `s ∈ [0, N^d)` corresponds to the digit vector `(s_1, …, s_d)`
//! with `s_i = ⌊s / N^(d−i)⌋ mod N`, so axis 1 is the most significant digit.
//! Axes are 1-based throughout the public API.
//!
//! The `α_i` and `c_i` matrices are never stored; every function here is an
//! `O(d)` predicate on a pair of labels. [`structure`] materializes them as
//! small integer matrices for identity checks.

use crate::error::{Error, Result};

pub mod structure;

/// Per-axis basis size `N` and dimension `d` of a product basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    n: usize,
    d: usize,
    size: usize,
}

/// The digit vector `(s_1, …, s_d)` of a basis label.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<usize>);

impl MultiIndex {
    pub fn components(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Component on a 1-based axis.
    pub fn get(&self, axis: usize) -> Option<usize> {
        axis.checked_sub(1).and_then(|i| self.0.get(i).copied())
    }
}

impl From<Vec<usize>> for MultiIndex {
    fn from(v: Vec<usize>) -> Self {
        MultiIndex(v)
    }
}

impl Shape {
    /// Fails when `N < 1`, `d < 1`, or `N^d` overflows `usize`.
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("basis size N must be at least 1".into()));
        }
        if d == 0 {
            return Err(Error::Domain("dimension d must be at least 1".into()));
        }
        let size = u32::try_from(d)
            .ok()
            .and_then(|e| n.checked_pow(e))
            .ok_or_else(|| Error::Size(format!("N^d = {n}^{d} overflows the index type")))?;
        Ok(Shape { n, d, size })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Number of basis states, `N^d`.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Positional weight `N^(d−axis)` of a 1-based axis.
    pub fn stride(&self, axis: usize) -> usize {
        debug_assert!((1..=self.d).contains(&axis));
        self.n.pow((self.d - axis) as u32)
    }

    fn check_label(&self, s: usize) -> Result<()> {
        if s >= self.size {
            return Err(Error::Domain(format!(
                "label {s} outside [0, {}) for N={}, d={}",
                self.size, self.n, self.d
            )));
        }
        Ok(())
    }

    fn check_axis(&self, axis: usize) -> Result<()> {
        if axis == 0 || axis > self.d {
            return Err(Error::Domain(format!("axis {axis} outside [1, {}]", self.d)));
        }
        Ok(())
    }

    /// Digit of `s` on a 1-based axis. No range checks.
    #[inline]
    pub fn digit(&self, s: usize, axis: usize) -> usize {
        (s / self.stride(axis)) % self.n
    }

    /// Iterator over the digits of `s`, axis 1 first. No range checks.
    pub fn digits(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.d).map(move |axis| self.digit(s, axis))
    }

    pub fn decompose(&self, s: usize) -> Result<MultiIndex> {
        self.check_label(s)?;
        Ok(MultiIndex(self.digits(s).collect()))
    }

    pub fn compose(&self, m: &MultiIndex) -> Result<usize> {
        if m.len() != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, actual: m.len() });
        }
        m.0.iter().try_fold(0usize, |acc, &c| {
            if c >= self.n {
                Err(Error::Domain(format!("component {c} outside [0, {})", self.n)))
            } else {
                Ok(acc * self.n + c)
            }
        })
    }

    /// `α_st = Σ_i δ(s_i, t_i)`: the number of axes on which two labels agree.
    pub fn agreement(&self, s: usize, t: usize) -> Result<usize> {
        self.check_label(s)?;
        self.check_label(t)?;
        Ok(self.agreement_unchecked(s, t))
    }

    #[inline]
    pub(crate) fn agreement_unchecked(&self, s: usize, t: usize) -> usize {
        self.digits(s).zip(self.digits(t)).filter(|(a, b)| a == b).count()
    }

    /// Element `(s, t)` of `α_i`: 1 when the labels agree on `axis`.
    pub fn alpha_element(&self, axis: usize, s: usize, t: usize) -> Result<u8> {
        self.check_axis(axis)?;
        self.check_label(s)?;
        self.check_label(t)?;
        Ok(u8::from(self.digit(s, axis) == self.digit(t, axis)))
    }

    /// Element `(s, t)` of `c_i`: 1 when the labels agree on every axis other
    /// than `axis` (this includes `s = t`).
    pub fn c_element(&self, axis: usize, s: usize, t: usize) -> Result<u8> {
        self.check_axis(axis)?;
        self.check_label(s)?;
        self.check_label(t)?;
        let agree_elsewhere = (1..=self.d)
            .filter(|&j| j != axis)
            .all(|j| self.digit(s, j) == self.digit(t, j));
        Ok(u8::from(agree_elsewhere))
    }

    /// `c_i` evaluated as `δ_st + (1 − α_i,st)·δ(α_st, d − 1)`.
    ///
    /// Must agree with [`Shape::c_element`] on every pair.
    pub fn c_element_via_alpha(&self, axis: usize, s: usize, t: usize) -> Result<u8> {
        let alpha_i = self.alpha_element(axis, s, t)?;
        let alpha = self.agreement_unchecked(s, t);
        let same = u8::from(s == t);
        let single = u8::from(alpha + 1 == self.d);
        Ok(same + (1 - alpha_i) * single)
    }

    /// The unique 1-based axis where `s` and `t` differ,
    /// `k = Σ_j j·(1 − δ(s_j, t_j))`.
    ///
    /// Requires `agreement(s, t) = d − 1`.
    pub fn differing_axis(&self, s: usize, t: usize) -> Result<usize> {
        self.check_label(s)?;
        self.check_label(t)?;
        let alpha = self.agreement_unchecked(s, t);
        if alpha + 1 != self.d {
            return Err(Error::Contract(format!(
                "labels {s} and {t} agree on {alpha} of {} axes; exactly one must differ",
                self.d
            )));
        }
        Ok(self.differing_axis_unchecked(s, t))
    }

    #[inline]
    pub(crate) fn differing_axis_unchecked(&self, s: usize, t: usize) -> usize {
        (1..=self.d)
            .map(|j| j * usize::from(self.digit(s, j) != self.digit(t, j)))
            .sum()
    }
}
