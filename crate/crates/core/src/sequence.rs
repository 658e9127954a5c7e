//! Recursion coefficient sequences.
//!
//! A sequence is a finite head of explicit `(a_n, b_n)` values followed by a
//! constant tail `(a_inf, b_inf)`. Named families are stored the same way with
//! an empty head, so every sequence answers `a(n)` and `b(n)` for any `n`.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Chebyshev,
    Constant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    Named(Family),
    TabulatedWithTail,
}

/// Diagonal (`a_n`) and off-diagonal (`b_n > 0`) coefficients of a symmetric
/// tridiagonal operator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSequence {
    a: Vec<f64>,
    b: Vec<f64>,
    a_inf: f64,
    b_inf: f64,
    kind: SequenceKind,
}

impl CoefficientSequence {
    /// `a_n = 0`, `b_n = 1/2`: second-kind Chebyshev polynomials.
    pub fn chebyshev() -> Self {
        Self {
            a: Vec::new(),
            b: Vec::new(),
            a_inf: 0.0,
            b_inf: 0.5,
            kind: SequenceKind::Named(Family::Chebyshev),
        }
    }

    pub fn constant(a: f64, b: f64) -> Result<Self> {
        check_tail(a, b)?;
        Ok(Self {
            a: Vec::new(),
            b: Vec::new(),
            a_inf: a,
            b_inf: b,
            kind: SequenceKind::Named(Family::Constant),
        })
    }

    /// Explicit head values followed by the constant tail. The two tables may
    /// have different lengths; each falls back to its own tail value.
    pub fn tabulated(a: Vec<f64>, b: Vec<f64>, a_inf: f64, b_inf: f64) -> Result<Self> {
        check_tail(a_inf, b_inf)?;
        if let Some((n, v)) = a.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidSequence(format!(
                "a[{n}] = {v} is not finite"
            )));
        }
        if let Some((n, v)) = b
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::InvalidSequence(format!(
                "b[{n}] = {v} must be finite and strictly positive"
            )));
        }
        Ok(Self {
            a,
            b,
            a_inf,
            b_inf,
            kind: SequenceKind::TabulatedWithTail,
        })
    }

    #[inline]
    pub fn a(&self, n: usize) -> f64 {
        self.a.get(n).copied().unwrap_or(self.a_inf)
    }

    #[inline]
    pub fn b(&self, n: usize) -> f64 {
        self.b.get(n).copied().unwrap_or(self.b_inf)
    }

    pub fn a_inf(&self) -> f64 {
        self.a_inf
    }

    pub fn b_inf(&self) -> f64 {
        self.b_inf
    }

    pub fn kind(&self) -> SequenceKind {
        self.kind
    }

    /// Number of explicitly stored entries (the longer of the two tables).
    pub fn head_len(&self) -> usize {
        self.a.len().max(self.b.len())
    }

    pub fn head_a(&self) -> &[f64] {
        &self.a
    }

    pub fn head_b(&self) -> &[f64] {
        &self.b
    }

    /// Endpoints `a_inf ± 2 b_inf` of the continuous spectrum generated by the tail.
    pub fn band(&self) -> (f64, f64) {
        (self.a_inf - 2.0 * self.b_inf, self.a_inf + 2.0 * self.b_inf)
    }

    /// Copy with the first `len` entries of both tables made explicit, so the
    /// leading coefficients can be edited.
    pub(crate) fn materialized(&self, len: usize) -> (Vec<f64>, Vec<f64>) {
        let n = len.max(self.head_len());
        let a = (0..n).map(|k| self.a(k)).collect();
        let b = (0..n).map(|k| self.b(k)).collect();
        (a, b)
    }
}

fn check_tail(a_inf: f64, b_inf: f64) -> Result<()> {
    if !a_inf.is_finite() {
        return Err(Error::InvalidSequence(format!(
            "a_inf = {a_inf} is not finite"
        )));
    }
    if !(b_inf.is_finite() && b_inf > 0.0) {
        return Err(Error::InvalidSequence(format!(
            "b_inf = {b_inf} must be finite and strictly positive"
        )));
    }
    Ok(())
}
