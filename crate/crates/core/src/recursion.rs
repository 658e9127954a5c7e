//! First-kind, second-kind and abbreviated polynomials of a symmetric
//! three-term recursion
//!
//! ```text
//! x d_n = a_n d_n + b_{n-1} d_{n-1} + b_n d_{n+1}
//! ```
//!
//! with `p_0 = 1, p_1 = (x - a_0)/b_0` and `q_0 = 0, q_1 = 1/b_0`. Everything is
//! evaluated by forward recursion.

use std::ops::{Add, Div, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sequence::CoefficientSequence;

/// Argument type of the recursion: real `x` or complex `z`.
pub(crate) trait Scalar:
    Copy + From<f64> + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self>
{
}

impl Scalar for f64 {}
impl Scalar for Complex64 {}

/// Runs the recursion for both kinds at once up to index `n_max`.
pub(crate) fn recur<T: Scalar>(
    a: impl Fn(usize) -> f64,
    b: impl Fn(usize) -> f64,
    z: T,
    n_max: usize,
) -> (Vec<T>, Vec<T>) {
    let mut p = Vec::with_capacity(n_max + 1);
    let mut q = Vec::with_capacity(n_max + 1);
    p.push(T::from(1.0));
    q.push(T::from(0.0));
    if n_max == 0 {
        return (p, q);
    }
    let b0 = T::from(b(0));
    p.push((z - T::from(a(0))) / b0);
    q.push(T::from(1.0) / b0);
    for n in 1..n_max {
        let shift = z - T::from(a(n));
        let back = T::from(b(n - 1));
        let fwd = T::from(b(n));
        p.push((shift * p[n] - back * p[n - 1]) / fwd);
        q.push((shift * q[n] - back * q[n - 1]) / fwd);
    }
    (p, q)
}

/// `p_0..=p_{n_max}` and `q_0..=q_{n_max}` at one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomials {
    pub p: Vec<f64>,
    pub q: Vec<f64>,
}

impl Polynomials {
    /// `P_n = (p_n, p_{n+1})`. Needs `n + 1` to be in range.
    pub fn first_kind_vector(&self, n: usize) -> PolyVector {
        PolyVector::new(self.p[n], self.p[n + 1], n as i64)
    }

    /// `Q_n = (q_n, q_{n+1})`.
    pub fn second_kind_vector(&self, n: usize) -> PolyVector {
        PolyVector::new(self.q[n], self.q[n + 1], n as i64)
    }
}

pub fn eval_polynomials(seq: &CoefficientSequence, x: f64, n_max: usize) -> Result<Polynomials> {
    if !x.is_finite() {
        return Err(Error::NonFinite("x"));
    }
    let (p, q) = recur(|n| seq.a(n), |n| seq.b(n), x, n_max);
    Ok(Polynomials { p, q })
}

/// Complex-argument version of [`eval_polynomials`], returned as `(p, q)`.
pub fn eval_polynomials_complex(
    seq: &CoefficientSequence,
    z: Complex64,
    n_max: usize,
) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("z"));
    }
    Ok(recur(|n| seq.a(n), |n| seq.b(n), z, n_max))
}

/// Two consecutive entries `(d_n, d_{n+1})` of a recursion solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyVector {
    pub lower: f64,
    pub upper: f64,
    pub index: i64,
}

impl PolyVector {
    pub fn new(lower: f64, upper: f64, index: i64) -> Self {
        Self {
            lower,
            upper,
            index,
        }
    }
}

/// The 2×2 step `D_n = S_n D_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub entries: [[f64; 2]; 2],
}

impl TransferMatrix {
    fn from_coefficients(a_n: f64, b_prev: f64, b_n: f64, x: f64) -> Self {
        Self {
            entries: [[0.0, 1.0], [-b_prev / b_n, (x - a_n) / b_n]],
        }
    }

    pub fn apply(&self, v: PolyVector) -> PolyVector {
        let [[m00, m01], [m10, m11]] = self.entries;
        PolyVector::new(
            m00 * v.lower + m01 * v.upper,
            m10 * v.lower + m11 * v.upper,
            v.index + 1,
        )
    }

    pub fn determinant(&self) -> f64 {
        let [[m00, m01], [m10, m11]] = self.entries;
        m00 * m11 - m01 * m10
    }
}

pub fn transfer_matrix(seq: &CoefficientSequence, n: usize, x: f64) -> Result<TransferMatrix> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "transfer matrix index must be >= 1".into(),
        ));
    }
    Ok(TransferMatrix::from_coefficients(
        seq.a(n),
        seq.b(n - 1),
        seq.b(n),
        x,
    ))
}

/// `b_{n-1} [p_{n-1} q_n - p_n q_{n-1}]`, identically 1.
pub fn wronskian(seq: &CoefficientSequence, x: f64, n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument(
            "wronskian index must be >= 1".into(),
        ));
    }
    let polys = eval_polynomials(seq, x, n)?;
    let (p, q) = (&polys.p, &polys.q);
    Ok(seq.b(n - 1) * (p[n - 1] * q[n] - p[n] * q[n - 1]))
}

/// Abbreviated polynomials: the first-kind vectors of the sequence with its
/// first two entries removed, `P~_n = S_{n+2} P~_{n-1}`.
///
/// Returns `P~_{-2} ..= P~_{n_max}`, so element `k` has index `k - 2`.
pub fn abbreviated_polynomials(
    seq: &CoefficientSequence,
    x: f64,
    n_max: i64,
) -> Result<Vec<PolyVector>> {
    if n_max < -2 {
        return Err(Error::InvalidArgument(
            "abbreviated index must be >= -2".into(),
        ));
    }
    if !x.is_finite() {
        return Err(Error::NonFinite("x"));
    }
    let mut out = Vec::with_capacity((n_max + 3) as usize);
    out.push(PolyVector::new(0.0, 0.0, -2));
    if n_max >= -1 {
        out.push(PolyVector::new(0.0, 1.0, -1));
    }
    for n in 0..=n_max {
        let k = (n + 2) as usize;
        let step = TransferMatrix::from_coefficients(seq.a(k), seq.b(k - 1), seq.b(k), x);
        let prev = *out.last().expect("seeded above");
        out.push(step.apply(prev));
    }
    Ok(out)
}
