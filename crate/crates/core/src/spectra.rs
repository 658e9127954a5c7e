//! Finite truncations of the (possibly deformed) Jacobi matrix and density
//! estimates built from them.
//!
//! Two estimators are provided. [`dos_finite_ratio`] evaluates the finite
//! polynomial ratio `-q_N(z)/p_N(z)`, optionally closing it with a
//! square-root terminator read off the last matrix row, which continues the
//! finite approximant analytically onto the real axis.
//! [`dos_eigen_histogram`] differentiates a monotone interpolant of the
//! cumulative spectral weight, with eigenvalues weighted by their Gauss
//! (Christoffel) weights.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::deformation::Deformation;
use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use crate::recursion::{recur, Scalar};
use crate::resolvent::{
    check_grid, clamp_density, evaluate_grid, terminator, DensityGrid, DensityMethod, Tail,
};
use crate::sequence::CoefficientSequence;

/// Bisection iterations per eigenvalue before giving up.
const MAX_BISECTION_STEPS: usize = 256;

/// The eigenvalue-CDF fit needs at least this many eigenvalues in the band.
pub const MIN_WINDOW_EIGENVALUES: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    offdiag: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidArgument(
                "matrix dimension must be >= 1".into(),
            ));
        }
        if offdiag.len() + 1 != diag.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} off-diagonal entries, got {}",
                diag.len() - 1,
                offdiag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("matrix entry"));
        }
        Ok(Self { diag, offdiag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag(&self) -> &[f64] {
        &self.offdiag
    }

    pub fn trace(&self) -> f64 {
        self.diag.iter().sum()
    }

    /// Leading `k × k` principal submatrix.
    pub fn leading(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.dim() {
            return Err(Error::InvalidArgument(format!("no leading {k}x{k} block")));
        }
        Self::new(self.diag[..k].to_vec(), self.offdiag[..k - 1].to_vec())
    }

    /// `[lo, hi]` containing every eigenvalue.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 {
                self.offdiag[i - 1].abs()
            } else {
                0.0
            };
            let right = if i + 1 < n {
                self.offdiag[i].abs()
            } else {
                0.0
            };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `lambda` (Sturm sequence count via
    /// the signs of the LDLᵀ pivots).
    pub fn sturm_count(&self, lambda: f64) -> usize {
        let max_off = self.offdiag.iter().fold(1.0f64, |m, b| m.max(b * b));
        let pivmin = f64::MIN_POSITIVE * max_off;
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        for i in 0..self.dim() {
            if i > 0 {
                let b = self.offdiag[i - 1];
                q = self.diag[i] - lambda - b * b / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `(p_0..p_{N-1}, q_0..q_{N-1})` plus the unnormalized last entries
    /// `b_{N-1} p_N` and `b_{N-1} q_N`, which only need matrix entries.
    fn polynomials<T: Scalar>(&self, z: T) -> (Vec<T>, Vec<T>, T, T) {
        let n = self.dim();
        let (p, q) = recur(|k| self.diag[k], |k| self.offdiag[k], z, n - 1);
        let shift = z - T::from(self.diag[n - 1]);
        if n == 1 {
            return (p, q, shift, T::from(1.0));
        }
        let back = T::from(self.offdiag[n - 2]);
        let p_last = shift * p[n - 1] - back * p[n - 2];
        let q_last = shift * q[n - 1] - back * q[n - 2];
        (p, q, p_last, q_last)
    }

    /// `G00(z)` of the finite matrix, i.e. `-q_N(z)/p_N(z)`, or with
    /// `Tail::Terminator` the same ratio continued by a constant tail whose
    /// values are taken from the last diagonal and off-diagonal entries.
    pub fn g00(&self, z: Complex64, tail: Tail) -> Result<Complex64> {
        let n = self.dim();
        let (p, q, p_last, q_last) = self.polynomials(z);
        let (num, den) = match tail {
            Tail::Zero => (q_last, p_last),
            Tail::Terminator => {
                if n < 2 {
                    return Err(Error::InvalidArgument(
                        "terminator needs a matrix of dimension >= 2".into(),
                    ));
                }
                let (a_est, b_est) = (self.diag[n - 1], self.offdiag[n - 2]);
                let c = b_est * b_est * terminator(z, a_est, b_est);
                (q_last - c * q[n - 1], p_last - c * p[n - 1])
            }
        };
        if den.re == 0.0 && den.im == 0.0 {
            return Err(Error::ZeroPolynomial { n });
        }
        let g = -num / den;
        if !(g.re.is_finite() && g.im.is_finite()) {
            return Err(Error::ZeroPolynomial { n });
        }
        Ok(g)
    }
}

/// Truncates `seq` (after applying `d`) to a `dim × dim` matrix.
pub fn build_matrix(
    seq: &CoefficientSequence,
    dim: usize,
    d: Option<&Deformation>,
) -> Result<TridiagonalMatrix> {
    let min_dim = match d {
        Some(Deformation::Three(_)) => 2,
        _ => 1,
    };
    if dim < min_dim {
        return Err(Error::InvalidArgument(format!(
            "dimension {dim} too small, need at least {min_dim}"
        )));
    }
    let seq = match d {
        Some(d) => d.apply(seq)?,
        None => seq.clone(),
    };
    let diag = (0..dim).map(|n| seq.a(n)).collect();
    let offdiag = (0..dim - 1).map(|n| seq.b(n)).collect();
    TridiagonalMatrix::new(diag, offdiag)
}

/// All eigenvalues in ascending order, by bisection on Sturm counts.
pub fn eigenvalues(m: &TridiagonalMatrix) -> Result<Vec<f64>> {
    let n = m.dim();
    if n == 1 {
        return Ok(vec![m.diag[0]]);
    }
    let (g_lo, g_hi) = m.gershgorin_bounds();
    let radius = g_lo.abs().max(g_hi.abs()).max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (mut lo, mut hi) = (g_lo, g_hi);
        let mut converged = false;
        for _ in 0..MAX_BISECTION_STEPS {
            let tol = 2.0 * f64::EPSILON * (lo.abs().max(hi.abs()) + radius);
            if hi - lo <= tol {
                converged = true;
                break;
            }
            let mid = 0.5 * (lo + hi);
            if m.sturm_count(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if !converged {
            return Err(Error::NoConvergence {
                iterations: MAX_BISECTION_STEPS,
            });
        }
        out.push(0.5 * (lo + hi));
    }
    Ok(out)
}

/// Gauss weights `w_k = 1 / sum_{n<N} p_n(lambda_k)^2` of the first basis
/// vector at each eigenvalue. They sum to one.
pub fn christoffel_weights(m: &TridiagonalMatrix, eigenvalues: &[f64]) -> Vec<f64> {
    eigenvalues
        .iter()
        .map(|&lambda| {
            let (p, _, _, _) = m.polynomials(lambda);
            1.0 / p.iter().map(|v| v * v).sum::<f64>()
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteRatioOptions {
    pub tail: Tail,
    /// `None` picks 0 with a terminator and the mean eigenvalue spacing
    /// `(lambda_max - lambda_min) / dim` without one.
    pub epsilon: Option<f64>,
}

impl Default for FiniteRatioOptions {
    fn default() -> Self {
        Self {
            tail: Tail::Terminator,
            epsilon: None,
        }
    }
}

impl FiniteRatioOptions {
    pub fn resolve_epsilon(&self, m: &TridiagonalMatrix) -> Result<f64> {
        let eps = match (self.epsilon, self.tail) {
            (Some(e), _) => e,
            (None, Tail::Terminator) => 0.0,
            (None, Tail::Zero) => {
                let ev = eigenvalues(m)?;
                (ev[ev.len() - 1] - ev[0]) / m.dim() as f64
            }
        };
        if !(eps.is_finite() && eps >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon = {eps} must be finite and >= 0"
            )));
        }
        if eps == 0.0 && self.tail == Tail::Zero {
            return Err(Error::InvalidArgument(
                "the plain finite ratio needs epsilon > 0".into(),
            ));
        }
        Ok(eps)
    }
}

fn finite_ratio_density(m: &TridiagonalMatrix, x: f64, eps: f64, tail: Tail) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("x"));
    }
    let g = m.g00(Complex64::new(x, eps), tail)?;
    clamp_density(x, g.im / PI)
}

/// `Im G00(x + i eps) / pi` of the `dim`-dimensional (deformed) matrix.
pub fn dos_finite_ratio(
    seq: &CoefficientSequence,
    dim: usize,
    d: Option<&Deformation>,
    x: f64,
    opts: &FiniteRatioOptions,
) -> Result<f64> {
    check_dim(dim)?;
    let m = build_matrix(seq, dim, d)?;
    let eps = opts.resolve_epsilon(&m)?;
    finite_ratio_density(&m, x, eps, opts.tail)
}

pub fn dos_finite_ratio_grid(
    seq: &CoefficientSequence,
    dim: usize,
    d: Option<&Deformation>,
    xs: &[f64],
    opts: &FiniteRatioOptions,
) -> Result<DensityGrid> {
    check_dim(dim)?;
    let m = build_matrix(seq, dim, d)?;
    let eps = opts.resolve_epsilon(&m)?;
    let values = evaluate_grid(xs, |x| finite_ratio_density(&m, x, eps, opts.tail))?;
    Ok(DensityGrid {
        xs: xs.to_vec(),
        values,
        method: DensityMethod::FiniteRatio {
            dim,
            epsilon: eps,
            tail: opts.tail,
        },
        options: None,
    })
}

fn check_dim(dim: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::InvalidArgument(format!(
            "dimension {dim} too small, need at least 2"
        )));
    }
    Ok(())
}

/// Density from the eigenvalues of the `dim`-dimensional (deformed) matrix.
///
/// Only eigenvalues inside the band `a_inf ± 2 b_inf` enter; isolated ones
/// outside it are bound states. The cumulative weight is pinned at the
/// midpoints between consecutive eigenvalues, extended by half a spacing at
/// both ends, fitted with a monotone cubic and differentiated at `xs`.
pub fn dos_eigen_histogram(
    seq: &CoefficientSequence,
    dim: usize,
    d: Option<&Deformation>,
    xs: &[f64],
) -> Result<DensityGrid> {
    check_dim(dim)?;
    check_grid(xs)?;
    let m = build_matrix(seq, dim, d)?;
    let ev = eigenvalues(&m)?;
    let weights = christoffel_weights(&m, &ev);

    let (band_lo, band_hi) = seq.band();
    let slack = 1e-9 * (1.0 + band_lo.abs().max(band_hi.abs()));
    let (lambdas, w): (Vec<f64>, Vec<f64>) = ev
        .iter()
        .zip(&weights)
        .filter(|(l, _)| **l >= band_lo - slack && **l <= band_hi + slack)
        .map(|(l, w)| (*l, *w))
        .unzip();
    if lambdas.len() < MIN_WINDOW_EIGENVALUES {
        return Err(Error::InsufficientData {
            found: lambdas.len(),
            needed: MIN_WINDOW_EIGENVALUES,
        });
    }

    let k = lambdas.len();
    let mut nodes = Vec::with_capacity(k + 1);
    let mut cdf = Vec::with_capacity(k + 1);
    nodes.push(lambdas[0] - 0.5 * (lambdas[1] - lambdas[0]));
    cdf.push(0.0);
    let mut acc = 0.0;
    for i in 0..k - 1 {
        acc += w[i];
        nodes.push(0.5 * (lambdas[i] + lambdas[i + 1]));
        cdf.push(acc);
    }
    acc += w[k - 1];
    nodes.push(lambdas[k - 1] + 0.5 * (lambdas[k - 1] - lambdas[k - 2]));
    cdf.push(acc);

    let fit = MonotoneCubic::new(nodes, cdf)?;
    let values = xs.iter().map(|&x| fit.derivative(x).max(0.0)).collect();
    Ok(DensityGrid {
        xs: xs.to_vec(),
        values,
        method: DensityMethod::EigenHistogram { dim },
        options: None,
    })
}
