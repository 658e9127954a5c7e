//! Closed forms for `a_n = 0`, `b_n = 1/2`.
//!
//! These are the second-kind Chebyshev polynomials `U_n`, with
//! `G00(z) = -2z + 2 sqrt(z^2 - 1)` and the semicircle density
//! `rho(x) = (2/pi) sqrt(1 - x^2)`. Everything here is written independently of
//! the generic machinery so it can serve as its oracle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::deformation::{Deformation, DeformationOne, DeformationThree};
use crate::error::{Error, Result};
use crate::sequence::CoefficientSequence;

pub fn cheb_coeffs() -> CoefficientSequence {
    CoefficientSequence::chebyshev()
}

/// `p_n(x)` from `p_{n+1} = 2x p_n - p_{n-1}`, `p_0 = 1`, `p_1 = 2x`.
pub fn cheb_p(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `q_n = 2 p_{n-1}`, with `q_0 = 0`.
pub fn cheb_q(n: usize, x: f64) -> f64 {
    if n == 0 {
        0.0
    } else {
        2.0 * cheb_p(n - 1, x)
    }
}

/// `(n+1) 2F1(-n, n+2; 3/2; (1-x)/2)` as a terminating sum.
///
/// In powers of `u = (1-x)/2` the coefficients are the integers
/// `c_k = (-4)^k (n+k+1)! / ((n-k)! (2k+1)!)`. They are built exactly and the
/// alternating sum is taken by double-double Horner, so the result stays
/// accurate near the zeros of `p_n`. Orders whose coefficients overflow
/// `i128` fall back to plain floating-point terms.
pub fn cheb_p_hypergeometric(n: usize, x: f64) -> f64 {
    let u = 0.5 * (1.0 - x);
    match exact_hypergeometric_coeffs(n) {
        Some(c) => c
            .iter()
            .rev()
            .fold(DoubleDouble::ZERO, |acc, &ck| {
                acc.mul_f64(u).add(DoubleDouble::from_i128(ck))
            })
            .value(),
        None => {
            let nf = n as f64;
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 0..n {
                let kf = k as f64;
                term *= (-nf + kf) * (nf + 2.0 + kf) / ((1.5 + kf) * (kf + 1.0)) * u;
                sum += term;
            }
            (nf + 1.0) * sum
        }
    }
}

fn exact_hypergeometric_coeffs(n: usize) -> Option<Vec<i128>> {
    let n = i128::try_from(n).ok()?;
    let mut c = vec![n + 1];
    for k in 0..n {
        let num = c[k as usize]
            .checked_mul(-4)?
            .checked_mul(n + k + 2)?
            .checked_mul(n - k)?;
        c.push(num / ((2 * k + 2) * (2 * k + 3)));
    }
    Some(c)
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    fn from_i128(v: i128) -> Self {
        let hi = v as f64;
        let lo = (v - hi as i128) as f64;
        Self::two_sum(hi, lo)
    }

    fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        Self {
            hi: s,
            lo: (a - (s - bb)) + (b - bb),
        }
    }

    fn add(self, o: Self) -> Self {
        let s = Self::two_sum(self.hi, o.hi);
        Self::two_sum(s.hi, s.lo + self.lo + o.lo)
    }

    fn mul_f64(self, b: f64) -> Self {
        let p = self.hi * b;
        let e = self.hi.mul_add(b, -p);
        Self::two_sum(p, e + self.lo * b)
    }

    fn value(self) -> f64 {
        self.hi + self.lo
    }
}

/// `-2z + 2 sqrt(z - 1) sqrt(z + 1)` with principal roots. The product form
/// places the cut on `[-1, 1]` and gives `G00 ~ -1/z` at infinity. For real
/// `|x| < 1` (with `+0` imaginary part) it yields the boundary value
/// `-2x + 2i sqrt(1 - x^2)`.
pub fn cheb_g00(z: Complex64) -> Complex64 {
    -2.0 * z + 2.0 * (z - 1.0).sqrt() * (z + 1.0).sqrt()
}

pub fn cheb_density(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        2.0 / PI * (1.0 - x * x).sqrt()
    }
}

/// `rho(x) / (1 + 4 mu (mu - x))`.
pub fn cheb_density_one(d: &DeformationOne, x: f64) -> Result<f64> {
    let den = 1.0 + 4.0 * d.mu * (d.mu - x);
    if den == 0.0 {
        return Err(Error::ZeroDenominator { level: 0 });
    }
    Ok(cheb_density(x) / den)
}

/// Three-parameter closed form
///
/// ```text
/// rho / { (1 + 2 mu0)^2 + 4 (mu+ - x) [x - 2 mu- + (mu+ - x) / (1 + 2 mu0)^2] }
/// ```
///
/// It is exact only for `mu- = 0`; see [`cheb_density_three_general`].
pub fn cheb_density_three(d: &DeformationThree, x: f64) -> Result<f64> {
    three_param_form(d, x, 1.0)
}

/// Three-parameter density valid for all parameters: the last bracket term
/// carries the factor `1 - 4 mu- x + 4 mu-^2`.
pub fn cheb_density_three_general(d: &DeformationThree, x: f64) -> Result<f64> {
    let m = d.mu_minus;
    three_param_form(d, x, 1.0 - 4.0 * m * x + 4.0 * m * m)
}

fn three_param_form(d: &DeformationThree, x: f64, factor: f64) -> Result<f64> {
    let c = 1.0 + 2.0 * d.mu_zero;
    let c2 = c * c;
    if c2 == 0.0 {
        return Err(Error::ZeroDenominator { level: 1 });
    }
    let lead = d.mu_plus - x;
    let den = c2 + 4.0 * lead * (x - 2.0 * d.mu_minus + lead * factor / c2);
    if den == 0.0 {
        return Err(Error::ZeroDenominator { level: 0 });
    }
    Ok(cheb_density(x) / den)
}

/// Closed-form deformed density, dispatching on the deformation kind.
pub fn cheb_deformed_density(d: &Deformation, x: f64) -> Result<f64> {
    match d {
        Deformation::One(d) => cheb_density_one(d, x),
        Deformation::Three(d) => cheb_density_three(d, x),
    }
}
