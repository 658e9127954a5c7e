//! The `(0,0)` resolvent element `G00(z) = [(H - z)^{-1}]_{00}` and the
//! density `rho(x) = Im G00(x + i0) / pi`.
//!
//! `G00` is computed from the continued fraction
//!
//! ```text
//! G00(z) = -1 / (z - a_0 - b_0^2 / (z - a_1 - b_1^2 / (z - a_2 - ...)))
//! ```
//!
//! evaluated bottom-up from a truncation level, or from the finite
//! polynomial ratio `-q_n(z)/p_n(z)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::recursion::eval_polynomials_complex;
use crate::sequence::CoefficientSequence;

/// Values of `|rho|` below this are rounding noise and clamp to zero.
pub const NEGATIVE_DENSITY_TOLERANCE: f64 = 1e-12;

/// How the continued fraction is closed below the truncation level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tail {
    /// Truncate: the remainder is zero.
    Zero,
    /// Close with the exact fraction of a constant `(a_inf, b_inf)` tail.
    Terminator,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResolventOptions {
    pub depth: usize,
    pub tail: Tail,
    /// Imaginary shift used when a density is evaluated at `x + i epsilon`.
    pub epsilon: f64,
}

impl Default for ResolventOptions {
    fn default() -> Self {
        Self {
            depth: 200,
            tail: Tail::Terminator,
            epsilon: 0.0,
        }
    }
}

impl ResolventOptions {
    pub fn validate(&self) -> Result<()> {
        if self.depth < 1 {
            return Err(Error::InvalidArgument("depth must be >= 1".into()));
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "epsilon = {} must be finite and >= 0",
                self.epsilon
            )));
        }
        Ok(())
    }

    /// Real-axis evaluation additionally needs `epsilon > 0` unless the
    /// terminator supplies the boundary value.
    pub(crate) fn validate_for_real_axis(&self) -> Result<()> {
        self.validate()?;
        if self.tail == Tail::Zero && self.epsilon == 0.0 {
            return Err(Error::InvalidArgument(
                "a zero tail needs epsilon > 0 on the real axis".into(),
            ));
        }
        Ok(())
    }
}

/// Tail value `t(z)` solving `t = 1 / (z - a_inf - b_inf^2 t)`.
///
/// Of the two roots (product `1/b_inf^2`) this picks the one belonging to a
/// decaying solution: `Im t < 0` above the axis, `Im t > 0` below, the smaller
/// root on the real axis outside the band, and the boundary value from above
/// (`Im t <= 0`) inside the band.
pub fn terminator(z: Complex64, a_inf: f64, b_inf: f64) -> Complex64 {
    let w = z - a_inf;
    let s = (w * w - 4.0 * b_inf * b_inf).sqrt();
    let denom = 2.0 * b_inf * b_inf;
    let t1 = (w - s) / denom;
    let t2 = (w + s) / denom;
    if z.im > 0.0 {
        if t1.im <= t2.im {
            t1
        } else {
            t2
        }
    } else if z.im < 0.0 {
        if t1.im >= t2.im {
            t1
        } else {
            t2
        }
    } else if w.re.abs() > 2.0 * b_inf {
        if t1.norm() <= t2.norm() {
            t1
        } else {
            t2
        }
    } else {
        // Inside the band both roots have modulus 1/b_inf and are conjugate.
        Complex64::new(t1.re, -t1.im.abs())
    }
}

/// With a terminator the explicit levels always cover the tabulated head, so
/// no stored coefficient is replaced by the tail.
fn effective_depth(seq: &CoefficientSequence, opts: &ResolventOptions) -> usize {
    match opts.tail {
        Tail::Zero => opts.depth,
        Tail::Terminator => opts.depth.max(seq.head_len()),
    }
}

pub fn continued_fraction_g00(
    seq: &CoefficientSequence,
    z: Complex64,
    opts: &ResolventOptions,
) -> Result<Complex64> {
    opts.validate()?;
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("z"));
    }
    let mut f = match opts.tail {
        Tail::Zero => Complex64::new(0.0, 0.0),
        Tail::Terminator => terminator(z, seq.a_inf(), seq.b_inf()),
    };
    for level in (0..effective_depth(seq, opts)).rev() {
        let b = seq.b(level);
        let den = z - seq.a(level) - b * b * f;
        if den.re == 0.0 && den.im == 0.0 {
            return Err(Error::ZeroDenominator { level });
        }
        f = den.inv();
        if !(f.re.is_finite() && f.im.is_finite()) {
            return Err(Error::ZeroDenominator { level });
        }
    }
    Ok(-f)
}

/// `-q_n(z) / p_n(z)`.
pub fn ratio_g00(seq: &CoefficientSequence, z: Complex64, n: usize) -> Result<Complex64> {
    let (p, q) = eval_polynomials_complex(seq, z, n)?;
    let pn = p[n];
    if pn.re == 0.0 && pn.im == 0.0 {
        return Err(Error::ZeroPolynomial { n });
    }
    let g = -q[n] / pn;
    if !(g.re.is_finite() && g.im.is_finite()) {
        return Err(Error::ZeroPolynomial { n });
    }
    Ok(g)
}

/// Applies the clamping rule for rounding-level negative densities.
pub(crate) fn clamp_density(x: f64, value: f64) -> Result<f64> {
    if value >= 0.0 {
        Ok(value)
    } else if value >= -NEGATIVE_DENSITY_TOLERANCE {
        Ok(0.0)
    } else {
        Err(Error::NegativeDensity { x, value })
    }
}

/// Real-axis argument `x + i epsilon`.
pub(crate) fn boundary_point(x: f64, opts: &ResolventOptions) -> Result<Complex64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("x"));
    }
    opts.validate_for_real_axis()?;
    Ok(Complex64::new(x, opts.epsilon))
}

pub fn density(seq: &CoefficientSequence, x: f64, opts: &ResolventOptions) -> Result<f64> {
    let z = boundary_point(x, opts)?;
    let g = continued_fraction_g00(seq, z, opts)?;
    clamp_density(x, g.im / PI)
}

/// Records how the values of a [`DensityGrid`] were produced.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum DensityMethod {
    ContinuedFraction,
    DeformedOne {
        mu: f64,
    },
    DeformedThree {
        mu_plus: f64,
        mu_minus: f64,
        mu_zero: f64,
    },
    FiniteRatio {
        dim: usize,
        epsilon: f64,
        tail: Tail,
    },
    EigenHistogram {
        dim: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityGrid {
    pub xs: Vec<f64>,
    pub values: Vec<f64>,
    pub method: DensityMethod,
    pub options: Option<ResolventOptions>,
}

impl DensityGrid {
    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }
}

pub(crate) fn check_grid(xs: &[f64]) -> Result<()> {
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "grid point {x} is not finite"
        )));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Pointwise evaluation over a grid. Each value depends only on its own
/// point, so the result does not depend on how the work is scheduled.
pub(crate) fn evaluate_grid<F>(xs: &[f64], f: F) -> Result<Vec<f64>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    check_grid(xs)?;
    xs.par_iter().map(|&x| f(x)).collect()
}

pub fn density_grid(
    seq: &CoefficientSequence,
    xs: &[f64],
    opts: &ResolventOptions,
) -> Result<DensityGrid> {
    let values = evaluate_grid(xs, |x| density(seq, x, opts))?;
    Ok(DensityGrid {
        xs: xs.to_vec(),
        values,
        method: DensityMethod::ContinuedFraction,
        options: Some(*opts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_OVER_PI: f64 = 2.0 / PI;

    fn cheb() -> CoefficientSequence {
        CoefficientSequence::chebyshev()
    }

    fn opts() -> ResolventOptions {
        ResolventOptions::default()
    }

    #[test]
    fn chebyshev_outside_band() {
        let g = continued_fraction_g00(&cheb(), Complex64::new(2.0, 0.0), &opts()).unwrap();
        assert!((g.re - (-4.0 + 2.0 * 3f64.sqrt())).abs() < 1e-14);
        assert_eq!(g.im, 0.0);
        let g = continued_fraction_g00(&cheb(), Complex64::new(-2.0, 0.0), &opts()).unwrap();
        assert!((g.re - (4.0 - 2.0 * 3f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_on_imaginary_axis() {
        let g = continued_fraction_g00(&cheb(), Complex64::new(0.0, 1.0), &opts()).unwrap();
        assert!(g.re.abs() < 1e-14);
        assert!((g.im - (2.0 * 2f64.sqrt() - 2.0)).abs() < 1e-14);
    }

    #[test]
    fn large_z_asymptotics() {
        let z = Complex64::new(0.0, 100.0);
        let g = continued_fraction_g00(&cheb(), z, &opts()).unwrap();
        assert!((z * g + 1.0).norm() <= 1e-3);
    }

    #[test]
    fn lower_half_plane_is_conjugate() {
        let z = Complex64::new(0.3, 0.2);
        let up = continued_fraction_g00(&cheb(), z, &opts()).unwrap();
        let down = continued_fraction_g00(&cheb(), z.conj(), &opts()).unwrap();
        assert!((up - down.conj()).norm() < 1e-14);
    }

    #[test]
    fn zero_denominator_reported() {
        let zero_tail = ResolventOptions {
            depth: 1,
            tail: Tail::Zero,
            epsilon: 0.0,
        };
        let err = continued_fraction_g00(&cheb(), Complex64::new(0.0, 0.0), &zero_tail);
        assert_eq!(err, Err(Error::ZeroDenominator { level: 0 }));
    }

    #[test]
    fn ratio_first_level() {
        let s = CoefficientSequence::tabulated(vec![0.3], vec![0.8], 0.0, 0.5).unwrap();
        let z = Complex64::new(1.1, 0.4);
        let g = ratio_g00(&s, z, 1).unwrap();
        assert!((g - (-1.0 / (z - 0.3))).norm() < 1e-15);
    }

    #[test]
    fn ratio_outside_band() {
        let g = ratio_g00(&cheb(), Complex64::new(2.0, 0.0), 20).unwrap();
        assert!((g.re - (-4.0 + 2.0 * 3f64.sqrt())).abs() < 1e-6);
    }

    #[test]
    fn ratio_matches_fraction_near_band() {
        let z = Complex64::new(0.5, 0.05);
        let r = ratio_g00(&cheb(), z, 400).unwrap();
        let g = continued_fraction_g00(&cheb(), z, &opts()).unwrap();
        assert!((r - g).norm() < 1e-4);
    }

    #[test]
    fn ratio_zero_polynomial() {
        // p_1(x) = 2x vanishes at 0.
        let err = ratio_g00(&cheb(), Complex64::new(0.0, 0.0), 1);
        assert_eq!(err, Err(Error::ZeroPolynomial { n: 1 }));
    }

    #[test]
    fn chebyshev_density_values() {
        let o = opts();
        assert!((density(&cheb(), 0.0, &o).unwrap() - TWO_OVER_PI).abs() < 1e-14);
        assert!((density(&cheb(), 0.6, &o).unwrap() - TWO_OVER_PI * 0.8).abs() < 1e-14);
        assert_eq!(density(&cheb(), 1.0, &o).unwrap(), 0.0);
        assert_eq!(density(&cheb(), -1.0, &o).unwrap(), 0.0);
        assert_eq!(density(&cheb(), 1.5, &o).unwrap(), 0.0);
    }

    #[test]
    fn zero_tail_needs_epsilon() {
        let o = ResolventOptions {
            depth: 10,
            tail: Tail::Zero,
            epsilon: 0.0,
        };
        assert!(matches!(
            density(&cheb(), 0.1, &o),
            Err(Error::InvalidArgument(_))
        ));
        let o = ResolventOptions {
            depth: 0,
            ..ResolventOptions::default()
        };
        assert!(o.validate().is_err());
    }

    #[test]
    fn zero_tail_with_epsilon_approximates() {
        let o = ResolventOptions {
            depth: 4000,
            tail: Tail::Zero,
            epsilon: 1e-2,
        };
        let v = density(&cheb(), 0.2, &o).unwrap();
        assert!((v - TWO_OVER_PI * (1.0f64 - 0.04).sqrt()).abs() < 2e-2);
    }

    #[test]
    fn clamp_rule() {
        assert_eq!(clamp_density(0.0, -1e-13).unwrap(), 0.0);
        assert_eq!(clamp_density(0.0, 0.25).unwrap(), 0.25);
        assert!(matches!(
            clamp_density(0.0, -1e-6),
            Err(Error::NegativeDensity { .. })
        ));
    }

    #[test]
    fn grid_examples() {
        let g = density_grid(&cheb(), &[-0.9, 0.0, 0.9], &opts()).unwrap();
        let edge = TWO_OVER_PI * 0.19f64.sqrt();
        let expected = [edge, TWO_OVER_PI, edge];
        for (v, e) in g.values.iter().zip(expected) {
            assert!((v - e).abs() < 1e-14);
        }
        assert_eq!(g.method, DensityMethod::ContinuedFraction);
        assert_eq!(g.options, Some(opts()));

        let empty = density_grid(&cheb(), &[], &opts()).unwrap();
        assert!(empty.is_empty());

        let one = density_grid(&cheb(), &[0.0], &opts()).unwrap();
        assert_eq!(one.len(), 1);
        assert!((one.values[0] - TWO_OVER_PI).abs() < 1e-14);
    }

    #[test]
    fn grid_must_increase() {
        assert!(density_grid(&cheb(), &[0.1, 0.1], &opts()).is_err());
        assert!(density_grid(&cheb(), &[0.2, 0.1], &opts()).is_err());
    }
}
