//! Linear deformations of the leading recursion coefficients.
//!
//! The one-parameter deformation shifts `a_0 -> a_0 + mu`. The three-parameter
//! deformation adds a symmetric 2×2 block to the top-left corner of the Jacobi
//! matrix: `a_0 -> a_0 + mu_plus`, `a_1 -> a_1 + mu_minus`,
//! `b_0 -> b_0 + mu_zero`.
//!
//! Both induce explicit transforms of the first/second-kind polynomials and of
//! the resolvent `G00`, from which the deformed density follows. The resolvent
//! formulas are the results of record here; the factorized density expressions
//! are kept as cross-checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::recursion::{abbreviated_polynomials, eval_polynomials, Polynomials};
use crate::resolvent::{
    boundary_point, clamp_density, continued_fraction_g00, evaluate_grid, DensityGrid,
    DensityMethod, ResolventOptions,
};
use crate::sequence::CoefficientSequence;

/// `|1 + mu G00|` below this on the real axis is treated as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Bound-state roots are refined until `|1 + mu G00(x)|` is at most this.
pub const ROOT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformationOne {
    pub mu: f64,
}

impl DeformationOne {
    pub fn new(mu: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::NonFinite("mu"));
        }
        Ok(Self { mu })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeformationThree {
    pub mu_plus: f64,
    pub mu_minus: f64,
    pub mu_zero: f64,
}

impl DeformationThree {
    pub fn new(mu_plus: f64, mu_minus: f64, mu_zero: f64) -> Result<Self> {
        if !mu_plus.is_finite() {
            return Err(Error::NonFinite("mu_plus"));
        }
        if !mu_minus.is_finite() {
            return Err(Error::NonFinite("mu_minus"));
        }
        if !mu_zero.is_finite() {
            return Err(Error::NonFinite("mu_zero"));
        }
        Ok(Self {
            mu_plus,
            mu_minus,
            mu_zero,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.mu_plus == 0.0 && self.mu_minus == 0.0 && self.mu_zero == 0.0
    }

    /// `b_0 + mu_zero`, which must stay strictly positive.
    fn deformed_b0(&self, seq: &CoefficientSequence) -> Result<f64> {
        let c = seq.b(0) + self.mu_zero;
        if c > 0.0 {
            Ok(c)
        } else {
            Err(Error::InvalidArgument(format!(
                "b_0 + mu_zero = {c} must be strictly positive"
            )))
        }
    }
}

/// Either kind of deformation, for callers that route on configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Deformation {
    One(DeformationOne),
    Three(DeformationThree),
}

impl Deformation {
    pub fn apply(&self, seq: &CoefficientSequence) -> Result<CoefficientSequence> {
        match self {
            Deformation::One(d) => Ok(deform_one_coeffs(seq, d)),
            Deformation::Three(d) => deform_three_coeffs(seq, d),
        }
    }

    /// Deformed density on the real axis via the resolvent formulas.
    pub fn density(
        &self,
        seq: &CoefficientSequence,
        x: f64,
        opts: &ResolventOptions,
    ) -> Result<f64> {
        match self {
            Deformation::One(d) => deformed_density_one(seq, d, x, opts),
            Deformation::Three(d) => deformed_density_three(seq, d, x, opts),
        }
    }

    pub fn method(&self) -> DensityMethod {
        match *self {
            Deformation::One(d) => DensityMethod::DeformedOne { mu: d.mu },
            Deformation::Three(d) => DensityMethod::DeformedThree {
                mu_plus: d.mu_plus,
                mu_minus: d.mu_minus,
                mu_zero: d.mu_zero,
            },
        }
    }
}

pub fn deformed_density_grid(
    seq: &CoefficientSequence,
    d: &Deformation,
    xs: &[f64],
    opts: &ResolventOptions,
) -> Result<DensityGrid> {
    let values = evaluate_grid(xs, |x| d.density(seq, x, opts))?;
    Ok(DensityGrid {
        xs: xs.to_vec(),
        values,
        method: d.method(),
        options: Some(*opts),
    })
}

// One-parameter deformation.

pub fn deform_one_coeffs(seq: &CoefficientSequence, d: &DeformationOne) -> CoefficientSequence {
    if d.mu == 0.0 {
        return seq.clone();
    }
    let (mut a, b) = seq.materialized(1);
    a[0] += d.mu;
    CoefficientSequence::tabulated(a, b, seq.a_inf(), seq.b_inf())
        .expect("shifting a_0 keeps a valid sequence")
}

/// `p^_n = p_n - mu q_n`, `q^_n = q_n`.
pub fn deformed_polys_one(
    seq: &CoefficientSequence,
    d: &DeformationOne,
    x: f64,
    n_max: usize,
) -> Result<Polynomials> {
    let Polynomials { p, q } = eval_polynomials(seq, x, n_max)?;
    let p = p.iter().zip(&q).map(|(p, q)| p - d.mu * q).collect();
    Ok(Polynomials { p, q })
}

/// `G / (1 + mu G)`.
pub fn deformed_g00_one(g: Complex64, d: &DeformationOne) -> Result<Complex64> {
    let den = 1.0 + d.mu * g;
    if den.re == 0.0 && den.im == 0.0 {
        return Err(Error::ZeroDenominator { level: 0 });
    }
    Ok(g / den)
}

/// `rho(x) / |1 + mu G00(x + i0)|^2`.
pub fn deformed_density_one(
    seq: &CoefficientSequence,
    d: &DeformationOne,
    x: f64,
    opts: &ResolventOptions,
) -> Result<f64> {
    let z = boundary_point(x, opts)?;
    let g = continued_fraction_g00(seq, z, opts)?;
    let scale = (1.0 + d.mu * g).norm();
    if scale < POLE_TOLERANCE {
        return Err(Error::PoleOnSupport { x });
    }
    let rho = clamp_density(x, g.im / PI)?;
    Ok(rho / (scale * scale))
}

fn real_axis_g00(seq: &CoefficientSequence, x: f64) -> Result<f64> {
    let opts = ResolventOptions::default();
    Ok(continued_fraction_g00(seq, Complex64::new(x, 0.0), &opts)?.re)
}

fn check_outside_band(seq: &CoefficientSequence, lo: f64, hi: f64) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidArgument(format!(
            "bad search interval [{lo}, {hi}]"
        )));
    }
    let (band_lo, band_hi) = seq.band();
    if hi >= band_lo && lo <= band_hi {
        return Err(Error::InvalidArgument(format!(
            "search interval [{lo}, {hi}] overlaps the band [{band_lo}, {band_hi}]"
        )));
    }
    Ok(())
}

/// Real roots of `1 + mu G00(x)` in `search`, which must lie outside the band.
///
/// The interval is scanned for sign changes and each bracket is bisected.
/// Sign changes across a pole of `G00` are discarded.
pub fn find_bound_states_one(
    seq: &CoefficientSequence,
    d: &DeformationOne,
    search: (f64, f64),
) -> Result<Vec<f64>> {
    const SCAN_STEPS: usize = 2000;
    let (lo, hi) = search;
    check_outside_band(seq, lo, hi)?;
    if d.mu == 0.0 {
        return Ok(Vec::new());
    }
    let f = |x: f64| -> Result<f64> { Ok(1.0 + d.mu * real_axis_g00(seq, x)?) };

    let mut roots = Vec::new();
    let step = (hi - lo) / SCAN_STEPS as f64;
    let mut left = lo;
    let mut f_left = f(left)?;
    for k in 1..=SCAN_STEPS {
        let right = if k == SCAN_STEPS {
            hi
        } else {
            lo + k as f64 * step
        };
        let f_right = f(right)?;
        if f_left == 0.0 {
            roots.push(left);
        } else if f_left * f_right < 0.0 {
            let root = bisect(&f, left, right, f_left)?;
            if f(root)?.abs() <= ROOT_TOLERANCE {
                roots.push(root);
            }
        }
        left = right;
        f_left = f_right;
    }
    if f_left == 0.0 {
        roots.push(left);
    }
    Ok(roots)
}

fn bisect(f: &impl Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64, f_lo: f64) -> Result<f64> {
    let mut sign_lo = f_lo.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 || hi - lo <= 4.0 * f64::EPSILON * mid.abs().max(1.0) {
            return Ok(mid);
        }
        if fm.signum() == sign_lo {
            lo = mid;
            sign_lo = fm.signum();
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Weight of the bound state at `x0`: the residue of `-G^00` there,
/// `-G00(x0) / (d/dx)(1 + mu G00)(x0)`, with a central-difference derivative.
pub fn bound_state_weight_one(
    seq: &CoefficientSequence,
    d: &DeformationOne,
    x0: f64,
) -> Result<f64> {
    let h = 1e-5 * x0.abs().max(1.0);
    check_outside_band(seq, x0 - h, x0 + h)?;
    let f = |x: f64| -> Result<f64> { Ok(1.0 + d.mu * real_axis_g00(seq, x)?) };
    let slope = (f(x0 + h)? - f(x0 - h)?) / (2.0 * h);
    if slope == 0.0 {
        return Err(Error::ZeroDenominator { level: 0 });
    }
    Ok(-real_axis_g00(seq, x0)? / slope)
}

// Three-parameter deformation.

pub fn deform_three_coeffs(
    seq: &CoefficientSequence,
    d: &DeformationThree,
) -> Result<CoefficientSequence> {
    let b0 = d.deformed_b0(seq)?;
    if d.is_identity() {
        return Ok(seq.clone());
    }
    let (mut a, mut b) = seq.materialized(2);
    a[0] += d.mu_plus;
    a[1] += d.mu_minus;
    b[0] = b0;
    CoefficientSequence::tabulated(a, b, seq.a_inf(), seq.b_inf())
}

/// Deformed polynomials from the original ones and the abbreviated
/// polynomials `p~`:
///
/// ```text
/// p^_n = p_n - alpha(x) q_n + c(x) p~_{n-2}
/// q^_n = beta q_n - gamma p~_{n-2}
/// ```
///
/// with `alpha = [b_0 mu_plus + mu_zero (x - a_0)] / b0'`, `beta = b_0 / b0'`,
/// `gamma = mu_minus / (b_1 b0')`,
/// `c = [mu_minus (mu_plus + a_0 - x) - mu_zero b0'] / (b_1 b0')` and
/// `b0' = b_0 + mu_zero`. Every coefficient is polynomial in the parameters.
pub fn deformed_polys_three(
    seq: &CoefficientSequence,
    d: &DeformationThree,
    x: f64,
    n_max: usize,
) -> Result<Polynomials> {
    let b0d = d.deformed_b0(seq)?;
    let (a0, b0, b1) = (seq.a(0), seq.b(0), seq.b(1));
    let Polynomials { p, q } = eval_polynomials(seq, x, n_max)?;
    let tilde = abbreviated_polynomials(seq, x, n_max as i64 - 2)?;

    let alpha = (b0 * d.mu_plus + d.mu_zero * (x - a0)) / b0d;
    let beta = b0 / b0d;
    let gamma = d.mu_minus / (b1 * b0d);
    let c = (d.mu_minus * (d.mu_plus + a0 - x) - d.mu_zero * b0d) / (b1 * b0d);

    // tilde[n] holds index n - 2.
    let p_hat = (0..=n_max)
        .map(|n| p[n] - alpha * q[n] + c * tilde[n].lower)
        .collect();
    let q_hat = (0..=n_max)
        .map(|n| beta * q[n] - gamma * tilde[n].lower)
        .collect();
    Ok(Polynomials { p: p_hat, q: q_hat })
}

/// Deformed resolvent from the undeformed value `g = G00(z)`:
///
/// ```text
/// G^00 = -1 / { z - a_0 - mu_plus
///               + b0'^2 / [mu_minus - b_0^2 / (z - a_0 + 1/g)] }
/// ```
///
/// Zero denominators are reported by level, 0 being the outermost.
pub fn deformed_g00_three_from(
    seq: &CoefficientSequence,
    d: &DeformationThree,
    z: Complex64,
    g: Complex64,
) -> Result<Complex64> {
    let b0d = d.deformed_b0(seq)?;
    let (a0, b0) = (seq.a(0), seq.b(0));
    let is_zero = |c: Complex64| c.re == 0.0 && c.im == 0.0;
    if is_zero(g) {
        return Err(Error::ZeroDenominator { level: 3 });
    }
    let inner = z - a0 + g.inv();
    if is_zero(inner) {
        return Err(Error::ZeroDenominator { level: 2 });
    }
    let bracket = d.mu_minus - b0 * b0 / inner;
    if is_zero(bracket) {
        return Err(Error::ZeroDenominator { level: 1 });
    }
    let outer = z - a0 - d.mu_plus + b0d * b0d / bracket;
    if is_zero(outer) {
        return Err(Error::ZeroDenominator { level: 0 });
    }
    Ok(-outer.inv())
}

pub fn deformed_g00_three(
    seq: &CoefficientSequence,
    d: &DeformationThree,
    z: Complex64,
    opts: &ResolventOptions,
) -> Result<Complex64> {
    let g = continued_fraction_g00(seq, z, opts)?;
    deformed_g00_three_from(seq, d, z, g)
}

pub fn deformed_density_three(
    seq: &CoefficientSequence,
    d: &DeformationThree,
    x: f64,
    opts: &ResolventOptions,
) -> Result<f64> {
    let z = boundary_point(x, opts)?;
    let g = deformed_g00_three(seq, d, z, opts)?;
    clamp_density(x, g.im / PI)
}

/// Deformed density by three routes at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeDensityReport {
    /// `Im G^00 / pi`; the result of record.
    pub resolvent: f64,
    /// `[b_0 b0' / |f|]^2 |b0'^2 + (x - a_0 - mu_plus)(mu_minus - b_0^2 G/f)|^-2 rho`
    /// with `f = 1 + (x - a_0) G`. `None` where `f = 0`.
    pub factorized: Option<f64>,
    /// `f / (b_0 b0') {b0'^2 + (x - a_0 - mu_plus)(mu_minus - b_0^2 G/f)}^-2 rho`,
    /// the same expression without moduli; generally complex.
    pub factorized_complex: Option<Complex64>,
}

impl ThreeDensityReport {
    /// `|factorized - resolvent|`, when the factorized route is defined.
    pub fn residual(&self) -> Option<f64> {
        self.factorized.map(|v| (v - self.resolvent).abs())
    }

    pub fn complex_residual(&self) -> Option<f64> {
        self.factorized_complex.map(|v| (v - self.resolvent).norm())
    }
}

pub fn deformed_density_three_report(
    seq: &CoefficientSequence,
    d: &DeformationThree,
    x: f64,
    opts: &ResolventOptions,
) -> Result<ThreeDensityReport> {
    let z = boundary_point(x, opts)?;
    let b0d = d.deformed_b0(seq)?;
    let (a0, b0) = (seq.a(0), seq.b(0));
    let g = continued_fraction_g00(seq, z, opts)?;
    let resolvent = clamp_density(x, deformed_g00_three_from(seq, d, z, g)?.im / PI)?;
    let rho = clamp_density(x, g.im / PI)?;

    let f = 1.0 + (x - a0) * g;
    let (factorized, factorized_complex) = if f.re == 0.0 && f.im == 0.0 {
        (None, None)
    } else {
        let brace = b0d * b0d + (x - a0 - d.mu_plus) * (d.mu_minus - b0 * b0 * g / f);
        let scale = b0 * b0d / f.norm();
        let factorized = scale * scale / brace.norm_sqr() * rho;
        let complex = f / (b0 * b0d) * brace.powi(-2) * rho;
        (Some(factorized), Some(complex))
    };
    Ok(ThreeDensityReport {
        resolvent,
        factorized,
        factorized_complex,
    })
}
