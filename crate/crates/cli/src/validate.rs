//! Invariant suites behind `recdef validate`.

use std::f64::consts::PI;

use serde::Serialize;

use recdef::chebyshev::{cheb_coeffs, cheb_density, cheb_g00, cheb_p, cheb_p_hypergeometric};
use recdef::deformation::{deformed_density_one, deformed_g00_one, deformed_g00_three};
use recdef::recursion::{eval_polynomials, wronskian};
use recdef::resolvent::{continued_fraction_g00, density};
use recdef::{CoefficientSequence, Complex64, DeformationOne, DeformationThree, ResolventOptions};

use crate::args::Suite;
use crate::error::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub check: String,
    pub error: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(check: impl Into<String>, error: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            error,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

pub fn run(suite: Suite, seq: &CoefficientSequence) -> Result<Vec<Check>, CliError> {
    let mut checks = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Wronskian {
        checks.extend(wronskian_suite(seq)?);
    }
    if all || suite == Suite::Orthogonality {
        checks.extend(orthogonality_suite(seq)?);
    }
    if all || suite == Suite::Reductions {
        checks.extend(reductions_suite(seq)?);
    }
    if all || suite == Suite::ChebyshevOracle {
        checks.extend(chebyshev_suite()?);
    }
    Ok(checks)
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

fn wronskian_suite(seq: &CoefficientSequence) -> Result<Vec<Check>, CliError> {
    const N_MAX: usize = 50;
    let mut worst = vec![0.0f64; N_MAX + 1];
    for x in linspace(-3.0, 3.0, 61) {
        let polys = eval_polynomials(seq, x, N_MAX)?;
        for (n, slot) in worst.iter_mut().enumerate().skip(1) {
            let b = seq.b(n - 1);
            let scale = (b * polys.p[n - 1] * polys.q[n])
                .abs()
                .max((b * polys.p[n] * polys.q[n - 1]).abs())
                .max(1.0);
            let err = (wronskian(seq, x, n)? - 1.0).abs() / scale;
            *slot = slot.max(err);
        }
    }
    Ok((1..=N_MAX)
        .map(|n| Check::new(format!("wronskian n={n}"), worst[n], 1e-9))
        .collect())
}

/// `∫ rho p_n p_m` over the band, after `x = c + r cos t`.
fn orthogonality_suite(seq: &CoefficientSequence) -> Result<Vec<Check>, CliError> {
    const N_MAX: usize = 8;
    const NODES: usize = 4000;
    let opts = ResolventOptions::default();
    let (lo, hi) = seq.band();
    let (c, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
    let h = PI / NODES as f64;
    let mut gram = [[0.0f64; N_MAX + 1]; N_MAX + 1];
    for k in 1..NODES {
        let t = k as f64 * h;
        let x = c + r * t.cos();
        let w = density(seq, x, &opts)? * r * t.sin() * h;
        let p = eval_polynomials(seq, x, N_MAX)?.p;
        for (n, row) in gram.iter_mut().enumerate() {
            for (m, cell) in row.iter_mut().enumerate().skip(n) {
                *cell += w * p[n] * p[m];
            }
        }
    }
    let mut checks = Vec::new();
    for (n, row) in gram.iter().enumerate() {
        for (m, value) in row.iter().enumerate().skip(n) {
            let expected = if n == m { 1.0 } else { 0.0 };
            checks.push(Check::new(
                format!("orthogonality n={n} m={m}"),
                (value - expected).abs(),
                1e-6,
            ));
        }
    }
    Ok(checks)
}

fn probe_points() -> Vec<Complex64> {
    (0..20)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            Complex64::new(
                -2.5 + 5.0 * k as f64 / 19.0,
                sign * (0.05 + 0.3 * (k % 5) as f64),
            )
        })
        .collect()
}

fn reductions_suite(seq: &CoefficientSequence) -> Result<Vec<Check>, CliError> {
    let opts = ResolventOptions::default();
    let zero = DeformationThree::new(0.0, 0.0, 0.0)?;
    let (mut e_zero, mut e_one) = (0.0f64, 0.0f64);
    for (k, z) in probe_points().into_iter().enumerate() {
        let g = continued_fraction_g00(seq, z, &opts)?;
        let scale = g.norm().max(1.0);
        e_zero = e_zero.max((deformed_g00_three(seq, &zero, z, &opts)? - g).norm() / scale);
        let mu = -0.9 + 0.1 * k as f64;
        let expected = deformed_g00_one(g, &DeformationOne::new(mu)?)?;
        let three = DeformationThree::new(mu, 0.0, 0.0)?;
        let got = deformed_g00_three(seq, &three, z, &opts)?;
        e_one = e_one.max((got - expected).norm() / expected.norm().max(1.0));
    }
    let (lo, hi) = seq.band();
    let d = DeformationOne::new(0.3)?;
    let mut e_density = 0.0f64;
    for i in 1..=20 {
        let x = lo + (hi - lo) * i as f64 / 21.0;
        let g = continued_fraction_g00(seq, Complex64::new(x, 0.0), &opts)?;
        let expected = deformed_g00_one(g, &d)?.im / PI;
        e_density = e_density.max((deformed_density_one(seq, &d, x, &opts)? - expected).abs());
    }
    Ok(vec![
        Check::new(
            "three-parameter at zero deformation equals G00",
            e_zero,
            1e-12,
        ),
        Check::new(
            "three-parameter with mu-=mu0=0 equals G/(1+muG)",
            e_one,
            1e-12,
        ),
        Check::new(
            "one-parameter density equals Im[G/(1+muG)]/pi",
            e_density,
            1e-10,
        ),
    ])
}

fn chebyshev_suite() -> Result<Vec<Check>, CliError> {
    let s = cheb_coeffs();
    let opts = ResolventOptions::default();

    let mut e_rec = 0.0f64;
    let mut e_hyp = 0.0f64;
    for x in linspace(-1.5, 1.5, 41) {
        let polys = eval_polynomials(&s, x, 30)?;
        for n in 0..=30 {
            e_rec = e_rec.max((cheb_p(n, x) - polys.p[n]).abs() / polys.p[n].abs().max(1.0));
        }
        if x.abs() <= 1.0 {
            for n in 0..=20 {
                let p = cheb_p(n, x);
                e_hyp = e_hyp.max((cheb_p_hypergeometric(n, x) - p).abs() / p.abs().max(1.0));
            }
        }
    }

    let mut e_trig = 0.0f64;
    for t in linspace(0.05, PI - 0.05, 40) {
        for n in 0..=30 {
            let expected = ((n as f64 + 1.0) * t).sin() / t.sin();
            e_trig = e_trig.max((cheb_p(n, t.cos()) - expected).abs());
        }
    }

    let mut e_g = 0.0f64;
    for z in probe_points() {
        e_g = e_g.max((cheb_g00(z) - continued_fraction_g00(&s, z, &opts)?).norm());
    }

    let mut e_rho = 0.0f64;
    for x in linspace(-0.98, 0.98, 50) {
        e_rho = e_rho.max((cheb_density(x) - density(&s, x, &opts)?).abs());
    }

    let nodes = 400;
    let h = PI / nodes as f64;
    let total: f64 = (1..nodes)
        .map(|k| {
            let t = k as f64 * h;
            cheb_density(t.cos()) * t.sin() * h
        })
        .sum();

    Ok(vec![
        Check::new(
            "chebyshev closed recursion equals generic recursion",
            e_rec,
            1e-12,
        ),
        Check::new(
            "chebyshev hypergeometric form equals recursion",
            e_hyp,
            1e-10,
        ),
        Check::new(
            "chebyshev p_n(cos t) equals sin((n+1)t)/sin t",
            e_trig,
            1e-11,
        ),
        Check::new(
            "chebyshev closed resolvent equals continued fraction",
            e_g,
            1e-10,
        ),
        Check::new("chebyshev semicircle equals resolvent density", e_rho, 1e-8),
        Check::new(
            "chebyshev semicircle normalization",
            (total - 1.0).abs(),
            1e-10,
        ),
    ])
}
