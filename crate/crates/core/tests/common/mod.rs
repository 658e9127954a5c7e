#![allow(dead_code)]

use proptest::prelude::*;
use recdef::CoefficientSequence;

/// `∫_{-1}^{1} g(x) dx` after substituting `x = cos t`, by the trapezoid rule
/// in `t`. Spectrally accurate when `g` carries a `sqrt(1 - x^2)` edge factor.
pub fn band_integral(m: usize, g: impl Fn(f64) -> f64) -> f64 {
    let h = std::f64::consts::PI / m as f64;
    (1..m)
        .map(|k| {
            let t = k as f64 * h;
            g(t.cos()) * t.sin()
        })
        .sum::<f64>()
        * h
}

/// Trapezoid rule on an arbitrary increasing grid.
pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

/// Random tabulated sequences with a short head and a constant tail.
pub fn arb_sequence() -> impl Strategy<Value = CoefficientSequence> {
    (
        prop::collection::vec(-1.0f64..1.0, 0..6),
        prop::collection::vec(0.2f64..1.5, 0..6),
        -0.5f64..0.5,
        0.3f64..1.0,
    )
        .prop_map(|(a, b, a_inf, b_inf)| {
            CoefficientSequence::tabulated(a, b, a_inf, b_inf).expect("valid by construction")
        })
}
