//! Monotone piecewise-cubic Hermite interpolation (Fritsch–Butland slopes).

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::InvalidArgument(
                "node and value counts differ".into(),
            ));
        }
        if xs.len() < 2 {
            return Err(Error::InsufficientData {
                found: xs.len(),
                needed: 2,
            });
        }
        if xs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "nodes must be strictly increasing".into(),
            ));
        }
        let slopes = node_slopes(&xs, &ys);
        Ok(Self { xs, ys, slopes })
    }

    fn segment(&self, x: f64) -> Option<usize> {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return None;
        }
        let k = self.xs.partition_point(|&v| v <= x);
        Some(k.saturating_sub(1).min(n - 2))
    }

    /// Interpolated value; clamps to the end values outside the node range.
    pub fn value(&self, x: f64) -> f64 {
        let n = self.xs.len();
        match self.segment(x) {
            None if x < self.xs[0] => self.ys[0],
            None => self.ys[n - 1],
            Some(k) => {
                let h = self.xs[k + 1] - self.xs[k];
                let t = (x - self.xs[k]) / h;
                let (t2, t3) = (t * t, t * t * t);
                self.ys[k] * (2.0 * t3 - 3.0 * t2 + 1.0)
                    + h * self.slopes[k] * (t3 - 2.0 * t2 + t)
                    + self.ys[k + 1] * (-2.0 * t3 + 3.0 * t2)
                    + h * self.slopes[k + 1] * (t3 - t2)
            }
        }
    }

    /// First derivative; zero outside the node range.
    pub fn derivative(&self, x: f64) -> f64 {
        match self.segment(x) {
            None => 0.0,
            Some(k) => {
                let h = self.xs[k + 1] - self.xs[k];
                let t = (x - self.xs[k]) / h;
                let t2 = t * t;
                (6.0 * t2 - 6.0 * t) * (self.ys[k] - self.ys[k + 1]) / h
                    + self.slopes[k] * (3.0 * t2 - 4.0 * t + 1.0)
                    + self.slopes[k + 1] * (3.0 * t2 - 2.0 * t)
            }
        }
    }
}

fn node_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

/// One-sided three-point slope, limited to keep the end segment monotone.
fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() || m0 == 0.0 {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}
