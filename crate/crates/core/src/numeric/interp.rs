//! Monotone cubic interpolation (Fritsch-Carlson).
//!
//! Shape-preserving Hermite interpolation: on intervals where the data are
//! monotone the interpolant is monotone, and it never overshoots local
//! extrema. Used to evaluate sampled integrand curves between solver points.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    deriv: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::InvalidSpec(
                "interpolation needs >= 2 matching samples".into(),
            ));
        }
        if x.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidSpec(
                "interpolation abscissae must be strictly increasing".into(),
            ));
        }
        let n = x.len();
        let mut secant = vec![0.0; n - 1];
        for i in 0..n - 1 {
            secant[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
        }
        let mut d = vec![0.0; n];
        d[0] = secant[0];
        d[n - 1] = secant[n - 2];
        for i in 1..n - 1 {
            d[i] = if secant[i - 1] * secant[i] <= 0.0 {
                0.0
            } else {
                // harmonic mean weighted by interval lengths
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                (w1 + w2) / (w1 / secant[i - 1] + w2 / secant[i])
            };
        }
        // Fritsch-Carlson monotonicity clamp
        for i in 0..n - 1 {
            if secant[i] == 0.0 {
                d[i] = 0.0;
                d[i + 1] = 0.0;
            } else {
                let a = d[i] / secant[i];
                let b = d[i + 1] / secant[i];
                let r = a * a + b * b;
                if r > 9.0 {
                    let tau = 3.0 / r.sqrt();
                    d[i] = tau * a * secant[i];
                    d[i + 1] = tau * b * secant[i];
                }
            }
        }
        Ok(MonotoneCubic { x, y, deriv: d })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    /// Cubic Hermite evaluation; clamps to the domain endpoints.
    pub fn eval(&self, xq: f64) -> f64 {
        let n = self.x.len();
        if xq <= self.x[0] {
            return self.y[0];
        }
        if xq >= self.x[n - 1] {
            return self.y[n - 1];
        }
        let i = match self.x.partition_point(|&v| v <= xq) {
            0 => 0,
            p => p - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let t = (xq - self.x[i]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.y[i]
            + h10 * h * self.deriv[i]
            + h01 * self.y[i + 1]
            + h11 * h * self.deriv[i + 1]
    }
}
