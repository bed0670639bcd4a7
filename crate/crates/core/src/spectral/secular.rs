//! Rank-one secular equation for `H = diag(lambda) - c * u u^T` with
//! `u_j = sqrt(w_j)`, `sum w_j = 1`, `w_j > 0` and strictly increasing
//! distinct `lambda_j`.
//!
//! Eigenvalues away from the unperturbed spectrum solve
//! `F(E) = c * sum_j w_j / (lambda_j - E) = 1`. `F` is strictly increasing
//! between poles, which brackets the two roots we need: the ground energy
//! below `lambda_0` and the first excited energy inside
//! `(lambda_0, lambda_1)`. Roots are carried as offsets from the nearest
//! pole so that residuals and eigenvector weights can be evaluated without
//! cancellation even when the root sits within a few ulp of the pole.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct WeightedLevels {
    /// Strictly increasing.
    pub lambda: Vec<f64>,
    /// Positive, summing to 1.
    pub weight: Vec<f64>,
}

/// A secular root expressed relative to its anchoring pole:
/// `E = lambda[anchor] + delta`.
#[derive(Debug, Clone, Copy)]
pub struct SecularRoot {
    pub value: f64,
    pub anchor: usize,
    pub delta: f64,
}

impl WeightedLevels {
    pub fn new(lambda: Vec<f64>, weight: Vec<f64>) -> Result<Self> {
        if lambda.len() != weight.len() || lambda.len() < 2 {
            return Err(Error::InvalidSpec(
                "secular solver needs >= 2 matching levels".into(),
            ));
        }
        if lambda.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Numerical(
                "secular levels must be strictly increasing (degenerate table?)".into(),
            ));
        }
        if weight.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::Numerical("secular weights must be positive".into()));
        }
        Ok(WeightedLevels { lambda, weight })
    }

    /// `lambda_j - E` for every level, cancellation-free near the anchor.
    fn denominators(&self, root: &SecularRoot) -> Vec<f64> {
        let la = self.lambda[root.anchor];
        self.lambda
            .iter()
            .enumerate()
            .map(|(j, &l)| {
                if j == root.anchor {
                    -root.delta
                } else {
                    (l - la) - root.delta
                }
            })
            .collect()
    }

    /// `(F(E) - 1, F'(E))` at a root position.
    pub fn residual(&self, c: f64, root: &SecularRoot) -> (f64, f64) {
        let den = self.denominators(root);
        let mut f = 0.0;
        let mut fp = 0.0;
        for (w, d) in self.weight.iter().zip(&den) {
            f += w / d;
            fp += w / (d * d);
        }
        (c * f - 1.0, c * fp)
    }

    /// Ground root below `lambda_0`; the bracket extends `c + margin` below
    /// the lowest pole (the perturbation norm bound plus a safety margin).
    pub fn root_below(&self, c: f64, margin: f64) -> Result<SecularRoot> {
        // E = lambda_0 - delta, delta > 0; G(delta) = c sum w/(d_j + delta)
        // decreases from +inf to < 1 on (0, c + margin].
        let d: Vec<f64> = self.lambda.iter().map(|&l| l - self.lambda[0]).collect();
        let w = &self.weight;
        let g = |delta: f64| -> (f64, f64) {
            let mut f = 0.0;
            let mut fp = 0.0;
            for (wi, di) in w.iter().zip(&d) {
                let den = di + delta;
                f += wi / den;
                fp -= wi / (den * den);
            }
            (c * f - 1.0, c * fp)
        };
        let hi = c + margin;
        let delta = solve_monotone(&g, 0.0, hi, c * w[0])?;
        Ok(SecularRoot {
            value: self.lambda[0] - delta,
            anchor: 0,
            delta: -delta,
        })
    }

    /// First-interval root in `(lambda_0, lambda_1)`, anchored to whichever
    /// pole it sits closer to.
    pub fn root_in_first_gap(&self, c: f64) -> Result<SecularRoot> {
        let l0 = self.lambda[0];
        let l1 = self.lambda[1];
        let width = l1 - l0;
        let half = 0.5 * width;
        let w = &self.weight;

        // which half does the root sit in?
        let mid_root = SecularRoot {
            value: l0 + half,
            anchor: 0,
            delta: half,
        };
        let (f_mid, _) = self.residual(c, &mid_root);

        if f_mid >= 0.0 {
            // root in (lambda_0, mid]: E = lambda_0 + delta; F increasing in delta
            let d: Vec<f64> = self.lambda.iter().map(|&l| l - l0).collect();
            let g = |delta: f64| -> (f64, f64) {
                let mut f = 0.0;
                let mut fp = 0.0;
                for (wi, di) in w.iter().zip(&d) {
                    let den = di - delta;
                    f += wi / den;
                    fp += wi / (den * den);
                }
                (-(c * f - 1.0), -c * fp) // negate: make it decreasing in delta
            };
            let delta = solve_monotone(&g, 0.0, half, (c * w[0]).min(half))?;
            Ok(SecularRoot {
                value: l0 + delta,
                anchor: 0,
                delta,
            })
        } else {
            // root in (mid, lambda_1): E = lambda_1 - delta; F decreasing in delta
            let d: Vec<f64> = self.lambda.iter().map(|&l| l - l1).collect();
            let g = |delta: f64| -> (f64, f64) {
                let mut f = 0.0;
                let mut fp = 0.0;
                for (wi, di) in w.iter().zip(&d) {
                    let den = di + delta;
                    f += wi / den;
                    fp -= wi / (den * den);
                }
                (c * f - 1.0, c * fp)
            };
            let delta = solve_monotone(&g, 0.0, half, (c * w[1]).min(half))?;
            Ok(SecularRoot {
                value: l1 - delta,
                anchor: 1,
                delta: -delta,
            })
        }
    }

    /// Normalized eigenvector coordinates in the level basis:
    /// `a_j = gamma * sqrt(w_j) / (lambda_j - E)`.
    pub fn eigen_coords(&self, root: &SecularRoot) -> Vec<f64> {
        let den = self.denominators(root);
        let mut a: Vec<f64> = self
            .weight
            .iter()
            .zip(&den)
            .map(|(w, d)| w.sqrt() / d)
            .collect();
        let norm = a.iter().map(|v| v * v).sum::<f64>().sqrt();
        for v in &mut a {
            *v /= norm;
        }
        a
    }
}

/// Root of the coupling-weighted resolvent `sum_j w_j / (eps_j - x) = 0`
/// on `(eps[1], eps[0])` for strictly DECREASING `eps`. This is the scaled
/// position of the first excited level in the s -> 1 limit.
pub fn coupling_node(eps: &[f64], weight: &[f64]) -> Result<f64> {
    if eps.len() < 2 {
        return Err(Error::Numerical("coupling node needs >= 2 levels".into()));
    }
    let lo = eps[1];
    let hi = eps[0];
    // S(x) = sum w/(eps - x) increases from -inf at eps[1]+ to +inf at eps[0]-.
    let g = |x: f64| -> (f64, f64) {
        let mut f = 0.0;
        let mut fp = 0.0;
        for (w, e) in weight.iter().zip(eps) {
            let den = e - x;
            f += w / den;
            fp += w / (den * den);
        }
        (-f, -fp) // negate: decreasing for solve_monotone
    };
    // offset from lo, searching delta in (0, hi - lo)
    let width = hi - lo;
    let h = |delta: f64| g(lo + delta);
    let delta = solve_monotone(&h, 0.0, width * (1.0 - 1e-14), 0.5 * width)?;
    Ok(lo + delta)
}

/// Root of a strictly decreasing `g` on the open bracket `(lo, hi]`, where
/// `g(lo+) = +inf` and `g(hi) < 0`. `g` returns `(value, derivative)`.
/// Bracketed Newton with bisection fallback.
fn solve_monotone(
    g: &dyn Fn(f64) -> (f64, f64),
    lo: f64,
    hi: f64,
    first_guess: f64,
) -> Result<f64> {
    let mut lo = lo;
    let mut hi = hi;
    if !(hi > lo) {
        return Err(Error::Numerical("empty secular bracket".into()));
    }
    let mut x = first_guess.clamp(lo + 0.25 * (hi - lo) * f64::EPSILON, hi);
    if !(x > lo) {
        x = 0.5 * (lo + hi);
    }
    for _ in 0..160 {
        let (f, fp) = g(x);
        if f == 0.0 {
            return Ok(x);
        }
        if f > 0.0 {
            lo = x; // root is above
        } else {
            hi = x;
        }
        let newton = x - f / fp;
        let next = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= 2.0 * f64::EPSILON * x.abs() || (hi - lo) <= 2.0 * f64::EPSILON * hi.abs() {
            return Ok(x);
        }
    }
    // The bracket is tiny by now; accept the midpoint rather than fail hard.
    if (hi - lo) < 1e-12 * hi.abs().max(1.0) {
        return Ok(0.5 * (lo + hi));
    }
    Err(Error::Numerical(
        "secular root iteration failed to converge".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_levels() -> WeightedLevels {
        WeightedLevels::new(
            vec![-6.0, -3.2, -1.0, 0.5, 2.0],
            vec![0.1, 0.3, 0.2, 0.25, 0.15],
        )
        .unwrap()
    }

    #[test]
    fn roots_satisfy_secular_equation() {
        let lv = sample_levels();
        for &c in &[1e-6, 0.01, 0.5, 2.0, 50.0] {
            let r0 = lv.root_below(c, 1.0).unwrap();
            let r1 = lv.root_in_first_gap(c).unwrap();
            let (f0, fp0) = lv.residual(c, &r0);
            let (f1, fp1) = lv.residual(c, &r1);
            // scaled residual: a root known to the last ulp still moves F by
            // |F'| * ulp(E)
            let ulp0 = f64::EPSILON * (r0.value.abs() + 1.0);
            let ulp1 = f64::EPSILON * (r1.value.abs() + 1.0);
            assert!(f0.abs() <= 1e-12 + 8.0 * fp0.abs() * ulp0, "c={c}: {f0:e}");
            assert!(f1.abs() <= 1e-12 + 8.0 * fp1.abs() * ulp1, "c={c}: {f1:e}");
            assert!(r0.value < -6.0);
            assert!(r1.value > -6.0 && r1.value < -3.2);
            assert!(r0.value >= -6.0 - c - 1.0);
        }
    }

    #[test]
    fn coords_are_normalized_and_eigen() {
        let lv = sample_levels();
        let c = 0.8;
        let r0 = lv.root_below(c, 1.0).unwrap();
        let a = lv.eigen_coords(&r0);
        let norm2: f64 = a.iter().map(|v| v * v).sum();
        assert!((norm2 - 1.0).abs() < 1e-12);
        // H a = E a with H = diag(lambda) - c u u^T
        let u: Vec<f64> = lv.weight.iter().map(|w| w.sqrt()).collect();
        let ua: f64 = u.iter().zip(&a).map(|(x, y)| x * y).sum();
        for j in 0..a.len() {
            let ha = lv.lambda[j] * a[j] - c * u[j] * ua;
            assert!((ha - r0.value * a[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn tiny_coupling_stays_near_poles() {
        let lv = sample_levels();
        let c = 1e-13;
        let r0 = lv.root_below(c, 1.0).unwrap();
        let r1 = lv.root_in_first_gap(c).unwrap();
        assert!((r0.value - -6.0).abs() < 1e-12);
        assert!((r1.value - -3.2).abs() < 1e-12);
        assert!(r0.value < -6.0);
        assert!(r1.value < -3.2);
    }

    #[test]
    fn coupling_node_is_resolvent_zero() {
        let eps = vec![6.0, 4.0, 2.0, -1.0, -6.0];
        let w = vec![0.2, 0.3, 0.1, 0.25, 0.15];
        let x = coupling_node(&eps, &w).unwrap();
        assert!(x > 4.0 && x < 6.0);
        let s: f64 = w.iter().zip(&eps).map(|(wi, ei)| wi / (ei - x)).sum();
        assert!(s.abs() < 1e-10);
    }
}
