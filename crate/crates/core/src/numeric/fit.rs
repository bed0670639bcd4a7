//! Ordinary least squares on log-log data.

use crate::error::{Error, Result};

/// OLS fit of `ln y` against `ln x`. Returns `(slope, intercept, r_squared)`.
pub fn log_log_fit(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    if points.len() < 2 {
        return Err(Error::InvalidSpec("fit needs at least 2 points".into()));
    }
    for &(x, y) in points {
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "log-log fit requires positive finite data, got ({x}, {y})"
            )));
        }
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidSpec("all abscissae identical in fit".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_tot: f64 = ly.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    Ok((slope, intercept, r2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0]
            .iter()
            .map(|&n: &f64| (n, 3.0 * n * n))
            .collect();
        let (slope, intercept, r2) = log_log_fit(&pts).unwrap();
        assert!((slope - 2.0).abs() < 1e-12);
        assert!((intercept - 3.0f64.ln()).abs() < 1e-10);
        assert!((r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_is_slope_one() {
        let pts: Vec<(f64, f64)> = [64.0, 216.0, 1000.0, 4096.0]
            .iter()
            .map(|&n| (n, n))
            .collect();
        let (slope, _, r2) = log_log_fit(&pts).unwrap();
        assert_eq!(slope, 1.0);
        assert!((r2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_nonpositive() {
        assert!(log_log_fit(&[(1.0, 0.0), (2.0, 1.0)]).is_err());
    }
}
