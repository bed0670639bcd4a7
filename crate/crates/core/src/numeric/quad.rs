//! Adaptive Simpson quadrature with an accumulated error estimate.

use crate::error::{Error, Result};

/// Integral of `f` over `[a, b]` to the given relative tolerance.
/// Returns `(value, error_estimate)`.
pub fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<(f64, f64)> {
    if !(b > a) {
        return Err(Error::InvalidSpec(format!(
            "quadrature interval [{a}, {b}] is empty"
        )));
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    // absolute tolerance floor keeps near-zero integrals from recursing forever
    let scale = whole.abs().max(1e-300);
    let mut err_acc = 0.0;
    let v = recurse(
        f,
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        rel_tol * scale,
        48,
        45, // force a few splits so narrow peaks cannot alias away
        &mut err_acc,
    );
    Ok((v, err_acc))
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    accept_above: u32,
    err_acc: &mut f64,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    if depth == 0 || (depth <= accept_above && delta.abs() <= 15.0 * tol) {
        *err_acc += delta.abs() / 15.0;
        return left + right + delta / 15.0;
    }
    let t = tol / 2.0;
    recurse(
        f,
        a,
        m,
        fa,
        flm,
        fm,
        left,
        t,
        depth - 1,
        accept_above,
        err_acc,
    ) + recurse(
        f,
        m,
        b,
        fm,
        frm,
        fb,
        right,
        t,
        depth - 1,
        accept_above,
        err_acc,
    )
}

/// Prefix integrals of `f` at each knot: `out[i] = int_{knots[0]}^{knots[i]}`.
/// Each inter-knot panel is integrated adaptively to `rel_tol` of its own
/// magnitude; the second return value is the accumulated error estimate.
/// When `f` is a piecewise cubic with breaks at the knots the panels are
/// integrated exactly (Simpson is exact on cubics).
pub fn cumulative(f: &dyn Fn(f64) -> f64, knots: &[f64], rel_tol: f64) -> Result<(Vec<f64>, f64)> {
    if knots.len() < 2 {
        return Err(Error::InvalidSpec(
            "cumulative quadrature needs >= 2 knots".into(),
        ));
    }
    let mut out = Vec::with_capacity(knots.len());
    out.push(0.0);
    let mut acc = 0.0;
    let mut err = 0.0;
    for w in knots.windows(2) {
        let (v, e) = adaptive_simpson(f, w[0], w[1], rel_tol)?;
        acc += v;
        err += e;
        out.push(acc);
    }
    Ok((out, err))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomial_exactly() {
        let (v, _) = adaptive_simpson(&|x| x * x * x, 0.0, 2.0, 1e-10).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
    }

    #[test]
    fn integrates_peaked_function() {
        // int_0^1 1/((x-0.7)^2 + 1e-4) dx = [atan((x-0.7)/0.01)/0.01]
        let f = |x: f64| 1.0 / ((x - 0.7) * (x - 0.7) + 1e-4);
        let exact = ((0.3f64 / 0.01).atan() + (0.7f64 / 0.01).atan()) / 0.01;
        let (v, err) = adaptive_simpson(&f, 0.0, 1.0, 1e-8).unwrap();
        assert!((v - exact).abs() < 1e-4 * exact);
        assert!((v - exact).abs() <= 10.0 * err.max(1e-12 * exact));
    }

    #[test]
    fn halving_tolerance_stays_within_error_estimate() {
        let f = |x: f64| (10.0 * x).sin().exp();
        let (v1, e1) = adaptive_simpson(&f, 0.0, 3.0, 1e-4).unwrap();
        let (v2, _) = adaptive_simpson(&f, 0.0, 3.0, 5e-5).unwrap();
        assert!((v1 - v2).abs() <= e1.max(1e-12));
    }

    #[test]
    fn cumulative_matches_total() {
        let f = |x: f64| x.cos();
        let knots: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let (cum, _) = cumulative(&f, &knots, 1e-10).unwrap();
        assert!((cum.last().unwrap() - 1.0f64.sin()).abs() < 1e-10);
    }

    #[test]
    fn narrow_peak_not_aliased_at_loose_tolerance() {
        // a peak much narrower than the first subdivisions must still be
        // captured at rel_tol 1e-4
        let f = |x: f64| 1.0 / ((x - 0.372).powi(2) + 1e-6);
        let exact = ((0.628f64 / 1e-3).atan() + (0.372f64 / 1e-3).atan()) / 1e-3;
        let (v, _) = adaptive_simpson(&f, 0.0, 1.0, 1e-4).unwrap();
        assert!((v - exact).abs() < 1e-3 * exact, "v = {v}, exact = {exact}");
    }
}
