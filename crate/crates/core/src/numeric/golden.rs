//! Golden-section search for unimodal extrema.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Maximum of a unimodal `f` on `[a, b]`. Stops when the bracket is
/// narrower than `tol_x`. Returns `(x, f(x))`.
pub fn golden_max(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol_x: f64) -> (f64, f64) {
    let (mut a, mut b) = (a, b);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol_x {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }
    let xm = 0.5 * (a + b);
    (xm, f(xm))
}

/// Minimum of a unimodal `f` on `[a, b]`.
pub fn golden_min(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol_x: f64) -> (f64, f64) {
    let (x, neg) = golden_max(&|v| -f(v), a, b, tol_x);
    (x, -neg)
}
