//! Lanczos iteration with full reorthogonalization for the two lowest
//! eigenpairs of a sparse symmetric operator.
//!
//! The tridiagonal Ritz problem is solved by Sturm bisection plus inverse
//! iteration, so convergence checks stay O(k) per sweep. Start vectors are
//! deterministic (seeded) so repeated solves are bit-reproducible; a warm
//! start vector from a nearby solve can be mixed in to cut the iteration
//! count. A pseudo-random component is always included so that symmetry
//! sectors invisible to structured start vectors are never missed.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    /// Hard cap on the Krylov dimension before a restart is attempted.
    pub max_dim: usize,
    /// Relative residual tolerance (scaled by the spectral range estimate).
    pub tol: f64,
    /// Seed for the deterministic start vector.
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        LanczosOptions {
            max_dim: 400,
            tol: 1e-11,
            seed: 0x5eed_ad1a,
        }
    }
}

#[derive(Debug)]
pub struct LanczosEigen {
    pub e0: f64,
    pub e1: f64,
    pub v0: Vec<f64>,
    pub v1: Vec<f64>,
    pub iterations: usize,
    pub residuals: (f64, f64),
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn pseudo_random_unit(n: usize, seed: u64) -> Vec<f64> {
    let mut state = seed;
    let mut v: Vec<f64> = (0..n)
        .map(|_| (splitmix64(&mut state) >> 11) as f64 / (1u64 << 53) as f64 - 0.5)
        .collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}

/// Two lowest eigenpairs of the operator given by `apply` (y = H x).
pub fn lowest_two(
    apply: &dyn Fn(&[f64], &mut [f64]),
    n: usize,
    opts: &LanczosOptions,
    warm_start: Option<&[f64]>,
) -> Result<LanczosEigen> {
    if n < 2 {
        return Err(Error::InvalidSpec(
            "iterative eigensolver needs dimension >= 2".into(),
        ));
    }
    let max_dim = opts.max_dim.min(n);

    // start vector: warm guess (if any) plus a pseudo-random component
    let mut v0 = pseudo_random_unit(n, opts.seed);
    if let Some(w) = warm_start {
        debug_assert_eq!(w.len(), n);
        let wn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if wn > 0.0 {
            for i in 0..n {
                v0[i] = w[i] / wn + 0.05 * v0[i];
            }
            let norm = v0.iter().map(|x| x * x).sum::<f64>().sqrt();
            for x in &mut v0 {
                *x /= norm;
            }
        }
    }

    let mut basis: Vec<Vec<f64>> = vec![v0];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = vec![0.0f64; n];
    let mut restarts = 0usize;
    let mut total_iters = 0usize;

    loop {
        let k = alpha.len();
        if k >= max_dim {
            return Err(Error::Numerical(format!(
                "Lanczos failed to converge within {max_dim} iterations \
                 (residuals not below tolerance)"
            )));
        }
        let vk = basis.last().unwrap().clone();
        apply(&vk, &mut w);
        let a: f64 = vk.iter().zip(&w).map(|(x, y)| x * y).sum();
        alpha.push(a);
        total_iters += 1;

        // w -= a v_k + b v_{k-1}, then full reorthogonalization (two passes)
        for i in 0..n {
            w[i] -= a * vk[i];
        }
        if k > 0 {
            let b_prev = beta[k - 1];
            let vp = &basis[k - 1];
            for i in 0..n {
                w[i] -= b_prev * vp[i];
            }
        }
        for _ in 0..2 {
            for v in &basis {
                let proj: f64 = v.iter().zip(&w[..]).map(|(x, y)| x * y).sum();
                if proj != 0.0 {
                    for i in 0..n {
                        w[i] -= proj * v[i];
                    }
                }
            }
        }
        let b = w.iter().map(|x| x * x).sum::<f64>().sqrt();

        let spectral_scale = alpha
            .iter()
            .map(|x| x.abs())
            .fold(0.0f64, f64::max)
            .max(beta.iter().map(|x| x.abs()).fold(0.0f64, f64::max))
            .max(1e-300);

        let k1 = alpha.len();
        let mut converged = None;
        if k1 >= 2 {
            let (theta0, theta1) = two_smallest_tridiag(&alpha, &beta);
            let y0 = tridiag_eigvec(&alpha, &beta, theta0);
            let y1 = tridiag_eigvec(&alpha, &beta, theta1);
            let r0 = b * y0[k1 - 1].abs();
            let r1 = b * y1[k1 - 1].abs();
            let tol = opts.tol * spectral_scale.max(1.0);
            if (r0 <= tol && r1 <= tol) || k1 == n {
                converged = Some((theta0, theta1, y0, y1, r0, r1));
            }
        }

        if let Some((theta0, theta1, y0, y1, r0, r1)) = converged {
            let mut rv0 = vec![0.0f64; n];
            let mut rv1 = vec![0.0f64; n];
            for (j, v) in basis.iter().enumerate() {
                let (c0, c1) = (y0[j], y1[j]);
                for i in 0..n {
                    rv0[i] += c0 * v[i];
                    rv1[i] += c1 * v[i];
                }
            }
            normalize_sign(&mut rv0);
            normalize_sign(&mut rv1);
            return Ok(LanczosEigen {
                e0: theta0,
                e1: theta1,
                v0: rv0,
                v1: rv1,
                iterations: total_iters,
                residuals: (r0, r1),
            });
        }

        if b <= 1e-13 * spectral_scale {
            // Krylov space exhausted an invariant subspace before both pairs
            // converged: continue in a fresh orthogonal direction.
            restarts += 1;
            if restarts > 8 {
                return Err(Error::Numerical(
                    "Lanczos restarted too many times without convergence".into(),
                ));
            }
            let mut fresh = pseudo_random_unit(n, opts.seed.wrapping_add(restarts as u64));
            for _ in 0..2 {
                for v in &basis {
                    let proj: f64 = v.iter().zip(&fresh[..]).map(|(x, y)| x * y).sum();
                    for i in 0..n {
                        fresh[i] -= proj * v[i];
                    }
                }
            }
            let norm = fresh.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm < 1e-12 {
                return Err(Error::Numerical(
                    "no orthogonal restart direction found".into(),
                ));
            }
            for x in &mut fresh {
                *x /= norm;
            }
            beta.push(0.0);
            basis.push(fresh);
        } else {
            for x in w.iter_mut() {
                *x /= b;
            }
            beta.push(b);
            basis.push(w.clone());
        }
    }
}

fn normalize_sign(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let mut pivot = 0.0f64;
    for &x in v.iter() {
        if x.abs() > pivot.abs() {
            pivot = x;
        }
    }
    let s = if pivot < 0.0 { -1.0 } else { 1.0 };
    for x in v.iter_mut() {
        *x = *x * s / norm;
    }
}

/// Number of eigenvalues of the tridiagonal (alpha, beta) strictly below x
/// (Sturm sequence on the shifted LDL^T factorization).
fn sturm_count(alpha: &[f64], beta: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = alpha[0] - x;
    if d < 0.0 {
        count += 1;
    }
    for i in 1..alpha.len() {
        let b2 = beta[i - 1] * beta[i - 1];
        let denom = if d == 0.0 { 1e-300 } else { d };
        d = alpha[i] - x - b2 / denom;
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Two smallest eigenvalues of the symmetric tridiagonal (alpha, beta[..k-1]).
fn two_smallest_tridiag(alpha: &[f64], beta: &[f64]) -> (f64, f64) {
    let k = alpha.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..k {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 }
            + if i < k - 1 { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    let kth_smallest = |rank: usize| -> f64 {
        let mut a = lo;
        let mut b = hi;
        for _ in 0..120 {
            let m = 0.5 * (a + b);
            if sturm_count(alpha, beta, m) >= rank {
                b = m;
            } else {
                a = m;
            }
            if b - a <= 2.0 * f64::EPSILON * b.abs().max(1.0) {
                break;
            }
        }
        0.5 * (a + b)
    };
    (kth_smallest(1), kth_smallest(2))
}

/// Eigenvector of the tridiagonal at (approximately) eigenvalue theta via
/// shifted inverse iteration with partial pivoting.
fn tridiag_eigvec(alpha: &[f64], beta: &[f64], theta: f64) -> Vec<f64> {
    let k = alpha.len();
    if k == 1 {
        return vec![1.0];
    }
    // tiny shift regularizes the exactly-singular system
    let scale = alpha.iter().fold(0.0f64, |m, &a| m.max(a.abs())).max(1.0);
    let shift = theta + 1e-12 * scale;
    // pseudo-random start avoids accidental orthogonality to the target
    let mut y = pseudo_random_unit(k, 0x1d1a_5eed);
    for round in 0..3u64 {
        y = solve_shifted_tridiag(alpha, beta, shift, &y);
        let norm = y.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            y = pseudo_random_unit(k, 0x1d1a_5eed ^ (round + 1));
            continue;
        }
        for x in &mut y {
            *x /= norm;
        }
    }
    y
}

/// Solve (T - shift I) x = rhs for tridiagonal T by Gaussian elimination
/// with partial pivoting; pivoting fills a second superdiagonal.
fn solve_shifted_tridiag(alpha: &[f64], beta: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = alpha.len();
    let mut d: Vec<f64> = alpha.iter().map(|&a| a - shift).collect();
    let mut e = vec![0.0f64; n]; // first superdiagonal of row i
    let mut f = vec![0.0f64; n]; // second superdiagonal of row i
    e[..n - 1].copy_from_slice(&beta[..n - 1]);
    let mut b = rhs.to_vec();

    for i in 0..n - 1 {
        // row i+1 currently reads (sub, d[i+1], e[i+1]) in columns i, i+1, i+2
        let sub = beta[i];
        if sub.abs() > d[i].abs() {
            // swap rows i and i+1 (row i+1 has no column-(i+3) entry yet)
            let (d0, e0, f0, b0) = (d[i], e[i], f[i], b[i]);
            d[i] = sub;
            e[i] = d[i + 1];
            f[i] = e[i + 1];
            b[i] = b[i + 1];
            // remaining row i+1 after swap: (d0, e0, f0) in columns i..i+2
            let piv = if d[i] == 0.0 { 1e-300 } else { d[i] };
            let m = d0 / piv;
            d[i + 1] = e0 - m * e[i];
            e[i + 1] = f0 - m * f[i];
            b[i + 1] = b0 - m * b[i];
        } else {
            let piv = if d[i] == 0.0 { 1e-300 } else { d[i] };
            let m = sub / piv;
            d[i + 1] -= m * e[i];
            e[i + 1] -= m * f[i];
            b[i + 1] -= m * b[i];
        }
    }
    let mut x = vec![0.0f64; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        if i + 1 < n {
            acc -= e[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= f[i] * x[i + 2];
        }
        let piv = if d[i] == 0.0 { 1e-300 } else { d[i] };
        x[i] = acc / piv;
    }
    x
}
