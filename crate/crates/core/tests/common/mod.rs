//! Shared oracle helpers for the integration tests: explicit dense
//! Hamiltonians, an independent Jacobi eigensolver, and a dense
//! reference propagator. These deliberately avoid the library's own
//! solution paths so they can serve as oracles for them.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Row-major site index (matches the library's documented convention).
pub fn site_index(coords: &[usize], l: usize) -> usize {
    coords.iter().fold(0, |acc, &c| acc * l + c)
}

pub fn site_coords(mut idx: usize, d: usize, l: usize) -> Vec<usize> {
    let mut coords = vec![0usize; d];
    for c in coords.iter_mut().rev() {
        *c = idx % l;
        idx /= l;
    }
    coords
}

/// Explicit adjacency matrix of the d-dimensional cubic lattice.
pub fn dense_adjacency(d: usize, l: usize, periodic: bool) -> DMatrix<f64> {
    let n = l.pow(d as u32);
    let mut a = DMatrix::<f64>::zeros(n, n);
    for idx in 0..n {
        let coords = site_coords(idx, d, l);
        for ax in 0..d {
            for delta in [-1isize, 1] {
                let c = coords[ax] as isize + delta;
                let c = if periodic {
                    (c + l as isize) % l as isize
                } else if c < 0 || c >= l as isize {
                    continue;
                } else {
                    c
                };
                let mut nb = coords.clone();
                nb[ax] = c as usize;
                a[(idx, site_index(&nb, l))] = 1.0;
            }
        }
    }
    a
}

/// `H(s) = -(1-s) t A - s mu |marked><marked|`.
pub fn dense_hamiltonian(a: &DMatrix<f64>, t: f64, mu: f64, s: f64, marked: usize) -> DMatrix<f64> {
    let mut h = a * (-(1.0 - s) * t);
    h[(marked, marked)] -= s * mu;
    h
}

/// All eigenvalues ascending plus eigenvectors, via nalgebra.
pub fn dense_eigh(h: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = h.clone().symmetric_eigen();
    let n = h.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vecs = DMatrix::<f64>::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(i));
    }
    (vals, vecs)
}

/// Two lowest eigenpairs with eigenvectors polished by shifted inverse
/// iteration (the raw QR vectors carry ~1e-7 residuals, too coarse for
/// matrix-element oracles at 1e-9).
pub fn refined_two_lowest(
    h: &DMatrix<f64>,
) -> (f64, nalgebra::DVector<f64>, f64, nalgebra::DVector<f64>) {
    let (vals, vecs) = dense_eigh(h);
    let n = h.nrows();
    let scale = vals.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    let refine = |col: usize, theta: f64| -> nalgebra::DVector<f64> {
        let mut v = nalgebra::DVector::<f64>::from_iterator(n, vecs.column(col).iter().copied());
        let mut shifted = h.clone();
        for i in 0..n {
            shifted[(i, i)] -= theta + 1e-11 * scale;
        }
        let lu = shifted.lu();
        for _ in 0..2 {
            if let Some(r) = lu.solve(&v) {
                let norm = r.norm();
                if norm.is_finite() && norm > 0.0 {
                    v = r / norm;
                }
            }
        }
        v
    };
    (vals[0], refine(0, vals[0]), vals[1], refine(1, vals[1]))
}

/// `|<v0| (t A - mu P) |v1>|` from explicit dense data.
pub fn dense_v01(
    a: &DMatrix<f64>,
    t: f64,
    mu: f64,
    marked: usize,
    v0: &nalgebra::DVector<f64>,
    v1: &nalgebra::DVector<f64>,
) -> f64 {
    let av1 = a * v1;
    let s_a: f64 = v0.dot(&av1);
    let s_p = v0[marked] * v1[marked];
    (t * s_a - mu * s_p).abs()
}

/// Cyclic Jacobi eigensolver: independent of nalgebra's QR path, used as
/// the oracle for the library's dense open solver. Returns eigenvalues
/// ascending with matching eigenvector columns.
pub fn jacobi_eigh(mat: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = mat.nrows();
    let mut a = mat.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off < 1e-24 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t_rot = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t_rot * t_rot + 1.0).sqrt();
                let s_rot = t_rot * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s_rot * akq;
                    a[(k, q)] = s_rot * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s_rot * aqk;
                    a[(q, k)] = s_rot * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s_rot * vkq;
                    v[(k, q)] = s_rot * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap());
    let vals: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vecs = DMatrix::<f64>::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &v.column(i));
    }
    (vals, vecs)
}

/// Reference propagator: exact midpoint exponential through a full dense
/// eigendecomposition per step, in the site basis. Independent of the
/// library's Krylov stepper and of its reduced level basis.
#[allow(clippy::too_many_arguments)]
pub fn dense_reference_p0(
    d: usize,
    l: usize,
    t: f64,
    mu: f64,
    t_total: f64,
    steps: usize,
    marked: usize,
    periodic: bool,
) -> f64 {
    let a = dense_adjacency(d, l, periodic);
    let n = a.nrows();
    let mut psi: Vec<Complex64> = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    let h_step = t_total / steps as f64;
    for k in 0..steps {
        let s = ((k as f64 + 0.5) * h_step / t_total).clamp(0.0, 1.0);
        let h = dense_hamiltonian(&a, t, mu, s, marked);
        // Jacobi: the QR path's eigenvector noise would accumulate over steps
        let (vals, vecs) = jacobi_eigh(&h);
        // psi <- V exp(-i h E) V^T psi
        let mut coeff = vec![Complex64::new(0.0, 0.0); n];
        for col in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for row in 0..n {
                acc += vecs[(row, col)] * psi[row];
            }
            coeff[col] = acc * Complex64::from_polar(1.0, -h_step * vals[col]);
        }
        for row in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (col, ck) in coeff.iter().enumerate() {
                acc += vecs[(row, col)] * ck;
            }
            psi[row] = acc;
        }
    }
    psi[marked].norm_sqr()
}
