//! Dense two-lowest eigenpair path for small open lattices.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::lattice::SparseAdjacency;

/// Dense matrix of `H(s) = -(1-s) t A - s mu |marked><marked|`.
pub fn open_hamiltonian(
    adjacency: &SparseAdjacency,
    t: f64,
    mu: f64,
    s: f64,
    marked: usize,
) -> DMatrix<f64> {
    let n = adjacency.n();
    let mut h = DMatrix::<f64>::zeros(n, n);
    let hop = -(1.0 - s) * t;
    for i in 0..n {
        for &j in adjacency.neighbors_of(i) {
            h[(i, j as usize)] = hop;
        }
    }
    h[(marked, marked)] -= s * mu;
    h
}

/// Two lowest eigenpairs by full symmetric diagonalization, with a
/// deterministic sign convention (largest-magnitude component positive).
///
/// The QR eigenvectors carry residuals around 1e-7 on these Hamiltonians,
/// which is too coarse for the matrix-element comparisons downstream, so
/// each returned vector is polished by shifted inverse iteration.
pub fn lowest_two(h: &DMatrix<f64>) -> Result<(f64, Vec<f64>, f64, Vec<f64>)> {
    let n = h.nrows();
    if n < 2 {
        return Err(Error::InvalidSpec(
            "dense solve needs dimension >= 2".into(),
        ));
    }
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let scale = eig.eigenvalues.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
    let extract = |col: usize, theta: f64| -> Vec<f64> {
        let mut v = DVector::<f64>::from_iterator(n, eig.eigenvectors.column(col).iter().copied());
        let mut shifted = h.clone();
        let shift = theta + 1e-11 * scale;
        for i in 0..n {
            shifted[(i, i)] -= shift;
        }
        let lu = shifted.lu();
        for _ in 0..2 {
            if let Some(refined) = lu.solve(&v) {
                let norm = refined.norm();
                if norm.is_finite() && norm > 0.0 {
                    v = refined / norm;
                }
            }
        }
        let mut out: Vec<f64> = v.iter().copied().collect();
        let mut pivot = 0.0f64;
        for &x in &out {
            if x.abs() > pivot.abs() {
                pivot = x;
            }
        }
        if pivot < 0.0 {
            for x in &mut out {
                *x = -*x;
            }
        }
        out
    };
    let (e0, e1) = (eig.eigenvalues[order[0]], eig.eigenvalues[order[1]]);
    Ok((e0, extract(order[0], e0), e1, extract(order[1], e1)))
}
