//! Exact arithmetic for sums of cosines at rational angles.
//!
//! A dispersion value `eps = sum_i 2 cos(2 pi f_i / L)` is an algebraic
//! integer in the L-th cyclotomic field: it equals `P(zeta)` for the integer
//! polynomial `P(x) = sum_i (x^{f_i} + x^{L - f_i})`. Two such sums are equal
//! as real numbers iff their polynomials agree modulo the cyclotomic
//! polynomial `Phi_L`. Reducing mod `Phi_L` therefore yields a canonical
//! integer vector that serves as an exact grouping key: distinct folded
//! momentum multisets that share a dispersion value (e.g. {0,3} and {2,2}
//! for L = 12, both giving eps = 2) collapse to the same key without any
//! floating-point comparison.

/// Cyclotomic polynomial `Phi_n` as an ascending coefficient vector.
///
/// Computed by exact division: `Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic_polynomial(n: usize) -> Vec<i128> {
    assert!(n >= 1);
    let mut memo: Vec<Option<Vec<i128>>> = vec![None; n + 1];
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: usize, memo: &mut Vec<Option<Vec<i128>>>) -> Vec<i128> {
    if let Some(p) = &memo[n] {
        return p.clone();
    }
    let mut p = vec![0i128; n + 1];
    p[0] = -1;
    p[n] = 1; // x^n - 1
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_memo(d, memo);
            p = poly_div_exact(&p, &phi_d);
        }
    }
    memo[n] = Some(p.clone());
    p
}

/// Exact polynomial division (remainder must vanish); both inputs ascending.
fn poly_div_exact(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = degree(num);
    let dd = degree(den);
    assert!(dd <= dn, "division by higher-degree polynomial");
    let lead = den[dd];
    let mut rem: Vec<i128> = num.to_vec();
    let mut quot = vec![0i128; dn - dd + 1];
    for k in (0..=dn - dd).rev() {
        let c = rem[k + dd];
        if c == 0 {
            continue;
        }
        assert!(c % lead == 0, "non-exact polynomial division");
        let q = c / lead;
        quot[k] = q;
        for (i, &dc) in den.iter().enumerate() {
            rem[k + i] -= q * dc;
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "nonzero remainder");
    quot
}

fn degree(p: &[i128]) -> usize {
    p.iter().rposition(|&c| c != 0).unwrap_or(0)
}

/// Remainder of `p` modulo the monic polynomial `phi`; result has
/// `deg(phi)` coefficients (ascending, zero-padded).
pub fn reduce_mod(p: &[i128], phi: &[i128]) -> Vec<i128> {
    let dphi = degree(phi);
    assert_eq!(phi[dphi], 1, "phi must be monic");
    let mut rem: Vec<i128> = p.to_vec();
    if rem.len() < dphi {
        rem.resize(dphi, 0);
    }
    for k in (dphi..rem.len()).rev() {
        let c = rem[k];
        if c == 0 {
            continue;
        }
        rem[k] = 0;
        for i in 0..dphi {
            rem[k - dphi + i] -= c * phi[i];
        }
    }
    rem.truncate(dphi);
    rem
}

/// Canonical key of `sum_i 2 cos(2 pi f_i / L)` in `Z[zeta_L] mod Phi_L`.
pub fn canonical_cosine_sum(folded: &[u32], l: usize, phi: &[i128]) -> Vec<i128> {
    let mut p = vec![0i128; l];
    for &f in folded {
        let f = f as usize;
        debug_assert!(2 * f <= l);
        if f == 0 {
            p[0] += 2;
        } else if 2 * f == l {
            p[f] += 2;
        } else {
            p[f] += 1;
            p[l - f] += 1;
        }
    }
    reduce_mod(&p, phi)
}

/// True when the canonical form is a constant, i.e. the sum is an exact integer.
pub fn constant_term(canonical: &[i128]) -> Option<i128> {
    if canonical.iter().skip(1).all(|&c| c == 0) {
        Some(canonical[0])
    } else {
        None
    }
}
