//! Lattice geometry, adjacency structure and the exact momentum-space
//! dispersion of the periodic cubic lattice.

pub(crate) mod cyclotomic;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest admissible site count: indices stay exactly representable in f64
/// and well inside `usize`.
pub const MAX_SITES: u64 = 1 << 48;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    Open,
}

impl std::str::FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" => Ok(Boundary::Periodic),
            "open" => Ok(Boundary::Open),
            other => Err(Error::InvalidSpec(format!(
                "unknown boundary '{other}' (expected 'periodic' or 'open')"
            ))),
        }
    }
}

/// Geometry descriptor: dimension, linear size, boundary condition and the
/// marked site. The marked site is ignored by the symmetry-exploiting
/// periodic solver and required for open-boundary solves.
///
/// Site indexing is row-major over coordinates `(c_1, ..., c_d)`:
/// `index = c_1 * L^(d-1) + c_2 * L^(d-2) + ... + c_d`. This convention is
/// fixed so marked-site indices in CLI output are stable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeSpec {
    dimension: usize,
    linear_size: usize,
    boundary: Boundary,
    marked: Option<usize>,
}

impl LatticeSpec {
    pub fn new(
        dimension: usize,
        linear_size: usize,
        boundary: Boundary,
        marked: Option<usize>,
    ) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidSpec("dimension must be >= 1".into()));
        }
        if linear_size == 0 {
            return Err(Error::InvalidSpec("linear size must be >= 1".into()));
        }
        // Periodic L = 2 would connect two sites along an axis by a doubled
        // bond; the dispersion convention is ambiguous there, so L >= 3.
        if boundary == Boundary::Periodic && linear_size < 3 {
            return Err(Error::InvalidSpec(format!(
                "periodic lattices require L >= 3, got L = {linear_size}"
            )));
        }
        let n = (linear_size as u64)
            .checked_pow(dimension as u32)
            .filter(|&n| n <= MAX_SITES)
            .ok_or_else(|| {
                Error::InvalidSpec(format!(
                    "L^d = {linear_size}^{dimension} exceeds the supported index range"
                ))
            })?;
        if let Some(m) = marked {
            if m as u64 >= n {
                return Err(Error::InvalidSpec(format!(
                    "marked site {m} out of range (N = {n})"
                )));
            }
        }
        Ok(LatticeSpec {
            dimension,
            linear_size,
            boundary,
            marked,
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn linear_size(&self) -> usize {
        self.linear_size
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn marked(&self) -> Option<usize> {
        self.marked
    }

    /// N = L^d.
    pub fn site_count(&self) -> u64 {
        (self.linear_size as u64).pow(self.dimension as u32)
    }

    /// Decode a row-major site index into coordinates `(c_1, ..., c_d)`.
    pub fn site_coords(&self, index: usize) -> Vec<usize> {
        let l = self.linear_size;
        let mut coords = vec![0usize; self.dimension];
        let mut rest = index;
        for c in coords.iter_mut().rev() {
            *c = rest % l;
            rest /= l;
        }
        coords
    }

    /// Encode coordinates `(c_1, ..., c_d)` into the row-major site index.
    pub fn site_index(&self, coords: &[usize]) -> usize {
        debug_assert_eq!(coords.len(), self.dimension);
        coords.iter().fold(0, |acc, &c| acc * self.linear_size + c)
    }
}

/// Hopping strength t, marked-site well depth mu and adiabatic accuracy
/// parameter epsilon; all strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub t: f64,
    pub mu: f64,
    pub epsilon: f64,
}

impl ModelParams {
    pub fn new(t: f64, mu: f64, epsilon: f64) -> Result<Self> {
        for (name, v) in [("t", t), ("mu", mu), ("epsilon", epsilon)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(ModelParams { t, mu, epsilon })
    }
}

/// One distinct adjacency eigenvalue with its exact multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionLevel {
    pub eps: f64,
    pub multiplicity: u64,
}

/// Distinct eigenvalues of the periodic adjacency matrix with exact
/// multiplicities, sorted descending by eigenvalue.
///
/// Grouping is exact: momentum points are binned by the sorted multiset of
/// folded indices `min(k_i, L - k_i)`, and multisets whose dispersion values
/// coincide as algebraic numbers are merged through their canonical
/// cyclotomic form (see [`cyclotomic`]). No floating-point comparison enters
/// the grouping, so the table is bit-reproducible across platforms.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionTable {
    levels: Vec<DispersionLevel>,
    n_sites: u64,
    dimension: usize,
}

impl DispersionTable {
    pub fn levels(&self) -> &[DispersionLevel] {
        &self.levels
    }

    pub fn n_sites(&self) -> u64 {
        self.n_sites
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Largest adjacency eigenvalue (the k = 0 mode, always 2d).
    pub fn eps_max(&self) -> f64 {
        self.levels[0].eps
    }

    /// Second-largest distinct adjacency eigenvalue.
    pub fn eps_second(&self) -> f64 {
        self.levels[1].eps
    }
}

/// Exact dispersion of the periodic cubic lattice: distinct values of
/// `eps_k = sum_i 2 cos(2 pi k_i / L)` over `k in {0..L-1}^d` with exact
/// multiplicities.
///
/// Cost is polynomial in the number of distinct 1D levels composed d times
/// (the number of folded-index multisets), never O(N) in memory.
pub fn build_dispersion(spec: &LatticeSpec) -> Result<DispersionTable> {
    if spec.boundary() != Boundary::Periodic {
        return Err(Error::InvalidSpec(
            "dispersion is only defined for periodic lattices".into(),
        ));
    }
    let l = spec.linear_size();
    let d = spec.dimension();
    debug_assert!(l >= 3);

    // 1D folded levels: f in 0..=L/2 with multiplicity 2 except at f = 0 and,
    // for even L, at f = L/2.
    let one_dim: Vec<(u32, u64)> = (0..=l / 2)
        .map(|f| {
            let m = if f == 0 || 2 * f == l { 1u64 } else { 2u64 };
            (f as u32, m)
        })
        .collect();

    // Compose dimensions on sorted multisets of folded indices.
    let mut multisets: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
    multisets.insert(Vec::new(), 1);
    for _ in 0..d {
        let mut next: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (key, mult) in &multisets {
            for &(f, mf) in &one_dim {
                let mut k = key.clone();
                let pos = k.partition_point(|&x| x <= f);
                k.insert(pos, f);
                *next.entry(k).or_insert(0) += mult * mf;
            }
        }
        multisets = next;
    }

    // Merge multisets with equal dispersion values via canonical cyclotomic
    // forms; keep the lexicographically smallest multiset as representative.
    let phi = cyclotomic::cyclotomic_polynomial(l);
    let mut groups: BTreeMap<Vec<i128>, (u64, Vec<u32>)> = BTreeMap::new();
    for (key, mult) in multisets {
        let canon = cyclotomic::canonical_cosine_sum(&key, l, &phi);
        match groups.get_mut(&canon) {
            Some((m, _rep)) => *m += mult, // BTreeMap iteration saw smaller keys first
            None => {
                groups.insert(canon, (mult, key));
            }
        }
    }

    let mut levels: Vec<(Vec<i128>, DispersionLevel)> = groups
        .into_iter()
        .map(|(canon, (multiplicity, rep))| {
            let eps = match cyclotomic::constant_term(&canon) {
                Some(c) => c as f64,
                None => neumaier_cosine_sum(&rep, l),
            };
            (canon, DispersionLevel { eps, multiplicity })
        })
        .collect();
    // Descending by value; the canonical key breaks (never observed) float ties.
    levels.sort_by(|a, b| {
        b.1.eps
            .partial_cmp(&a.1.eps)
            .unwrap()
            .then_with(|| a.0.cmp(&b.0))
    });
    let levels: Vec<DispersionLevel> = levels.into_iter().map(|(_, lv)| lv).collect();

    let n = spec.site_count();
    let total: u64 = levels.iter().map(|lv| lv.multiplicity).sum();
    if total != n {
        return Err(Error::InvariantViolation(format!(
            "dispersion multiplicities sum to {total}, expected N = {n}"
        )));
    }
    let table = DispersionTable {
        levels,
        n_sites: n,
        dimension: d,
    };
    debug_assert_eq!(table.eps_max(), 2.0 * d as f64);
    debug_assert_eq!(table.levels[0].multiplicity, 1);
    Ok(table)
}

/// Compensated sum of `2 cos(2 pi f / L)` over a folded multiset.
fn neumaier_cosine_sum(folded: &[u32], l: usize) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &f in folded {
        let term = 2.0 * (2.0 * PI * f as f64 / l as f64).cos();
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
    }
    sum + comp
}

/// Nearest-neighbor adjacency of the open d-dimensional grid in compressed
/// sparse row form. Each interior site has 2d neighbors, boundary sites fewer.
#[derive(Debug, Clone)]
pub struct SparseAdjacency {
    n: usize,
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl SparseAdjacency {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors_of(&self, site: usize) -> &[u32] {
        &self.neighbors[self.offsets[site]..self.offsets[site + 1]]
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    /// y = A x with a fixed summation order.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let mut acc = 0.0;
            for &j in self.neighbors_of(i) {
                acc += x[j as usize];
            }
            y[i] = acc;
        }
    }

    /// x^T A y with a fixed summation order.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut acc = 0.0;
        for i in 0..self.n {
            let mut row = 0.0;
            for &j in self.neighbors_of(i) {
                row += y[j as usize];
            }
            acc += x[i] * row;
        }
        acc
    }
}

/// Explicit sparse adjacency of the open grid.
pub fn build_open_adjacency(spec: &LatticeSpec) -> Result<SparseAdjacency> {
    if spec.boundary() != Boundary::Open {
        return Err(Error::InvalidSpec(
            "open adjacency requested for a periodic lattice".into(),
        ));
    }
    let n64 = spec.site_count();
    if n64 > u32::MAX as u64 {
        return Err(Error::InvalidSpec(format!(
            "open lattice with N = {n64} sites exceeds the sparse index range"
        )));
    }
    let n = n64 as usize;
    let l = spec.linear_size();
    let d = spec.dimension();

    let mut offsets = Vec::with_capacity(n + 1);
    let mut neighbors = Vec::with_capacity(2 * d * n);
    offsets.push(0);
    let mut coords = vec![0usize; d];
    for site in 0..n {
        // strides: axis d-1 is fastest (row-major)
        let mut stride = 1usize;
        for ax in (0..d).rev() {
            let c = coords[ax];
            if c > 0 {
                neighbors.push((site - stride) as u32);
            }
            if c + 1 < l {
                neighbors.push((site + stride) as u32);
            }
            stride *= l;
        }
        let start = offsets[site];
        neighbors[start..].sort_unstable();
        offsets.push(neighbors.len());
        // advance coordinates
        for ax in (0..d).rev() {
            coords[ax] += 1;
            if coords[ax] < l {
                break;
            }
            coords[ax] = 0;
        }
    }
    Ok(SparseAdjacency {
        n,
        offsets,
        neighbors,
    })
}

/// One marked-site orbit of the hyper-octahedral symmetry group of the open
/// grid (per-axis reflection `c -> L-1-c` composed with axis permutations).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRepresentative {
    /// Site index of the representative (coordinates equal to the sorted
    /// folded coordinates).
    pub site: usize,
    /// Sorted multiset of folded coordinates `min(c_i, L-1-c_i)`.
    pub folded: Vec<u32>,
    /// Number of sites in the orbit.
    pub orbit_size: u64,
}

/// One representative per orbit of marked sites on the open grid. The union
/// of the orbits covers all N sites; open-boundary spectra depend only on
/// the orbit.
pub fn marked_site_representatives(spec: &LatticeSpec) -> Result<Vec<OrbitRepresentative>> {
    if spec.boundary() != Boundary::Open {
        return Err(Error::InvalidSpec(
            "marked-site orbits are defined for open lattices".into(),
        ));
    }
    let l = spec.linear_size();
    let d = spec.dimension();
    let max_fold = (l - 1) / 2;

    // Enumerate sorted multisets of folded coordinates directly.
    let mut reps = Vec::new();
    let mut stack: Vec<u32> = Vec::with_capacity(d);
    enumerate_multisets(0, max_fold as u32, d, &mut stack, &mut |folded| {
        let coords: Vec<usize> = folded.iter().map(|&f| f as usize).collect();
        let site = spec.site_index(&coords);
        reps.push(OrbitRepresentative {
            site,
            folded: folded.to_vec(),
            orbit_size: orbit_size(folded, l),
        });
    });
    Ok(reps)
}

fn enumerate_multisets(
    min: u32,
    max: u32,
    remaining: usize,
    stack: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    if remaining == 0 {
        emit(stack);
        return;
    }
    for f in min..=max {
        stack.push(f);
        enumerate_multisets(f, max, remaining - 1, stack, emit);
        stack.pop();
    }
}

/// Count the coordinate tuples whose folded multiset equals `folded`:
/// permutations of the multiset times 2 per non-central folded value.
fn orbit_size(folded: &[u32], l: usize) -> u64 {
    let d = folded.len();
    let mut perms = (1..=d as u64).product::<u64>();
    let mut run = 1u64;
    for i in 1..d {
        if folded[i] == folded[i - 1] {
            run += 1;
            perms /= run;
        } else {
            run = 1;
        }
    }
    let unfold: u64 = folded
        .iter()
        .map(|&f| {
            if l % 2 == 1 && 2 * f as usize == l - 1 {
                1u64
            } else {
                2u64
            }
        })
        .product();
    perms * unfold
}
