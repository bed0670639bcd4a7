//! Time-dependent Schrodinger evolution `i dpsi/dtau = H(s(tau)) psi` for
//! constant-rate and local-adiabatic schedules.
//!
//! The propagator is a Lanczos (Krylov) exponential midpoint rule: each step
//! applies `exp(-i h H(s_mid))` through a small Krylov space. The step is
//! unitary up to roundoff, so norm drift stays at machine level; accuracy in
//! the time dependence of `H` is controlled by halving the step until the
//! final marked-site probability is stable.
//!
//! Periodic lattices evolve in the level basis of the dispersion table:
//! the initial state `|+>` is the single `k = 0` level, the Hamiltonian is
//! diagonal-plus-rank-one there, and one application costs O(#levels).
//! Open lattices evolve in the site basis with sparse applications.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{
    build_dispersion, build_open_adjacency, Boundary, DispersionTable, LatticeSpec, ModelParams,
    SparseAdjacency,
};
use crate::numeric::interp::MonotoneCubic;
use crate::schedule::ScheduleTable;

/// Time-dependent Hamiltonian backend: applies `H(s)` and exposes the
/// initial state and the marked-site amplitude.
pub trait Hamiltonian: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, s: f64, x: &[Complex64], y: &mut [Complex64]);
    /// The s = 0 ground state `|+>` in this backend's basis.
    fn initial_state(&self) -> Vec<Complex64>;
    /// `<i*|psi>`.
    fn marked_overlap(&self, psi: &[Complex64]) -> Complex64;
    /// `Re <psi|H(s)|psi>`.
    fn energy(&self, s: f64, psi: &[Complex64]) -> f64 {
        let mut h = vec![Complex64::new(0.0, 0.0); psi.len()];
        self.apply(s, psi, &mut h);
        psi.iter().zip(&h).map(|(a, b)| (a.conj() * b).re).sum()
    }
    /// Magnitude scale of `H` for step-size heuristics.
    fn energy_scale(&self) -> f64;
}

/// Periodic lattice reduced to the span of the level-projected marked-site
/// vectors; exact because the evolution never leaves that span.
pub struct ReducedPeriodic {
    eps: Vec<f64>,
    u: Vec<f64>,
    t: f64,
    mu: f64,
    dim_d: usize,
}

impl ReducedPeriodic {
    pub fn new(table: &DispersionTable, params: &ModelParams) -> Self {
        let n = table.n_sites() as f64;
        ReducedPeriodic {
            eps: table.levels().iter().map(|lv| lv.eps).collect(),
            u: table
                .levels()
                .iter()
                .map(|lv| (lv.multiplicity as f64 / n).sqrt())
                .collect(),
            t: params.t,
            mu: params.mu,
            dim_d: table.dimension(),
        }
    }
}

impl Hamiltonian for ReducedPeriodic {
    fn dim(&self) -> usize {
        self.eps.len()
    }

    fn apply(&self, s: f64, x: &[Complex64], y: &mut [Complex64]) {
        let hop = -(1.0 - s) * self.t;
        let mut ux = Complex64::new(0.0, 0.0);
        for (u, xi) in self.u.iter().zip(x) {
            ux += u * xi;
        }
        let c = s * self.mu;
        for i in 0..x.len() {
            y[i] = hop * self.eps[i] * x[i] - c * self.u[i] * ux;
        }
    }

    fn initial_state(&self) -> Vec<Complex64> {
        let mut psi = vec![Complex64::new(0.0, 0.0); self.eps.len()];
        psi[0] = Complex64::new(1.0, 0.0);
        psi
    }

    fn marked_overlap(&self, psi: &[Complex64]) -> Complex64 {
        self.u.iter().zip(psi).map(|(u, p)| u * p).sum()
    }

    fn energy_scale(&self) -> f64 {
        2.0 * self.dim_d as f64 * self.t + self.mu
    }
}

/// Open lattice in the site basis.
pub struct OpenSite {
    adjacency: SparseAdjacency,
    marked: usize,
    t: f64,
    mu: f64,
    dim_d: usize,
}

impl OpenSite {
    pub fn new(spec: &LatticeSpec, params: &ModelParams) -> Result<Self> {
        let marked = spec.marked().ok_or_else(|| {
            Error::InvalidSpec("open-lattice dynamics requires a marked site".into())
        })?;
        Ok(OpenSite {
            adjacency: build_open_adjacency(spec)?,
            marked,
            t: params.t,
            mu: params.mu,
            dim_d: spec.dimension(),
        })
    }
}

impl Hamiltonian for OpenSite {
    fn dim(&self) -> usize {
        self.adjacency.n()
    }

    fn apply(&self, s: f64, x: &[Complex64], y: &mut [Complex64]) {
        let hop = -(1.0 - s) * self.t;
        for i in 0..self.adjacency.n() {
            let mut acc = Complex64::new(0.0, 0.0);
            for &j in self.adjacency.neighbors_of(i) {
                acc += x[j as usize];
            }
            y[i] = hop * acc;
        }
        y[self.marked] -= s * self.mu * x[self.marked];
    }

    fn initial_state(&self) -> Vec<Complex64> {
        let n = self.adjacency.n();
        vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n]
    }

    fn marked_overlap(&self, psi: &[Complex64]) -> Complex64 {
        psi[self.marked]
    }

    fn energy_scale(&self) -> f64 {
        2.0 * self.dim_d as f64 * self.t + self.mu
    }
}

/// s(tau) during the evolution.
#[derive(Debug, Clone)]
pub enum ScheduleKind {
    /// `s = tau / T` exactly.
    ConstantRate,
    /// Local-adiabatic schedule; s(tau) interpolated monotone-cubically.
    Lae(ScheduleTable),
}

/// Step-control knobs.
#[derive(Debug, Clone, Copy)]
pub struct StepControl {
    /// Starting step count; derived from T and the energy scale when None.
    pub initial_steps: Option<usize>,
    /// Stop halving once |P0(2n) - P0(n)| falls below this.
    pub p0_tolerance: f64,
    pub max_halvings: u32,
    /// Krylov dimension per step.
    pub krylov_dim: usize,
    /// Norm drift abort threshold.
    pub max_norm_drift: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            initial_steps: None,
            p0_tolerance: 1e-5,
            max_halvings: 18,
            krylov_dim: 24,
            max_norm_drift: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EvolutionConfig {
    pub spec: LatticeSpec,
    pub params: ModelParams,
    /// Total annealing time; 0 means an instantaneous quench (measure |+>).
    pub total_time: f64,
    pub schedule: ScheduleKind,
    pub steps: StepControl,
}

#[derive(Debug, Clone, Copy)]
pub struct EvolutionResult {
    /// Final marked-site probability `|<i*|psi(T)>|^2`, which at s = 1 is
    /// exactly the ground-state probability.
    pub p0: f64,
    /// `| ||psi(T)||^2 - 1 |`.
    pub norm_drift: f64,
    /// Step count of the converged run.
    pub steps: usize,
    /// |P0 change| in the final step-halving comparison.
    pub halving_delta: f64,
}

/// Evolve from the exact s = 0 ground state and report final statistics.
pub fn evolve(config: &EvolutionConfig) -> Result<EvolutionResult> {
    match config.spec.boundary() {
        Boundary::Periodic => {
            let table = build_dispersion(&config.spec)?;
            let ham = ReducedPeriodic::new(&table, &config.params);
            evolve_backend(&ham, config)
        }
        Boundary::Open => {
            let ham = OpenSite::new(&config.spec, &config.params)?;
            evolve_backend(&ham, config)
        }
    }
}

/// Evolve a caller-supplied backend.
pub fn evolve_backend<H: Hamiltonian + ?Sized>(
    ham: &H,
    config: &EvolutionConfig,
) -> Result<EvolutionResult> {
    let t_total = config.total_time;
    if !(t_total >= 0.0) || !t_total.is_finite() {
        return Err(Error::InvalidSpec(format!(
            "total time must be finite and >= 0, got {t_total}"
        )));
    }
    if t_total == 0.0 {
        let psi = ham.initial_state();
        let p0 = ham.marked_overlap(&psi).norm_sqr();
        return Ok(EvolutionResult {
            p0,
            norm_drift: 0.0,
            steps: 0,
            halving_delta: 0.0,
        });
    }

    let s_of_tau = schedule_function(&config.schedule, t_total)?;
    let ctl = &config.steps;
    let mut steps = ctl.initial_steps.unwrap_or_else(|| {
        let by_scale = (0.5 * t_total * ham.energy_scale()).ceil() as usize;
        by_scale.max(64)
    });

    let mut prev = propagate(ham, &*s_of_tau, t_total, steps, ctl)?;
    for _ in 0..ctl.max_halvings {
        let next = propagate(ham, &*s_of_tau, t_total, steps * 2, ctl)?;
        let delta = (next.0 - prev.0).abs();
        steps *= 2;
        if delta <= ctl.p0_tolerance {
            return Ok(EvolutionResult {
                p0: next.0,
                norm_drift: next.1,
                steps,
                halving_delta: delta,
            });
        }
        prev = next;
    }
    Err(Error::Numerical(format!(
        "step halving did not stabilize P0 within {} refinements",
        ctl.max_halvings
    )))
}

fn schedule_function(
    schedule: &ScheduleKind,
    t_total: f64,
) -> Result<Box<dyn Fn(f64) -> f64 + Sync>> {
    match schedule {
        ScheduleKind::ConstantRate => Ok(Box::new(move |tau: f64| (tau / t_total).clamp(0.0, 1.0))),
        ScheduleKind::Lae(table) => {
            let samples = table.samples();
            if samples.len() < 2 {
                return Err(Error::InvalidSpec("schedule table too short".into()));
            }
            let tau_scale = t_total / samples.last().unwrap().1;
            let interp = MonotoneCubic::new(
                samples.iter().map(|p| p.1 * tau_scale).collect(),
                samples.iter().map(|p| p.0).collect(),
            )?;
            let s_end = samples.last().unwrap().0;
            Ok(Box::new(move |tau: f64| interp.eval(tau).clamp(0.0, s_end)))
        }
    }
}

/// Fixed-step Krylov-exponential midpoint propagation.
/// Returns `(p0, norm_drift)`.
fn propagate<H: Hamiltonian + ?Sized>(
    ham: &H,
    s_of_tau: &(dyn Fn(f64) -> f64 + Sync),
    t_total: f64,
    steps: usize,
    ctl: &StepControl,
) -> Result<(f64, f64)> {
    let n = ham.dim();
    let h = t_total / steps as f64;
    let mut psi = ham.initial_state();
    let m_max = ctl.krylov_dim.min(n).max(2);
    let mut ws = KrylovWorkspace::new(n, m_max);
    for k in 0..steps {
        let s_mid = s_of_tau((k as f64 + 0.5) * h);
        krylov_exp_step(ham, s_mid, h, &mut psi, m_max, &mut ws)?;
    }
    let norm2: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
    let drift = (norm2 - 1.0).abs();
    if drift > ctl.max_norm_drift {
        return Err(Error::Numerical(format!(
            "norm drift {drift:e} exceeds bound {:e} after {steps} steps",
            ctl.max_norm_drift
        )));
    }
    Ok((ham.marked_overlap(&psi).norm_sqr(), drift))
}

struct KrylovWorkspace {
    basis: Vec<Vec<Complex64>>,
    w: Vec<Complex64>,
}

impl KrylovWorkspace {
    fn new(n: usize, m: usize) -> Self {
        KrylovWorkspace {
            basis: (0..m).map(|_| vec![Complex64::new(0.0, 0.0); n]).collect(),
            w: vec![Complex64::new(0.0, 0.0); n],
        }
    }
}

/// One unitary step `psi <- exp(-i h H(s)) psi` through a Lanczos space of
/// dimension at most `m_max`.
fn krylov_exp_step<H: Hamiltonian + ?Sized>(
    ham: &H,
    s: f64,
    h: f64,
    psi: &mut [Complex64],
    m_max: usize,
    ws: &mut KrylovWorkspace,
) -> Result<()> {
    let n = psi.len();
    let norm0 = psi.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm0 == 0.0 {
        return Err(Error::Numerical("zero state in propagator".into()));
    }
    for i in 0..n {
        ws.basis[0][i] = psi[i] / norm0;
    }
    let mut alpha: Vec<f64> = Vec::with_capacity(m_max);
    let mut beta: Vec<f64> = Vec::with_capacity(m_max);
    let mut m = m_max;
    for j in 0..m_max {
        let (head, tail) = ws.basis.split_at_mut(j + 1);
        let vj = &head[j];
        ham.apply(s, vj, &mut ws.w);
        let aj: f64 = vj.iter().zip(&ws.w).map(|(v, w)| (v.conj() * w).re).sum();
        alpha.push(aj);
        for i in 0..n {
            ws.w[i] -= aj * vj[i];
        }
        if j > 0 {
            let bj = beta[j - 1];
            let vp = &head[j - 1];
            for i in 0..n {
                ws.w[i] -= bj * vp[i];
            }
        }
        // one classical reorthogonalization pass keeps the small basis clean
        for v in head.iter() {
            let proj: Complex64 = v.iter().zip(&ws.w).map(|(a, b)| a.conj() * b).sum();
            if proj.norm_sqr() > 0.0 {
                for i in 0..n {
                    ws.w[i] -= proj * v[i];
                }
            }
        }
        let bj = ws.w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if j + 1 == m_max || bj <= 1e-14 * alpha[j].abs().max(1.0) {
            m = j + 1;
            break;
        }
        beta.push(bj);
        let next = &mut tail[0];
        for i in 0..n {
            next[i] = ws.w[i] / bj;
        }
    }

    // exp(-i h T_m) e_1 via the small symmetric eigendecomposition
    let mut t_small = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        t_small[(j, j)] = alpha[j];
        if j + 1 < m {
            t_small[(j, j + 1)] = beta[j];
            t_small[(j + 1, j)] = beta[j];
        }
    }
    let eig = t_small.symmetric_eigen();
    let mut y = vec![Complex64::new(0.0, 0.0); m];
    for col in 0..m {
        let theta = eig.eigenvalues[col];
        let phase = Complex64::from_polar(1.0, -h * theta);
        let q0 = eig.eigenvectors[(0, col)];
        for row in 0..m {
            y[row] += eig.eigenvectors[(row, col)] * q0 * phase;
        }
    }
    for v in y.iter_mut() {
        *v *= norm0;
    }
    for i in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, yj) in y.iter().enumerate() {
            acc += yj * ws.basis[j][i];
        }
        psi[i] = acc;
    }
    Ok(())
}

/// Independent evolutions for each runtime in `t_list`; failures are
/// reported per entry without aborting the sweep.
pub fn sweep_runtime(
    spec: &LatticeSpec,
    params: &ModelParams,
    t_list: &[f64],
    schedule: &ScheduleKind,
    steps: &StepControl,
) -> Result<Vec<(f64, Result<EvolutionResult>)>> {
    if t_list.is_empty() {
        return Err(Error::InvalidSpec("runtime list is empty".into()));
    }
    if t_list.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidSpec("runtime list must be ascending".into()));
    }
    Ok(t_list
        .par_iter()
        .map(|&t| {
            let config = EvolutionConfig {
                spec: spec.clone(),
                params: *params,
                total_time: t,
                schedule: schedule.clone(),
                steps: *steps,
            };
            (t, evolve(&config))
        })
        .collect())
}
