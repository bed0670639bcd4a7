//! Size sweeps, log-log scaling fits and open-boundary spread analysis.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{marked_site_representatives, Boundary, LatticeSpec, ModelParams};
use crate::numeric::fit::log_log_fit;
use crate::numeric::golden::{golden_max, golden_min};
use crate::schedule::{sample_integrand, summarize_peak, GridConfig, PeakSummary};
use crate::spectral::{OpenModel, PeriodicModel, SolveOptions, SpectralModel};

/// Quantity extracted per lattice size for scaling fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    TEstimate,
    TLae,
    TConst,
    MinGap,
    MaxV01,
    Width,
}

impl Quantity {
    pub fn name(&self) -> &'static str {
        match self {
            Quantity::TEstimate => "t_estimate",
            Quantity::TLae => "t_lae",
            Quantity::TConst => "t_const",
            Quantity::MinGap => "min_gap",
            Quantity::MaxV01 => "max_v01",
            Quantity::Width => "width",
        }
    }
}

impl std::str::FromStr for Quantity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t_estimate" => Ok(Quantity::TEstimate),
            "t_lae" => Ok(Quantity::TLae),
            "t_const" => Ok(Quantity::TConst),
            "min_gap" => Ok(Quantity::MinGap),
            "max_v01" => Ok(Quantity::MaxV01),
            "width" => Ok(Quantity::Width),
            other => Err(Error::InvalidSpec(format!(
                "unknown quantity '{other}' (expected t_estimate, t_lae, t_const, \
                 min_gap, max_v01 or width)"
            ))),
        }
    }
}

/// OLS power-law fit on (log N, log y).
#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
    pub points: Vec<(f64, f64)>,
}

impl ScalingFit {
    pub fn from_points(points: Vec<(f64, f64)>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::InvalidSpec(format!(
                "scaling fit needs >= 4 points, got {}",
                points.len()
            )));
        }
        let (slope, intercept, r_squared) = log_log_fit(&points)?;
        Ok(ScalingFit {
            slope,
            intercept,
            r_squared,
            n_points: points.len(),
            points,
        })
    }
}

/// Peak metrics plus golden-polished gap/matrix-element extrema for one size.
#[derive(Debug, Clone)]
pub struct SizeMetrics {
    pub l: usize,
    pub n: u64,
    pub summary: PeakSummary,
    pub min_gap: f64,
    pub max_v01: f64,
}

impl SizeMetrics {
    pub fn quantity(&self, q: Quantity) -> f64 {
        match q {
            Quantity::TEstimate => self.summary.t_estimate,
            Quantity::TLae => self.summary.t_lae,
            Quantity::TConst => self.summary.t_const,
            Quantity::MinGap => self.min_gap,
            Quantity::MaxV01 => self.max_v01,
            Quantity::Width => self.summary.width,
        }
    }
}

/// Raw and size-windowed fits over one sweep.
#[derive(Debug, Clone)]
pub struct ScalingReport {
    pub quantity: Quantity,
    pub per_size: Vec<SizeMetrics>,
    pub raw: ScalingFit,
    /// Fit restricted to `L >= fit_floor(d)`; equals `raw` when nothing is
    /// dropped (or too few points would remain).
    pub windowed: ScalingFit,
    pub fit_floor: usize,
}

/// Smallest sizes are transient-dominated; default floors per dimension.
pub fn default_fit_floor(d: usize) -> usize {
    match d {
        2 => 8,
        3 => 6,
        4 => 4,
        _ => 0,
    }
}

/// Integrand pipeline for one periodic lattice size.
pub fn size_metrics(
    d: usize,
    l: usize,
    params: &ModelParams,
    grid: &GridConfig,
) -> Result<SizeMetrics> {
    let spec = LatticeSpec::new(d, l, Boundary::Periodic, None)?;
    let model = PeriodicModel::new(&spec, *params)?;
    let curve = sample_integrand(&model, grid)?;
    let summary = summarize_peak(&curve)?;
    let (min_gap, max_v01) = polish_extrema(&model, &curve)?;
    Ok(SizeMetrics {
        l,
        n: spec.site_count(),
        summary,
        min_gap,
        max_v01,
    })
}

/// Golden-section refinement of `min_s g` and `max_s V01` around the sampled
/// extrema, evaluating the true model.
fn polish_extrema<M: SpectralModel + ?Sized>(
    model: &M,
    curve: &crate::schedule::IntegrandCurve,
) -> Result<(f64, f64)> {
    let pts = curve.points();
    let bracket = |idx: usize| -> (f64, f64) {
        let lo = if idx == 0 { pts[0].s } else { pts[idx - 1].s };
        let hi = if idx + 1 == pts.len() {
            pts[pts.len() - 1].s
        } else {
            pts[idx + 1].s
        };
        (lo, hi)
    };
    let mut gap_idx = 0;
    let mut v01_idx = 0;
    for (i, p) in pts.iter().enumerate() {
        if p.gap < pts[gap_idx].gap {
            gap_idx = i;
        }
        if p.v01 > pts[v01_idx].v01 {
            v01_idx = i;
        }
    }
    let (a, b) = bracket(gap_idx);
    let min_gap = if a < b {
        let (_, g) = golden_min(
            &|s| model.eval(s).map(|p| p.gap).unwrap_or(f64::INFINITY),
            a,
            b,
            (b - a) * 1e-8,
        );
        g.min(pts[gap_idx].gap)
    } else {
        pts[gap_idx].gap
    };
    let (a, b) = bracket(v01_idx);
    let max_v01 = if a < b {
        let (_, v) = golden_max(
            &|s| model.eval(s).map(|p| p.v01).unwrap_or(f64::NEG_INFINITY),
            a,
            b,
            (b - a) * 1e-8,
        );
        v.max(pts[v01_idx].v01)
    } else {
        pts[v01_idx].v01
    };
    Ok((min_gap, max_v01))
}

/// Run the integrand/peak pipeline per size and fit `log y` vs `log N`.
pub fn runtime_scaling(
    d: usize,
    sizes: &[usize],
    params: &ModelParams,
    quantity: Quantity,
    grid: &GridConfig,
) -> Result<ScalingReport> {
    if sizes.len() < 4 {
        return Err(Error::InvalidSpec(format!(
            "scaling sweep needs >= 4 sizes, got {}",
            sizes.len()
        )));
    }
    if sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidSpec(
            "scaling sizes must be strictly ascending".into(),
        ));
    }
    let per_size: Vec<SizeMetrics> = sizes
        .par_iter()
        .map(|&l| {
            size_metrics(d, l, params, grid)
                .map_err(|e| Error::Numerical(format!("size L = {l} failed: {e}")))
        })
        .collect::<Result<Vec<_>>>()?;

    report_from_metrics(d, quantity, per_size)
}

fn report_from_metrics(
    d: usize,
    quantity: Quantity,
    per_size: Vec<SizeMetrics>,
) -> Result<ScalingReport> {
    let all: Vec<(f64, f64)> = per_size
        .iter()
        .map(|m| (m.n as f64, m.quantity(quantity)))
        .collect();
    let raw = ScalingFit::from_points(all)?;
    let floor = default_fit_floor(d);
    let windowed_pts: Vec<(f64, f64)> = per_size
        .iter()
        .filter(|m| m.l >= floor)
        .map(|m| (m.n as f64, m.quantity(quantity)))
        .collect();
    let windowed = if windowed_pts.len() >= 4 && windowed_pts.len() < per_size.len() {
        ScalingFit::from_points(windowed_pts)?
    } else {
        raw.clone()
    };
    Ok(ScalingReport {
        quantity,
        per_size,
        raw,
        windowed,
        fit_floor: floor,
    })
}

/// T_estimate scaling of the analytic Grover reference over a list of N.
pub fn grover_scaling(n_list: &[u64], grid: &GridConfig) -> Result<ScalingFit> {
    if n_list.len() < 4 {
        return Err(Error::InvalidSpec(format!(
            "scaling sweep needs >= 4 sizes, got {}",
            n_list.len()
        )));
    }
    let points: Vec<(f64, f64)> = n_list
        .par_iter()
        .map(|&n| -> Result<(f64, f64)> {
            let model = crate::spectral::GroverModel { n };
            let curve = sample_integrand(&model, grid)?;
            let sum = summarize_peak(&curve)?;
            Ok((n as f64, sum.t_estimate))
        })
        .collect::<Result<Vec<_>>>()?;
    ScalingFit::from_points(points)
}

/// Peak metrics of one marked-site orbit on the open lattice.
#[derive(Debug, Clone)]
pub struct OrbitMetrics {
    pub site: usize,
    pub orbit_size: u64,
    pub peak_height: f64,
    pub peak_location: f64,
}

/// Relative spread of peak height and location over marked-site orbits.
#[derive(Debug, Clone)]
pub struct SpreadReport {
    pub l: usize,
    pub orbit_count: usize,
    /// `(max - min) / mean`, the mean weighted by orbit size so that
    /// statistics over representatives equal statistics over all N sites.
    pub relative_spread_height: f64,
    pub relative_spread_location: f64,
    pub per_orbit: Vec<OrbitMetrics>,
}

/// Options for the open-boundary spread pipeline.
#[derive(Debug, Clone, Copy)]
pub struct SpreadOptions {
    pub grid: GridConfig,
    pub solve: SolveOptions,
}

impl Default for SpreadOptions {
    fn default() -> Self {
        SpreadOptions {
            grid: GridConfig::default(),
            // full dense diagonalization per s point is prohibitive beyond a
            // few hundred sites; the reorthogonalized Lanczos path with
            // warm-started base grids matches it to solver tolerance
            solve: SolveOptions {
                dense_threshold: 200,
                ..SolveOptions::default()
            },
        }
    }
}

/// Run the open-path integrand pipeline for every marked-site orbit
/// representative and report the relative spreads.
pub fn boundary_spread(
    d: usize,
    l: usize,
    params: &ModelParams,
    opts: &SpreadOptions,
) -> Result<SpreadReport> {
    if l < 4 {
        return Err(Error::InvalidSpec(format!(
            "boundary spread needs L >= 4, got {l}"
        )));
    }
    let spec = LatticeSpec::new(d, l, Boundary::Open, Some(0))?;
    let reps = marked_site_representatives(&spec)?;
    if reps.len() < 2 {
        return Err(Error::InvalidSpec(
            "boundary spread needs at least 2 orbits".into(),
        ));
    }
    let per_orbit: Vec<OrbitMetrics> = reps
        .par_iter()
        .map(|rep| -> Result<OrbitMetrics> {
            let site_spec = LatticeSpec::new(d, l, Boundary::Open, Some(rep.site))?;
            let model = OpenModel::new(&site_spec, *params, opts.solve)?;
            let curve = sample_integrand(&model, &opts.grid)
                .map_err(|e| Error::Numerical(format!("site {}: {e}", rep.site)))?;
            let summary = summarize_peak(&curve)
                .map_err(|e| Error::Numerical(format!("site {}: {e}", rep.site)))?;
            Ok(OrbitMetrics {
                site: rep.site,
                orbit_size: rep.orbit_size,
                peak_height: summary.h,
                peak_location: summary.s_peak,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let spread = |f: &dyn Fn(&OrbitMetrics) -> f64| -> f64 {
        let total_w: f64 = per_orbit.iter().map(|o| o.orbit_size as f64).sum();
        let mean: f64 = per_orbit
            .iter()
            .map(|o| o.orbit_size as f64 * f(o))
            .sum::<f64>()
            / total_w;
        let max = per_orbit.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        let min = per_orbit.iter().map(f).fold(f64::INFINITY, f64::min);
        (max - min) / mean
    };
    Ok(SpreadReport {
        l,
        orbit_count: per_orbit.len(),
        relative_spread_height: spread(&|o| o.peak_height),
        relative_spread_location: spread(&|o| o.peak_location),
        per_orbit,
    })
}
