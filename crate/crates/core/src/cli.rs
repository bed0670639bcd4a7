//! Command-line surface: `spectrum`, `integrand`, `scaling`, `schedule`,
//! `dynamics`, `boundary`.
//!
//! Every run echoes its fully resolved configuration into the output header
//! as `#` comment lines. Exit codes: 0 success, 2 usage/validation error,
//! 3 numerical failure. A `key = value` config file (UTF-8, `#` comments)
//! supplies defaults for flags the user did not pass; `ADIA_THREADS` is the
//! fallback for `--threads`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::analysis::{boundary_spread, grover_scaling, runtime_scaling, Quantity, SpreadOptions};
use crate::dynamics::{evolve, sweep_runtime, EvolutionConfig, ScheduleKind, StepControl};
use crate::error::{Error, Result};
use crate::lattice::{Boundary, LatticeSpec, ModelParams};
use crate::output;
use crate::schedule::{build_lae_schedule, sample_integrand, summarize_peak, GridConfig};
use crate::spectral::{
    matrix_element, solve_periodic, LatticeContext, OpenModel, PeriodicModel, SolveOptions,
    SpectralModel, SpectralPoint,
};

#[derive(Parser, Debug)]
#[command(
    name = "adia",
    version,
    about = "Adiabatic lattice-search pipelines: spectra, integrand curves, \
             scaling fits, schedules, dynamics and boundary spreads"
)]
struct Cli {
    /// Worker threads (fallback: ADIA_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Config file of `key = value` lines; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Omit the timestamp comment so reruns are byte-identical.
    #[arg(long, global = true)]
    no_meta: bool,
    /// Also write a companion gnuplot script next to --out.
    #[arg(long, global = true)]
    gnuplot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One spectral point: E0, E1, gap, V01 and the integrand at a given s.
    Spectrum(SpectrumArgs),
    /// Sample the integrand curve over s in [0, 1] and summarize its peak.
    Integrand(CurveArgs),
    /// Size sweep and log-log fit of a runtime/gap/matrix-element quantity.
    Scaling(ScalingArgs),
    /// Local-adiabatic schedule tau(s) from the sampled curve.
    Schedule(CurveArgs),
    /// Constant-rate (or LAE) Schrodinger evolution; reports P0.
    Dynamics(DynamicsArgs),
    /// Relative spread of peak height/location over marked-site orbits.
    Boundary(BoundaryArgs),
}

#[derive(Args, Debug, Clone)]
struct LatticeArgs {
    /// Lattice dimension d.
    #[arg(long)]
    dim: Option<usize>,
    /// Linear size L (N = L^d).
    #[arg(long)]
    size: Option<usize>,
    /// periodic | open.
    #[arg(long)]
    boundary: Option<String>,
    /// Marked site index (required for open boundaries).
    #[arg(long)]
    marked: Option<usize>,
    /// Hopping strength t > 0.
    #[arg(long)]
    t: Option<f64>,
    /// Marked-site well depth mu > 0.
    #[arg(long)]
    mu: Option<f64>,
    /// Adiabatic accuracy parameter epsilon > 0.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    /// Adiabatic parameter in [0, 1].
    #[arg(long)]
    s: Option<f64>,
    /// Optional CSV output path (stdout otherwise).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurveArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    /// Base grid points (>= 64).
    #[arg(long)]
    base_points: Option<usize>,
    /// CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScalingArgs {
    /// Lattice dimension d (ignored for --quantity grover).
    #[arg(long)]
    dim: Option<usize>,
    /// Comma-separated ascending sizes: L values (or N values for grover).
    #[arg(long)]
    sizes: Option<String>,
    /// t_estimate | t_lae | t_const | min_gap | max_v01 | width | grover.
    #[arg(long)]
    quantity: Option<String>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    base_points: Option<usize>,
    /// CSV output path for the per-size table.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DynamicsArgs {
    #[command(flatten)]
    lattice: LatticeArgs,
    /// Single total runtime T (>= 0; 0 measures the initial state).
    #[arg(long)]
    runtime: Option<f64>,
    /// Comma-separated ascending runtime list for a sweep.
    #[arg(long)]
    runtimes: Option<String>,
    /// constant | lae.
    #[arg(long)]
    schedule: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BoundaryArgs {
    #[arg(long)]
    dim: Option<usize>,
    /// Linear size L >= 4 (open boundary).
    #[arg(long)]
    size: Option<usize>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    base_points: Option<usize>,
    /// CSV output path for the per-orbit table.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parse argv, dispatch and return the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints usage text; --help/--version land here with code 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let config = match load_config(cli.config.as_deref()) {
        Ok(map) => map,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let threads = resolve_threads(cli.threads, &config);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: could not build thread pool: {e}");
            return 3;
        }
    };
    let meta = !cli.no_meta;
    let gnuplot = cli.gnuplot;
    let outcome = pool.install(|| match &cli.command {
        Command::Spectrum(a) => cmd_spectrum(a, &config, meta),
        Command::Integrand(a) => cmd_integrand(a, &config, meta, gnuplot),
        Command::Scaling(a) => cmd_scaling(a, &config, meta, gnuplot),
        Command::Schedule(a) => cmd_schedule(a, &config, meta, gnuplot),
        Command::Dynamics(a) => cmd_dynamics(a, &config, meta, gnuplot),
        Command::Boundary(a) => cmd_boundary(a, &config, meta, gnuplot),
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

type ConfigMap = BTreeMap<String, String>;

fn load_config(path: Option<&Path>) -> Result<ConfigMap> {
    let mut map = BTreeMap::new();
    let Some(path) = path else {
        return Ok(map);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidSpec(format!("cannot read config {}: {e}", path.display())))?;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::InvalidSpec(format!(
                "config line {} is not 'key = value': {raw}",
                lineno + 1
            )));
        };
        map.insert(key.trim().to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn fill<T: FromStr>(slot: &mut Option<T>, config: &ConfigMap, key: &str) -> Result<()> {
    if slot.is_none() {
        if let Some(raw) = config.get(key) {
            let v = raw.parse::<T>().map_err(|_| {
                Error::InvalidSpec(format!("config key '{key}' has unparsable value '{raw}'"))
            })?;
            *slot = Some(v);
        }
    }
    Ok(())
}

fn resolve_threads(flag: Option<usize>, config: &ConfigMap) -> usize {
    flag.or_else(|| config.get("threads").and_then(|v| v.parse().ok()))
        .or_else(|| {
            std::env::var("ADIA_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(0)
}

struct ResolvedLattice {
    spec: LatticeSpec,
    params: ModelParams,
}

impl LatticeArgs {
    fn resolve(&self, config: &ConfigMap) -> Result<ResolvedLattice> {
        let mut a = self.clone();
        fill(&mut a.dim, config, "dim")?;
        fill(&mut a.size, config, "size")?;
        fill(&mut a.boundary, config, "boundary")?;
        fill(&mut a.marked, config, "marked")?;
        fill(&mut a.t, config, "t")?;
        fill(&mut a.mu, config, "mu")?;
        fill(&mut a.epsilon, config, "epsilon")?;
        let dim = a
            .dim
            .ok_or_else(|| Error::InvalidSpec("missing --dim".into()))?;
        let size = a
            .size
            .ok_or_else(|| Error::InvalidSpec("missing --size".into()))?;
        let boundary = match a.boundary.as_deref() {
            None => Boundary::Periodic,
            Some(b) => b.parse::<Boundary>()?,
        };
        let spec = LatticeSpec::new(dim, size, boundary, a.marked)?;
        let params = ModelParams::new(
            a.t.unwrap_or(1.0),
            a.mu.unwrap_or(1.0),
            a.epsilon.unwrap_or(1.0),
        )?;
        Ok(ResolvedLattice { spec, params })
    }
}

fn lattice_config_lines(r: &ResolvedLattice, extra: &[(String, String)]) -> Vec<String> {
    let mut lines = vec![
        format!("dim = {}", r.spec.dimension()),
        format!("size = {}", r.spec.linear_size()),
        format!(
            "boundary = {}",
            match r.spec.boundary() {
                Boundary::Periodic => "periodic",
                Boundary::Open => "open",
            }
        ),
    ];
    if let Some(m) = r.spec.marked() {
        lines.push(format!("marked = {m}"));
    }
    lines.push(format!("t = {}", r.params.t));
    lines.push(format!("mu = {}", r.params.mu));
    lines.push(format!("epsilon = {}", r.params.epsilon));
    for (k, v) in extra {
        lines.push(format!("{k} = {v}"));
    }
    lines
}

fn grid_from(base_points: Option<usize>, config: &ConfigMap) -> Result<GridConfig> {
    let mut bp = base_points;
    fill(&mut bp, config, "base-points")?;
    let mut grid = GridConfig::default();
    if let Some(b) = bp {
        grid.base_points = b;
    }
    Ok(grid)
}

fn parse_list<T: FromStr>(raw: &str, what: &str) -> Result<Vec<T>> {
    raw.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<T>()
                .map_err(|_| Error::InvalidSpec(format!("bad {what} entry '{tok}'")))
        })
        .collect()
}

fn emit(
    out: Option<&Path>,
    content: &str,
    gnuplot: Option<(&str, usize, &str, bool)>,
) -> Result<()> {
    match out {
        Some(path) => {
            output::write_atomic(path, content)?;
            if let Some((_, ycol, ylabel, logy)) = gnuplot {
                let gp = output::gnuplot_script(&path.display().to_string(), ycol, ylabel, logy);
                let gp_path = path.with_extension("gp");
                output::write_atomic(&gp_path, &gp)?;
            }
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn spectral_point_for(r: &ResolvedLattice, s: f64) -> Result<SpectralPoint> {
    match r.spec.boundary() {
        Boundary::Periodic => {
            let model = PeriodicModel::new(&r.spec, r.params)?;
            let packet = model.packet(s)?;
            let v01 = matrix_element(
                &packet,
                &r.params,
                s,
                &LatticeContext::Periodic(&model.table),
            )?;
            let _ = solve_periodic; // (re-exported path used by tests)
            Ok(SpectralPoint::new(s, packet.e0, packet.e1, v01))
        }
        Boundary::Open => {
            let model = OpenModel::new(&r.spec, r.params, SolveOptions::default())?;
            model.eval(s)
        }
    }
}

fn cmd_spectrum(args: &SpectrumArgs, config: &ConfigMap, meta: bool) -> Result<()> {
    let r = args.lattice.resolve(config)?;
    let mut s = args.s;
    fill(&mut s, config, "s")?;
    let s = s.ok_or_else(|| Error::InvalidSpec("missing --s".into()))?;
    let point = spectral_point_for(&r, s)?;
    let lines = lattice_config_lines(&r, &[("s".into(), format!("{s}"))]);
    let mut out = output::header(&lines, meta);
    out.push_str(output::SPECTRAL_HEADER);
    out.push('\n');
    out.push_str(&output::spectral_row(&point));
    out.push('\n');
    emit(args.out.as_deref(), &out, None)?;
    Ok(())
}

fn curve_for(r: &ResolvedLattice, grid: &GridConfig) -> Result<crate::schedule::IntegrandCurve> {
    match r.spec.boundary() {
        Boundary::Periodic => {
            let model = PeriodicModel::new(&r.spec, r.params)?;
            sample_integrand(&model, grid)
        }
        Boundary::Open => {
            let model = OpenModel::new(&r.spec, r.params, SolveOptions::default())?;
            sample_integrand(&model, grid)
        }
    }
}

fn cmd_integrand(args: &CurveArgs, config: &ConfigMap, meta: bool, gnuplot: bool) -> Result<()> {
    let r = args.lattice.resolve(config)?;
    let grid = grid_from(args.base_points, config)?;
    let curve = curve_for(&r, &grid)?;
    let summary = summarize_peak(&curve)?;
    let lines = lattice_config_lines(&r, &[("base-points".into(), grid.base_points.to_string())]);
    let csv = output::curve_csv(&curve, &lines, meta);
    let gp = gnuplot.then_some(("", 6, "V01/g^2", true));
    emit(args.out.as_deref(), &csv, gp)?;
    println!(
        "peak: H = {}, s_peak = {}, W = {}, T_estimate = {}, T_lae = {}, T_const = {}",
        output::fmt(summary.h),
        output::fmt(summary.s_peak),
        output::fmt(summary.width),
        output::fmt(summary.t_estimate),
        output::fmt(summary.t_lae),
        output::fmt(summary.t_const),
    );
    Ok(())
}

fn cmd_scaling(args: &ScalingArgs, config: &ConfigMap, meta: bool, gnuplot: bool) -> Result<()> {
    let mut a_sizes = args.sizes.clone();
    let mut a_quantity = args.quantity.clone();
    let mut a_dim = args.dim;
    let mut a_t = args.t;
    let mut a_mu = args.mu;
    let mut a_eps = args.epsilon;
    fill(&mut a_sizes, config, "sizes")?;
    fill(&mut a_quantity, config, "quantity")?;
    fill(&mut a_dim, config, "dim")?;
    fill(&mut a_t, config, "t")?;
    fill(&mut a_mu, config, "mu")?;
    fill(&mut a_eps, config, "epsilon")?;
    let sizes_raw = a_sizes.ok_or_else(|| Error::InvalidSpec("missing --sizes".into()))?;
    let quantity = a_quantity.ok_or_else(|| Error::InvalidSpec("missing --quantity".into()))?;
    let grid = grid_from(args.base_points, config)?;

    if quantity.eq_ignore_ascii_case("grover") {
        let n_list: Vec<u64> = parse_list(&sizes_raw, "size")?;
        let fit = grover_scaling(&n_list, &grid)?;
        let mut lines = vec![
            "model = grover".to_string(),
            format!("sizes = {sizes_raw}"),
            format!("base-points = {}", grid.base_points),
        ];
        lines.push("quantity = t_estimate".into());
        let mut csv = output::header(&lines, meta);
        csv.push_str("N,L,quantity,value\n");
        for (n, y) in &fit.points {
            csv.push_str(&format!(
                "{},{},grover_t_estimate,{}\n",
                n,
                n,
                output::fmt(*y)
            ));
        }
        if let Some(path) = args.out.as_deref() {
            output::write_atomic(path, &csv)?;
            if gnuplot {
                let gp = output::gnuplot_script(&path.display().to_string(), 4, "T_estimate", true);
                output::write_atomic(&path.with_extension("gp"), &gp)?;
            }
        }
        println!(
            "{}",
            output::fit_summary(fit.slope, fit.intercept, fit.r_squared, fit.n_points)
        );
        return Ok(());
    }

    let dim = a_dim.ok_or_else(|| Error::InvalidSpec("missing --dim".into()))?;
    let sizes: Vec<usize> = parse_list(&sizes_raw, "size")?;
    let params = ModelParams::new(
        a_t.unwrap_or(1.0),
        a_mu.unwrap_or(1.0),
        a_eps.unwrap_or(1.0),
    )?;
    let q: Quantity = quantity.parse()?;
    let report = runtime_scaling(dim, &sizes, &params, q, &grid)?;
    let lines = vec![
        format!("dim = {dim}"),
        format!("sizes = {sizes_raw}"),
        format!("quantity = {}", q.name()),
        format!("t = {}", params.t),
        format!("mu = {}", params.mu),
        format!("epsilon = {}", params.epsilon),
        format!("base-points = {}", grid.base_points),
        format!("fit-floor = {}", report.fit_floor),
    ];
    let csv = output::scaling_csv(&report, &lines, meta);
    if let Some(path) = args.out.as_deref() {
        output::write_atomic(path, &csv)?;
        if gnuplot {
            let gp = output::gnuplot_script(&path.display().to_string(), 4, q.name(), true);
            output::write_atomic(&path.with_extension("gp"), &gp)?;
        }
    } else {
        print!("{csv}");
    }
    let w = &report.windowed;
    println!(
        "{}",
        output::fit_summary(w.slope, w.intercept, w.r_squared, w.n_points)
    );
    if report.raw.n_points != w.n_points {
        eprintln!(
            "# raw fit: {}",
            output::fit_summary(
                report.raw.slope,
                report.raw.intercept,
                report.raw.r_squared,
                report.raw.n_points
            )
        );
    }
    Ok(())
}

fn cmd_schedule(args: &CurveArgs, config: &ConfigMap, meta: bool, gnuplot: bool) -> Result<()> {
    let r = args.lattice.resolve(config)?;
    let grid = grid_from(args.base_points, config)?;
    let curve = curve_for(&r, &grid)?;
    let table = build_lae_schedule(&curve, &r.params)?;
    let lines = lattice_config_lines(&r, &[("base-points".into(), grid.base_points.to_string())]);
    let csv = output::schedule_csv(&table, &lines, meta);
    let gp = gnuplot.then_some(("", 2, "tau(s)", false));
    emit(args.out.as_deref(), &csv, gp)?;
    println!("total: tau(1) = {}", output::fmt(table.total_time()));
    Ok(())
}

fn cmd_dynamics(args: &DynamicsArgs, config: &ConfigMap, meta: bool, gnuplot: bool) -> Result<()> {
    let r = args.lattice.resolve(config)?;
    let mut runtime = args.runtime;
    let mut runtimes = args.runtimes.clone();
    let mut schedule_kind = args.schedule.clone();
    fill(&mut runtime, config, "runtime")?;
    fill(&mut runtimes, config, "runtimes")?;
    fill(&mut schedule_kind, config, "schedule")?;

    let schedule = match schedule_kind.as_deref().unwrap_or("constant") {
        "constant" => ScheduleKind::ConstantRate,
        "lae" => {
            let grid = grid_from(None, config)?;
            let curve = curve_for(&r, &grid)?;
            ScheduleKind::Lae(build_lae_schedule(&curve, &r.params)?)
        }
        other => {
            return Err(Error::InvalidSpec(format!(
                "unknown schedule '{other}' (expected 'constant' or 'lae')"
            )))
        }
    };

    let t_list: Vec<f64> = match (runtime, runtimes) {
        (Some(t), None) => vec![t],
        (None, Some(list)) => parse_list(&list, "runtime")?,
        (Some(_), Some(_)) => {
            return Err(Error::InvalidSpec(
                "pass either --runtime or --runtimes, not both".into(),
            ))
        }
        (None, None) => return Err(Error::InvalidSpec("missing --runtime".into())),
    };

    let rows: Vec<(
        f64,
        std::result::Result<crate::dynamics::EvolutionResult, String>,
    )> = if t_list.len() == 1 {
        let cfg = EvolutionConfig {
            spec: r.spec.clone(),
            params: r.params,
            total_time: t_list[0],
            schedule: schedule.clone(),
            steps: StepControl::default(),
        };
        vec![(t_list[0], evolve(&cfg).map_err(|e| e.to_string()))]
    } else {
        sweep_runtime(
            &r.spec,
            &r.params,
            &t_list,
            &schedule,
            &StepControl::default(),
        )?
        .into_iter()
        .map(|(t, res)| (t, res.map_err(|e| e.to_string())))
        .collect()
    };

    let failures: Vec<&(
        f64,
        std::result::Result<crate::dynamics::EvolutionResult, String>,
    )> = rows.iter().filter(|(_, r)| r.is_err()).collect();
    for (t, res) in &failures {
        if let Err(msg) = res {
            eprintln!("T = {t}: {msg}");
        }
    }
    let sched_name = match &schedule {
        ScheduleKind::ConstantRate => "constant",
        ScheduleKind::Lae(_) => "lae",
    };
    let lines = lattice_config_lines(&r, &[("schedule".into(), sched_name.into())]);
    let csv = output::dynamics_csv(&rows, &lines, meta);
    let gp = gnuplot.then_some(("", 2, "P0", false));
    emit(args.out.as_deref(), &csv, gp)?;
    for (t, res) in &rows {
        if let Ok(e) = res {
            println!(
                "T = {}: P0 = {}, norm_drift = {}, steps = {}",
                output::fmt(*t),
                output::fmt(e.p0),
                output::fmt(e.norm_drift),
                e.steps
            );
        }
    }
    if !failures.is_empty() {
        return Err(Error::Numerical(format!(
            "{} of {} runtimes failed",
            failures.len(),
            rows.len()
        )));
    }
    Ok(())
}

fn cmd_boundary(args: &BoundaryArgs, config: &ConfigMap, meta: bool, gnuplot: bool) -> Result<()> {
    let mut a_dim = args.dim;
    let mut a_size = args.size;
    let mut a_t = args.t;
    let mut a_mu = args.mu;
    let mut a_eps = args.epsilon;
    fill(&mut a_dim, config, "dim")?;
    fill(&mut a_size, config, "size")?;
    fill(&mut a_t, config, "t")?;
    fill(&mut a_mu, config, "mu")?;
    fill(&mut a_eps, config, "epsilon")?;
    let dim = a_dim.ok_or_else(|| Error::InvalidSpec("missing --dim".into()))?;
    let size = a_size.ok_or_else(|| Error::InvalidSpec("missing --size".into()))?;
    let params = ModelParams::new(
        a_t.unwrap_or(1.0),
        a_mu.unwrap_or(1.0),
        a_eps.unwrap_or(1.0),
    )?;
    let opts = SpreadOptions {
        grid: grid_from(args.base_points, config)?,
        ..SpreadOptions::default()
    };
    let report = boundary_spread(dim, size, &params, &opts)?;
    let lines = vec![
        format!("dim = {dim}"),
        format!("size = {size}"),
        "boundary = open".to_string(),
        format!("t = {}", params.t),
        format!("mu = {}", params.mu),
        format!("epsilon = {}", params.epsilon),
        format!("base-points = {}", opts.grid.base_points),
        format!("orbits = {}", report.orbit_count),
    ];
    let csv = output::spread_csv(&report, &lines, meta);
    let gp = gnuplot.then_some(("", 3, "peak height", false));
    emit(args.out.as_deref(), &csv, gp)?;
    println!(
        "spread: L = {}, orbits = {}, height = {}, location = {}",
        report.l,
        report.orbit_count,
        output::fmt(report.relative_spread_height),
        output::fmt(report.relative_spread_location)
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_file_parsing() {
        let dir = std::env::temp_dir().join(format!("adia-cli-test-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.conf");
        std::fs::write(&path, "# comment\n dim = 3 \nsize= 8\nt = 2.0 # inline\n").unwrap();
        let map = load_config(Some(&path)).unwrap();
        assert_eq!(map.get("dim").map(String::as_str), Some("3"));
        assert_eq!(map.get("size").map(String::as_str), Some("8"));
        assert_eq!(map.get("t").map(String::as_str), Some("2.0"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn config_rejects_malformed_line() {
        let dir = std::env::temp_dir().join(format!("adia-cli-test2-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.conf");
        std::fs::write(&path, "dim 3\n").unwrap();
        assert!(load_config(Some(&path)).is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn flag_overrides_config() {
        let mut slot = Some(5usize);
        let mut map = ConfigMap::new();
        map.insert("dim".into(), "3".into());
        fill(&mut slot, &map, "dim").unwrap();
        assert_eq!(slot, Some(5));
        let mut empty: Option<usize> = None;
        fill(&mut empty, &map, "dim").unwrap();
        assert_eq!(empty, Some(3));
    }

    #[test]
    fn list_parsing() {
        let v: Vec<usize> = parse_list("6, 8,10", "size").unwrap();
        assert_eq!(v, vec![6, 8, 10]);
        assert!(parse_list::<usize>("6,x", "size").is_err());
    }
}
