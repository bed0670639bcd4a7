//! CSV emission: 17-significant-digit scientific notation, atomic writes,
//! and optional companion gnuplot scripts.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use crate::analysis::{ScalingReport, SpreadReport};
use crate::dynamics::EvolutionResult;
use crate::error::Result;
use crate::schedule::{IntegrandCurve, ScheduleTable};
use crate::spectral::SpectralPoint;

/// 17 significant digits, scientific, locale-independent.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header block: `#`-prefixed resolved-configuration lines, optionally a
/// timestamp comment (suppressed by `--no-meta` so reruns are byte-identical
/// including headers).
pub fn header(config_lines: &[String], with_meta: bool) -> String {
    let mut out = String::new();
    for line in config_lines {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    if with_meta {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        out.push_str(&format!("# generated-unix-time = {now}\n"));
    }
    out
}

pub fn spectral_row(p: &SpectralPoint) -> String {
    format!(
        "{},{},{},{},{},{}",
        fmt(p.s),
        fmt(p.e0),
        fmt(p.e1),
        fmt(p.gap),
        fmt(p.v01),
        fmt(p.integrand)
    )
}

pub const SPECTRAL_HEADER: &str = "s,E0,E1,gap,V01,integrand";

pub fn curve_csv(curve: &IntegrandCurve, config_lines: &[String], with_meta: bool) -> String {
    let mut out = header(config_lines, with_meta);
    out.push_str(SPECTRAL_HEADER);
    out.push('\n');
    for p in curve.points() {
        out.push_str(&spectral_row(p));
        out.push('\n');
    }
    out
}

pub fn schedule_csv(table: &ScheduleTable, config_lines: &[String], with_meta: bool) -> String {
    let mut out = header(config_lines, with_meta);
    out.push_str("s,tau\n");
    for &(s, tau) in table.samples() {
        out.push_str(&format!("{},{}\n", fmt(s), fmt(tau)));
    }
    out
}

pub fn scaling_csv(report: &ScalingReport, config_lines: &[String], with_meta: bool) -> String {
    let mut out = header(config_lines, with_meta);
    out.push_str("N,L,quantity,value\n");
    for m in &report.per_size {
        out.push_str(&format!(
            "{},{},{},{}\n",
            m.n,
            m.l,
            report.quantity.name(),
            fmt(m.quantity(report.quantity))
        ));
    }
    out
}

pub fn fit_summary(slope: f64, intercept: f64, r2: f64, n_points: usize) -> String {
    format!("{},{},{},{n_points}", fmt(slope), fmt(intercept), fmt(r2))
}

pub fn dynamics_csv(
    rows: &[(f64, std::result::Result<EvolutionResult, String>)],
    config_lines: &[String],
    with_meta: bool,
) -> String {
    let mut out = header(config_lines, with_meta);
    out.push_str("T,P0,norm_drift,steps\n");
    for (t, r) in rows {
        match r {
            Ok(res) => out.push_str(&format!(
                "{},{},{},{}\n",
                fmt(*t),
                fmt(res.p0),
                fmt(res.norm_drift),
                res.steps
            )),
            Err(msg) => out.push_str(&format!("# T = {} failed: {msg}\n", fmt(*t))),
        }
    }
    out
}

pub fn spread_csv(report: &SpreadReport, config_lines: &[String], with_meta: bool) -> String {
    let mut out = header(config_lines, with_meta);
    out.push_str("site,orbit_size,peak_height,peak_location\n");
    for o in &report.per_orbit {
        out.push_str(&format!(
            "{},{},{},{}\n",
            o.site,
            o.orbit_size,
            fmt(o.peak_height),
            fmt(o.peak_location)
        ));
    }
    out
}

/// Write via a temp file in the same directory plus rename, so readers never
/// observe a partial file.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let stem = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp = dir.join(format!(".{stem}.tmp-{}", std::process::id()));
    std::fs::write(&tmp, content)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Minimal gnuplot companion for a CSV written by this crate.
pub fn gnuplot_script(csv_path: &str, ycol: usize, ylabel: &str, logscale: bool) -> String {
    let mut out = String::new();
    out.push_str("set datafile separator ','\n");
    out.push_str("set key off\n");
    out.push_str(&format!("set ylabel '{ylabel}'\n"));
    if logscale {
        out.push_str("set logscale y\n");
    }
    out.push_str(&format!(
        "plot '{csv_path}' using 1:{ycol} with linespoints\n"
    ));
    out
}
