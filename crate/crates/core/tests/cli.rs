//! Black-box tests of the `adia` binary: flags, exit codes, CSV output,
//! config-file handling and reproducibility across worker counts.

use std::path::PathBuf;
use std::process::{Command, Output};

fn adia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adia"))
        .args(args)
        .env_remove("ADIA_THREADS")
        .output()
        .expect("binary runs")
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("adia-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn body(csv: &str) -> String {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn spectrum_ground_energy() {
    let out = adia(&[
        "spectrum", "--dim", "3", "--size", "8", "--s", "0", "--t", "1", "--mu", "1",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let row = stdout.lines().last().unwrap();
    let e0: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert_eq!(e0, -6.0);
}

#[test]
fn validation_errors_exit_2() {
    let out = adia(&[
        "spectrum",
        "--dim",
        "2",
        "--size",
        "2",
        "--boundary",
        "periodic",
        "--s",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = adia(&["spectrum", "--dim", "2", "--size", "4", "--bogus-flag"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(
        err.to_lowercase().contains("usage") || err.contains("--help"),
        "{err}"
    );
    // missing required value
    let out = adia(&["spectrum", "--dim", "2", "--size", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn quench_probability() {
    let out = adia(&["dynamics", "--dim", "1", "--size", "3", "--runtime", "0"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let row = stdout
        .lines()
        .find(|l| l.starts_with("0.") && l.contains(','))
        .unwrap();
    let p0: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((p0 - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn scaling_csv_and_summary() {
    let dir = tmpdir("scaling");
    let csv_path = dir.join("d3.csv");
    let out = adia(&[
        "scaling",
        "--dim",
        "3",
        "--sizes",
        "6,8,10,12",
        "--quantity",
        "t_estimate",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let summary = stdout.lines().last().unwrap();
    assert_eq!(summary.split(',').count(), 4);
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    assert!(csv.contains("N,L,quantity,value"));
    assert_eq!(
        csv.lines().filter(|l| l.contains(",t_estimate,")).count(),
        4
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn grover_scaling_slope_half() {
    let out = adia(&[
        "scaling",
        "--quantity",
        "grover",
        "--sizes",
        "64,256,1024,4096",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let slope: f64 = stdout
        .lines()
        .last()
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 0.5).abs() < 1e-3, "slope = {slope}");
}

#[test]
fn identical_runs_are_byte_identical_and_threads_do_not_matter() {
    let dir = tmpdir("det");
    let run = |tag: &str, threads: &str| -> String {
        let path = dir.join(format!("{tag}.csv"));
        let out = adia(&[
            "integrand",
            "--dim",
            "2",
            "--size",
            "6",
            "--threads",
            threads,
            "--no-meta",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        std::fs::read_to_string(&path).unwrap()
    };
    let a = run("a", "1");
    let b = run("b", "1");
    let c = run("c", "4");
    assert_eq!(a, b, "reruns must be byte-identical with --no-meta");
    assert_eq!(body(&a), body(&c), "thread count must not change the body");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn config_file_supplies_defaults_flags_override() {
    let dir = tmpdir("config");
    let conf = dir.join("run.conf");
    std::fs::write(&conf, "dim = 3\nsize = 8\ns = 0\nt = 1\nmu = 1\n").unwrap();
    let out = adia(&["spectrum", "--config", conf.to_str().unwrap()]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("# dim = 3"));
    let e0: f64 = stdout
        .lines()
        .last()
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(e0, -6.0);
    // flag overrides the config value
    let out = adia(&["spectrum", "--config", conf.to_str().unwrap(), "--dim", "2"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let e0: f64 = stdout
        .lines()
        .last()
        .unwrap()
        .split(',')
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(e0, -4.0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn gnuplot_companion_emitted() {
    let dir = tmpdir("gp");
    let csv = dir.join("curve.csv");
    let out = adia(&[
        "integrand",
        "--dim",
        "2",
        "--size",
        "5",
        "--gnuplot",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let gp = std::fs::read_to_string(dir.join("curve.gp")).unwrap();
    assert!(gp.contains("plot"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn schedule_command_emits_monotone_table() {
    let dir = tmpdir("sched");
    let csv_path = dir.join("tau.csv");
    let out = adia(&[
        "schedule",
        "--dim",
        "2",
        "--size",
        "5",
        "--epsilon",
        "1",
        "--out",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let taus: Vec<f64> = csv
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("s,"))
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert!(taus.len() > 64);
    assert!(taus.windows(2).all(|w| w[1] > w[0]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn boundary_command_reports_spread() {
    let out = adia(&["boundary", "--dim", "1", "--size", "4"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("orbits = 2"), "{stdout}");
    let summary = stdout.lines().last().unwrap();
    assert!(summary.starts_with("spread: "), "{summary}");
}

#[test]
fn env_threads_fallback_accepted() {
    let out = Command::new(env!("CARGO_BIN_EXE_adia"))
        .args(["spectrum", "--dim", "2", "--size", "4", "--s", "0.3"])
        .env("ADIA_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
}
