//! Reports, inequality checks, campaigns and the `tetra` binary.

use std::path::Path;
use std::process::Command;

use tetra::campaign::{campaign_with, write_csv, THREADS_ENV};
use tetra::generators::{make_normal_eps_thick, make_regular, GeneratorKind, GeneratorSpec};
use tetra::report::{check_inequalities, compute_report, margins, Ratios};
use tetra::svg::read_metadata;
use tetra::{json, Config, Tetrahedron};

fn margin_of(r: &Ratios, id: &str, tol: f64) -> f64 {
    margins(r, tol).into_iter().find(|m| m.inequality == id).unwrap().margin
}

#[test]
fn regular_report() {
    let r = compute_report(&make_regular(1.0).unwrap(), &Config::default()).unwrap();
    let [big_diam, diam, big_rad, rad] = r.metrics();
    for (got, want) in [(big_diam, 1.154701), (diam, 1.0), (big_rad, 1.0), (rad, 0.816497)] {
        assert!((got - want).abs() <= 1e-6, "{got} vs {want}");
    }
    assert!((r.ratios.rad_big_diam - 0.707107).abs() <= 1e-6);
    assert_eq!(r.diameter_geodesics, 3);
    assert!(check_inequalities(&r, 1e-6).is_empty());
    assert!(margin_of(&r.ratios, "Diam/diam <= 2/sqrt(3)", 0.0).abs() <= 1e-6);
}

#[test]
fn ratios_agree_with_metrics() {
    let r = compute_report(&make_normal_eps_thick(0.01, 1.0).unwrap(), &Config::default()).unwrap();
    let [big_diam, diam, big_rad, rad] = r.metrics();
    let want = [big_diam / diam, big_diam / big_rad, diam / rad, big_rad / rad, rad / big_diam, big_rad / diam];
    for (a, b) in r.ratios.values().iter().zip(want) {
        assert!((a - b).abs() <= 1e-12 * b);
    }
}

#[test]
fn normal_eps_thick_report_is_clean_and_near_two() {
    let r = compute_report(&make_normal_eps_thick(0.01, 1.0).unwrap(), &Config::default()).unwrap();
    assert!(check_inequalities(&r, 1e-6).is_empty());
    assert!((1.98..=2.0 + 1e-9).contains(&r.ratios.big_diam_big_rad));
    assert!(margin_of(&r.ratios, "Diam/Rad <= 2", 0.0) <= 0.02);
}

#[test]
fn injected_fault_is_reported_once() {
    let mut r = compute_report(&make_regular(1.0).unwrap(), &Config::default()).unwrap();
    let [big_diam, diam, _, rad] = r.metrics();
    r.ratios = Ratios::new(big_diam, diam, 1.1 * diam, rad);
    let v = check_inequalities(&r, 1e-6);
    assert_eq!(v.len(), 1, "{v:?}");
    assert_eq!(v[0].inequality, "Rad/diam <= 1");
    assert!(v[0].margin < 0.0);
}

#[test]
fn report_json_is_byte_identical() {
    let cfg = Config::default();
    let mut spec = GeneratorSpec::new(GeneratorKind::Random);
    spec.seed = 3;
    let t = spec.generate(0).unwrap();
    let a = json::to_string(&compute_report(&t, &cfg).unwrap()).unwrap();
    let b = json::to_string(&compute_report(&t.clone(), &cfg).unwrap()).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    let d = v["intrinsic_diameter"]["length"].as_f64().unwrap();
    assert_eq!(d, json::round_significant(d));
}

#[test]
fn campaign_ignores_thread_count() {
    let cfg = Config::default();
    let mut spec = GeneratorSpec::new(GeneratorKind::Random);
    spec.seed = 11;
    let run = |threads: &str| {
        std::env::set_var(THREADS_ENV, threads);
        let c = campaign_with(&spec, 6, 11, &cfg, 0).unwrap();
        let mut csv = Vec::new();
        write_csv(&c.rows, &mut csv).unwrap();
        (csv, json::to_string(&c.extremal).unwrap())
    };
    let one = run("1");
    let two = run("2");
    std::env::remove_var(THREADS_ENV);
    assert_eq!(one, two);
}

fn tetra(args: &[&str], dir: &Path) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_tetra")).args(args).current_dir(dir).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn cli_make_metrics_check_unfold() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(tetra(&["make", "--kind", "regular", "-o", "tet.json"], d).0, 0);
    let t: Tetrahedron = serde_json::from_str(&std::fs::read_to_string(d.join("tet.json")).unwrap()).unwrap();
    assert!(t.edge_lengths().iter().all(|&l| (l - 1.0).abs() < 1e-9));

    assert_eq!(tetra(&["metrics", "-i", "tet.json", "--tol", "1e-6", "-o", "report.json"], d).0, 0);
    let first = std::fs::read(d.join("report.json")).unwrap();
    assert_eq!(tetra(&["metrics", "-i", "tet.json", "-o", "again.json"], d).0, 0);
    assert_eq!(first, std::fs::read(d.join("again.json")).unwrap());

    let (code, stdout, _) = tetra(&["check", "-i", "report.json"], d);
    assert_eq!(code, 0);
    assert!(stdout.contains("Rad/diam <= 1"));

    assert_eq!(tetra(&["unfold", "-i", "tet.json", "--source", "v:0", "--mode", "star", "-o", "star.svg"], d).0, 0);
    let meta = read_metadata(&std::fs::read_to_string(d.join("star.svg")).unwrap()).unwrap();
    assert!(meta.simple);
    let (code, ..) = tetra(&["unfold", "-i", "tet.json", "--source", "f:0:0.3,0.3,0.4", "--mode", "source", "-o", "src.svg"], d);
    assert_eq!(code, 0);
    assert!(std::fs::read_to_string(d.join("src.svg")).unwrap().contains("cut-locus"));
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(tetra(&["make", "--kind", "regular", "-o", "tet.json"], d).0, 0);
    assert_eq!(tetra(&["metrics", "-i", "tet.json", "-o", "report.json"], d).0, 0);

    // Rad pushed above diam
    let mut report: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("report.json")).unwrap()).unwrap();
    report["ratios"]["Rad/diam"] = serde_json::json!(1.1);
    std::fs::write(d.join("bad.json"), report.to_string()).unwrap();
    let (code, stdout, _) = tetra(&["check", "-i", "bad.json"], d);
    assert_eq!(code, 2);
    assert!(stdout.contains("VIOLATED"));

    let (code, _, stderr) = tetra(&["make", "--kind", "isosceles", "--sides", "3", "4", "5", "-o", "x.json"], d);
    assert_eq!(code, 3);
    assert!(stderr.contains("acute"));
    let (code, _, stderr) = tetra(&["campaign", "--n", "0", "-o", "c.csv"], d);
    assert_eq!(code, 3);
    assert!(stderr.contains("invalid count"));
    assert_eq!(tetra(&["metrics", "-i", "missing.json", "-o", "r.json"], d).0, 3);
}

#[test]
fn cli_campaign_writes_side_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (code, ..) = tetra(&["campaign", "--kind", "random", "--n", "3", "--seed", "42", "--refine-iterations", "0", "-o", "out.csv"], d);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(d.join("out.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().next().unwrap().starts_with("index,seed,l01"));
    let extremal: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("out.extremal.json")).unwrap()).unwrap();
    assert_eq!(extremal["model"], "random");
    assert_eq!(extremal["extremal"].as_array().unwrap().len(), 12);
    let violations: serde_json::Value = serde_json::from_slice(&std::fs::read(d.join("out.violations.json")).unwrap()).unwrap();
    assert!(violations.as_array().unwrap().is_empty());
}
