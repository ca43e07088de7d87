use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use lame_core::{compute_constants, Modulus};

fn lame(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lame")).args(args).output().expect("spawn lame")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a CSV as numbers (comment and header lines dropped).
fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn edges_match_golden_and_limits() {
    let o = lame(&["edges", "--m", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("edges_m0.5.csv"));

    let zero = stdout(&lame(&["edges", "--m", "0"]));
    let row = zero.lines().last().unwrap();
    assert!(row.starts_with("0,1,1,4,4,"), "{row}");
    let one = stdout(&lame(&["edges", "--m", "1"]));
    assert!(one.lines().last().unwrap().starts_with("2,2,5,5,6,"));
}

#[test]
fn dispersion_is_byte_identical_and_matches_golden() {
    let args = ["dispersion", "--m", "0.5", "--samples", "16"];
    let a = lame(&args);
    let b = lame(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a), golden("dispersion_m0.5_s16.csv"));
}

#[test]
fn dispersion_row_count_and_columns() {
    let o = lame(&["dispersion", "--m", "0.5", "--band", "all", "--samples", "64"]);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l == "band,k,epsilon,coord1,coord2"));
    let r = rows(&text);
    assert_eq!(r.len(), 192);
    for b in 1..=3 {
        assert_eq!(r.iter().filter(|x| x[0] == b as f64).count(), 64);
    }
}

#[test]
fn band_one_endpoints_from_two_samples() {
    let r = rows(&stdout(&lame(&["dispersion", "--m", "0.5", "--band", "1", "--samples", "2"])));
    assert_eq!(r.len(), 2);
    let k = compute_constants(&Modulus::from_m(0.5).unwrap()).unwrap().k;
    assert!(r[0][1].abs() < 1e-12 && (r[0][2] - (3.0 - 3f64.sqrt())).abs() < 1e-12);
    assert!((r[1][1] - PI / (2.0 * k)).abs() < 1e-12 && (r[1][2] - 1.5).abs() < 1e-12);
}

#[test]
fn bands_flatten_toward_m_one() {
    let span = |m: &str, band: &str| {
        let r = rows(&stdout(&lame(&["dispersion", "--m", m, "--band", band, "--samples", "9"])));
        let e: Vec<f64> = r.iter().map(|x| x[2]).collect();
        e.iter().cloned().fold(f64::MIN, f64::max) - e.iter().cloned().fold(f64::MAX, f64::min)
    };
    for band in ["1", "2"] {
        assert!(span("0.99", band) < span("0.5", band), "band {band}");
    }
}

#[test]
fn uniform_k_spacing() {
    let r = rows(&stdout(&lame(&["dispersion", "--m", "0.3", "--band", "2", "--samples", "5", "--spacing", "k"])));
    let dk: Vec<f64> = r.windows(2).map(|w| w[1][1] - w[0][1]).collect();
    for d in &dk {
        assert!((d - dk[0]).abs() < 1e-9, "{dk:?}");
    }
}

#[test]
fn json_has_config_data_checks() {
    let o = lame(&["dispersion", "--m", "0.5", "--samples", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["checks", "config", "data"]);
    assert_eq!(v["data"].as_array().unwrap().len(), 12);
    assert_eq!(v["checks"]["monotone"]["band1"], true);

    let e: serde_json::Value = serde_json::from_slice(&lame(&["edges", "--m", "0", "--format", "json"]).stdout).unwrap();
    assert_eq!(e["data"]["eps"], serde_json::json!([0.0, 1.0, 1.0, 4.0, 4.0]));
}

#[test]
fn wavefunction_edges_are_periodic_and_antiperiodic() {
    let k = compute_constants(&Modulus::from_m(0.5).unwrap()).unwrap().k;
    for (t, sign) in [("0", 1.0), ("1", -1.0)] {
        // 4K span sampled so that x + 2K lands on a grid point.
        let o = lame(&["wavefunction", "--m", "0.5", "--band", "1", "--t", t, "--samples", "81"]);
        assert_eq!(o.status.code(), Some(0));
        let r = rows(&stdout(&o));
        assert!((r[80][0] - 4.0 * k).abs() < 1e-12);
        let peak = r.iter().map(|x| x[3]).fold(0.0, f64::max);
        for i in 0..=40 {
            let (a, b) = (&r[i], &r[i + 40]);
            let d = ((b[1] - sign * a[1]).powi(2) + (b[2] - sign * a[2]).powi(2)).sqrt();
            assert!(d < 1e-9 * peak, "t={t} x={}: {d}", a[0]);
        }
    }
}

#[test]
fn wavefunction_reports_small_ode_residual() {
    let o = lame(&["wavefunction", "--m", "0.5", "--band", "2", "--t", "0.4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["checks"]["ode_residual"].as_f64().unwrap() < 1e-6);
    assert!(v["checks"]["quasi_periodicity_residual"].as_f64().unwrap() < 1e-9);
    assert_eq!(v["data"].as_array().unwrap().len(), 201);
}

#[test]
fn validate_passes_at_half() {
    let o = lame(&["validate", "--m", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.lines().skip_while(|l| l.starts_with('#')).skip(1).all(|l| l.ends_with(",true") || l.ends_with(",info")));

    let w = lame(&["validate", "--m", "0.5", "--check", "weierstrass", "--format", "json"]);
    assert_eq!(w.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&w.stdout).unwrap();
    assert_eq!(v["checks"]["weierstrass"]["pass"], true);
    assert!(v["checks"].get("dispersion").is_none());
}

#[test]
fn validate_near_one_warns_and_exits_zero() {
    for m in ["0.999999", "1"] {
        let o = lame(&["validate", "--m", m]);
        assert_eq!(o.status.code(), Some(0), "m={m}");
        assert!(stderr(&o).contains("warning"), "m={m}");
    }
    assert!(stderr(&lame(&["validate", "--m", "1"])).contains("clamped"));
}

#[test]
fn impossible_tolerance_exits_one_with_report() {
    let o = lame(&["validate", "--m", "0.5", "--check", "reality", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",false"));
}

#[test]
fn usage_errors_exit_two() {
    let o = lame(&["edges", "--m", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("modulus parameter out of range"));
    assert_eq!(lame(&["edges"]).status.code(), Some(2));
    assert_eq!(lame(&["wavefunction", "--m", "0.5", "--band", "all"]).status.code(), Some(2));
    assert_eq!(lame(&["dispersion", "--m", "0.5", "--plot"]).status.code(), Some(2));
    assert_eq!(lame(&["--help"]).status.code(), Some(0));
}

#[test]
fn unwritable_output_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing/dir/out.csv");
    let o = lame(&["edges", "--m", "0.5", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn plot_writes_a_gnuplot_script() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("disp.csv");
    let o = lame(&["dispersion", "--m", "0.5", "--samples", "8", "--plot", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&std::fs::read_to_string(&out).unwrap()).len(), 24);
    let script = std::fs::read_to_string(out.with_extension("gp")).unwrap();
    assert!(script.contains("plot for [b=1:3]") && script.contains("disp.csv"));
}

#[test]
fn decompose_passes_and_fails_on_demand() {
    let o = lame(&["decompose", "--m", "0.3", "--grid-points", "50"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&stdout(&o));
    assert_eq!(r.len(), 50);
    assert!(r.iter().all(|x| x[3].abs() < 1e-9));
    assert_eq!(lame(&["decompose", "--m", "0.3", "--truncation", "0"]).status.code(), Some(1));
    assert_eq!(lame(&["decompose", "--m", "0"]).status.code(), Some(2));
}
