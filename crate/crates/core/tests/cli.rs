use std::path::Path;
use std::process::{Command, Output};

fn pinsker(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pinsker")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines().skip(1).map(|l| l.split(',').map(|x| x.parse::<f64>().unwrap()).collect()).collect()
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn bound_reports_value_and_method() {
    let out = pinsker(&["bound", "--divergence", "max", "--t", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap().parse::<f64>().unwrap(), 1.0);
    assert_eq!(lines.next(), Some("method: analytic"));

    let out = pinsker(&["bound", "--divergence", "smoothed-max", "--epsilon", "0.2", "--t", "0.1"]);
    assert_eq!(stdout(&out).lines().next().unwrap().parse::<f64>().unwrap(), 0.0);

    let out = pinsker(&["bound", "--divergence", "umegaki", "--t", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("inf\n"));
}

#[test]
fn numeric_renyi_bound_lies_above_fidelity() {
    let out = pinsker(&["bound", "--divergence", "renyi", "--alpha", "1.5", "--t", "0.4", "--method", "numeric"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let value: f64 = text.lines().next().unwrap().parse().unwrap();
    assert!(text.contains("method: numeric"));
    assert!(value.is_finite() && value >= (1.0f64 / (1.0 - 0.16)).log2());
}

#[test]
fn usage_errors_exit_with_2() {
    for args in [
        &["bound", "--divergence", "max", "--t", "2"][..],
        &["bound", "--divergence", "bogus", "--t", "0.5"],
        &["bound", "--divergence", "hellinger", "--t", "0.5"],
        &["bound", "--divergence", "renyi", "--alpha", "1.5", "--t", "0.4", "--method", "analytic"],
        &["scan", "--divergence", "max", "--t-min", "0.5", "--t-max", "0.2"],
        &["scan", "--divergence", "max", "--steps", "1"],
        &["sample", "--divergence", "max", "--dim", "1"],
        &["verify", "--checks", "nonsense"],
        &["no-such-command"],
    ] {
        assert_eq!(pinsker(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn scan_writes_csv_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("max.csv");
    let out = pinsker(&[
        "scan",
        "--divergence",
        "max",
        "--t-min",
        "0",
        "--t-max",
        "0.9",
        "--steps",
        "10",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("method: analytic"));
    let csv = read(&path);
    assert!(csv.starts_with("T,bound\n"));
    let data = rows(&csv);
    assert_eq!(data.len(), 10);
    assert!((data[9][1] - 10f64.log2()).abs() < 1e-12);
    assert!(data.windows(2).all(|w| w[1][1] >= w[0][1]));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1, "no temporary files left behind");

    let out = pinsker(&["scan", "--divergence", "max", "--steps", "2", "--t-max", "0.5"]);
    assert_eq!(rows(&stdout(&out)).len(), 2);
}

#[test]
fn scan_methods_agree_and_umegaki_beats_pinsker() {
    let analytic = pinsker(&["scan", "--divergence", "collision", "--steps", "40", "--method", "analytic"]);
    let numeric = pinsker(&["scan", "--divergence", "collision", "--steps", "40", "--method", "numeric"]);
    for (a, n) in rows(&stdout(&analytic)).iter().zip(rows(&stdout(&numeric))) {
        assert_eq!(a[0], n[0]);
        assert!((a[1] - n[1]).abs() <= 1e-4, "T={}: {} vs {}", a[0], a[1], n[1]);
    }

    let umegaki = pinsker(&["scan", "--divergence", "umegaki", "--steps", "50"]);
    for r in rows(&stdout(&umegaki)) {
        assert!(r[1] >= 2.0 / std::f64::consts::LN_2 * r[0] * r[0] - 1e-12);
    }
}

#[test]
fn scan_uses_one_method_throughout() {
    let out = pinsker(&["scan", "--divergence", "renyi", "--alpha", "1.3333333333333333", "--steps", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("method: numeric"));
}

#[test]
fn sample_is_deterministic_and_dominates_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let out = pinsker(&[
            "sample",
            "--divergence",
            "umegaki",
            "--dim",
            "4",
            "--n",
            "500",
            "--seed",
            "3",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let csv = read(&a);
    assert_eq!(csv, read(&b));
    assert!(csv.starts_with("T,D\n"));
    let data = rows(&csv);
    assert_eq!(data.len(), 500);
    for r in data {
        assert!(r[1] >= pinsker::analytic::umegaki_convex_bound(r[0]) - 1e-7);
    }
}

#[test]
fn diagonal_qubit_samples_match_binary_values() {
    let out =
        pinsker(&["sample", "--divergence", "collision", "--dim", "2", "--n", "20", "--diagonal", "--format", "json"]);
    let samples: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(samples.len(), 20);
    for (k, s) in samples.iter().enumerate() {
        let pair = pinsker::quantum::sample_diagonal_pair(0, 2, k as u64).unwrap();
        let (r, s0) = (pair.rho.matrix()[(0, 0)].re, pair.sigma.matrix()[(0, 0)].re);
        let expected = pinsker::catalog::eval_binary(
            &pinsker::DivergenceSpec::Collision,
            pinsker::BinaryPair::new(r, s0).unwrap(),
        )
        .unwrap()
        .value();
        let got = s["d"].as_f64().unwrap();
        assert!((got - expected).abs() <= 1e-10 * expected.max(1.0), "{got} vs {expected}");
    }
}

#[test]
fn infinite_values_print_inf() {
    let out = pinsker(&["scan", "--divergence", "max", "--t-min", "0.5", "--t-max", "1", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().last(), Some("1.0000000000000000,inf"));
}

#[test]
fn linear_and_curve_columns() {
    let out = pinsker(&[
        "linear",
        "--divergence",
        "umegaki",
        "--lambda-min",
        "0",
        "--lambda-max",
        "4",
        "--lambda-steps",
        "5",
    ]);
    let text = stdout(&out);
    assert!(text.starts_with("lambda,L,r_star,s_star\n"));
    let data = rows(&text);
    assert_eq!(data.len(), 5);
    assert!(
        (data[1][1]
            - pinsker::analytic::linear_bound_analytic(&pinsker::DivergenceSpec::Umegaki, 1.0)
                .unwrap()
                .value()
                .unwrap()
                .value)
            .abs()
            < 1e-12
    );
    assert!(data.iter().all(|r| r[2] >= r[3]));
    let out = pinsker(&["curve", "--steps", "30"]);
    let text = stdout(&out);
    assert!(text.starts_with("t,T,D\n"));
    let data = rows(&text);
    assert_eq!(data.len(), 30);
    assert_eq!(data[0][0], 1e-4);
    assert_eq!(data[29][0], 50.0);
    assert!(data.windows(2).all(|w| w[1][1] > w[0][1]));
}

#[test]
fn smoothed_linear_bound_rejects_slopes_past_the_domain() {
    let ok = pinsker(&["linear", "--divergence", "smoothed-max", "--epsilon", "0.2", "--lambda", "5"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = pinsker(&["linear", "--divergence", "smoothed-max", "--epsilon", "0.2", "--lambda", "8"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn unwritable_output_exits_with_3() {
    let out = pinsker(&["scan", "--divergence", "max", "--out", "/nonexistent-dir/out.csv"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_filters_and_fails_at_zero_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = pinsker(&["verify", "--families", "max", "--checks", "smoothing", "--out", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&read(&report)).unwrap();
    let sections = json["sections"].as_array().unwrap();
    assert_eq!(sections.len(), 1);
    assert_eq!(sections[0]["check"], "smoothing");

    let out = pinsker(&[
        "verify",
        "--families",
        "umegaki",
        "--dims",
        "2,3",
        "--pairs",
        "100",
        "--checks",
        "scatter,dpi",
        "--tol",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("counterexample"));
}

#[test]
fn catalog_lists_every_family() {
    let out = pinsker(&["catalog", "--format", "json"]);
    let entries: Vec<serde_json::Value> = serde_json::from_slice(&out.stdout).unwrap();
    let names: Vec<&str> = entries.iter().map(|e| e["name"].as_str().unwrap()).collect();
    for name in
        ["hellinger", "neyman-chi2", "pearson-chi2", "renyi", "fidelity", "umegaki", "collision", "max", "smoothed-max"]
    {
        assert!(names.contains(&name), "{name}");
    }
}
