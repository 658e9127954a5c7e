use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn recdef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recdef"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn recdef_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_recdef"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

/// Parses CSV output into its header and numeric rows.
fn csv(o: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = stdout(o);
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn density_csv_midpoint_row() {
    let o = recdef(&["density", "--grid", "-0.99:0.99:199"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,rho");
    assert_eq!(lines.len(), 200);
    assert!(lines.contains(&"0,0.636619772368"));
    assert_eq!(lines[100], "0,0.636619772368");
}

#[test]
fn density_output_is_bit_stable() {
    let args = [
        "density",
        "--grid",
        "-1:1:101",
        "--mu-plus",
        "0.2",
        "--mu-zero",
        "-0.1",
    ];
    let a = recdef(&args);
    let b = recdef(&args);
    let c = recdef_env(&args, "RECDEF_THREADS", "1");
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let j1 = recdef(&[&args[..], &["--format", "json"]].concat());
    let j2 = recdef(&[&args[..], &["--format", "json"]].concat());
    assert_eq!(j1.stdout, j2.stdout);
}

#[test]
fn density_json_shape() {
    let o = recdef(&[
        "density", "--grid", "0:0.5:2", "--mu", "0.5", "--format", "json",
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["xs"].as_array().unwrap().len(), 2);
    let rho0 = v["rho"][0].as_f64().unwrap();
    assert!((rho0 - 1.0 / std::f64::consts::PI).abs() < 1e-12);
    assert_eq!(v["meta"]["command"], "density");
    assert_eq!(v["meta"]["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn density_single_point_and_file_output() {
    let o = recdef(&["density", "--grid", "0:1:1"]);
    assert_eq!(stdout(&o), "x,rho\n0,0.636619772368\n");

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rho.csv");
    let o = recdef(&["density", "--grid", "0:1:1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    assert_eq!(
        fs::read_to_string(&out).unwrap(),
        "x,rho\n0,0.636619772368\n"
    );
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn density_errors() {
    // pole of the one-parameter resolvent at x = 1 lies on the grid
    assert_eq!(
        code(&recdef(&["density", "--mu", "0.5", "--grid", "0.9:1.1:21"])),
        3
    );
    assert_eq!(code(&recdef(&["density", "--grid", "1:0:5"])), 2);
    assert_eq!(code(&recdef(&["density", "--grid", "0:1:0"])), 2);
    assert_eq!(code(&recdef(&["density", "--tail", "zero"])), 2);
    assert_eq!(code(&recdef(&["density", "--mu-zero", "-0.5"])), 2);
    assert_eq!(code(&recdef_env(&["density"], "RECDEF_THREADS", "0")), 2);
    let o = recdef(&[
        "density",
        "--tail",
        "zero",
        "--epsilon",
        "1e-2",
        "--depth",
        "400",
        "--grid",
        "0:1:1",
    ]);
    assert_eq!(code(&o), 0);
}

#[test]
fn polys_table() {
    let o = recdef(&["polys", "--x", "0.5", "--n-max", "3"]);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv(&o);
    assert_eq!(header, ["n", "p", "q", "p_hat", "q_hat"]);
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[2][1], 0.0);

    let (_, rows) = csv(&recdef(&["polys", "--x", "0.5", "--n-max", "0"]));
    assert_eq!(rows, vec![vec![0.0, 1.0, 0.0, 1.0, 0.0]]);

    // p^_n = p_n - mu q_n
    let (_, rows) = csv(&recdef(&[
        "polys", "--x", "-0.3", "--n-max", "5", "--mu", "0.4",
    ]));
    for r in &rows {
        assert!((r[3] - (r[1] - 0.4 * r[2])).abs() < 1e-11);
        assert_eq!(r[4], r[2]);
    }
}

#[test]
fn polys_bad_family() {
    let o = recdef(&["polys", "--family", "legendre", "--x", "0"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--family"));
    assert_eq!(
        code(&recdef(&["polys", "--x", "0", "--family", "constant:1"])),
        2
    );
    assert_eq!(code(&recdef(&["polys"])), 2);
}

#[test]
fn validate_suites() {
    let o = recdef(&["validate", "--suite", "wronskian"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("check,error,tolerance,status\n"));
    assert_eq!(text.lines().count(), 51);
    assert!(text.lines().skip(1).all(|l| l.ends_with(",pass")));

    for suite in ["reductions", "orthogonality", "chebyshev-oracle", "all"] {
        assert_eq!(code(&recdef(&["validate", "--suite", suite])), 0, "{suite}");
    }

    let o = recdef(&["validate", "--suite", "reductions", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 3);
}

#[test]
fn validate_tables() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(
        dir.path(),
        "good.json",
        r#"{"a":[0.1,-0.2],"b":[0.6,0.45],"a_inf":0.0,"b_inf":0.5}"#,
    );
    assert_eq!(
        code(&recdef(&[
            "validate",
            "--suite",
            "wronskian",
            "--table",
            &good
        ])),
        0
    );

    for (name, text) in [
        (
            "neg.json",
            r#"{"a":[0.1],"b":[-1.0],"a_inf":0.0,"b_inf":0.5}"#,
        ),
        ("trunc.json", r#"{"a":[0.1],"b":[0.5],"a_inf":0.0"#),
        ("missing.json", r#"{"a":[0.1],"b":[0.5]}"#),
        (
            "zero.json",
            r#"{"a":[0.1],"b":[0.0],"a_inf":0.0,"b_inf":0.5}"#,
        ),
    ] {
        let path = write(dir.path(), name, text);
        assert_eq!(code(&recdef(&["validate", "--table", &path])), 2, "{name}");
    }
    assert_eq!(
        code(&recdef(&["validate", "--table", "/nonexistent/table.json"])),
        2
    );

    // A strong a_0 splits off a bound state carrying most of the weight, so
    // the continuum alone is not orthonormal.
    let split = write(
        dir.path(),
        "split.json",
        r#"{"a":[2.0],"b":[0.5],"a_inf":0.0,"b_inf":0.5}"#,
    );
    let o = recdef(&["validate", "--suite", "orthogonality", "--table", &split]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains(",fail"));
}

#[test]
fn deform_table_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("deformed.json");
    let o = recdef(&[
        "deform",
        "--mu-plus",
        "0.2",
        "--mu-zero",
        "-0.1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["a"][0], 0.2);
    assert_eq!(v["b"][0], 0.4);

    // density of the deformed table equals the deformed density
    let via_table = recdef(&[
        "density",
        "--table",
        out.to_str().unwrap(),
        "--grid",
        "-0.9:0.9:19",
    ]);
    let direct = recdef(&[
        "density",
        "--mu-plus",
        "0.2",
        "--mu-zero",
        "-0.1",
        "--grid",
        "-0.9:0.9:19",
    ]);
    let (_, a) = csv(&via_table);
    let (_, b) = csv(&direct);
    for (ra, rb) in a.iter().zip(&b) {
        assert!((ra[1] - rb[1]).abs() < 1e-10);
    }
}

#[test]
fn deform_bound_state() {
    let o = recdef(&["deform", "--mu", "0.75", "--search", "1.0001:4"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let states = v["bound_states"].as_array().unwrap();
    assert_eq!(states.len(), 1);
    assert!((states[0]["x"].as_f64().unwrap() - 13.0 / 12.0).abs() < 1e-8);
    assert!((states[0]["weight"].as_f64().unwrap() - 5.0 / 9.0).abs() < 1e-6);

    assert_eq!(code(&recdef(&["deform"])), 2);
    assert_eq!(
        code(&recdef(&["deform", "--mu", "0.75", "--search", "0:4"])),
        2
    );
    assert_eq!(
        code(&recdef(&[
            "deform",
            "--mu-plus",
            "0.2",
            "--search",
            "1.5:4"
        ])),
        2
    );
}

fn max_deviation(rows: &[Vec<f64>], col: usize) -> f64 {
    let peak = rows.iter().map(|r| r[1]).fold(0.0, f64::max);
    rows.iter()
        .map(|r| (r[col] - r[1]).abs())
        .fold(0.0, f64::max)
        / peak
}

#[test]
fn compare_defaults() {
    let o = recdef(&["compare"]);
    assert_eq!(code(&o), 0);
    let (header, rows) = csv(&o);
    assert_eq!(
        header,
        [
            "x",
            "rho_analytic",
            "rho_finite_ratio",
            "rho_eigen_histogram"
        ]
    );
    assert!(rows.first().unwrap()[0] == -0.8 && rows.last().unwrap()[0] == 0.8);
    assert!(max_deviation(&rows, 2) <= 0.05);
    assert!(max_deviation(&rows, 3) <= 0.10);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("max deviation finite-ratio"));
    assert!(err.contains("max deviation eigen-histogram"));
}

#[test]
fn compare_undeformed_large_dimension() {
    let o = recdef(&["compare", "--undeformed", "--dim", "200"]);
    assert_eq!(code(&o), 0);
    let (_, rows) = csv(&o);
    let abs = rows.iter().map(|r| (r[2] - r[1]).abs()).fold(0.0, f64::max);
    assert!(abs <= 2e-2);
    // the plain smoothed ratio, with epsilon from the spectral width
    let o = recdef(&[
        "compare",
        "--undeformed",
        "--dim",
        "200",
        "--tail",
        "zero",
        "--methods",
        "finite-ratio",
    ]);
    assert_eq!(code(&o), 0);
    let (_, rows) = csv(&o);
    let abs = rows.iter().map(|r| (r[2] - r[1]).abs()).fold(0.0, f64::max);
    assert!(abs <= 5e-2, "{abs}");
    let o = recdef(&[
        "compare",
        "--undeformed",
        "--tail",
        "zero",
        "--epsilon",
        "0",
        "--methods",
        "finite-ratio",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn compare_methods() {
    let (header, rows) = csv(&recdef(&["compare", "--methods", ""]));
    assert_eq!(header, ["x", "rho_analytic"]);
    assert_eq!(rows.len(), 161);
    let (header, _) = csv(&recdef(&["compare", "--methods", "eigen-histogram"]));
    assert_eq!(header, ["x", "rho_analytic", "rho_eigen_histogram"]);
    assert_eq!(code(&recdef(&["compare", "--methods", "lanczos"])), 2);
    // too few eigenvalues for the histogram
    assert_eq!(code(&recdef(&["compare", "--dim", "3"])), 3);
}
