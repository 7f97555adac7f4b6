use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use groverian::closed_form::Family;
use groverian::sweep::{run_sweep, SweepConfig};

fn groverian(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_groverian"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn state_file(name: &str) -> String {
    let path = tmp(&format!("{}.json", name.replace(':', "_")));
    let o = groverian(&["generate", name, "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path.to_str().unwrap().to_string()
}

fn field(out: &str, key: &str) -> f64 {
    out.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("no {key} in {out}"))
        .parse()
        .unwrap()
}

#[test]
fn bell_direct() {
    let o = groverian(&["pmax", &state_file("bell")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(field(&out, "p_max"), 0.5);
    assert!((field(&out, "groverian") - 0.5f64.sqrt()).abs() < 1e-14);
    assert!(out.contains("converged: true"));
    assert!(out.contains("party 2:"));
}

#[test]
fn product_reduced() {
    let o = groverian(&["pmax", &state_file("basis:000"), "--method", "reduced:1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((field(&stdout(&o), "p_max") - 1.0).abs() < 1e-12);
}

#[test]
fn w_grid_and_closed() {
    let w = state_file("w:3");
    let grid = groverian(&["pmax", &w, "--method", "grid"]);
    assert_eq!(grid.status.code(), Some(0));
    assert!((field(&stdout(&grid), "p_max") - 4.0 / 9.0).abs() < 1e-4);
    let closed = groverian(&["pmax", &w, "--method", "closed"]);
    assert!((field(&stdout(&closed), "p_max") - 4.0 / 9.0).abs() < 1e-14);
}

#[test]
fn reduce_outputs() {
    let bell = groverian(&["reduce", &state_file("bell"), "--trace-out", "2"]);
    assert_eq!(stdout(&bell), "0.5+0i 0+0i\n0+0i 0.5+0i\n");

    let ghz = stdout(&groverian(&[
        "reduce",
        &state_file("ghz:3"),
        "--trace-out",
        "3",
    ]));
    let rows: Vec<&str> = ghz.lines().collect();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0], "0.5+0i 0+0i 0+0i 0+0i");
    assert_eq!(rows[3], "0+0i 0+0i 0+0i 0.5+0i");

    let ket01 = groverian(&["reduce", &state_file("basis:01"), "--trace-out", "1"]);
    assert_eq!(stdout(&ket01), "0+0i 0+0i\n0+0i 1+0i\n");
}

#[test]
fn input_errors_exit_one() {
    let garbage = tmp("garbage.json");
    fs::write(&garbage, "{\"dims\": [2, 2], \"amps\": [[1, 0]]}").unwrap();
    let zero = tmp("zero.json");
    fs::write(&zero, "{\"dims\": [2], \"amps\": [[0, 0], [0, 0]]}").unwrap();
    let bell = state_file("bell");
    let cases: Vec<Vec<&str>> = vec![
        vec!["pmax", garbage.to_str().unwrap()],
        vec!["pmax", zero.to_str().unwrap()],
        vec!["pmax", "/nonexistent/state.json"],
        vec!["pmax", &bell, "--method", "closed"],
        vec!["pmax", &bell, "--method", "reduced:3"],
        vec!["pmax", &bell, "--method", "newton"],
        vec!["pmax", &bell, "--tol", "0"],
        vec!["reduce", &bell, "--trace-out", "0"],
        vec!["reduce", &bell, "--trace-out", "3"],
        vec!["sweep", "--family", "w3", "--steps", "1"],
        vec![
            "sweep",
            "--family",
            "w3",
            "--kappa-min",
            "2",
            "--kappa-max",
            "1",
        ],
        vec!["sweep", "--family", "w5"],
        vec!["check", "--suite", "lu", "--samples", "0"],
        vec!["frobnicate"],
    ];
    for args in cases {
        let o = groverian(&args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn non_convergence_exits_two() {
    let o = groverian(&[
        "pmax",
        &state_file("w:3"),
        "--starts",
        "1",
        "--max-iter",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("converged: false"));
}

#[test]
fn output_is_deterministic() {
    let w = state_file("w3:0.7");
    let args = ["pmax", w.as_str(), "--seed", "11", "--starts", "8"];
    assert_eq!(groverian(&args).stdout, groverian(&args).stdout);
    let sweep = ["sweep", "--family", "w4", "--steps", "7", "--with-grid"];
    assert_eq!(groverian(&sweep).stdout, groverian(&sweep).stdout);
    let check = ["check", "--suite", "lu", "--samples", "3", "--seed", "5"];
    assert_eq!(groverian(&check).stdout, groverian(&check).stdout);
}

#[test]
fn sweep_csv_round_trip() {
    let path = tmp("w3.csv");
    let o = groverian(&[
        "sweep",
        "--family",
        "w3",
        "--kappa-min",
        "0.1",
        "--kappa-max",
        "3",
        "--steps",
        "12",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let expected = run_sweep(&SweepConfig::new(Family::W3, 0.1, 3.0, 12)).unwrap();

    let mut reader = csv::Reader::from_path(&path).unwrap();
    assert_eq!(
        reader.headers().unwrap(),
        vec![
            "kappa",
            "p_closed",
            "p_alt",
            "p_grid",
            "regime",
            "groverian"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), expected.len());
    let close = |s: &str, x: f64| {
        let y: f64 = s.parse().unwrap();
        assert!((y - x).abs() <= 1e-14 * x.abs(), "{s} vs {x}");
    };
    for (row, e) in rows.iter().zip(&expected) {
        close(&row[0], e.kappa);
        close(&row[1], e.p_closed);
        close(&row[2], e.p_alt);
        assert_eq!(&row[3], "");
        assert_eq!(&row[4], e.regime.label());
        close(&row[5], e.groverian);
    }
}

#[test]
fn check_suites_pass() {
    for suite in ["bounds", "lu", "theorem1"] {
        let o = groverian(&["check", "--suite", suite, "--samples", "3"]);
        assert_eq!(o.status.code(), Some(0), "{suite}: {}", stdout(&o));
        assert!(stdout(&o).contains("0 failed"));
    }
}
