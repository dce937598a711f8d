use std::fs;
use std::process::Command;

use phasespace::{run_cli, SolveReport, EXIT_FAILED, EXIT_OK, EXIT_SOLVER, EXIT_USAGE};
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn run(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("phasespace").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn json(args: &[&str]) -> Value {
    let r = run(args);
    assert_eq!(r.code, EXIT_OK, "stderr: {}", r.err);
    serde_json::from_str(&r.out).unwrap()
}

#[test]
fn solve_phase_space_ground_state() {
    let v = json(&["solve", "--n", "0", "--L", "0", "--alphadelta", "-3"]);
    assert!((v["energy"].as_f64().unwrap() + 0.125).abs() < 1e-12);
    assert!((v["kappa"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(v["energy_closed_form"].as_f64().unwrap(), -0.125);
    assert!((v["K"][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["y"].as_array().unwrap().len(), 1);
    assert!(v["residual"].as_f64().unwrap() < 1e-10);
    for key in [
        "n",
        "L",
        "alphadelta",
        "pi",
        "tau",
        "phi",
        "rho",
        "prefactor_rate",
    ] {
        assert!(!v[key].is_null(), "missing {key}");
    }
    assert!((v["phi"]["rate"][0].as_f64().unwrap() + 1.0 / 6.0).abs() < 1e-12);
}

#[test]
fn solve_with_point_and_csv() {
    let v = json(&[
        "solve",
        "--n",
        "1",
        "--L",
        "0",
        "--alphadelta",
        "-1",
        "--point",
        "2,0,0,-0.5",
    ]);
    assert!((v["energy"].as_f64().unwrap() + 0.125).abs() < 1e-12);
    assert_eq!(v["prefactor_rate"][0].as_f64().unwrap(), 0.0);

    let r = run(&[
        "solve",
        "--n",
        "0",
        "--L",
        "1",
        "--alphadelta",
        "-3",
        "--format",
        "csv",
    ]);
    assert_eq!(r.code, EXIT_OK);
    let mut lines = r.out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,L,alphadelta,kappa,energy,energy_closed_form,residual"
    );
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[..3], ["0", "1", "-3.0"]);
    assert!((row[4].parse::<f64>().unwrap() + 1.0 / 18.0).abs() < 1e-12);
}

#[test]
fn solve_rejects_mismatched_point() {
    let r = run(&[
        "solve",
        "--n",
        "0",
        "--L",
        "0",
        "--alphadelta",
        "-3",
        "--point",
        "1,0,0,-1",
    ]);
    assert_eq!(r.code, EXIT_USAGE);
    let r = run(&[
        "solve",
        "--n",
        "0",
        "--L",
        "0",
        "--alphadelta",
        "-3",
        "--point",
        "1,1,1,1",
    ]);
    assert_eq!(r.code, EXIT_USAGE);
}

#[test]
fn solve_round_trips_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("units.json");
    fs::write(
        &cfg,
        r#"{"unit_system": "custom", "m": 1.5, "hbar": 0.9, "k": 1.2, "e2": 0.7}"#,
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let first = run(&[
        "solve",
        "--n",
        "2",
        "--L",
        "1",
        "--alphadelta",
        "-3",
        "--config",
        cfg,
    ]);
    assert_eq!(first.code, EXIT_OK, "{}", first.err);
    let report: SolveReport = serde_json::from_str(&first.out).unwrap();
    assert_eq!(report.units.m, 1.5);

    // rebuild the inputs from the document itself
    let units = serde_json::json!({
        "unit_system": "custom",
        "m": report.units.m, "hbar": report.units.hbar, "k": report.units.k, "e2": report.units.e2,
    });
    let cfg2 = dir.path().join("again.json");
    fs::write(&cfg2, units.to_string()).unwrap();
    let point = report.point.map(|x| format!("{x:?}")).join(",");
    let (n, l, ad) = (
        report.n.to_string(),
        report.l.to_string(),
        format!("{:?}", report.alphadelta),
    );
    let second = run(&[
        "solve",
        "--n",
        &n,
        "--L",
        &l,
        "--alphadelta",
        &ad,
        "--point",
        &point,
        "--config",
        cfg2.to_str().unwrap(),
    ]);
    assert_eq!(second.code, EXIT_OK);
    assert_eq!(first.out, second.out);
    let again: SolveReport = serde_json::from_str(&second.out).unwrap();
    assert_eq!(again.energy.to_bits(), report.energy.to_bits());
}

#[test]
fn solver_errors_exit_3_with_name() {
    let r = run(&["solve", "--n", "0", "--L", "0", "--alphadelta", "-2"]);
    assert_eq!(r.code, EXIT_SOLVER);
    assert!(r.err.starts_with("UnsupportedBranch"), "{}", r.err);

    let r = run(&["scan", "--n-max", "1", "--L-max", "0", "--alphadelta", "3"]);
    assert_eq!(r.code, EXIT_SOLVER);
    assert!(!r.err.is_empty());
    assert!(r.out.is_empty());
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&[]).code, EXIT_USAGE);
    assert_eq!(run(&["solve", "--n", "0"]).code, EXIT_USAGE);
    assert_eq!(
        run(&["solve", "--n", "x", "--L", "0", "--alphadelta", "-3"]).code,
        EXIT_USAGE
    );
    assert_eq!(run(&["manifold", "--apply", "7:1"]).code, EXIT_USAGE);
    assert_eq!(run(&["verify", "--suite", "everything"]).code, EXIT_USAGE);
    let r = run(&[
        "solve",
        "--n",
        "0",
        "--L",
        "0",
        "--alphadelta",
        "-3",
        "--config",
        "/nonexistent/cfg.json",
    ]);
    assert_eq!(r.code, EXIT_USAGE);
    assert!(r.err.contains("cannot read"));
}

#[test]
fn help_goes_to_stdout() {
    let r = run(&["--help"]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.contains("solve"));
    assert!(r.err.is_empty());
}

#[test]
fn scan_csv_in_grid_order() {
    let r = run(&["scan", "--n-max", "2", "--L-max", "1", "--alphadelta", "-3"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines[0], "n,L,energy,residual");
    assert_eq!(lines.len(), 1 + 3 * 2);
    let mut seen = Vec::new();
    for line in &lines[1..] {
        let f: Vec<&str> = line.split(',').collect();
        let (n, l): (f64, f64) = (f[0].parse().unwrap(), f[1].parse().unwrap());
        let energy: f64 = f[2].parse().unwrap();
        let want = -1.0 / (2.0 * (l + 3.0 * n + 2.0).powi(2));
        assert!((energy - want).abs() <= 1e-10 * want.abs());
        assert!(f[3].parse::<f64>().unwrap() < 1e-8);
        assert_eq!(format!("{energy:?}"), f[2]);
        seen.push((f[0].to_string(), f[1].to_string()));
    }
    let order: Vec<(String, String)> = (0..3)
        .flat_map(|n| (0..2).map(move |l| (n.to_string(), l.to_string())))
        .collect();
    assert_eq!(seen, order);
}

#[test]
fn scan_general_alphadelta_and_json() {
    let r = run(&[
        "scan",
        "--n-max",
        "1",
        "--L-max",
        "1",
        "--alphadelta",
        "-2",
        "--format",
        "json",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let rows: Vec<Value> = serde_json::from_str(&r.out).unwrap();
    assert_eq!(rows.len(), 4);
    for row in rows {
        assert!(row["energy"].as_f64().unwrap() < 0.0);
        assert!(row["residual"].as_f64().unwrap() < 1e-8);
    }
}

#[test]
fn manifold_examples() {
    let v = json(&["manifold", "--apply", "3:2"]);
    assert_eq!(v["diag"], serde_json::json!([1, 1, -1, 1]));
    assert_eq!(v["matrix"][2], serde_json::json!([0, 0, -1, 0]));
    assert_eq!(v["class"], "other");

    let v = json(&["manifold", "--apply", "3:1", "--point", "-3,1,-2,1"]);
    assert_eq!(v["image"], serde_json::json!([-3.0, 1.0, 0.0, 1.0]));
    assert_eq!(v["on_manifold"], false);
    assert_eq!(v["commutator_coefficient"], 3.0);

    let v = json(&["manifold", "--apply", "1:1,2:-1", "--g0", "1,1,1,1"]);
    assert_eq!(v["diag"], serde_json::json!([0, 2, 1, 1]));

    let v = json(&["manifold", "--apply", "3:1", "--g0", "1,0,1,1"]);
    assert_eq!(v["class"], "position_like");

    let r = run(&["manifold", "--apply", "1:1,3:1"]);
    assert_eq!(r.code, EXIT_SOLVER);
    assert!(r.err.starts_with("ForbiddenCombination"), "{}", r.err);
}

#[test]
fn wavefunction_table() {
    let r = run(&[
        "wavefunction",
        "--n",
        "0",
        "--L",
        "0",
        "--alphadelta",
        "-3",
        "--grid",
        "-1,0,4",
        "--pbar",
        "0,-1",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let comments: Vec<&str> = r.out.lines().filter(|l| l.starts_with('#')).collect();
    assert!(comments.iter().any(|l| l.contains("rate=-2.0,0.0")));
    let rows: Vec<Vec<f64>> = r
        .out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    // last row: r = 0, A = iħβ·(−i) = 1
    let last = &rows[3];
    assert_eq!(&last[..3], &[0.0, 1.0, 0.0]);
    assert!((last[3] - (-1.0f64 / 6.0).exp()).abs() < 1e-12);
    // first row: r = −1, A = 3 + 1
    assert_eq!(rows[0][1], 4.0);

    let r = run(&[
        "wavefunction",
        "--n",
        "0",
        "--L",
        "0",
        "--alphadelta",
        "-3",
        "--grid",
        "0,1,3",
    ]);
    assert_eq!(r.code, EXIT_SOLVER);
    assert!(r.err.starts_with("BranchPointError"), "{}", r.err);
}

#[test]
fn out_file_receives_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let r = run(&[
        "manifold",
        "--apply",
        "4:1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.out.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["diag"], serde_json::json!([1, 1, 1, 0]));

    let r = run(&[
        "manifold",
        "--apply",
        "4:1",
        "--out",
        "/nonexistent/dir/m.json",
    ]);
    assert_eq!(r.code, EXIT_FAILED);
}

#[test]
fn verify_suites() {
    let r = run(&["verify", "--suite", "opspace"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.out);
    assert_eq!(r.out.lines().filter(|l| l.starts_with("[PASS]")).count(), 2);

    let r = run(&["verify", "--suite", "all"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.out);
    assert!(r.out.contains("8 passed, 0 failed"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_phasespace");
    let ok = Command::new(bin)
        .args(["manifold", "--apply", "3:2"])
        .output()
        .unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("-1"));
    let forbidden = Command::new(bin)
        .args(["manifold", "--apply", "1:1,3:1"])
        .output()
        .unwrap();
    assert_eq!(forbidden.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&forbidden.stderr).contains("ForbiddenCombination"));
    let usage = Command::new(bin).arg("bogus").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
}
