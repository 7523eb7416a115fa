use std::path::Path;
use std::process::{Command, Output};

use ppi_core::io::{matrix_to_json, read_matrix};
use ppi_core::{Matrix, C64};
use serde_json::Value;

fn ppi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppi")).args(args).output().expect("spawn ppi")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn write(dir: &Path, name: &str, m: &Matrix) -> String {
    let path = dir.join(name);
    std::fs::write(&path, matrix_to_json(m)).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn analyze_reports_indices() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "j4.json", &Matrix::jordan(4));
    let out = ppi(&["analyze", &f, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["n"], 4);
    assert_eq!(v["ascent"], 4);
    assert_eq!(v["ppi_index"], "inf");
    assert_eq!(v["has_unitary_part"], false);
    assert!(out.stderr.is_empty());
}

#[test]
fn human_summary_goes_to_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "j2.json", &Matrix::jordan(2));
    let out = ppi(&["analyze", &f]);
    assert_eq!(out.status.code(), Some(0));
    stdout_json(&out);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ascent"));
}

#[test]
fn csv_input_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    std::fs::write(&path, "0, 1+0j\n0, 0\n").unwrap();
    let out = ppi(&["analyze", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["ascent"], 2);
}

#[test]
fn canon_modes() {
    let dir = tempfile::tempdir().unwrap();
    let u = Matrix::scalar(C64::from_polar(1.0, 0.7));
    let a = Matrix::direct_sum(&[&Matrix::jordan(3), &u, &Matrix::jordan(2)]);
    let f = write(dir.path(), "a.json", &a);

    let out = ppi(&["canon", &f, "--mode", "halmos-wallen", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["block_sizes"], serde_json::json!([3, 2]));
    assert_eq!(v["unitary_summand"]["rows"], 1);

    let out = ppi(&["canon", &f, "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["sizes"], serde_json::json!([2, 2, 1]));
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);

    let out = ppi(&["canon", &f, "--mode", "normalized", "--ell", "2", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out)["residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn canon_rejects_non_ppi_with_check_failure() {
    let dir = tempfile::tempdir().unwrap();
    let a = Matrix::from_real_rows(&[&[0.0, 0.5], &[0.0, 0.0]]);
    let f = write(dir.path(), "a.json", &a);
    let out = ppi(&["canon", &f, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout_json(&out)["error"].is_string());
}

#[test]
fn wrange_writes_boundary_csv() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "j3.json", &Matrix::jordan(3));
    let csv = dir.path().join("b.csv");
    let out = ppi(&["wrange", &f, "--samples", "36", "--out", csv.to_str().unwrap(), "--disc-test", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["certificate"]["verdict"], "DISC");
    assert_eq!(v["profile"]["n_samples"], 36);

    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,r,re_z,im_z"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 36);
    let target = (std::f64::consts::PI / 4.0).cos();
    for r in rows {
        assert_eq!(r.len(), 4);
        assert!((r[1] - target).abs() < 1e-9);
    }
}

#[test]
fn sn_make_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let eigs = dir.path().join("eigs.json");
    std::fs::write(&eigs, r#"{"eigenvalues": [0, 0, "0.5+0.2j", [-0.3, 0]]}"#).unwrap();
    let a_path = dir.path().join("A.json");
    let out = ppi(&["sn", "make", "--eigs", eigs.to_str().unwrap(), "-o", a_path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["report"]["is_sn"], true);

    let written = read_matrix(&a_path).unwrap();
    let printed: Matrix = serde_json::from_value(v["matrix"].clone()).unwrap();
    assert_eq!(written, printed);

    let out = ppi(&["sn", "check", a_path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["defect_rank"], 1);
}

#[test]
fn sn_check_fails_for_identity() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "i.json", &Matrix::identity(2));
    let out = ppi(&["sn", "check", &f, "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["is_sn"], false);
}

#[test]
fn search_constructive_regime() {
    let out = ppi(&["search", "--n", "7", "--j", "1", "--k", "3", "--seed", "42", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "FOUND");
    assert_eq!(v["ppi_index"], 1);
    assert_eq!(v["ascent"], 3);
    let w: Matrix = serde_json::from_value(v["witness"].clone()).unwrap();
    assert_eq!(w.rows(), 7);
}

#[test]
fn search_rejects_bad_parameters() {
    let out = ppi(&["search", "--n", "3", "--j", "3", "--k", "2", "--json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn repro_is_byte_identical() {
    for id in ["2.7", "3.5", "3.6"] {
        let a = ppi(&["repro", id, "--json"]);
        let b = ppi(&["repro", id, "--json"]);
        assert_eq!(a.status.code(), Some(0), "{id}");
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(stdout_json(&a)["all_pass"], true);
    }
}

#[test]
fn repro_unknown_example() {
    assert_eq!(ppi(&["repro", "1.1", "--json"]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(ppi(&["--tol", "0.5", "repro", "2.7"]).status.code(), Some(2));
    assert_eq!(ppi(&["--tol", "-1e-9", "repro", "2.7"]).status.code(), Some(2));
    assert_eq!(ppi(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(ppi(&["analyze", "/nonexistent/a.json"]).status.code(), Some(2));
}

#[test]
fn custom_tolerance_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "j2.json", &Matrix::jordan(2));
    let out = ppi(&["analyze", &f, "--tol", "1e-6", "--json"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn output_matrices_roundtrip_bit_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let a = Matrix::from_real_rows(&[&[0.0, 0.1], &[0.0, 1.0 / 3.0]]);
    let f = write(dir.path(), "a.json", &a);
    assert_eq!(read_matrix(Path::new(&f)).unwrap(), a);

    let eigs = dir.path().join("e.json");
    std::fs::write(&eigs, "[0.1, 0.7]").unwrap();
    let out_path = dir.path().join("A.json");
    let out = ppi(&["sn", "make", "--eigs", eigs.to_str().unwrap(), "-o", out_path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let m = read_matrix(&out_path).unwrap();
    let again = dir.path().join("B.json");
    std::fs::write(&again, matrix_to_json(&m)).unwrap();
    assert_eq!(std::fs::read(&out_path).unwrap(), std::fs::read(&again).unwrap());
}
