use std::path::{Path, PathBuf};

use serde_json::Value;
use tempfile::TempDir;

use semiop::bounds::MatrixPolynomial;
use semiop::harness::CheckReport;
use semiop::io::{MatrixFile, PolyFile};
use semiop::Matrix;
use semiop_cli::run;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn semiop(args: &[&str]) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("semiop").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn json(o: &Out) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

fn write_matrix(dir: &Path, name: &str, rows: &[&[f64]]) -> PathBuf {
    write_file(dir, name, &MatrixFile::from_matrix(&Matrix::from_real_rows(rows)))
}

fn write_file(dir: &Path, name: &str, v: &impl serde::Serialize) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, serde_json::to_string(v).unwrap()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn matrix_out(o: &Out) -> Matrix<f64> {
    let f: MatrixFile = serde_json::from_str(&o.stdout).unwrap();
    f.to_matrix().unwrap()
}

#[test]
fn adjoint_of_worked_example() {
    let dir = TempDir::new().unwrap();
    let a = write_matrix(dir.path(), "a.json", &[&[4.0, 2.0], &[2.0, 1.0]]);
    let t = write_matrix(dir.path(), "t.json", &[&[2.0, 1.0], &[4.0, 2.0]]);
    let o = semiop(&["adjoint", "--weight", s(&a), "--op", s(&t)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let want = Matrix::from_real_rows(&[&[3.2, 1.6], &[1.6, 0.8]]);
    assert!(matrix_out(&o).max_diff(&want) < 1e-10);
}

#[test]
fn radius_of_shift_and_zero() {
    let dir = TempDir::new().unwrap();
    let shift = write_matrix(dir.path(), "s.json", &[&[0.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
    let o = semiop(&["radius", "--identity", "--op", s(&shift)]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    let w = v["value"].as_f64().unwrap();
    assert!((w - 0.5f64.sqrt()).abs() < 1e-9);
    assert!((v["cross_checks"]["zamani"].as_f64().unwrap() - w).abs() < 1e-8);
    assert!(v["cross_checks"]["sampled_lower"].as_f64().unwrap() <= w + 1e-8);
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);

    let zero = write_matrix(dir.path(), "z.json", &[&[0.0, 0.0], &[0.0, 0.0]]);
    let o = semiop(&["radius", "--identity", "--op", s(&zero)]);
    assert_eq!(json(&o)["value"].as_f64().unwrap(), 0.0);
}

#[test]
fn radius_reports_null_cross_check_without_adjoint() {
    let dir = TempDir::new().unwrap();
    let a = write_matrix(dir.path(), "a.json", &[&[1.0, 0.0], &[0.0, 0.0]]);
    let t = write_matrix(dir.path(), "t.json", &[&[0.0, 1.0], &[0.0, 0.0]]);
    let o = semiop(&["radius", "--weight", s(&a), "--op", s(&t)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(json(&o)["cross_checks"]["zamani"].is_null());
    assert_eq!(semiop(&["adjoint", "--weight", s(&a), "--op", s(&t)]).code, 4);
}

#[test]
fn seminorm_and_spectral() {
    let dir = TempDir::new().unwrap();
    let n = write_matrix(dir.path(), "n.json", &[&[0.0, 1.0], &[0.0, 0.0]]);
    let o = semiop(&["seminorm", "--identity", "--op", s(&n)]);
    assert!((json(&o)["value"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    let o = semiop(&["spectral", "--identity", "--op", s(&n)]);
    assert_eq!(json(&o)["value"].as_f64().unwrap(), 0.0);

    // ||T||_A = ||T#||_A
    let a = write_matrix(dir.path(), "a.json", &[&[2.0, 1.0], &[1.0, 3.0]]);
    let t = write_matrix(dir.path(), "t.json", &[&[1.0, -2.0], &[0.5, 4.0]]);
    let adj = semiop(&["adjoint", "--weight", s(&a), "--op", s(&t)]);
    let sharp = write_file(dir.path(), "sharp.json", &MatrixFile::from_matrix(&matrix_out(&adj)));
    let n1 = json(&semiop(&["seminorm", "--weight", s(&a), "--op", s(&t)]))["value"].as_f64().unwrap();
    let n2 = json(&semiop(&["seminorm", "--weight", s(&a), "--op", s(&sharp)]))["value"].as_f64().unwrap();
    assert!((n1 - n2).abs() < 1e-7);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let t = write_matrix(dir.path(), "t.json", &[&[1.0, 0.0], &[0.0, 1.0]]);
    let big = write_matrix(dir.path(), "big.json", &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]]);
    let neg = write_matrix(dir.path(), "neg.json", &[&[1.0, 0.0], &[0.0, -1.0]]);
    let skew = write_matrix(dir.path(), "skew.json", &[&[1.0, 2.0], &[0.0, 1.0]]);
    let garbage = dir.path().join("g.json");
    std::fs::write(&garbage, "{\"rows\": 2, ").unwrap();
    let short = dir.path().join("short.json");
    std::fs::write(&short, r#"{"rows":2,"cols":2,"data":[[1,0]]}"#).unwrap();

    assert_eq!(semiop(&["seminorm", "--identity", "--op", s(&garbage)]).code, 2);
    assert_eq!(semiop(&["seminorm", "--identity", "--op", s(&short)]).code, 2);
    assert_eq!(semiop(&["seminorm", "--identity", "--op", "/nonexistent.json"]).code, 2);
    assert_eq!(semiop(&["seminorm", "--op", s(&t)]).code, 2);
    assert_eq!(semiop(&["frobnicate"]).code, 2);
    assert_eq!(semiop(&["seminorm", "--weight", s(&neg), "--op", s(&t)]).code, 3);
    assert_eq!(semiop(&["seminorm", "--weight", s(&skew), "--op", s(&t)]).code, 3);
    assert_eq!(semiop(&["seminorm", "--weight", s(&t), "--op", s(&big)]).code, 4);
    let o = semiop(&["verify", "--check", "thm0.0"]);
    assert_eq!(o.code, 5);
    assert!(o.stderr.contains("thm0.0"));
    assert_eq!(semiop(&["verify", "--check", "thm2.1-even", "--blocks", "3"]).code, 2);
    assert_eq!(semiop(&["--help"]).code, 0);
}

#[test]
fn verify_writes_reports() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r.json");
    let o = semiop(&["verify", "--check", "lemma1.1-iv", "--trials", "100", "--seed", "7", "--out", s(&out)]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert!(o.stdout.is_empty());
    let reports: Vec<CheckReport> = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(reports.len(), 1);
    assert!(reports[0].pass && reports[0].trials == 100 && reports[0].seed == 7);

    let o = semiop(&["verify", "--check", "thm2.5-odd-gap", "--trials", "3"]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    assert!(v[0]["max_violation"].as_f64().unwrap() < 0.0);
}

#[test]
fn verify_all_with_forced_parameters() {
    let o = semiop(&["verify", "--check", "all", "--trials", "2", "--seed", "1", "--blocks", "5", "--rank", "deficient"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let reports: Vec<CheckReport> = serde_json::from_str(&o.stdout).unwrap();
    assert!(reports.iter().any(|r| r.id == "prop4.5"));
    assert!(!reports.iter().any(|r| r.id == "prop4.1"));
    assert!(o.stderr.contains("skipped prop4.1"));
}

#[test]
fn same_command_same_bytes() {
    let args = ["verify", "--check", "cor2.2", "--trials", "20", "--seed", "42"];
    assert_eq!(semiop(&args).stdout, semiop(&args).stdout);
}

fn worked_example(dir: &Path) -> PathBuf {
    let s1 = Matrix::from_real_rows(&[&[4.0, 1.0, 1.0], &[1.0, 4.0, 1.0], &[1.0, 1.0, 4.0]]);
    let s2 = Matrix::from_real_rows(&[&[2.0, 1.0, 1.0], &[1.0, 2.0, 1.0], &[1.0, 1.0, 2.0]]);
    let p = MatrixPolynomial::new(vec![s1, s2, Matrix::zeros(3, 3)]).unwrap();
    write_file(dir, "p.json", &PolyFile::from_polynomial(&p))
}

#[test]
fn polybound_worked_example() {
    let dir = TempDir::new().unwrap();
    let p = worked_example(dir.path());
    let o = semiop(&["polybound", "--poly", s(&p), "--method", "both", "--rho-check"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v[0]["method"], "thm53");
    assert!((v[0]["bound"].as_f64().unwrap() - 4.405).abs() < 5e-3);
    assert!((v[1]["bound"].as_f64().unwrap() - 4.312658).abs() < 1e-5);
    assert!(v[1]["rho_check"].as_f64().unwrap() <= 4.312658);
    assert_eq!(v[1]["rho_within_bound"], true);

    let o = semiop(&["polybound", "--poly", s(&p), "--method", "thm54"]);
    let v = json(&o);
    assert_eq!(v["method"], "thm54");
    assert!(v.get("rho_check").is_none());
}

#[test]
fn polybound_scalar_quadratic_and_errors() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("q.json");
    std::fs::write(
        &p,
        r#"{"degree":2,"dim":1,"coeffs":[{"rows":1,"cols":1,"data":[[-1,0]]},{"rows":1,"cols":1,"data":[[0,0]]}]}"#,
    )
    .unwrap();
    let o = semiop(&["polybound", "--poly", s(&p), "--method", "thm54"]);
    assert!((json(&o)["bound"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"degree":2,"dim":2,"coeffs":[{"rows":1,"cols":1,"data":[[1,0]]},{"rows":1,"cols":1,"data":[[1,0]]}]}"#,
    )
    .unwrap();
    assert_eq!(semiop(&["polybound", "--poly", s(&bad)]).code, 4);
    let low = dir.path().join("low.json");
    std::fs::write(&low, r#"{"degree":1,"dim":1,"coeffs":[{"rows":1,"cols":1,"data":[[1,0]]}]}"#).unwrap();
    assert_eq!(semiop(&["polybound", "--poly", s(&low)]).code, 2);
}

#[test]
fn binary_runs() {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_semiop"))
        .args(["verify", "--check", "nope"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(5));
}
