use std::path::PathBuf;
use std::process::Command;

use pseudoeig::fixtures::{example4, grid20, jbite_a, jbite_a_perturbed, matrix_b};
use pseudoeig::{ComplexMatrix, C64};
use pseudoeig_cli::io::{read_matrix, write_csv, write_matrix_market, Format};
use pseudoeig_cli::report::{matrix_from_json, SolveReport};
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_pseudoeig")).args(args).output().expect("binary runs");
    (out.status.code().expect("exit code"), String::from_utf8(out.stdout).expect("utf-8 stdout"))
}

fn json(stdout: &str) -> Value {
    serde_json::from_str(stdout).unwrap_or_else(|e| panic!("bad JSON ({e}):\n{stdout}"))
}

fn lambda(v: &Value) -> C64 {
    let l = &v["solution"]["lambda_hat"];
    C64::new(l["re"].as_f64().unwrap(), l["im"].as_f64().unwrap())
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn jbite_a_from_a_far_estimate() {
    let path = fixture("jbiteA.mtx");
    let (code, out) = run(&[
        "solve", "--matrix", path.to_str().unwrap(), "--lambda0", "1.9", "--m", "1", "--k", "5", "--orthonormalize",
    ]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert!((lambda(&v) - C64::new(2.0, 0.0)).norm() <= 1e-12, "{}", lambda(&v));
    assert!(v["unrefined"].is_object());
    assert_eq!(v["solution"]["X"].as_array().unwrap().len(), 5);
    assert_eq!(v["solution"]["S"].as_array().unwrap().len(), 5);
    assert_eq!(v["input"]["seed"], 42);
}

#[test]
fn grid20_near_three() {
    let path = fixture("grid20.mtx");
    let (code, out) = run(&[
        "solve", "--matrix", path.to_str().unwrap(), "--lambda0", "3.001287762162967", "--m", "2", "--k", "5",
        "--certify",
    ]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert!((lambda(&v) - C64::new(3.0, 0.0)).norm() <= 1e-12);
    assert_eq!(v["certificate"]["jordan_block_verified"], true);
}

#[test]
fn refine_subcommand_matches_solve_with_orthonormalize() {
    let path = fixture("example4.mtx");
    let p = path.to_str().unwrap();
    let base = ["--matrix", p, "--lambda0", "2.01", "--m", "2", "--k", "2"];
    let (c1, a) = run(&[&["refine"], &base[..]].concat());
    let (c2, b) = run(&[&["solve"], &base[..], &["--orthonormalize"]].concat());
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
}

#[test]
fn missing_file_is_an_io_error() {
    let (code, out) = run(&["solve", "--matrix", "/nonexistent/a.mtx", "--lambda0", "1", "--m", "1", "--k", "1"]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "io");
    assert!(v.get("solution").is_none());
}

#[test]
fn malformed_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "bad.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n2\nthree\n4\n");
    let (code, out) = run(&["solve", "--matrix", &p, "--lambda0", "1", "--m", "1", "--k", "1"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["error"]["kind"], "parse");
}

#[test]
fn bad_arguments_are_input_errors() {
    let path = fixture("jbiteA.mtx");
    let p = path.to_str().unwrap();
    let (code, out) = run(&["solve", "--matrix", p, "--lambda0", "2", "--m", "9", "--k", "1"]);
    assert_eq!(code, 1, "{out}");
    assert_eq!(json(&out)["error"]["kind"], "argument");
    let (code, out) = run(&["solve", "--matrix", p, "--lambda0", "two", "--m", "1", "--k", "1"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["error"]["kind"], "argument");
}

#[test]
fn iteration_cap_reports_non_convergence() {
    let path = fixture("jbiteA.mtx");
    let (code, out) = run(&[
        "solve", "--matrix", path.to_str().unwrap(), "--lambda0", "1.5", "--m", "1", "--k", "5", "--max-iter", "1",
    ]);
    assert_eq!(code, 2);
    let v = json(&out);
    assert_eq!(v["solution"]["converged"], false);
    assert!(v["solution"]["note"].is_string());
}

#[test]
fn identify_simple_eigenvalue() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "d.csv", "1,0,0\n0,2,0\n0,0,3\n");
    let (code, out) = run(&["identify", "--matrix", &p, "--lambda0", "0.99", "--theta", "0.1"]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["input"]["m"], 1);
    assert_eq!(v["diagnostics"]["k_accepted"], 1);
    assert_eq!(v["diagnostics"]["rows"][0]["verdict"], "accepted");
}

#[test]
fn identify_grid20_anchors() {
    let path = fixture("grid20.mtx");
    let p = path.to_str().unwrap();
    for (l0, m, k) in [("1.999881443477439,-0.000118714860725", 3, 3), ("3.001287762162967", 2, 5)] {
        let (code, out) = run(&["identify", "--matrix", p, "--lambda0", l0, "--theta", "1e-2", "--kmax", "6"]);
        assert_eq!(code, 0, "{out}");
        let v = json(&out);
        assert_eq!(v["input"]["m"], m);
        assert_eq!(v["diagnostics"]["k_accepted"], k);
        assert_eq!(v["diagnostics"]["rows"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn identify_away_from_the_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_temp(&dir, "d.csv", "1,0\n0,2\n");
    let (code, out) = run(&["identify", "--matrix", &p, "--lambda0", "1.5", "--theta", "0.1"]);
    assert_eq!(code, 2);
    let v = json(&out);
    assert_eq!(v["input"]["m"], 0);
    assert_eq!(v["error"]["kind"], "solver");
}

#[test]
fn output_is_deterministic_and_round_trips() {
    let path = fixture("jbiteA-perturbed.mtx");
    let args = ["refine", "--matrix", path.to_str().unwrap(), "--lambda0", "2", "--m", "1", "--k", "5", "--certify"];
    let (c1, a) = run(&args);
    let (c2, b) = run(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);

    let report: SolveReport = serde_json::from_str(&a).unwrap();
    assert_eq!(report.to_json(), a.trim_end());
    let sol = report.solution.unwrap();
    let x = matrix_from_json(&sol.x).unwrap();
    assert_eq!((x.rows(), x.cols()), (5, 5));
    assert_eq!(report.input.unwrap().sha256.unwrap().len(), 64);
}

#[test]
fn seed_changes_the_random_part_only() {
    let path = fixture("example4.mtx");
    let p = path.to_str().unwrap();
    let (_, a) = run(&["solve", "--matrix", p, "--lambda0", "2.01", "--m", "2", "--k", "2", "--seed", "1"]);
    let (_, b) = run(&["solve", "--matrix", p, "--lambda0", "2.01", "--m", "2", "--k", "2", "--seed", "2"]);
    assert_ne!(json(&a)["solution"]["C"], json(&b)["solution"]["C"]);
    assert!((lambda(&json(&a)) - lambda(&json(&b))).norm() <= 1e-12);
}

#[test]
fn csv_and_matrix_market_inputs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let a = example4();
    let mm = write_temp(&dir, "a.mtx", &write_matrix_market(&a));
    let csv = write_temp(&dir, "a.csv", &write_csv(&a));
    let args = |p: &str| vec!["solve", "--matrix", p, "--lambda0", "2.01", "--m", "2", "--k", "2"].into_iter().map(String::from).collect::<Vec<_>>();
    let (_, x) = run(&args(&mm).iter().map(String::as_str).collect::<Vec<_>>());
    let (_, y) = run(&args(&csv).iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(json(&x)["solution"], json(&y)["solution"]);
}

#[test]
fn bundled_fixture_files_match_the_embedded_matrices() {
    let cases: [(&str, ComplexMatrix); 5] = [
        ("grid20.mtx", grid20()),
        ("jbiteA.mtx", jbite_a()),
        ("jbiteA-perturbed.mtx", jbite_a_perturbed()),
        ("example4.mtx", example4()),
        ("matrixB.mtx", matrix_b()),
    ];
    for (name, embedded) in cases {
        let read = read_matrix(&fixture(name), Format::MatrixMarket).unwrap();
        assert_eq!(read, embedded, "{name}");
    }
}

#[test]
fn fixtures_all_pass() {
    let (code, out) = run(&["fixtures", "--name", "all", "--json"]);
    assert_eq!(code, 0, "{out}");
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["fixtures"].as_array().unwrap().len(), 5);
}

#[test]
fn fixtures_table_and_unknown_name() {
    let (code, out) = run(&["fixtures", "--name", "jbiteA"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("fixture jbiteA [PASS]"));
    assert!(out.contains("refined: |S(4,5)|"));
    assert!(out.trim_end().ends_with("overall: PASS"));
    let (code, out) = run(&["fixtures", "--name", "grid21"]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["error"]["kind"], "argument");
}
