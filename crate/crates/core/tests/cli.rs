use std::process::{Command, Output};

use serde_json::Value;

use thermal_ppt::boundary::{sweep, PartitionRule, DEFAULT_TOL};
use thermal_ppt::transforms::pt_eigenvalues_analytic;
use thermal_ppt::{Bipartition, PolarizationVector, TransformKind};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thermal-ppt")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let o = run(&all);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).unwrap())
}

fn line_value<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).map(str::trim))
        .unwrap_or_else(|| panic!("no '{key}' in:\n{text}"))
}

#[test]
fn npt_examples() {
    let o = run(&["npt", "--transform", "ch", "--alphas", "1,1", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(line_value(&text, "verdict:"), "NPT");
    let min: f64 = line_value(&text, "min_pt_eigenvalue:").parse().unwrap();
    let c = 1f64.cosh();
    assert!((min - c / (4.0 * c * c) * ((-1f64).exp() - 1f64.tanh() * 1f64.exp())).abs() < 1e-15);

    let o = run(&["npt", "--transform", "cf", "--alphas", "0,0", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(line_value(&stdout(&o), "verdict:"), "PPT");

    let o = run(&["npt", "--transform", "ch", "--alphas", "1", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("qubit count"));
}

#[test]
fn npt_input_errors_exit_2() {
    for args in [
        &["npt", "--transform", "ch", "--alphas", "1,x", "--k", "1"][..],
        &["npt", "--transform", "ch", "--alphas", "1,1", "--k", "2"],
        &["npt", "--transform", "xx", "--alphas", "1,1", "--k", "1"],
        &["npt", "--transform", "ch", "--k", "1"],
        &["npt", "--transform", "ch", "--alphas", "1,inf", "--k", "1"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn json_output_round_trips() {
    let alphas = [0.123456789012345, -1.1, 0.3];
    let inline = alphas.map(|a| format!("{a:?}")).join(",");
    let (code, v) = json(&["npt", "--transform", "cf", "--alphas", &inline, "--k", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "npt");
    let pol = PolarizationVector::new(alphas.to_vec()).unwrap();
    let bip = Bipartition::new(3, 2).unwrap();
    let expected = pt_eigenvalues_analytic(TransformKind::Cf, &pol, &bip).unwrap().min();
    assert_eq!(v["result"]["min_pt_eigenvalue"].as_f64().unwrap(), expected);
    let echoed: Vec<f64> = v["inputs"]["alphas"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(echoed, alphas);
}

#[test]
fn alphas_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("alphas.txt");
    std::fs::write(&path, "# polarizations\n1.0\n\n1.0  # second\n").unwrap();
    let o = run(&["npt", "--transform", "ch", "--alphas-file", path.to_str().unwrap(), "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(line_value(&stdout(&o), "verdict:"), "NPT");
    let o = run(&["npt", "--transform", "ch", "--alphas", "1,1", "--alphas-file", "x", "--k", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

fn read_rows(text: &str) -> Vec<csv::StringRecord> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(
        rdr.headers().unwrap().iter().collect::<Vec<_>>(),
        ["transform", "N", "k", "w", "delta", "seed", "alpha_b", "log10_inv_alpha", "residual"]
    );
    rdr.records().map(Result::unwrap).collect()
}

#[test]
fn boundary_ch_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ch.csv");
    let o = run(&[
        "boundary", "--transform", "ch", "--nmin", "2", "--nmax", "12", "--delta", "0", "--seed", "1", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let rows = read_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(rows.len(), 11);
    let a2: f64 = rows[0][6].parse().unwrap();
    assert!((a2 - 1f64.asinh() / 2.0).abs() < 1e-6);

    let piped = run(&["boundary", "--transform", "ch", "--nmin", "2", "--nmax", "12", "--delta", "0", "--seed", "1"]);
    assert_eq!(stdout(&piped), std::fs::read_to_string(&path).unwrap());
}

#[test]
fn boundary_cf_rows_match_library() {
    let o = run(&["boundary", "--transform", "cf", "--nmin", "3", "--nmax", "12", "--delta", "0.1", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = read_rows(&stdout(&o));
    let lib = sweep(TransformKind::Cf, 3..=12, 0.1, 7, PartitionRule::HalfSplit, DEFAULT_TOL).unwrap();
    assert_eq!(rows.len(), lib.len());
    for (row, p) in rows.iter().zip(&lib) {
        assert_eq!(row[1].parse::<usize>().unwrap(), p.n);
        assert_eq!(row[2].parse::<u32>().unwrap(), p.k);
        assert_eq!(row[6].parse::<f64>().unwrap(), p.alpha_b);
        assert_eq!(row[8].parse::<f64>().unwrap(), p.residual);
    }
}

#[test]
fn boundary_errors() {
    let o = run(&["boundary", "--transform", "ch", "--nmin", "2", "--nmax", "4", "--delta", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["boundary", "--transform", "ch", "--nmin", "5", "--nmax", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["boundary", "--transform", "ch", "--nmin", "2", "--nmax", "4", "--out", "/nonexistent-dir/x.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oracle_check_runs() {
    let o = run(&["oracle-check", "--nmax", "4", "--trials", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("FAIL"));
    assert_eq!(run(&["oracle-check", "--nmax", "2", "--trials", "1"]).status.code(), Some(0));
    let o = run(&["oracle-check", "--nmax", "2", "--trials", "1", "--corrupt"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL pt_spectrum_matches_oracle"));
    assert_eq!(run(&["oracle-check", "--nmax", "9"]).status.code(), Some(2));
}

#[test]
fn durcirac_examples() {
    let verdict = |args: &[&str]| line_value(&stdout(&run(args)), "verdict:").to_string();
    assert_eq!(verdict(&["durcirac", "--builtin", "iso:0.5", "--k", "1"]), "NPT");
    assert_eq!(verdict(&["durcirac", "--builtin", "iso:0.2", "--k", "1"]), "INCONCLUSIVE");
    let o = run(&["durcirac", "--builtin", "ch:1.0", "--k", "1", "--flips", "2"]);
    let text = stdout(&o);
    assert_eq!(line_value(&text, "verdict:"), "INCONCLUSIVE");
    assert_eq!(line_value(&text, "after X on qubits 2:"), "NPT");

    let (code, v) = json(&["durcirac", "--builtin", "ch:1.0", "--k", "1", "--scan"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["scan_flips"], serde_json::json!([2]));
}

#[test]
fn durcirac_csv_input() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("iso.csv");
    std::fs::write(&good, "0.375,0,0,0.25\n0,0.125,0,0\n0,0,0.125,0\n0.25,0,0,0.375\n").unwrap();
    let o = run(&["durcirac", "--input", good.to_str().unwrap(), "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(line_value(&stdout(&o), "verdict:"), "NPT");

    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "1.5,0,0,0\n0,-0.5,0,0\n0,0,0,0\n0,0,0,0\n").unwrap();
    assert_eq!(run(&["durcirac", "--input", bad.to_str().unwrap(), "--k", "1"]).status.code(), Some(2));
    let asym = dir.path().join("asym.csv");
    std::fs::write(&asym, "0.5,0.1\n0,0.5\n").unwrap();
    assert_eq!(run(&["durcirac", "--input", asym.to_str().unwrap(), "--k", "1"]).status.code(), Some(2));
}

#[test]
fn classify_examples() {
    let o = run(&["classify", "--transform", "ch", "--alphas", "0.5,0.5,0.5"]);
    assert_eq!(line_value(&stdout(&o), "uniform alpha: fully distillable iff condition:"), "true");

    let o = run(&["classify", "--transform", "cf", "--alphas", "0,0"]);
    assert_eq!(line_value(&stdout(&o), "full separability condition holds:"), "true");

    let (code, v) = json(&["classify", "--transform", "cf", "--alphas", "0.5,0.5,0.5,0.5"]);
    assert_eq!(code, 0);
    let c = &v["result"]["classification"];
    assert_eq!(c["extremal"]["d_min"].as_f64(), Some(0.0));
    assert_eq!(c["full_sep_possible"], false);
    assert_eq!(v["result"]["bipartitions"].as_array().unwrap().len(), 7);

    assert_eq!(run(&["classify", "--transform", "cf", "--alphas", ""]).status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    for sub in ["npt", "boundary", "oracle-check", "durcirac", "classify"] {
        assert!(stdout(&o).contains(sub));
    }
}
