use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_donoghue-lab"));
    cmd.env_remove("DONOGHUE_LAB_SEED");
    cmd
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn pair(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn realize_unit_class() {
    let v = stdout_json(&run(&["realize", "--Q", "1", "--a", "1"]));
    let (k, k_im) = pair(&v["kappa"]);
    assert!((k - 0.4472135955).abs() < 1e-10);
    assert_eq!(k_im, 0.0);
    let (re, im) = pair(&v["U"]);
    assert!((re + 0.4472135955).abs() < 1e-10);
    assert!((im - 0.894427191).abs() < 1e-9);
    assert_eq!(v["hypothesis"], "Mixed");
}

#[test]
fn realize_negative_q_and_universal() {
    let v = stdout_json(&run(&["realize", "--Q", "-1", "--a", "0.5", "--universal"]));
    let (_, im) = pair(&v["U"]);
    assert!(im < 0.0);
    let modulus = v["universal"]["kappa_modulus"].as_f64().unwrap();
    assert!((modulus - 65f64.sqrt() / 13.0).abs() < 1e-12);
}

#[test]
fn realize_from_file_and_table() {
    let out = run(&["--format", "table", "realize", "--input", &fixture("unit_atom.json")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("kappa") && l.contains("0.0000000000")));
    assert!(text.contains("Hyp1"));
}

#[test]
fn realize_rejects_bad_input() {
    assert_eq!(run(&["realize", "--Q", "1", "--a", "-2"]).status.code(), Some(2));
    assert_eq!(run(&["realize", "--Q", "1"]).status.code(), Some(2));
}

#[test]
fn classify_files() {
    let v = stdout_json(&run(&["classify", "--input", &fixture("symmetric_half.json")]));
    assert_eq!(v["family"], "M_kappa");
    assert!((v["kappa0"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(v["perturbed"], true);

    assert_eq!(run(&["classify", "--input", &fixture("empty_measure.json")]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--input", &fixture("truncated.json")]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--input", "/nonexistent/x.json"]).status.code(), Some(2));
}

#[test]
fn perturb_shifts_q() {
    let v = stdout_json(&run(&["perturb", "--input", &fixture("symmetric_half.json"), "--dq", "-1"]));
    assert_eq!(v["Q"].as_f64().unwrap(), 0.0);
    assert_eq!(v["measure"]["atoms"].as_array().unwrap().len(), 2);
}

#[test]
fn rotate_solves_both_branches() {
    let v = stdout_json(&run(&["rotate", "--Q", "1", "--a", "1"]));
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    let product: f64 = rows.iter().map(|r| r["a_alpha"].as_f64().unwrap()).product();
    assert!((product - 1.0).abs() < 1e-12);
    for r in rows {
        assert!(r["Q_alpha"].as_f64().unwrap().abs() < 1e-12);
    }
    let v = stdout_json(&run(&["rotate", "--Q", "0", "--a", "1", "--alpha", "1.5707963267948966"]));
    assert!((v[0]["a_alpha"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(run(&["rotate", "--Q", "0", "--a", "1"]).status.code(), Some(2));
}

fn curve_rows(stdout: &[u8]) -> Vec<(f64, f64)> {
    String::from_utf8(stdout.to_vec())
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let mut cols = l.split(',').map(|c| c.parse::<f64>().unwrap());
            (cols.next().unwrap(), cols.next().unwrap())
        })
        .collect()
}

#[test]
fn curve_for_half_normalization() {
    let out = run(&["curve", "--class", "Mk", "--a", "0.5", "--Q-range", "-5", "5", "--steps", "101"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("Q,kappa,re_U,im_U"));
    assert!(text.contains("# vertex kappa(0) = 0.3333333333333333"));
    let rows = curve_rows(&out.stdout);
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[50].0, 0.0);
    assert!((rows[50].1 - 1.0 / 3.0).abs() < 1e-15);
    for i in 0..101 {
        assert_eq!(rows[i].0, -rows[100 - i].0);
        assert_eq!(rows[i].1, rows[100 - i].1);
    }
}

#[test]
fn curve_is_deterministic_and_writes_svg() {
    let dir = std::env::temp_dir().join(format!("donoghue-lab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let svg = dir.join("curve.svg");
    let args = ["curve", "--class", "Mk_inv", "--a", "4", "--steps", "41", "--svg", svg.to_str().unwrap()];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.contains("<polyline"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn curve_rejects_mismatched_class() {
    assert_eq!(run(&["curve", "--class", "Mk", "--a", "2"]).status.code(), Some(2));
    assert_eq!(run(&["curve", "--class", "M", "--a", "0.5"]).status.code(), Some(2));
    assert_eq!(run(&["curve", "--class", "Mk"]).status.code(), Some(2));
}

#[test]
fn examples_replay() {
    let v = stdout_json(&run(&["examples"]));
    assert_eq!(v["failed"], 0);
    assert_eq!(v["passed"], 20);
}

#[test]
fn verify_single_suite_and_seed_override() {
    let v = stdout_json(&run(&["verify", "--suite", "curves", "--seed", "3"]));
    assert_eq!(v["seed"], 3);
    assert_eq!(v["failed"], 0);

    let out = bin()
        .args(["verify", "--suite", "cayley", "--seed", "3"])
        .env("DONOGHUE_LAB_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(stdout_json(&out)["seed"], 11);

    let out = bin()
        .args(["verify", "--suite", "cayley"])
        .env("DONOGHUE_LAB_SEED", "eleven")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn resolvent_single_atom() {
    let v = stdout_json(&run(&[
        "resolvent",
        "--input",
        &fixture("unit_atom.json"),
        "--z",
        "0,2",
        "--z",
        "-1,-1",
        "--k",
        "0.2,-0.4",
    ]));
    let (kr, ki) = pair(&v["k_param"]);
    assert_eq!((kr, ki), (0.2, -0.4));
    let entries = v["resolvents"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    // T = 1/d with d = i(k + 1)/(k - 1) for a single atom at 0
    let k = num(0.2, -0.4);
    let d = mul(num(0.0, 1.0), div(add(k, num(1.0, 0.0)), add(k, num(-1.0, 0.0))));
    let t = div(num(1.0, 0.0), d);
    let expected = div(num(1.0, 0.0), add(t, num(0.0, -2.0)));
    let got = pair(&entries[0]["matrix"][0][0]);
    assert!((got.0 - expected.0).abs() < 1e-12 && (got.1 - expected.1).abs() < 1e-12);
}

#[test]
fn resolvent_guards() {
    let f = fixture("unit_atom.json");
    assert_eq!(run(&["resolvent", "--input", &f, "--z", "0,0"]).status.code(), Some(3));
    assert_eq!(run(&["resolvent", "--input", &f, "--z", "zero"]).status.code(), Some(2));
    // the default k is 0 here, so T = i and z = i is a pole
    assert_eq!(run(&["resolvent", "--input", &f, "--z", "0,1"]).status.code(), Some(3));
    let ok = stdout_json(&run(&["resolvent", "--input", &f, "--z", "0,2"]));
    assert_eq!(ok["resolvents"][0]["matrix"].as_array().unwrap().len(), 1);
}

fn num(re: f64, im: f64) -> (f64, f64) {
    (re, im)
}

fn add(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    (x.0 + y.0, x.1 + y.1)
}

fn mul(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)
}

fn div(x: (f64, f64), y: (f64, f64)) -> (f64, f64) {
    let n = y.0 * y.0 + y.1 * y.1;
    mul(x, (y.0 / n, -y.1 / n))
}
