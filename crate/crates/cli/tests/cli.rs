use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hardy_embed::hardy::TruncatedOperator;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy-embed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_on(cmd: &str, name: &str, extra: &[&str]) -> Output {
    let input = fixture(name);
    let mut args = vec![cmd, "--input", input.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn analyze_polynomial() {
    let out = run_on("analyze", "z_minus_2.json", &[]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["verdict"], "Embeddable");
    assert_eq!(r["result"]["governing_result"], "Corollary 3.13");
    assert!(r["result"]["citation"].as_str().unwrap().contains("does not have any zero"));
}

#[test]
fn analyze_z_squared_composition() {
    let out = run_on("analyze", "z_squared.json", &[]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["verdict"], "Embeddable");
    let notes: Vec<&str> = r["result"]["notes"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(notes.contains(&"not a semigroup of composition operators"));
}

#[test]
fn analyze_verdicts_are_not_errors() {
    let out = run_on("analyze", "shift.json", &[]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["verdict"], "NotEmbeddable");
    let out = run_on("analyze", "z_over_z_minus_2.json", &[]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["verdict"], "NotEmbeddable");
    assert_eq!(r["result"]["governing_result"], "Condition (3.2)");
}

#[test]
fn malformed_input_exits_2() {
    let out = run_on("analyze", "malformed_atom.json", &[]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("InvalidSymbol"));
    assert_eq!(code(&run(&["analyze"])), 2);
    let out = run_on("analyze", "z_squared.json", &["--n", "3"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn no_construction_exits_3() {
    let out = run_on("semigroup", "no_construction.json", &[]);
    assert_eq!(code(&out), 3);
    assert_eq!(report(&out)["result"]["analysis"]["governing_result"], "Question 3.12");
    assert!(String::from_utf8_lossy(&out.stderr).contains("Question 3.12"));
}

fn read_op(dir: &Path, stem: &str) -> TruncatedOperator {
    TruncatedOperator::from_csv(&std::fs::read_to_string(dir.join(format!("{stem}.csv"))).unwrap()).unwrap()
}

#[test]
fn singular_semigroup_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_on(
        "semigroup",
        "singular_atom.json",
        &["--times", "0,0.5,1", "--out", dir.path().to_str().unwrap()],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let half = read_op(dir.path(), "V_t0.5");
    let one = read_op(dir.path(), "V_t1");
    let zero = read_op(dir.path(), "V_t0");
    let d = (half.matrix() * half.matrix() - one.matrix()).norm();
    assert!(d < 1e-8, "{d}");
    assert!((zero.matrix() - TruncatedOperator::identity(32).matrix()).norm() == 0.0);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("V_t1.json")).unwrap()).unwrap();
    assert_eq!(meta["N"], 32);
    assert_eq!(meta["symbol_hash"].as_str().unwrap().len(), 64);
    assert!(meta["tolerance"].is_f64());
    let traj = std::fs::read_to_string(dir.path().join("trajectory.csv")).unwrap();
    assert!(traj.starts_with("t,z_re,z_im,phi_re,phi_im\n"));
    assert_eq!(traj.lines().count(), 1 + 3 * 5);
}

#[test]
fn z_squared_semigroup() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_on(
        "semigroup",
        "z_squared.json",
        &["--n", "8", "--times", "0,0.5,1", "--out", dir.path().to_str().unwrap()],
    );
    assert_eq!(code(&out), 0);
    let r: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    for c in r["result"]["checks"].as_array().unwrap() {
        assert_eq!(c["pass"], true, "{c}");
    }
    assert!(dir.path().join("V_t0.5.csv").exists());
    assert!(!dir.path().join("trajectory.csv").exists());
}

#[test]
fn solve_z_squared() {
    let out = run_on("solve", "z_squared.json", &["--beta", "0.25"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let mut roots: Vec<f64> = r["result"]["solutions"]["roots"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["value"][0].as_f64().unwrap())
        .collect();
    roots.sort_by(f64::total_cmp);
    assert!((roots[0] + 0.5).abs() < 1e-12 && (roots[1] - 0.5).abs() < 1e-12);
    assert_eq!(r["result"]["all_distinct"], true);
}

#[test]
fn frostman_default_lambda_is_seeded() {
    let a = run_on("frostman", "z_squared.json", &[]);
    let b = run_on("frostman", "z_squared.json", &[]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(report(&a)["result"]["simple_zeros"], true);
    let c = run_on("frostman", "z_squared.json", &["--seed", "7"]);
    assert_ne!(report(&a)["result"]["lambda"], report(&c)["result"]["lambda"]);
}

#[test]
fn wold_levels_are_dyadic() {
    let out = run_on("wold", "z_squared.json", &["--n", "8"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let mut got: Vec<(u64, u64, u64)> = r["result"]["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let s = e["support"].as_array().unwrap();
            assert_eq!(s.len(), 1);
            (e["level"].as_u64().unwrap(), e["wandering_index"].as_u64().unwrap(), s[0].as_u64().unwrap())
        })
        .collect();
    got.sort();
    assert_eq!(got, vec![(0, 0, 1), (0, 1, 3), (0, 2, 5), (0, 3, 7), (1, 0, 2), (1, 1, 6), (2, 0, 4)]);
}

#[test]
fn verify_stored_samples() {
    assert_eq!(code(&run_on("verify", "exact_sample.json", &[])), 0);
    let out = run_on("verify", "corrupted_sample.json", &[]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    let law = r["result"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "semigroup_law")
        .unwrap();
    assert_eq!(law["pass"], false);
    assert!(!law["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn verify_self_test_and_symbol() {
    let out = run(&["verify"]);
    assert_eq!(code(&out), 0);
    assert_eq!(report(&out)["result"]["fixture_pairs"].as_array().unwrap().len(), 6);
    let out = run_on("verify", "z_squared.json", &["--n", "16"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn reports_are_byte_identical() {
    for (cmd, name) in [("analyze", "z_minus_2.json"), ("analyze", "z_squared.json"), ("solve", "z_squared.json")] {
        let a = run_on(cmd, name, &[]);
        let b = run_on(cmd, name, &[]);
        assert_eq!(a.stdout, b.stdout, "{cmd} {name}");
    }
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    for d in [&d1, &d2] {
        let out = run_on(
            "semigroup",
            "singular_atom.json",
            &["--n", "8", "--times", "0,0.5,1", "--out", d.path().to_str().unwrap()],
        );
        assert_eq!(code(&out), 0);
    }
    let mut names: Vec<_> = std::fs::read_dir(d1.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    for n in names {
        assert_eq!(
            std::fs::read(d1.path().join(&n)).unwrap(),
            std::fs::read(d2.path().join(&n)).unwrap(),
            "{n:?}"
        );
    }
}

#[test]
fn csv_formats() {
    let out = run_on("solve", "z_squared.json", &["--beta", "0.25", "--format", "csv"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("re,im,multiplicity,residual\n"));
    assert_eq!(s.lines().count(), 3);
    let out = run_on("analyze", "z_minus_2.json", &["--format", "csv"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("governing_result,\"Corollary 3.13\""));
}
