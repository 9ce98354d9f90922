use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hardy(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardy")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

#[test]
fn factor_of_z() {
    let dir = TempDir::new().unwrap();
    let b = write(&dir, "b.json", r#"{"num_re":[0.0,1.0],"den_re":[1.0]}"#);
    let out = hardy(&["factor", "--b", s(&b)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["command"], "factor");
    assert_eq!(r["outputs"]["inner"], "z");
    assert_eq!(r["outputs"]["outer"], "1");
    assert_eq!(r["inputs"]["b"]["num_re"][1], 1.0);
}

#[test]
fn nehari_of_conjugate_z() {
    let dir = TempDir::new().unwrap();
    let phi = write(&dir, "phi.json", r#"{"offset":-1,"re":[1.0]}"#);
    let r = report(&hardy(&["nehari", "--symbol", s(&phi), "--n", "256"]));
    assert!((r["outputs"]["distance"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(r["flags"]["converged"], true);

    let laurent = write(&dir, "laurent.json", r#"{"index":[-1],"re":[1.0]}"#);
    let r = report(&hardy(&["nehari", "--symbol", s(&laurent)]));
    assert!((r["outputs"]["distance"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn pick_half_half_returns_identity() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "p.json",
        r#"{"nodes":[{"re":0.0},{"re":0.5}],"targets":[{"re":0.0},{"re":0.5}],"radius":1.0}"#,
    );
    let out = hardy(&["pick", "--problem", s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["outputs"]["feasible"], true);
    assert!(r["outputs"]["min_eig"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(r["outputs"]["H"], "z");
}

#[test]
fn seeded_sweeps_are_byte_identical() {
    let run = |seed: &str| hardy(&["vn-check", "--trials", "40", "--seed", seed]).stdout;
    assert_eq!(run("7"), run("7"));
    assert_ne!(run("7"), run("8"));
    let r: Value = serde_json::from_slice(&run("7")).unwrap();
    assert_eq!(r["outputs"]["violations"], 0);
    assert_eq!(r["inputs"]["seed"], 7);
}

#[test]
fn out_flag_writes_the_same_report() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("report.json");
    let samples = golden("samples.json");
    let args = ["sample", "reconstruct", "--samples", s(&samples), "--t", "-1", "0.5"];
    let stdout = hardy(&args).stdout;
    let mut with_out = args.to_vec();
    with_out.extend(["--out", s(&target)]);
    let out = hardy(&with_out);
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read(&target).unwrap(), stdout);
}

#[test]
fn sample_report_matches_golden() {
    let samples = golden("samples.json");
    let out = hardy(&["sample", "reconstruct", "--samples", s(&samples), "--t", "-1", "0", "2", "--tail-energy", "0.25"]);
    let mut r = report(&out);
    r["inputs"]["samples"] = Value::Null;
    let expected: Value = serde_json::from_str(&std::fs::read_to_string(golden("sample_reconstruct.json")).unwrap()).unwrap();
    assert_eq!(r, expected);
}

#[test]
fn usage_and_input_errors_exit_with_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    let good = write(&dir, "phi.json", r#"{"offset":0,"re":[1.0]}"#);
    let outside = write(&dir, "p.json", r#"{"nodes":[{"re":1.5}],"targets":[{"re":0.1}]}"#);
    let missing = dir.path().join("missing.json");
    for args in [
        vec!["conv", "--phi", s(&bad), "--psi", s(&good)],
        vec!["conv", "--phi", s(&missing), "--psi", s(&good)],
        vec!["pick", "--problem", s(&outside)],
        vec!["spectrum", "--phi", s(&good), "--grid", "12"],
        vec!["spectrum", "--phi", s(&good), "--tol", "-1"],
        vec!["frobnicate"],
        vec!["vn-check", "--shift", "4"],
    ] {
        let out = hardy(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn domain_errors_exit_with_1_and_a_payload() {
    let dir = TempDir::new().unwrap();
    let unstable = write(&dir, "b.json", r#"{"num_re":[1.0],"den_re":[1.0,-2.0]}"#);
    let out = hardy(&["factor", "--b", s(&unstable)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(report(&out)["error"]["message"].is_string());

    let infeasible = write(&dir, "p.json", r#"{"nodes":[{"re":0.0}],"targets":[{"re":2.0}],"radius":1.0}"#);
    let out = hardy(&["pick", "--problem", s(&infeasible)]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["outputs"]["feasible"], false);
    assert!((r["outputs"]["minimal_radius"].as_f64().unwrap() - 2.0).abs() < 1e-10);
}

#[test]
fn every_subcommand_runs() {
    let dir = TempDir::new().unwrap();
    let sig = write(&dir, "sig.json", r#"{"offset":-2,"re":[0.5,1.0,0.25,0.1]}"#);
    let k = write(&dir, "k.json", r#"{"offset":0,"re":[0.5,0.25,0.125]}"#);
    let b = write(&dir, "b.json", r#"{"num_re":[1.0,-0.3],"den_re":[1.0,0.5]}"#);
    let delay = write(&dir, "c.json", r#"{"num_re":[0.0,0.3],"den_re":[1.0]}"#);
    let matching = write(
        &dir,
        "m.json",
        r#"{"t":{"num_re":[1.0,-0.3],"den_re":[1.0,0.5]},
            "u":{"num_re":[0.5,-1.0],"den_re":[1.0,0.2]},
            "v":{"num_re":[0.0,1.0],"den_re":[2.0,-1.0]}}"#,
    );
    let mu = write(&dir, "mu.json", r#"{"o":1.0,"01":0.5,"110":0.25}"#);
    let coeffs = write(&dir, "a.json", r#"{"re":[1.0,0.5,0.25]}"#);
    let cases: Vec<Vec<&str>> = vec![
        vec!["conv", "--phi", s(&sig), "--psi", s(&k)],
        vec!["stability", "--k", s(&k)],
        vec!["spectrum", "--phi", s(&sig), "--grid", "64"],
        vec!["classify", "--b", s(&b)],
        vec!["aak", "--symbol", s(&sig), "--grid", "1024"],
        vec!["toeplitz", "--symbol", s(&sig), "--f", s(&k), "--radius", "0.99"],
        vec!["match", "--problem", s(&matching)],
        vec!["feedback", "--plant", s(&b), "--controller", s(&delay), "--strict"],
        vec!["dyadic", "carleson", "--measure", s(&mu)],
        vec!["dirichlet", "--coeffs", s(&coeffs)],
    ];
    for args in cases {
        let out = hardy(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let r = report(&out);
        assert_eq!(r["schema"], 1);
        for key in ["inputs", "outputs", "tolerances", "flags"] {
            assert!(r[key].is_object(), "{args:?} lacks {key}");
        }
    }
    let r = report(&hardy(&["stability", "--k", s(&k)]));
    assert!((r["outputs"]["l2_gain"].as_f64().unwrap() - 0.875).abs() < 1e-12);
    let r = report(&hardy(&["match", "--problem", s(&matching)]));
    assert_eq!(r["flags"]["agrees"], true);
}
