use std::process::{Command, Output};

use serde_json::Value;

fn waistlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_waistlab")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn data(name: &str) -> String {
    format!("{}/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn hopf_map_attains_the_even_map_bound() {
    let out = waistlab(&["waist", "verify", "--map", "hopf3", "--bound", "even-map-pi"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    let r = &doc["records"][0];
    assert_eq!(r["pass"], true);
    assert!((r["measured"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-6);
    assert_eq!(r["bound_ref"][0], "even-map-pi");
    assert_eq!(doc["schema_version"], 1);
}

#[test]
fn crofton_on_a_mesh_file() {
    let mesh = data("greatcircle.mesh");
    let out = waistlab(&["crofton", "estimate", "--mesh", &mesh, "--codim", "1", "--samples", "10000", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = report(&out)["records"][0]["measured"].as_f64().unwrap();
    assert!((v / std::f64::consts::TAU - 1.0).abs() < 0.02, "{v}");
}

#[test]
fn fill_demo_in_the_square() {
    let out = waistlab(&["fill", "demo", "--n", "2", "--k", "0", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    let ratio = doc["records"].as_array().unwrap().iter().find(|r| r["id"] == "filling:ledger-ratio").unwrap();
    assert!(ratio["measured"].as_f64().unwrap() <= 2.0);
    assert_eq!(ratio["bound"], 2.0);
}

#[test]
fn fill_a_chain_file_and_write_the_ledger() {
    let dir = std::env::temp_dir().join(format!("waistlab-fill-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let ledger = dir.join("ledger.csv");
    let filling = dir.join("filling.txt");
    let out = waistlab(&[
        "fill",
        "demo",
        "--cycle",
        &data("two_points.chain"),
        "--ledger-out",
        ledger.to_str().unwrap(),
        "--filling-out",
        filling.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&ledger).unwrap().starts_with("corner,edge,k,weight"));
    assert!(std::fs::read_to_string(&filling).unwrap().starts_with("dim 1"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = std::env::temp_dir().join(format!("waistlab-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, "seed = 5\n[sweepout.bend]\ntrials = 2\nell = 2,3\n").unwrap();
    let out = waistlab(&["--config", cfg.to_str().unwrap(), "sweepout", "bend", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = report(&out);
    assert_eq!(doc["config"]["seed"], "5");
    assert_eq!(doc["config"]["trials"], "1");
    assert_eq!(doc["config"]["ell"], "2,3");
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn workers_do_not_change_the_report() {
    let run = |w: &str| {
        let out = waistlab(&["--workers", w, "suite", "--only", "crofton,torus", "--seed", "3"]);
        let mut doc = report(&out);
        waist_cli::doc::strip_timing(&mut doc);
        doc
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(waistlab(&["crofton", "estimate", "--mesh", "builtin:great-circle"]).status.code(), Some(2));
    assert_eq!(waistlab(&["suite", "--only", "nothing"]).status.code(), Some(2));
    assert_eq!(waistlab(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(waistlab(&["waist", "verify", "--map", "hopf3", "--bound", "no-such-tag"]).status.code(), Some(2));
    assert_eq!(waistlab(&["--workers", "0", "suite", "--only", "archimedes"]).status.code(), Some(2));
}

#[test]
fn failing_certificates_exit_with_one() {
    let out = waistlab(&["fill", "assign", "--seed", "1", "--per-k", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!report(&out)["failures"].as_array().unwrap().is_empty());
}
