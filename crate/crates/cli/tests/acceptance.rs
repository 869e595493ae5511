//! Runs the pinned suite through the binary and prints one verdict line per
//! acceptance criterion. Criteria known to be unattainable print FAIL without
//! failing the test; everything else must pass. Runs without the libtest
//! harness so the verdict lines are never captured.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use waist_cli::doc::strip_timing;
use waist_cli::suite::{budget, CRITERIA};

/// Records whose bound does not hold for the construction as specified.
const KNOWN_UNATTAINABLE: &str = "filling:star-assignment:";

fn scratch(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("waistlab-acceptance-{}-{tag}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run_suite(seed: u64, tag: &str) -> (Value, i32) {
    let dir = scratch(tag);
    let out = dir.join("report.json");
    let run = Command::new(env!("CARGO_BIN_EXE_waistlab"))
        .args(["suite", "--seed", &seed.to_string(), "--out"])
        .arg(&out)
        .arg("--csv")
        .arg(dir.join("csv"))
        .output()
        .expect("binary runs");
    let text = std::fs::read_to_string(&out).expect("report written");
    assert!(dir.join("csv/bending_trials.csv").exists());
    let _ = std::fs::remove_dir_all(&dir);
    (serde_json::from_str(&text).expect("report is JSON"), run.status.code().unwrap_or(-1))
}

fn records(doc: &Value) -> &Vec<Value> {
    doc["records"].as_array().unwrap()
}

fn find<'a>(doc: &'a Value, id: &str) -> &'a Value {
    records(doc).iter().find(|r| r["id"] == id).unwrap_or_else(|| panic!("no record {id}"))
}

/// Pass flags in record order. Ids are left out because some embed
/// seed-dependent parameters (the random boxes).
fn verdicts(doc: &Value) -> (Vec<Option<bool>>, Value) {
    (records(doc).iter().map(|r| r["pass"].as_bool()).collect(), doc["failures"].clone())
}

fn line(ok: bool, name: &str, note: &str) {
    println!("{} {name:<16} {note}", if ok { "PASS" } else { "FAIL" });
}

fn main() {
    let (first, code) = run_suite(1, "a");
    let (second, _) = run_suite(1, "b");

    let mut unexpected = Vec::new();
    for r in records(&first) {
        let id = r["id"].as_str().unwrap();
        if r["pass"] == Value::Bool(false) && !id.starts_with(KNOWN_UNATTAINABLE) && !CRITERIA.contains(&id) {
            unexpected.push(id.to_string());
        }
    }

    println!("acceptance (suite --seed 1):");
    let mut over_budget = Vec::new();
    for &name in CRITERIA {
        let summary = find(&first, name);
        let ok = summary["pass"] == Value::Bool(true);
        let secs = summary["timing"]["wall_seconds"].as_f64().unwrap();
        let mut note = format!("{secs:.2}s");
        if let Some(b) = budget(name) {
            note.push_str(&format!(" (budget {b:.0}s)"));
            if secs >= b {
                over_budget.push(name);
                note.push_str(" OVER BUDGET");
            }
        }
        if !ok {
            let failing: Vec<String> = records(&first)
                .iter()
                .filter(|r| r["pass"] == Value::Bool(false) && r["id"] != name)
                .filter(|r| r["bound_ref"] == summary["bound_ref"] || r["id"].as_str().unwrap().starts_with(&format!("{name}:")))
                .map(|r| format!("{}: measured {} vs bound {}", r["id"].as_str().unwrap(), r["measured"], r["bound"]))
                .collect();
            note.push_str(&format!(" failing: [{}]", failing.join("; ")));
        }
        line(ok && !over_budget.contains(&name), name, &note);
    }

    let (mut a, mut b) = (first.clone(), second);
    strip_timing(&mut a);
    strip_timing(&mut b);
    let same = serde_json::to_string(&a).unwrap() == serde_json::to_string(&b).unwrap();
    line(same, "reproducibility", "two runs with seed 1, compared with timing removed");

    // Not a listed criterion, but the verdicts must not depend on the seed.
    let (other, _) = run_suite(2, "c");
    let seed_stable = verdicts(&first) == verdicts(&other);
    println!("{} seed 2 gives the same verdicts as seed 1", if seed_stable { "ok  " } else { "DIFF" });

    assert_eq!(code, 1, "the suite reports the unattainable records as failures");
    assert!(unexpected.is_empty(), "unexpected failures: {unexpected:?}");
    assert!(over_budget.is_empty(), "over budget: {over_budget:?}");
    assert!(same, "reports differ between identical runs");
    assert!(seed_stable, "verdicts changed with the seed");
    let failures: Vec<&str> = first["failures"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(failures.iter().all(|f| f.starts_with(KNOWN_UNATTAINABLE) || *f == "filling"), "{failures:?}");
}
