//! Machine reports pinned byte for byte. `UPDATE_GOLDEN=1` rewrites them.

mod common;

use common::{evs, manifest_dir, CASES};

#[test]
fn machine_reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for (name, args) in CASES {
        let run = evs(args);
        let path = manifest_dir().join("tests/golden").join(format!("{name}.json"));
        if update {
            std::fs::write(&path, &run.stdout).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e} (run with UPDATE_GOLDEN=1)", path.display()));
        assert_eq!(run.stdout, want, "{name} drifted from {}", path.display());
    }
}

#[test]
fn reports_are_sorted_and_versioned() {
    let run = evs(CASES[0].1);
    let v: serde_json::Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["schema"], "evs-report/1");
    assert_eq!(v["dimension"], serde_json::json!({"evs": 3, "primitive": 0}));
    assert!(v.get("timing").is_none());
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(run.stdout.find("\"command\"").unwrap() < run.stdout.find("\"verb\"").unwrap());
}
