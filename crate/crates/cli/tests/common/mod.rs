#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

pub fn manifest_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the `evs` binary from the crate directory so fixture paths in the
/// echoed command stay relative.
pub fn evs(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_evs"))
        .args(args)
        .current_dir(manifest_dir())
        .env_remove("EVS_THREADS")
        .output()
        .expect("evs binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

/// Reports pinned under tests/golden, by file stem.
pub const CASES: &[(&str, &[&str])] = &[
    ("dimension_ray_product_3", &["dimension", "--family", "ray_product", "--n", "3", "--format", "machine"]),
    ("basis_dictionary_omega", &["basis", "--family", "dictionary_omega", "--samples", "200", "--format", "machine"]),
    (
        "validate_mutant_a3iii",
        &["validate", "--file", "tests/fixtures/mutants/A3.iii.json", "--format", "machine"],
    ),
    (
        "generator_hyperspace_gf3",
        &["generator", "--file", "tests/fixtures/hyperspace_gf3.json", "--set", "{{0,1}}", "--format", "machine"],
    ),
    ("morphism_constant_map", &["morphism", "--file", "tests/fixtures/constant_map.json", "--format", "machine"]),
];

