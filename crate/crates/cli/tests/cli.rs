mod common;

use common::evs;
use serde_json::Value;

fn machine(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "machine"]);
    let run = evs(&all);
    (run.code, serde_json::from_str(&run.stdout).expect("machine report is JSON"))
}

#[test]
fn documented_examples() {
    let run = evs(&["dimension", "--family", "ray_product", "--n", "3"]);
    assert_eq!((run.code, run.stdout.as_str()), (0, "[3:0]\n"));

    let run = evs(&["basis", "--family", "dictionary_omega"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.lines().next(), Some("no-basis (Q empty at all samples)"));

    let run = evs(&["generator", "--file", "tests/fixtures/hyperspace_gf3.json", "--set", "{{0,1}}"]);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout.lines().next(), Some("true"));

    let (code, v) = machine(&["basis", "--family", "dictionary_omega", "--samples", "50"]);
    assert_eq!(code, 0);
    assert_eq!(v["dimension"], "no-basis");
}

#[test]
fn exit_codes() {
    assert_eq!(evs(&["bogus"]).code, 3);
    assert_eq!(evs(&["dimension"]).code, 3);
    assert_eq!(evs(&["dimension", "--family", "ray_product", "--n", "0"]).code, 3);
    assert_eq!(evs(&["dimension", "--family", "ray_product", "--n", "2", "--p", "4"]).code, 3);
    assert_eq!(evs(&["dimension", "--family", "subspace_lattice", "--p", "2", "--n", "9"]).code, 3);
    assert_eq!(evs(&["validate", "--file", "tests/fixtures/missing.json"]).code, 3);
    assert_eq!(evs(&["testing-set", "--family", "ray", "--x", "(0)"]).code, 3);
    assert_eq!(evs(&["independent", "--family", "ray_product", "--n", "2", "--set", "{(1,0),(2,0)}"]).code, 2);
    assert_eq!(evs(&["independent", "--family", "ray_product", "--n", "2", "--set", "{(1,0),(0,2)}"]).code, 0);
    assert_eq!(evs(&["validate", "--file", "tests/fixtures/mutants/A4.json"]).code, 2);
    assert_eq!(evs(&["counterexample-h", "--grid", "2"]).code, 0);
    // Invariant mismatches are decided before any budget is spent.
    assert_eq!(evs(&["morphism", "--file", "tests/fixtures/hyperspace_gf3.json", "--target", "tests/fixtures/chain.json", "--budget", "0"]).code, 2);
    assert_eq!(evs(&["morphism", "--file", "tests/fixtures/lattice_2_1.json", "--target", "tests/fixtures/chain.json", "--budget", "0"]).code, 4);
    assert_eq!(evs(&["--help"]).code, 0);
}

#[test]
fn load_errors_locate_the_problem() {
    let run = evs(&["validate", "--file", "tests/fixtures/broken_antisymmetry.json"]);
    assert_eq!(run.code, 3);
    assert!(run.stderr.contains("not antisymmetric"), "{}", run.stderr);
    assert!(run.stderr.contains("{0} <= {0,1} and {0,1} <= {0}"), "{}", run.stderr);

    let (code, v) = machine(&["validate", "--file", "tests/fixtures/broken_antisymmetry.json"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "input-error");
    assert_eq!(v["result"]["error"]["kind"], "document");
}

#[test]
fn axiom_failures_carry_the_witness() {
    let (code, v) = machine(&["validate", "--file", "tests/fixtures/mutants/A3.iii.json"]);
    assert_eq!(code, 2);
    let failed: Vec<&Value> = v["result"]["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["verdict"] == "fail")
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["axiom"], "A3.iii");
    assert!(failed[0]["witness"]["elements"].as_array().is_some_and(|e| !e.is_empty()));
}

#[test]
fn constant_map_is_refused_as_isomorphism() {
    let (code, v) = machine(&["morphism", "--file", "tests/fixtures/constant_map.json"]);
    assert_eq!(code, 2);
    assert_eq!(v["result"]["holds"], false);
    assert_eq!(v["result"]["injective"]["verdict"], "fail");
    assert_eq!(v["result"]["kind"], "morphism");
}

#[test]
fn exported_tables_reload_isomorphically() {
    let dir = std::env::temp_dir().join(format!("evs-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (tag, extra) in [("hyperspace", ["--p", "3"]), ("subspace_lattice", ["--p", "2"])] {
        let mut args = vec!["family", "--family", tag, "--export"];
        args.extend(extra);
        if tag == "subspace_lattice" {
            args.extend(["--n", "2"]);
        }
        let run = evs(&args);
        assert_eq!(run.code, 0);
        let path = dir.join(format!("{tag}.json"));
        std::fs::write(&path, &run.stdout).unwrap();
        let doc = dir.join(format!("{tag}-family.json"));
        let spec = match tag {
            "hyperspace" => r#"{"family":{"tag":"hyperspace","field":"GF(3)","dim":1}}"#,
            _ => r#"{"family":{"tag":"subspace_lattice","p":2,"n":2}}"#,
        };
        std::fs::write(&doc, spec).unwrap();
        let (code, v) = machine(&["morphism", "--file", doc.to_str().unwrap(), "--target", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{v}");
        let pairs = v["result"]["search"]["pairs"].as_array().unwrap();
        assert!(pairs.iter().all(|p| p[0] == p[1]), "identity payloads: {v}");
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn thread_cap_and_timing() {
    let args = ["enumerate-bases", "--family", "subspace_lattice", "--p", "3", "--n", "2", "--format", "machine"];
    let base = evs(&args).stdout;
    let capped = std::process::Command::new(env!("CARGO_BIN_EXE_evs"))
        .args(args)
        .current_dir(common::manifest_dir())
        .env("EVS_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(capped.stdout).unwrap(), base);

    let (_, v) = machine(&["dimension", "--family", "ray", "--timing"]);
    assert!(v["timing"]["elapsed_ms"].is_u64());
}

#[test]
fn verbs_cover_the_toolkit() {
    let cases: &[(&[&str], i32, &str)] = &[
        (&["x0", "--family", "hyperspace", "--p", "2", "--dim", "2"], 0, "dim X₀ = 2"),
        (&["primitives", "--family", "hyperspace_with_theta", "--p", "3", "--x", "{0,1}"], 0, "{{0}}"),
        (&["testing-set", "--family", "subspace_lattice", "--p", "2", "--n", "2", "--x", "<(1,0)>"], 0, "{<(1,0)>"),
        (&["qset", "--family", "subspace_lattice", "--p", "2", "--n", "2"], 0, "{<(0,1)>,<(1,0)>,<(1,1)>}"),
        (&["qset", "--family", "dictionary_omega", "--x", "(1)"], 2, "false"),
        (&["basis", "--family", "subspace_lattice", "--p", "2", "--n", "2"], 0, "{<(0,1)>,<(1,0)>,<(1,1)>} [3:0]"),
        (&["basis", "--family", "ray_product", "--n", "2", "--set", "{(1,0),(0,1)}"], 0, "basis [2:0]"),
        (&["basis", "--family", "ray_product", "--n", "2", "--set", "{(1,0)}"], 2, "not a basis"),
        (&["enumerate-bases", "--family", "subspace_lattice", "--p", "3", "--n", "2"], 0, "1 bases"),
        (&["dimension", "--family", "cone_times_vector", "--m", "2"], 0, "[1:2]"),
        (&["replace", "--family", "ray_product", "--n", "2", "--set", "{(1,0),(0,1)}", "--x", "(1,0)", "--y", "(1/2,0)"], 0, "{(0,1),(1/2,0)} [2:0]"),
        (&["transform", "--family", "ray_product", "--n", "2", "--set", "{(1,0),(0,1)}", "--alpha", "3", "--primitive", "(0,0)"], 0, "{(0,3),(3,0)} [2:0]"),
        (&["subevs", "--family", "ray_product", "--n", "2", "--x", "(1,1)"], 0, "subevs [1:0]"),
        (&["family", "--family", "ray"], 0, "ray over Q"),
        (&["report", "--family", "hyperspace", "--p", "2"], 0, "axioms hold, testing-set properties hold, dimension [1:1]"),
    ];
    for (args, code, head) in cases {
        let run = evs(args);
        assert_eq!(run.code, *code, "{args:?}: {}{}", run.stdout, run.stderr);
        assert!(run.stdout.starts_with(head), "{args:?}: {}", run.stdout);
    }
}
