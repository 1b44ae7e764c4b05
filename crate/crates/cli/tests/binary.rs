use std::path::Path;
use std::process::{Command, Output};

use cosym3_cli::StructureFile;
use cosym3_core::model::builtin;

fn cosym3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cosym3"))
        .args(args)
        .env_remove("COSYM3_ORDER_BOUND")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

/// torus7 with the sign of φ₃ flipped.
fn write_broken(path: &Path) {
    let (space, t) = builtin("torus7", 60).unwrap();
    let mut file = StructureFile::from_model(&space, &t);
    for row in &mut file.structures[2].phi {
        for entry in row {
            for term in entry {
                term.c = match term.c.strip_prefix('-') {
                    Some(rest) => rest.to_string(),
                    None => format!("-{}", term.c),
                };
            }
        }
    }
    std::fs::write(path, file.to_json()).unwrap();
}

#[test]
fn check_builtins_pass() {
    for name in ["torus7", "m7f", "standard7"] {
        let out = cosym3(&["check", "--builtin", name]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let r = json(&out);
        assert_eq!(r["verdict"], "3-cosymplectic");
        assert_eq!(r["results"]["failures"], 0);
    }
}

#[test]
fn broken_phi3_fails_with_named_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    write_broken(&path);
    let out = cosym3(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["verdict"], "not 3-cosymplectic");
    let failed: Vec<&str> = r["results"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().any(|n| n.contains('3')), "{failed:?}");
}

#[test]
fn betti_tables() {
    let r = json(&cosym3(&["betti", "--builtin", "torus7"]));
    assert_eq!(r["results"]["b"], serde_json::json!([1, 7, 21, 35, 35, 21, 7, 1]));
    let out = cosym3(&["betti", "--builtin", "m7f"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["results"]["b"], serde_json::json!([1, 3, 7, 13, 13, 7, 3, 1]));
    let notes = r["results"]["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().starts_with("b2 = 7 < 21")));
}

#[test]
fn non_compact_inputs_are_errors() {
    for cmd in ["betti", "liealg"] {
        let out = cosym3(&[cmd, "--builtin", "standard7"]);
        assert_eq!(out.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&out.stderr).contains("non-compact"));
    }
}

#[test]
fn deform_writes_a_passing_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d2.json");
    let out = cosym3(&["deform", "--builtin", "torus7", "--a", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["identical_to_input"], false);
    let out = cosym3(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn deform_by_one_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d1.json");
    let out = cosym3(&["deform", "--builtin", "m7f", "--a", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(json(&out)["results"]["identical_to_input"], true);
    let (space, t) = builtin("m7f", 60).unwrap();
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, StructureFile::from_model(&space, &t).to_json());
}

#[test]
fn deform_rejects_non_positive_parameter() {
    for a in ["-1", "0", "1/0", "abc"] {
        let out = cosym3(&["deform", "--builtin", "torus7", "--a", a]);
        assert_eq!(out.status.code(), Some(2), "{a}");
    }
}

#[test]
fn liealg_certificate() {
    let out = cosym3(&["liealg", "--builtin", "torus7"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"];
    assert_eq!(r["span_dim"], 10);
    assert_eq!(r["signature"]["positive"], 4);
    assert_eq!(r["signature"]["negative"], 6);
    let basis: Vec<&str> = r["basis"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let l1 = basis.iter().position(|&n| n == "L1").unwrap();
    let lam1 = basis.iter().position(|&n| n == "Λ1").unwrap();
    assert_eq!(r["bracket_table"][l1][lam1], "-H");
}

#[test]
fn usage_and_parse_errors_exit_two() {
    assert_eq!(cosym3(&["check"]).status.code(), Some(2));
    assert_eq!(cosym3(&["check", "--builtin", "torus7", "--input", "x.json"]).status.code(), Some(2));
    assert_eq!(cosym3(&["check", "--builtin", "nope"]).status.code(), Some(2));
    assert_eq!(cosym3(&["frobnicate"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(cosym3(&["check", "--input", path.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(cosym3(&["check", "--input", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn order_bound_env_var() {
    let run = |bound: &str| {
        Command::new(env!("CARGO_BIN_EXE_cosym3"))
            .args(["check", "--builtin", "m7f"])
            .env("COSYM3_ORDER_BOUND", bound)
            .output()
            .unwrap()
    };
    assert_eq!(run("4").status.code(), Some(0));
    assert_eq!(run("3").status.code(), Some(2));
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for cmd in ["check", "betti", "liealg"] {
        let a = cosym3(&[cmd, "--builtin", "m7f"]).stdout;
        let b = cosym3(&[cmd, "--builtin", "m7f"]).stdout;
        assert_eq!(a, b, "{cmd}");
    }
    let a = cosym3(&["betti", "--builtin", "m7f", "--pretty"]).stdout;
    let b = cosym3(&["betti", "--builtin", "m7f", "--pretty"]).stdout;
    assert_eq!(a, b);
}

#[test]
fn output_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = cosym3(&["check", "--builtin", "torus7", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&path).unwrap();
    assert_eq!(written, cosym3(&["check", "--builtin", "torus7"]).stdout);
}
