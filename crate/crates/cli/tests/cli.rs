use std::path::PathBuf;
use std::process::{Command, Output};

fn repo() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_locale-lab"))
        .args(args)
        .current_dir(repo())
        .env_remove("LOCALE_LAB_CORPUS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn frame_check_reports_statistics() {
    let o = run(&["frame-check", "data/sierpinski.json"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    for line in ["elements: 3", "Boolean: no", "regular: no", "points: 2"] {
        assert!(out.contains(line), "{out}");
    }
}

#[test]
fn frame_check_rejects_m3_with_a_witness() {
    let o = run(&["frame-check", "data/m3.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not distributive: a /\\ (b \\/ c)"), "{}", stderr(&o));
}

#[test]
fn frame_check_parse_errors_exit_2() {
    let dir = std::env::temp_dir().join(format!("locale-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["frame-check", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let missing = dir.join("missing.json");
    assert_eq!(run(&["frame-check", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn other_checks_accept_the_samples() {
    for (cmd, path, expect) in [
        ("nucleus-check", "data/chain3-closed.json", "closed: yes"),
        ("morphism-check", "data/boolean2-to-chain2.json", "embedding: yes"),
        ("valuation-check", "data/boolean2-valuation.json", "reduced algebra Boolean: yes"),
        ("valuation-check", "data/atom-half.json", "atoms: 1/2"),
    ] {
        let o = run(&[cmd, path]);
        assert_eq!(o.status.code(), Some(0), "{cmd} {path}: {}", stderr(&o));
        assert!(stdout(&o).contains(expect), "{}", stdout(&o));
    }
}

#[test]
fn laws_sublocale_on_the_shipped_corpus_is_clean() {
    let o = run(&["laws", "sublocale", "--corpus", "corpus"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 violations"));
}

#[test]
fn laws_frame_flags_m3_outside_the_negative_directory() {
    let dir = std::env::temp_dir().join(format!("locale-lab-m3-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::copy(repo().join("data/m3.json"), dir.join("m3.json")).unwrap();
    std::fs::copy(repo().join("data/sierpinski.json"), dir.join("sierpinski.json")).unwrap();
    let o = run(&["laws", "frame", "--corpus", dir.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let violations = report["violations"].as_array().unwrap();
    assert_eq!(violations.len(), 1);
    assert_eq!(violations[0]["case"], "m3.json");
}

#[test]
fn laws_measure_reports_residuals() {
    let o = run(&["laws", "measure", "--tol", "1e-3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["tolerance"], "1/1000");
    assert!(!report["residuals"].as_array().unwrap().is_empty());
}

#[test]
fn laws_json_is_deterministic_apart_from_timing() {
    let strip = |o: &Output| {
        let mut v: serde_json::Value = serde_json::from_str(&stdout(o)).unwrap();
        v["elapsed_ms"] = 0.into();
        v
    };
    let a = run(&["laws", "frame", "--format", "json"]);
    let b = run(&["laws", "frame", "--format", "json"]);
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn corpus_env_var_is_honoured() {
    let dir = std::env::temp_dir().join(format!("locale-lab-env-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::copy(repo().join("data/m3.json"), dir.join("m3.json")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_locale-lab"))
        .args(["laws", "frame"])
        .current_dir(repo())
        .env("LOCALE_LAB_CORPUS", &dir)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unknown_suite_and_bad_tolerance_are_input_errors() {
    assert_eq!(run(&["laws", "topology"]).status.code(), Some(2));
    assert_eq!(run(&["laws", "frame", "--tol", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "lebesgue", "rationals", "--tol", "zero"]).status.code(), Some(2));
}

#[test]
fn measure_examples() {
    let o = run(&["measure", "lebesgue", "rationals", "--tol", "1e-3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("measure of rationals under lebesgue: [0, "), "{}", stdout(&o));

    let o = run(&["measure", "lebesgue", "(0,1/2)"]);
    assert!(stdout(&o).contains("exactly 1/2"), "{}", stdout(&o));

    let o = run(&["measure", "atoms [[1/2,1]]", "generic"]);
    assert!(stdout(&o).contains("exactly 0"), "{}", stdout(&o));

    let o = run(&["measure", "data/lebesgue.json", "irrationals"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn measure_input_errors() {
    assert_eq!(run(&["measure", "gaussian", "rationals"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "lebesgue", "(1/2,0)"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "data/boolean2-valuation.json", "rationals"]).status.code(), Some(2));
}

#[test]
fn demos_certify_their_claims() {
    for name in ["generic", "rationals", "reduction", "hidden-intersections"] {
        let o = run(&["demo", name]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("all claims certified"));
    }
    assert_eq!(run(&["demo", "vitali"]).status.code(), Some(2));
}

#[test]
fn corpus_export_matches_the_shipped_corpus() {
    let dir = std::env::temp_dir().join(format!("locale-lab-export-{}", std::process::id()));
    let o = run(&["corpus", "export", dir.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let shipped = repo().join("corpus/topologies/top-3-28.json");
    let exported = dir.join("topologies/top-3-28.json");
    assert_eq!(std::fs::read(shipped).unwrap(), std::fs::read(exported).unwrap());
}
