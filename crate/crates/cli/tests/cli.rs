use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

fn ribbon(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ribbon"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn betti_table() {
    let o = ribbon(&["betti", &fixture("fig4.rc")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("rbA 1 2 4\n"), "{out}");
    assert!(out.contains("rbB 2 2 6\n"), "{out}");
}

#[test]
fn fixed_sets_of_left_ribbon() {
    let o = ribbon(&[
        "fixed-sets",
        &fixture("fig5.rc"),
        "--map",
        "f",
        "--set",
        "rbE1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("spatial: eventual_fixed(1)"), "{out}");
    assert!(out.contains("descriptive: descriptive_fixed"), "{out}");
}

#[test]
fn structured_output_is_json() {
    let o = ribbon(&[
        "--format",
        "structured",
        "fixed-sets",
        &fixture("fig5.rc"),
        "--map",
        "f",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "fixed-sets");
    let sets = v["results"]["sets"].as_array().unwrap();
    let names: Vec<&str> = sets.iter().map(|s| s["set"].as_str().unwrap()).collect();
    assert_eq!(names, ["rbE1", "rbE", "rbE2"]);
}

#[test]
fn empty_file_is_a_usage_error() {
    let path = std::env::temp_dir().join("ribbon_cli_empty.rc");
    std::fs::write(&path, "").unwrap();
    let o = ribbon(&["betti", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 1, column 1: no space declared"), "{err}");
}

#[test]
fn generated_instance_satisfies_axioms() {
    let path = std::env::temp_dir().join("ribbon_cli_generated.rc");
    let o = ribbon(&[
        "--seed",
        "5",
        "generate",
        "--ribbons",
        "1",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = ribbon(&["--budget", "2000", "check-axioms", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(!stdout(&o).contains("violated"));
}

#[test]
fn output_is_byte_stable() {
    let fig1 = fixture("fig1.rc");
    for args in [vec!["--seed", "9", "generate"], vec!["check-axioms", &fig1]] {
        let (a, b) = (ribbon(&args), ribbon(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn failed_checks_exit_one() {
    let path4 = fixture("path4.rc");
    let o = ribbon(&[
        "conjugacy",
        &path4,
        "--f",
        "f",
        "--g",
        "g",
        "--h",
        "h",
        "--mode",
        "strict",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // Weak conjugacy of the identity to a shift does not pass to squares.
    let o = ribbon(&[
        "conjugacy",
        &path4,
        "--f",
        "id",
        "--g",
        "f",
        "--h",
        "id",
        "--mode",
        "weak",
        "--powers",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("n=2: fails on {v0}"), "{}", stdout(&o));

    let o = ribbon(&["mean-check", "--orders", "3,4", "--mean", "point:1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn express_reports_nearest_generator() {
    let o = ribbon(&[
        "express",
        &fixture("fig2.rc"),
        "--ribbon",
        "rbE'''",
        "--vertex",
        "b1'",
    ]);
    assert_eq!(stdout(&o), "b1' = 1·g1\n");
}
