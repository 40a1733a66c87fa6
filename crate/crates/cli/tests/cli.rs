use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_smallcover"))
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn run_stdin(args: &[&str], input: &[u8]) -> Output {
    let mut child = bin().args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn simplex_pipeline_gives_projective_space() {
    let gen = run(&["gen", "--shape", "simplex"]);
    assert!(gen.status.success());
    let color = run_stdin(&["color"], &gen.stdout);
    assert!(color.status.success());
    let present = run_stdin(&["present", "--method", "minimal"], &color.stdout);
    assert!(present.status.success());
    let h1 = run_stdin(&["h1"], &present.stdout);
    assert!(h1.status.success());
    assert_eq!(stdout(&h1).trim(), "Z/2");
}

#[test]
fn h1_reads_a_bundle_from_stdin() {
    let gen = run(&["gen", "--shape", "cube"]);
    let color = run_stdin(&["color", "-"], &gen.stdout);
    let h1 = run_stdin(&["h1", "-", "--method", "wu-yu"], &color.stdout);
    assert!(h1.status.success());
    assert_eq!(stdout(&h1).trim(), "Z^3");
}

#[test]
fn dodecahedron_compare_agrees() {
    let o = run(&["compare", &fixture("dodecahedron.json"), "--colors", &fixture("dodecahedron.colors.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let nine = vec!["Z/2"; 9].join(" + ");
    assert_eq!(text.matches(&format!("H1 = {nine} ")).count(), 3, "{text}");
    assert!(text.contains("agreement: yes"));
}

#[test]
fn prism3_has_one_3_belt() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prism3.json");
    let gen = run(&["gen", "--shape", "prism3", "--out", path.to_str().unwrap()]);
    assert!(gen.status.success());
    let o = run(&["belts", path.to_str().unwrap(), "--k", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("1 3-belts"));
    let json = run(&["--json", "belts", path.to_str().unwrap(), "--k", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["belts"][0]["count"], 1);
}

#[test]
fn json_is_deterministic() {
    let args = ["--json", "invariants", &fixture("permutohedron.json"), "--colors", &fixture("permutohedron.colors.json"), "--targets", "z2,z2^2,s3"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["command"], "invariants");
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["h1", "/nonexistent/file.json"]).status.code(), Some(1));
    assert_eq!(run(&["belts", &fixture("dodecahedron.json"), "--k", "5"]).status.code(), Some(1));
    // Missing coloring.
    assert_eq!(run(&["h1", &fixture("dodecahedron.json")]).status.code(), Some(1));
    // Wrong number of colors.
    let bad = run(&["validate", &fixture("dodecahedron.json"), "--colors", &fixture("cube.colors.json")]);
    assert_eq!(bad.status.code(), Some(1));
    let good = run(&["validate", &fixture("dodecahedron.json"), "--colors", &fixture("dodecahedron.colors.json")]);
    assert_eq!(good.status.code(), Some(0));
    assert!(stdout(&good).contains("orientable"));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = run(&["--json", "--timing", "--out", path.to_str().unwrap(), "genus", &fixture("dodecahedron.json")]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["genus"]["canonical_genus"], 41);
    assert!(v["timing_ms"].is_number());
}

#[test]
fn reports_match_the_schema() {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "docs", "run_report.schema.json"].iter().collect();
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let d = fixture("dodecahedron.json");
    let c = fixture("dodecahedron.colors.json");
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", &d, "--colors", &c],
        vec!["fvector", &d],
        vec!["belts", &d, "--k", "4"],
        vec!["color", &d],
        vec!["present", &d, "--colors", &c, "--method", "wu-yu", "--simplify"],
        vec!["invariants", &d, "--colors", &c, "--targets", "z2,s3"],
        vec!["compare", &d, "--colors", &c],
        vec!["gen", "--shape", "cube", "--truncate", "0"],
        vec!["--timing", "genus", &d],
    ];
    for args in runs {
        let o = bin().arg("--json").args(&args).output().unwrap();
        assert!(o.status.success(), "{args:?}");
        let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        let errors: Vec<String> = validator.iter_errors(&report).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
    }
}
