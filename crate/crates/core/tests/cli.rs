use std::process::{Command, Output};

fn albv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_albv")).args(args).output().unwrap()
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn every_fixture_validates_except_the_broken_one() {
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let o = albv(&["validate", path.to_str().unwrap()]);
        let broken = path.file_name().unwrap() == "sl2_broken.albv";
        assert_eq!(o.status.code(), Some(if broken { 1 } else { 0 }), "{path:?}: {}", stdout(&o));
    }
}

#[test]
fn validate_reports_axioms() {
    let o = albv(&["validate", &fixture("aff1.albv")]);
    assert!(stdout(&o).contains("axioms: PASS"));
    let o = albv(&["validate", &fixture("sl2_broken.albv")]);
    assert!(stdout(&o).contains("Jacobi fails on (h, e, f)"));
}

#[test]
fn broken_document_fails_other_commands_unless_no_validate() {
    let o = albv(&["cohomology", &fixture("sl2_broken.albv"), "--max-weight", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = albv(&["--no-validate", "star", &fixture("sl2_broken.albv"), "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn usage_and_document_errors_exit_two() {
    assert_eq!(albv(&[]).status.code(), Some(2));
    assert_eq!(albv(&["verify", &fixture("sl2.albv"), "--suite", "everything"]).status.code(), Some(2));
    let dir = std::env::temp_dir().join(format!("albv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.albv");
    std::fs::write(&bad, "[algebroid]\nkind = \"lie_algebra\"\nrank = 2\nstructure = [{ i = 2, j = 1, k = 1, c = \"1\" }]\n").unwrap();
    let o = albv(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("indices must satisfy i<j"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn json_report_schema() {
    let o = albv(&["--json", "modular", &fixture("linear2.albv")]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["command"], "modular");
    assert_eq!(v["sign_s"], -1);
    assert!(v["tables"].as_array().unwrap().is_empty());
    for c in v["checks"].as_array().unwrap() {
        assert_eq!(c["status"], "pass");
        assert!(c["name"].is_string());
        assert!(c.get("witness").is_some());
    }
}

#[test]
fn kb_homology_of_the_symplectic_plane() {
    let o = albv(&["--json", "homology", "--kb", &fixture("symp2.albv"), "--max-weight", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let t = &v["tables"][0];
    assert_eq!(t["totals"], serde_json::json!([0, 0, 1]));
    assert_eq!(t["grading"]["mode"], "homogeneous");
    let nonzero: Vec<_> = t["records"].as_array().unwrap().iter().filter(|r| r["dim"] != 0).collect();
    assert_eq!(nonzero, vec![&serde_json::json!({"k": 2, "w": 0, "dim": 1})]);
}

#[test]
fn verify_symplectic_plane() {
    let args = ["verify", &fixture("symp2.albv"), "--suite", "all", "--trials", "50", "--seed", "7", "--max-deg", "3"];
    let o = albv(&args);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().filter(|l| l.ends_with(": PASS")).count() > 20);
    assert_eq!(albv(&args).stdout, o.stdout);
}

#[test]
fn non_flat_connection() {
    let o = albv(&["homology", &fixture("twisted2.albv")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("dα = (1)*dx^dy"));
    let o = albv(&["verify", &fixture("twisted2.albv"), "--suite", "bv", "--trials", "20", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
