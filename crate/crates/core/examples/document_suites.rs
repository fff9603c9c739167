// Read an `.albv` document, run the verification suites, and write the
// document back out.

use albv::document::{emit, parse_document, parse_spec};
use albv::suites::{run, Config, Suite};

const TEXT: &str = r#"
[algebroid]
kind = "cotangent"
base_vars = ["x", "y"]

[poisson]
terms = [{ i = 1, j = 2, c = "x*y" }]
"#;

pub fn run_example() {
    let doc = parse_spec(TEXT, true).unwrap();
    let report = run(&doc, Suite::All, &Config { trials: 10, seed: 1, max_deg: 2 }).unwrap();
    for c in &report.checks {
        println!("{}: {}", c.name, if c.passed() { "PASS" } else { "FAIL" });
    }
    assert!(report.passed());
    let text = emit(&doc.document);
    assert_eq!(parse_document(&text).unwrap(), doc.document);
    print!("{text}");
}

#[allow(dead_code)]
fn main() {
    run_example();
}
