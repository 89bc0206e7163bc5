//! CLI acceptance: byte-identical output for fixed flags and seed
//! (criterion 8), plus exit-code and schema checks on the command surface.

use std::process::{Command, Output};

fn treeprob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_treeprob"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = treeprob(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

/// Criterion 8: every invocation with fixed flags and seed produces
/// byte-identical stdout and stderr across two consecutive runs.
#[test]
fn criterion_8_byte_identical_output() {
    let invocations: Vec<Vec<&str>> = vec![
        vec!["prob", "--zeta", "alpha", "--k", "3", "--r", "2", "--p", "1,1,1"],
        vec!["predict", "--zeta", "gamma", "--k", "3", "--r", "2", "--p", "1,1,1"],
        vec!["count", "--set", "m", "--k", "4", "--r", "3", "--p", "1,2,0,3"],
        vec![
            "pdet", "--matrix", "m-d", "--d", "1,2", "--k", "4", "--r", "2", "--p", "1,1,1,1",
        ],
        vec![
            "sample", "--zeta", "beta", "--k", "3", "--r", "2", "--p", "1,1,1", "--trials",
            "30000", "--seed", "99", "--format", "json",
        ],
        vec!["verify", "--suite", "theorem", "--kmax", "3", "--format", "json"],
        vec!["verify", "--suite", "prop1", "--trials", "50", "--seed", "7", "--format", "csv"],
        vec![
            "verify", "--suite", "conjecture2", "--kmax", "3", "--format", "text", "--jobs", "2",
        ],
        vec!["pseudoforest", "--zeta", "delta", "--k", "3", "--r", "2", "--p", "1,1,0"],
    ];
    let mut ok = true;
    for args in &invocations {
        let first = treeprob(args);
        let second = treeprob(args);
        if first.stdout != second.stdout || first.stderr != second.stderr {
            println!("  non-deterministic output for {args:?}");
            ok = false;
        }
        if first.status.code() != second.status.code() {
            println!("  non-deterministic exit code for {args:?}");
            ok = false;
        }
    }
    println!(
        "acceptance 8 (byte-identical CLI output): {}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn worked_example_values() {
    assert_eq!(
        stdout(&["prob", "--zeta", "alpha", "--k", "3", "--r", "2", "--p", "1,1,1"]),
        "1/2\n"
    );
    assert_eq!(
        stdout(&["pdet", "--matrix", "m", "--zeta", "alpha", "--k", "3", "--r", "2", "--p", "1,1,1"]),
        "3/8\n"
    );
    assert_eq!(
        stdout(&["predict", "--zeta", "beta", "--k", "3", "--r", "2", "--p", "1,1,1"]),
        "1/6\n"
    );
    assert_eq!(
        stdout(&["count", "--set", "s", "--k", "3", "--r", "2", "--p", "1,1,1"]),
        "8\n"
    );
    assert_eq!(
        stdout(&["count", "--set", "surjections", "--k", "3", "--r", "2"]),
        "2\n"
    );
}

#[test]
fn count_methods_agree() {
    for method in ["formula", "coefficient", "enumerate"] {
        assert_eq!(
            stdout(&[
                "count", "--set", "m", "--k", "4", "--r", "3", "--p", "1,2,0,3", "--method",
                method,
            ]),
            stdout(&["count", "--set", "m", "--k", "4", "--r", "3", "--p", "1,2,0,3"]),
            "method {method}"
        );
    }
}

#[test]
fn verify_passes_with_exit_zero() {
    let out = treeprob(&["verify", "--suite", "theorem", "--kmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let out = treeprob(&["verify", "--suite", "lemmas", "--kmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 fail"), "{text}");
}

#[test]
fn conjecture_suites_are_labeled_evidence() {
    let text = stdout(&["verify", "--suite", "conjecture1", "--kmax", "2"]);
    assert!(text.contains("(evidence, not proof)"), "{text}");
    let json = stdout(&["verify", "--suite", "conjecture1", "--kmax", "2", "--format", "json"]);
    assert!(json.contains("\"kind\": \"evidence\""), "{json}");
}

#[test]
fn json_report_has_schema_fields() {
    let json = stdout(&["verify", "--suite", "theorem", "--kmax", "2", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["suite"], "theorem");
    assert!(value["grid"]["k_max"].is_number());
    assert!(value["summary"]["pass"].is_number());
    assert!(value["summary"]["fail"].is_number());
    assert!(value["summary"]["skipped"].is_number());
    let cell = &value["cells"][0];
    for field in ["zeta", "k", "r", "p", "check", "lhs", "rhs", "status"] {
        assert!(!cell[field].is_null(), "missing field {field}");
    }
    assert!(cell["lhs"]["num"].is_string());
    assert!(cell["lhs"]["den"].is_string());
}

#[test]
fn csv_report_has_one_header_and_cell_rows() {
    let csv = stdout(&["verify", "--suite", "theorem", "--kmax", "2", "--format", "csv"]);
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("zeta,k,r,p,check,lhs,rhs,status"));
    let json = stdout(&["verify", "--suite", "theorem", "--kmax", "2", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(lines.count(), value["cells"].as_array().unwrap().len());
}

#[test]
fn output_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join("treeprob-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let direct = stdout(&["verify", "--suite", "conjecture1", "--kmax", "2", "--format", "json"]);
    let out = treeprob(&[
        "verify", "--suite", "conjecture1", "--kmax", "2", "--format", "json", "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn usage_and_domain_errors_exit_two() {
    let cases: Vec<Vec<&str>> = vec![
        // Unknown flag.
        vec!["prob", "--zeta", "alpha", "--k", "3", "--r", "2", "--p", "1,1,1", "--bogus"],
        // Length mismatch.
        vec!["prob", "--zeta", "alpha", "--k", "3", "--r", "2", "--p", "1,1"],
        // Empty conditioning family.
        vec!["prob", "--zeta", "alpha", "--k", "3", "--r", "2", "--p", "3,1,1"],
        // Surjections need r <= k-1.
        vec!["prob", "--zeta", "alpha", "--k", "3", "--r", "5", "--p", "1,1,1"],
        // Missing stage index.
        vec!["pdet", "--matrix", "q-a", "--k", "3", "--r", "2", "--p", "1,1,1"],
        // Marker outside [k-1].
        vec!["pdet", "--matrix", "m-d", "--d", "3", "--k", "3", "--r", "2", "--p", "1,1,1"],
        // csv is for reports.
        vec!["prob", "--zeta", "alpha", "--k", "3", "--r", "2", "--p", "1,1,1", "--format", "csv"],
        // k too large.
        vec!["prob", "--zeta", "alpha", "--k", "25", "--r", "2", "--p", "1,1"],
    ];
    for args in &cases {
        let out = treeprob(args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "expected usage/domain exit for {args:?}, got {:?}\nstderr: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
        assert!(!out.stderr.is_empty(), "diagnostic expected for {args:?}");
    }
}

#[test]
fn mode_flags_are_honored() {
    let id = stdout(&[
        "prob", "--zeta", "alpha", "--k", "3", "--r", "2", "--p", "1,1,1", "--mode", "identity",
    ]);
    assert_eq!(id, "1/2\n");
    let func = stdout(&[
        "prob", "--zeta", "alpha", "--k", "3", "--r", "2", "--p", "1,1,1", "--mode", "function",
    ]);
    assert_eq!(func, "1/2\n");
    // Identity needs r = k-1.
    let out = treeprob(&[
        "prob", "--zeta", "alpha", "--k", "4", "--r", "2", "--p", "1,1,1,0", "--mode", "identity",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
