//! Acceptance gate: every built-in criterion must pass. One line is printed
//! per criterion (run with `--nocapture` to see them on success).

use blockgs_harness::acceptance::run_all;

#[test]
fn all_acceptance_criteria_pass() {
    let results = run_all();
    assert_eq!(results.len(), 12);
    let mut failures = Vec::new();
    for r in &results {
        println!("{}", r.line());
        if !r.passed {
            failures.push(r.line());
        }
    }
    assert!(
        failures.is_empty(),
        "acceptance criteria failed:\n{}",
        failures.join("\n")
    );
}
