use hheat::acceptance::{run_criterion, CRITERIA};
use std::io::Write;

// Written to the raw stderr handle so the report shows even when output is captured.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for (id, name) in CRITERIA {
        match run_criterion(id) {
            Ok(r) => {
                report(&r.to_string());
                if !r.passed {
                    failed.push(id);
                }
            }
            Err(e) => {
                report(&format!("criterion {id:>2} {name:<24} FAIL error: {e}"));
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
