//! Runs every acceptance criterion and prints one pass/fail line per criterion.

use std::io::Write;

use pangle_core::verify::run_all;
use pangle_core::ExecMode;

#[test]
fn acceptance() {
    let outcomes = run_all(ExecMode::Parallel);
    // written to the raw handle so the lines show even when the test passes
    let mut out = std::io::stdout().lock();
    for o in &outcomes {
        writeln!(out, "{o}").unwrap();
    }
    out.flush().unwrap();
    let failed: Vec<_> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
