use std::process::ExitCode;
use std::time::Instant;

use qpg_core::suite::{self, CriterionResult};

/// The claimed absence of order-6 deranging subgroups in PGL2(5) is false;
/// the battery reports it as failed and checks a verified witness instead.
const KNOWN_FALSE_CLAIM: &str = "pgl2(5) has no deranging subgroup of order 6";

fn run(id: u8) -> (CriterionResult, bool) {
    let info = suite::info(id).unwrap();
    let start = Instant::now();
    let result = suite::run(id).unwrap_or_else(|e| panic!("criterion {id} errored: {e}"));
    let secs = start.elapsed().as_secs_f64();
    let verdict = if result.passed() { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {verdict}: {} ({secs:.1} s)", info.title);
    for c in &result.checks {
        let mark = if c.passed() { "ok" } else { "FAILED" };
        let value = c.value.map(|v| format!(" value={v:e}")).unwrap_or_default();
        let tol = c.tolerance.map(|t| format!(" tol={t:e}")).unwrap_or_default();
        println!("    [{mark}] {}{value}{tol}", c.name);
        if let Some(d) = c.detail.as_deref().filter(|d| !d.is_empty()) {
            println!("        {d}");
        }
    }
    if secs >= info.budget as f64 {
        println!("    [FAILED] over budget: {secs:.1} s > {} s", info.budget);
    }
    (result, secs < info.budget as f64)
}

/// Criterion 1 is expected red on exactly one check, with the witness green.
fn refutes_known_claim(r: &CriterionResult) -> Result<(), String> {
    let failures = r.failures();
    if let Some(c) = failures.iter().find(|c| c.name != KNOWN_FALSE_CLAIM) {
        return Err(format!("unexpected failure: {}", c.name));
    }
    match r.checks.iter().find(|c| c.name == KNOWN_FALSE_CLAIM) {
        Some(c) if !c.passed() => {}
        _ => return Err("the order-6 search result changed".into()),
    }
    match r.checks.iter().find(|c| c.name.contains("witness verified")) {
        Some(c) if c.passed() => Ok(()),
        _ => Err("order-6 witness missing or invalid".into()),
    }
}

// Custom harness so the verdict lines always reach the output.
fn main() -> ExitCode {
    let mut problems = Vec::new();
    for info in suite::CRITERIA {
        let id = info.id;
        let (r, in_budget) = match std::panic::catch_unwind(|| run(id)) {
            Ok(x) => x,
            Err(_) => {
                problems.push(format!("criterion {id} panicked"));
                continue;
            }
        };
        if !in_budget {
            problems.push(format!("criterion {id} over budget"));
        }
        let expected = if id == 1 {
            refutes_known_claim(&r)
        } else if r.passed() {
            Ok(())
        } else {
            Err(format!("{} failed checks", r.failures().len()))
        };
        if let Err(e) = expected {
            problems.push(format!("criterion {id}: {e}"));
        }
    }
    println!();
    if problems.is_empty() {
        println!("acceptance: all criteria behave as expected (criterion 1 refutes a false claim)");
        ExitCode::SUCCESS
    } else {
        for p in &problems {
            println!("acceptance problem: {p}");
        }
        ExitCode::FAILURE
    }
}
