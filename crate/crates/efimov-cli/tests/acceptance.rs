//! Runs every acceptance criterion at its default tolerance and prints one
//! line per criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;

use efimov_cli::checks::{Tolerances, CRITERIA};

fn main() -> ExitCode {
    let tol = Tolerances::default();
    let mut failed = 0;
    for c in CRITERIA.iter() {
        let o = c.run(&tol);
        let tag = if o.passed() { "PASS" } else { "FAIL" };
        let worst = o
            .checks
            .iter()
            .map(|k| k.margin())
            .fold(f64::INFINITY, f64::min);
        let detail = match &o.error {
            Some(e) => format!("error: {e}"),
            None if !o.within_budget() => format!("over budget ({}s)", o.budget_s),
            None => format!("{} checks, worst margin {worst:.3e}", o.checks.len()),
        };
        println!("{tag} criterion {:02} [{:?}] {}: {detail} in {:.2}s", o.id, o.suite, o.title, o.elapsed_s);
        if !o.passed() {
            failed += 1;
            for k in o.checks.iter().filter(|k| !k.passed) {
                println!("    {} = {:e} against {:e}", k.name, k.measured, k.bound);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
