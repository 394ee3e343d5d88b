//! The suite behind `qudit-memory validate`.

use qudit_memory::validation::run_suite;

fn main() {
    let checks = run_suite();
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    if checks.iter().any(|c| !c.passed) {
        std::process::exit(1);
    }
}
