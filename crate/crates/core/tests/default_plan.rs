use clifford_foliations::verify::{default_plan, run_matrix};
use clifford_foliations::Execution;

/// The CI plan passes, and every check with a positive tolerance keeps at
/// least a factor 10 between the observed violation and the tolerance.
#[test]
fn default_plan_passes_with_headroom() {
    let plan = default_plan(20_240_601);
    let start = std::time::Instant::now();
    let (entries, summary) = run_matrix(&plan, Execution::Parallel);
    eprintln!("default plan: {} runs in {:.1?}", plan.len(), start.elapsed());
    assert!(summary.all_pass(), "{summary}");
    let mut thin = Vec::new();
    for e in &entries {
        let r = e.outcome.as_ref().unwrap();
        for ch in r.checks.iter().filter(|ch| ch.tol > 0.0) {
            if ch.violation > ch.tol / 10.0 {
                thin.push(format!("{} {:?} {}: {:e} vs tol {:e}", r.suite, r.system, ch.name, ch.violation, ch.tol));
            }
        }
    }
    assert!(thin.is_empty(), "checks without 10x headroom:\n{}", thin.join("\n"));
}
