use std::sync::Arc;

use clifford_foliations::verify::{run_matrix, run_suite, SuiteConfig, SuiteId};
use clifford_foliations::{build_system, Error, Execution};

fn config(suite: SuiteId, m: usize, k: usize) -> SuiteConfig {
    SuiteConfig::new(suite, Arc::new(build_system(m, k, 0).unwrap())).with_seed(3).with_samples(50)
}

#[test]
fn report_json_has_a_fixed_shape() {
    let report = run_suite(&config(SuiteId::Symmetry, 2, 2)).unwrap();
    assert!(report.pass);
    let v: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, ["checks", "pass", "samples", "seed", "suite", "system"]);
    assert_eq!(v["suite"], "symmetry");
    assert_eq!(v["samples"], 50);
    for check in v["checks"].as_array().unwrap() {
        let fields: Vec<_> = check.as_object().unwrap().keys().cloned().collect();
        assert_eq!(fields, ["name", "paper_ref", "pass", "tol", "violation"]);
    }
    assert!(report.to_json().ends_with("}\n"));
}

#[test]
fn incompatible_suites_are_rejected() {
    let err = run_suite(&config(SuiteId::SphereQuotient, 4, 2)).unwrap_err();
    assert!(matches!(err, Error::Incompatible { .. }), "{err}");
    assert!(err.to_string().contains("l = m"), "{err}");
    assert!(run_suite(&config(SuiteId::Diameter, 4, 2)).is_err());
    assert!(run_suite(&config(SuiteId::NormalForms, 4, 2)).is_ok());
    let flipped = SuiteConfig::new(SuiteId::NormalForms, Arc::new(build_system(4, 2, 1).unwrap()));
    assert!(run_suite(&flipped).is_err());
}

#[test]
fn tolerance_overrides() {
    let tight = config(SuiteId::Symmetry, 2, 2).with_tolerance("spin_rotation", 1e-300);
    let report = run_suite(&tight).unwrap();
    assert!(!report.pass);
    assert_eq!(report.failed_checks().map(|c| c.name.as_str()).collect::<Vec<_>>(), ["spin_rotation"]);

    for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        let c = config(SuiteId::Symmetry, 2, 2).with_tolerance("spin_rotation", bad);
        assert!(matches!(run_suite(&c), Err(Error::InvalidParameter(_))), "{bad}");
    }
    let unknown = config(SuiteId::Symmetry, 2, 2).with_tolerance("no_such_check", 1.0);
    assert!(matches!(run_suite(&unknown), Err(Error::InvalidParameter(_))));
    assert!(run_suite(&config(SuiteId::Symmetry, 2, 2).with_samples(0)).is_err());
    assert!(run_suite(&config(SuiteId::Transnormality, 2, 2).with_budget(0)).is_err());
}

#[test]
fn matrix_isolates_failures_and_errors() {
    let plan = vec![
        config(SuiteId::DiskImage, 2, 2),
        config(SuiteId::SphereQuotient, 2, 2),
        config(SuiteId::Symmetry, 3, 2).with_tolerance("reflection", 1e-300),
        config(SuiteId::FkmConsistency, 5, 1),
    ];
    let (entries, summary) = run_matrix(&plan, Execution::Parallel);
    assert_eq!(entries.len(), 4);
    assert_eq!((summary.total, summary.passed, summary.failed, summary.errors), (4, 2, 1, 1));
    assert!(!summary.all_pass());
    let text = summary.to_string();
    assert!(text.contains("FAIL symmetry (3, 2) reflection"), "{text}");
    assert!(text.contains("ERROR sphere_quotient (2, 2)"), "{text}");
}

#[test]
fn reports_are_reproducible_across_execution_modes() {
    for suite in [SuiteId::DiskImage, SuiteId::Geodesics, SuiteId::ComposedIdentities, SuiteId::Transnormality] {
        let base = config(suite, 3, 2).with_samples(20).with_budget(500);
        let seq = run_suite(&base.clone().with_execution(Execution::Sequential)).unwrap();
        let par = run_suite(&base.clone().with_execution(Execution::Parallel)).unwrap();
        assert_eq!(seq.to_json(), par.to_json(), "{suite}");
        let other = run_suite(&base.with_seed(4)).unwrap();
        assert_ne!(other.to_json(), seq.to_json(), "{suite}: seed must matter");
    }
}
