//! Acceptance criteria 1 to 14. Every criterion prints one PASS/FAIL line;
//! the test fails if any line is FAIL.

use std::sync::Arc;
use std::time::{Duration, Instant};

use clifford_foliations::clifford::{build_system_with_cap, equivalence_profile, verify_relations};
use clifford_foliations::homogeneity::{classify_homogeneity, HomogeneityStatus};
use clifford_foliations::verify::{compatibility, plan_systems, run_suite, SuiteConfig, SuiteId, VerificationReport};
use clifford_foliations::{build_system, delta, CliffordSystem, EquivalenceProfile, Execution};

const SEED: u64 = 7_041_999;

struct Outcome {
    lines: Vec<String>,
    failed: usize,
}

impl Outcome {
    fn record(&mut self, n: usize, title: &str, pass: bool, detail: String) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        let line = format!("criterion {n:>2} {verdict}  {title}: {detail}");
        println!("{line}");
        self.lines.push(line);
        self.failed += usize::from(!pass);
    }
}

/// All `(m, k)` with `m <= 12`, `k <= 4`, `2l <= max_dim`, except `(1, 1)`.
fn matrix(max_dim: usize) -> Vec<Arc<CliffordSystem>> {
    plan_systems(max_dim)
        .into_iter()
        .filter(|&(_, _, flips)| flips == 0)
        .map(|(m, k, _)| Arc::new(build_system_with_cap(m, k, 0, max_dim).unwrap()))
        .collect()
}

fn system(m: usize, k: usize, flips: usize) -> Arc<CliffordSystem> {
    Arc::new(build_system(m, k, flips).unwrap())
}

fn run(suite: SuiteId, c: &Arc<CliffordSystem>, samples: usize) -> VerificationReport {
    run_suite(&SuiteConfig::new(suite, c.clone()).with_seed(SEED).with_samples(samples)).unwrap()
}

/// Largest violation of the named check over the reports, and whether every
/// report contained it with violation `<= tol`.
fn check(reports: &[VerificationReport], name: &str, tol: f64) -> (bool, f64) {
    let mut worst = 0.0f64;
    let mut ok = !reports.is_empty();
    for r in reports {
        match r.checks.iter().find(|ch| ch.name == name) {
            Some(ch) => {
                worst = worst.max(ch.violation);
                ok &= ch.violation <= tol;
            }
            None => ok = false,
        }
    }
    (ok, worst)
}

fn profile(m: usize, k: usize, kappa: Option<usize>) -> EquivalenceProfile {
    EquivalenceProfile { m, k, kappa }
}

fn criterion_1(out: &mut Outcome) {
    let start = Instant::now();
    let systems = matrix(512);
    let worst = systems.iter().map(|c| verify_relations(c, 0.0).max_violation()).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    out.record(
        1,
        "relations are exact",
        worst == 0.0 && elapsed <= Duration::from_secs(30),
        format!("{} systems, max violation {worst:e}, {elapsed:.1?}", systems.len()),
    );
}

fn criterion_2(out: &mut Outcome) {
    let table = [1, 2, 4, 4, 8, 8, 8, 8];
    let base = (1..=8).all(|m| delta(m).unwrap() == table[m - 1]);
    let periodic = (9..=16).all(|m| delta(m).unwrap() == 16 * delta(m - 8).unwrap());
    let spot = delta(9).unwrap() == 16 && delta(12).unwrap() == 64;
    out.record(2, "delta table", base && periodic && spot, format!("delta(9) = {}, delta(12) = {}", delta(9).unwrap(), delta(12).unwrap()));
}

fn criterion_3(out: &mut Outcome) {
    let reports: Vec<_> = matrix(512).iter().map(|c| run(SuiteId::DiskImage, c, 10_000)).collect();
    let (ok, worst) = check(&reports, "disk_containment", 1e-12);
    out.record(3, "disk image", ok, format!("{} systems x 1e4 samples, max excess {worst:e}", reports.len()));
}

fn criterion_4(out: &mut Outcome) {
    let reports: Vec<_> = matrix(128).iter().map(|c| run(SuiteId::BoundaryFibers, c, 1_000)).collect();
    let (member, worst) = check(&reports, "fiber_membership", 1e-10);
    let (dims, _) = check(&reports, "eigenspace_dimension", 0.0);
    out.record(4, "boundary fibers", member && dims, format!("{} systems, max residual {worst:e}, dim E+ = l everywhere: {dims}", reports.len()));
}

fn criterion_5(out: &mut Outcome) {
    let reports: Vec<_> = [(2, 1), (4, 1), (8, 1)].iter().map(|&(m, k)| run(SuiteId::SphereQuotient, &system(m, k, 0), 10_000)).collect();
    let (image, worst) = check(&reports, "sphere_image", 1e-10);
    let (pre, pre_worst) = check(&reports, "preimage", 1e-10);
    out.record(5, "sphere quotient", image && pre, format!("max ||pi|-1| {worst:e}, preimage residual {pre_worst:e} over 1e2 targets"));
}

fn criterion_6(out: &mut Outcome) {
    let systems: Vec<_> = matrix(64).into_iter().filter(|c| compatibility(SuiteId::SubmersionRank, c).is_ok()).collect();
    let focal: Vec<_> = systems.iter().map(|c| run(SuiteId::FocalAndFibers, c, 1_000)).collect();
    let rank: Vec<_> = systems.iter().map(|c| run(SuiteId::SubmersionRank, c, 100)).collect();
    let (hit, hit_worst) = check(&focal, "surjectivity", 1e-9);
    let (full_rank, _) = check(&rank, "rank", 0.0);
    let (fd, fd_worst) = check(&rank, "fd_gradient", 1e-6);
    out.record(
        6,
        "surjectivity and submersion",
        hit && full_rank && fd,
        format!("{} systems, grid residual {hit_worst:e}, rank m+1: {full_rank}, gradient gap {fd_worst:e}", systems.len()),
    );
}

fn criterion_7(out: &mut Outcome) {
    let r = [run(SuiteId::FactorizationMPlus1, &system(1, 2, 0), 1_000)];
    let (fact, worst) = check(&r, "factorization", 0.0);
    let (same, _) = check(&r, "witness_same_fiber", 1e-10);
    let (opposite, _) = check(&r, "witness_opposite_sheet", 1e-10);
    out.record(7, "factorization", fact && same && opposite, format!("max gap {worst:e}, disconnected witness found: {}", same && opposite));
}

fn criterion_8(out: &mut Outcome) {
    let systems = matrix(64);
    let geo: Vec<_> = systems.iter().map(|c| run(SuiteId::Geodesics, c, 100)).collect();
    let metric: Vec<_> = systems.iter().map(|c| run(SuiteId::QuotientMetric, c, 100)).collect();
    let (proj, proj_worst) = check(&geo, "projection", 1e-10);
    let (circle, circle_worst) = check(&geo, "lifted_great_circle", 1e-9);
    let (speed, speed_worst) = check(&metric, "unit_speed", 1e-8);
    out.record(
        8,
        "geodesics and quotient metric",
        proj && circle && speed,
        format!("projection {proj_worst:e}, great circle {circle_worst:e}, |d - |s-t|| {speed_worst:e}"),
    );
}

fn criterion_9(out: &mut Outcome) {
    let reports: Vec<_> = matrix(64).iter().map(|c| run(SuiteId::Symmetry, c, 1_000)).collect();
    let (refl, rw) = check(&reports, "reflection", 1e-10);
    let (spin, sw) = check(&reports, "spin_rotation", 1e-9);
    out.record(9, "symmetries", refl && spin, format!("reflection {rw:e}, spin rotation {sw:e}"));
}

fn criterion_10(out: &mut Outcome) {
    let reports: Vec<_> = matrix(64).iter().map(|c| run(SuiteId::FkmConsistency, c, 10_000)).collect();
    let (agree, aw) = check(&reports, "fkm_factorization", 1e-12);
    let (minus, mw) = check(&reports, "level_m_minus", 1e-10);
    // M+ is empty when l = m; the check is emitted only where it exists.
    let with_mplus: Vec<_> = reports.iter().filter(|r| r.checks.iter().any(|ch| ch.name == "level_m_plus")).cloned().collect();
    let (plus, pw) = check(&with_mplus, "level_m_plus", 1e-10);
    out.record(10, "FKM consistency", agree && minus && plus, format!("direct vs 1-2|pi|^2 {aw:e}, F = -1 {mw:e}, F = +1 {pw:e}"));
}

fn criterion_11(out: &mut Outcome) {
    let kappas: Vec<_> = (0..=1).map(|j| equivalence_profile(&build_system(4, 3, j).unwrap()).unwrap().kappa).collect();
    let classes = {
        let mut all: Vec<_> = (0..=3).map(|j| equivalence_profile(&build_system(4, 3, j).unwrap()).unwrap().kappa).collect();
        all.sort();
        all.dedup();
        all.len()
    };
    let conj: Vec<_> = [system(4, 3, 0), system(4, 3, 1), system(3, 2, 0)].iter().map(|c| run(SuiteId::InvariantsClassification, c, 10)).collect();
    let (trace, tw) = check(&conj, "conjugation_trace", 1e-9);
    let (prof, _) = check(&conj, "conjugation_profile", 0.0);
    let flat = equivalence_profile(&build_system(3, 2, 0).unwrap()).unwrap() == equivalence_profile(&build_system(3, 2, 1).unwrap()).unwrap();
    out.record(
        11,
        "invariant classification",
        kappas == [Some(3), Some(1)] && classes == 2 && trace && prof && flat,
        format!("kappa(j=0,1) = {kappas:?}, {classes} classes, conjugation drift {tw:e}, m=3 flip-insensitive: {flat}"),
    );
}

fn criterion_12(out: &mut Outcome) {
    let mut orbit = Vec::new();
    let mut forms = Vec::new();
    for m in [1, 2, 4] {
        for k in [2, 3] {
            let c = system(m, k, 0);
            orbit.push(run(SuiteId::HomogeneousOrbits, &c, 1_000));
            forms.push(run(SuiteId::NormalForms, &c, 1_000));
        }
    }
    let (inv, iw) = check(&orbit, "orbit_in_fiber", 1e-10);
    let (iff, _) = check(&forms, "fiber_iff_normal_form", 0.0);
    let (fib, fw) = check(&forms, "fiber_constant", 1e-9);

    // The homogeneity table, written out independently of the classifier.
    let mut table = vec![
        (profile(2, 1, None), Some("U(1)")),
        (profile(4, 1, Some(1)), Some("Sp(1)")),
        (profile(8, 1, Some(1)), None),
        (profile(9, 1, None), None),
    ];
    for k in 2..=4 {
        table.push((profile(1, k, None), Some(["", "", "SO(2)", "SO(3)", "SO(4)"][k])));
        table.push((profile(2, k, None), Some(["", "", "SU(2)", "SU(3)", "SU(4)"][k])));
        table.push((profile(4, k, Some(k)), Some(["", "", "Sp(2)", "Sp(3)", "Sp(4)"][k])));
        for kappa in (k % 2..k).step_by(2) {
            table.push((profile(4, k, Some(kappa)), None));
        }
    }
    for m in [3, 5, 6, 7, 8, 9, 10, 11, 12] {
        for k in 1..=4 {
            if (m, k) == (8, 1) || (m, k) == (9, 1) {
                continue;
            }
            let kappa = (m % 4 == 0).then_some(k);
            table.push((profile(m, k, kappa), None));
        }
    }
    let mismatches: Vec<_> = table
        .iter()
        .filter(|(p, expected)| {
            let got = classify_homogeneity(p).unwrap();
            match (&got.status, expected) {
                (HomogeneityStatus::Homogeneous { group }, Some(g)) => group != g,
                (HomogeneityStatus::NonHomogeneous, None) => false,
                _ => true,
            }
        })
        .collect();
    let conditional = matches!(classify_homogeneity(&profile(4, 2, None)).unwrap().status, HomogeneityStatus::Conditionally { .. });
    out.record(
        12,
        "homogeneity",
        inv && iff && fib && mismatches.is_empty() && conditional,
        format!(
            "orbit drift {iw:e}, normal form iff fiber: {iff}, fiber drift {fw:e}, table {}/{} rows",
            table.len() - mismatches.len(),
            table.len()
        ),
    );
}

fn criterion_13(out: &mut Outcome) {
    let systems = [system(2, 3, 0), system(5, 2, 0), system(8, 1, 0), system(8, 2, 0), system(8, 2, 1)];
    let composed: Vec<_> = systems.iter().map(|c| run(SuiteId::ComposedIdentities, c, 1_000)).collect();
    let (points, _) = check(&composed, "points_is_clifford", 0.0);
    let (fkm, _) = check(&composed, "one_leaf_is_fkm", 0.0);
    let tensor_reports: Vec<_> = composed.iter().filter(|r| r.system.m == 8).cloned().collect();
    let (tensor, tw) = check(&tensor_reports, "tensor_invariance", 1e-10);

    let trans: Vec<_> = [system(2, 3, 0), system(5, 2, 0), system(8, 2, 0)]
        .iter()
        .map(|c| {
            run_suite(
                &SuiteConfig::new(SuiteId::Transnormality, c.clone())
                    .with_seed(SEED)
                    .with_samples(100)
                    .with_budget(10_000),
            )
            .unwrap()
        })
        .collect();
    let gaps: Vec<f64> = trans.iter().flat_map(|r| r.checks.iter().map(|ch| ch.violation)).collect();
    let gap = gaps.iter().copied().fold(0.0, f64::max);
    let trans_ok = !gaps.is_empty() && gap <= 1e-2;

    let diam = [run(SuiteId::Diameter, &system(8, 2, 0), 10_000)];
    let (upper, uw) = check(&diam, "diameter_upper", 1e-6);
    let (lower, lw) = check(&diam, "diameter_lower", 0.05);
    out.record(
        13,
        "composed foliations",
        points && fkm && tensor && trans_ok && upper && lower,
        format!("tensor drift {tw:e}, transnormality gap {gap:e}, diameter excess {uw:e} shortfall {lw:e}"),
    );
}

fn criterion_14(out: &mut Outcome) {
    let systems = matrix(32);
    let mut runs = 0;
    let mut mismatched = Vec::new();
    for suite in SuiteId::ALL {
        let Some(c) = systems.iter().find(|c| compatibility(suite, c).is_ok()) else {
            mismatched.push(format!("{suite}: no compatible system"));
            continue;
        };
        let samples = suite.default_samples().min(200);
        let config = |exec| SuiteConfig::new(suite, c.clone()).with_seed(SEED).with_samples(samples).with_budget(1_000).with_execution(exec);
        let a = run_suite(&config(Execution::Parallel)).unwrap().to_json();
        let b = run_suite(&config(Execution::Parallel)).unwrap().to_json();
        let s = run_suite(&config(Execution::Sequential)).unwrap().to_json();
        runs += 3;
        if a != b || a != s {
            mismatched.push(suite.to_string());
        }
    }
    out.record(
        14,
        "determinism",
        mismatched.is_empty(),
        format!("{runs} runs over {} suites, mismatches: {mismatched:?}", SuiteId::ALL.len()),
    );
}

#[test]
fn acceptance_criteria() {
    let mut out = Outcome { lines: Vec::new(), failed: 0 };
    let criteria: [fn(&mut Outcome); 14] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
        criterion_11,
        criterion_12,
        criterion_13,
        criterion_14,
    ];
    let start = Instant::now();
    for f in criteria {
        f(&mut out);
    }
    println!("acceptance: {} of 14 pass in {:.1?}", 14 - out.failed, start.elapsed());
    assert_eq!(out.failed, 0, "failing criteria:\n{}", out.lines.iter().filter(|l| l.contains("FAIL")).cloned().collect::<Vec<_>>().join("\n"));
}
