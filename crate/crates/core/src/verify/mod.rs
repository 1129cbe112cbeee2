//! Named, seeded property suites and the reports they produce.
//!
//! A suite is identified by [`SuiteId`] and run against one system through
//! [`run_suite`]. Each suite emits a list of checks; a check carries the
//! claim it tests, the worst violation seen over the samples, and the
//! tolerance it is held to. [`run_matrix`] runs many configurations and
//! isolates failures, and [`default_plan`] is the repository's own CI plan.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::clifford::{build_system_with_cap, equivalence_profile};
use crate::{delta, CliffordSystem, EquivalenceProfile, Error, Execution, Result};

mod suites;

/// Leaf samples per pair used by the transnormality suite unless overridden.
pub const DEFAULT_BUDGET: usize = 10_000;

macro_rules! suite_ids {
    ($($variant:ident => $name:literal, $samples:expr;)*) => {
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum SuiteId {
            $(#[serde(rename = $name)] $variant,)*
        }

        impl SuiteId {
            pub const ALL: [SuiteId; 17] = [$(SuiteId::$variant,)*];

            pub fn as_str(self) -> &'static str {
                match self {
                    $(SuiteId::$variant => $name,)*
                }
            }

            /// Sample count used when a configuration does not set one.
            pub fn default_samples(self) -> usize {
                match self {
                    $(SuiteId::$variant => $samples,)*
                }
            }
        }

        impl FromStr for SuiteId {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(SuiteId::$variant),)*
                    other => Err(Error::UnknownSuite(other.to_string())),
                }
            }
        }
    };
}

suite_ids! {
    Relations => "relations", 100;
    DiskImage => "disk_image", 10_000;
    BoundaryFibers => "boundary_fibers", 1_000;
    SphereQuotient => "sphere_quotient", 10_000;
    FocalAndFibers => "focal_and_fibers", 1_000;
    SubmersionRank => "submersion_rank", 100;
    FactorizationMPlus1 => "factorization_m_plus_1", 1_000;
    Geodesics => "geodesics", 100;
    QuotientMetric => "quotient_metric", 100;
    Symmetry => "symmetry", 1_000;
    FkmConsistency => "fkm_consistency", 10_000;
    InvariantsClassification => "invariants_classification", 10;
    HomogeneousOrbits => "homogeneous_orbits", 1_000;
    NormalForms => "normal_forms", 1_000;
    ComposedIdentities => "composed_identities", 1_000;
    Transnormality => "transnormality", 100;
    Diameter => "diameter", 10_000;
}

impl fmt::Display for SuiteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One suite run against one system.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub suite: SuiteId,
    pub system: Arc<CliffordSystem>,
    pub seed: u64,
    /// `None` selects [`SuiteId::default_samples`].
    pub samples: Option<usize>,
    /// Per-check overrides of the default tolerances, keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
    /// Leaf samples per pair for ambient distance estimates.
    pub budget: usize,
    pub execution: Execution,
}

impl SuiteConfig {
    pub fn new(suite: SuiteId, system: Arc<CliffordSystem>) -> Self {
        SuiteConfig {
            suite,
            system,
            seed: 0,
            samples: None,
            tolerances: BTreeMap::new(),
            budget: DEFAULT_BUDGET,
            execution: Execution::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = Some(samples);
        self
    }

    pub fn with_tolerance(mut self, check: &str, tol: f64) -> Self {
        self.tolerances.insert(check.to_string(), tol);
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn sample_count(&self) -> usize {
        self.samples.unwrap_or_else(|| self.suite.default_samples())
    }

    fn validate(&self) -> Result<()> {
        if self.sample_count() == 0 {
            return Err(Error::InvalidParameter("samples must be positive".into()));
        }
        if self.budget == 0 {
            return Err(Error::InvalidParameter("budget must be positive".into()));
        }
        for (name, tol) in &self.tolerances {
            if !(tol.is_finite() && *tol > 0.0) {
                return Err(Error::InvalidParameter(format!("tolerance for `{name}` must be positive, got {tol}")));
            }
        }
        Ok(())
    }
}

/// Outcome of one check: the worst violation over all samples.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// The claim under test, as a short statement.
    #[serde(rename = "paper_ref")]
    pub claim: String,
    /// `null` in JSON when a sample produced NaN.
    pub violation: f64,
    pub tol: f64,
    pub pass: bool,
}

/// Report of one suite run. `pass` holds iff every check passes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: SuiteId,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<CheckResult>,
    pub pass: bool,
    pub system: EquivalenceProfile,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl VerificationReport {
    pub fn max_violation(&self) -> f64 {
        self.checks.iter().map(|c| c.violation).fold(0.0, crate::par::nan_max)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Accumulates checks for one report, applying tolerance overrides.
pub(crate) struct Checks<'a> {
    overrides: &'a BTreeMap<String, f64>,
    out: Vec<CheckResult>,
}

impl<'a> Checks<'a> {
    fn new(overrides: &'a BTreeMap<String, f64>) -> Self {
        Checks { overrides, out: Vec::new() }
    }

    pub(crate) fn push(&mut self, name: &str, claim: &str, violation: f64, default_tol: f64) {
        let tol = self.overrides.get(name).copied().unwrap_or(default_tol);
        self.out.push(CheckResult {
            name: name.to_string(),
            claim: claim.to_string(),
            violation,
            tol,
            pass: violation <= tol,
        });
    }
}

/// Whether `suite` can run on `c`; `Err` carries the reason.
pub fn compatibility(suite: SuiteId, c: &CliffordSystem) -> std::result::Result<(), String> {
    let (m, l) = (c.m(), c.l());
    match suite {
        SuiteId::SphereQuotient if l != m => {
            Err(format!("requires l = m (quotient is the sphere S_C), got l = {l}, m = {m}"))
        }
        SuiteId::FocalAndFibers | SuiteId::SubmersionRank if l < m + 1 => {
            Err(format!("requires l >= m + 1 (nonempty M+ and interior points), got l = {l}, m = {m}"))
        }
        SuiteId::FactorizationMPlus1 => {
            if l != m + 1 || delta(m + 1).ok() != Some(l) {
                return Err(format!("requires l = m + 1 = delta(m + 1), got l = {l}, m = {m}"));
            }
            let full = build_system_with_cap(m + 1, 1, 0, usize::MAX).map_err(|e| e.to_string())?;
            let sub = crate::clifford::sub_system(&full, &(0..=m).collect::<Vec<_>>()).map_err(|e| e.to_string())?;
            if same_generators(c, &sub) {
                Ok(())
            } else {
                Err(format!("system is not the restriction of the built rank-{} system", m + 2))
            }
        }
        SuiteId::HomogeneousOrbits | SuiteId::NormalForms => {
            let k = l / delta(m).map_err(|e| e.to_string())?;
            if crate::homogeneity::Field::for_m(m).is_none() {
                return Err(format!("requires m in {{1, 2, 4}}, got m = {m}"));
            }
            match build_system_with_cap(m, k, 0, usize::MAX) {
                Ok(built) if l % delta(m).unwrap_or(1) == 0 && same_generators(c, &built) => Ok(()),
                _ => Err(format!("requires the built system ({m}, {k}, 0) in its F^k x F^k coordinates")),
            }
        }
        SuiteId::Diameter if m != 8 => Err(format!("tensor_svd needs m = 8, got m = {m}")),
        _ => Ok(()),
    }
}

fn same_generators(a: &CliffordSystem, b: &CliffordSystem) -> bool {
    a.m() == b.m() && a.l() == b.l() && (0..=a.m()).all(|i| a.generator_dense(i) == b.generator_dense(i))
}

/// Runs one suite. Identical configurations give identical reports up to
/// `wall_time`, in either execution mode.
pub fn run_suite(config: &SuiteConfig) -> Result<VerificationReport> {
    config.validate()?;
    let c = &*config.system;
    compatibility(config.suite, c)
        .map_err(|reason| Error::Incompatible { suite: config.suite.to_string(), reason })?;
    let profile = equivalence_profile(c)?;
    let start = Instant::now();
    let mut checks = Checks::new(&config.tolerances);
    suites::run(config, &mut checks)?;
    for name in config.tolerances.keys() {
        if !checks.out.iter().any(|ch| &ch.name == name) {
            return Err(Error::InvalidParameter(format!(
                "tolerance override for unknown check `{name}` in suite `{}`",
                config.suite
            )));
        }
    }
    let pass = checks.out.iter().all(|ch| ch.pass);
    Ok(VerificationReport {
        suite: config.suite,
        seed: config.seed,
        samples: config.sample_count(),
        checks: checks.out,
        pass,
        system: profile,
        wall_time: start.elapsed(),
    })
}

/// Result of one plan entry: a report, or the error that stopped it.
#[derive(Debug)]
pub struct MatrixEntry {
    pub suite: SuiteId,
    pub system: Option<EquivalenceProfile>,
    pub outcome: Result<VerificationReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailedCheck {
    pub suite: SuiteId,
    pub system: Option<EquivalenceProfile>,
    pub check: String,
    #[serde(rename = "paper_ref")]
    pub claim: String,
    pub violation: f64,
    pub tol: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryError {
    pub suite: SuiteId,
    pub system: Option<EquivalenceProfile>,
    pub error: String,
}

/// Aggregate over a plan.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
    pub failures: Vec<FailedCheck>,
    pub error_entries: Vec<EntryError>,
}

impl Summary {
    pub fn all_pass(&self) -> bool {
        self.failed == 0 && self.errors == 0
    }
}

fn profile_label(p: &Option<EquivalenceProfile>) -> String {
    match p {
        Some(EquivalenceProfile { m, k, kappa: Some(kp) }) => format!("({m}, {k}, kappa={kp})"),
        Some(EquivalenceProfile { m, k, kappa: None }) => format!("({m}, {k})"),
        None => "(?)".into(),
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} runs: {} passed, {} failed, {} errors", self.total, self.passed, self.failed, self.errors)?;
        for x in &self.failures {
            writeln!(
                f,
                "FAIL {} {} {}: violation {:e} > tol {:e} [{}]",
                x.suite,
                profile_label(&x.system),
                x.check,
                x.violation,
                x.tol,
                x.claim
            )?;
        }
        for e in &self.error_entries {
            writeln!(f, "ERROR {} {}: {}", e.suite, profile_label(&e.system), e.error)?;
        }
        Ok(())
    }
}

pub fn summarize(entries: &[MatrixEntry]) -> Summary {
    let mut s = Summary { total: entries.len(), ..Summary::default() };
    for e in entries {
        match &e.outcome {
            Ok(r) if r.pass => s.passed += 1,
            Ok(r) => {
                s.failed += 1;
                s.failures.extend(r.failed_checks().map(|ch| FailedCheck {
                    suite: r.suite,
                    system: Some(r.system),
                    check: ch.name.clone(),
                    claim: ch.claim.clone(),
                    violation: ch.violation,
                    tol: ch.tol,
                }));
            }
            Err(err) => {
                s.errors += 1;
                s.error_entries.push(EntryError { suite: e.suite, system: e.system, error: err.to_string() });
            }
        }
    }
    s
}

/// Runs every configuration; an error in one entry never stops the others.
pub fn run_matrix(plan: &[SuiteConfig], execution: Execution) -> (Vec<MatrixEntry>, Summary) {
    let entries = execution.map(plan.len(), |i| {
        let config = &plan[i];
        MatrixEntry {
            suite: config.suite,
            system: equivalence_profile(&config.system).ok(),
            outcome: run_suite(config),
        }
    });
    let summary = summarize(&entries);
    (entries, summary)
}

/// Parameters `(m, k, flips)` of the systems covered by [`default_plan`]:
/// `m` in `1..=12`, `k` in `1..=4`, `flips = 0`, plus `flips = 1` when
/// `m ≡ 0 mod 4` and `k >= 2`, restricted to `2l <= max_dim`; `(1, 1)` is skipped.
pub fn plan_systems(max_dim: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for m in 1..=12 {
        for k in 1..=4 {
            if (m, k) == (1, 1) || 2 * k * delta(m).unwrap_or(usize::MAX) > max_dim {
                continue;
            }
            out.push((m, k, 0));
            if m % 4 == 0 && k >= 2 {
                out.push((m, k, 1));
            }
        }
    }
    out
}

/// Every compatible suite on every system of [`plan_systems`]`(64)`.
///
/// Sample counts are the suite defaults except for the transnormality suite,
/// which uses 8 pairs at budget 2000 to keep the whole plan within minutes.
pub fn default_plan(seed: u64) -> Vec<SuiteConfig> {
    let mut plan = Vec::new();
    for (m, k, flips) in plan_systems(64) {
        let system = Arc::new(build_system_with_cap(m, k, flips, 64).expect("plan systems fit the cap"));
        for suite in SuiteId::ALL {
            if compatibility(suite, &system).is_err() {
                continue;
            }
            let mut config = SuiteConfig::new(suite, system.clone()).with_seed(seed);
            if suite == SuiteId::Transnormality {
                config = config.with_samples(8).with_budget(2_000);
            }
            plan.push(config);
        }
    }
    plan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::build_system;

    #[test]
    fn suite_names_round_trip() {
        for id in SuiteId::ALL {
            assert_eq!(id.as_str().parse::<SuiteId>().unwrap(), id);
            assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{id}\""));
        }
        assert!(matches!("sphere".parse::<SuiteId>(), Err(Error::UnknownSuite(_))));
    }

    #[test]
    fn compatibility_rules() {
        let c42 = build_system(4, 2, 0).unwrap();
        assert!(compatibility(SuiteId::SphereQuotient, &c42).is_err());
        assert!(compatibility(SuiteId::SphereQuotient, &build_system(4, 1, 0).unwrap()).is_ok());
        assert!(compatibility(SuiteId::FactorizationMPlus1, &build_system(1, 2, 0).unwrap()).is_ok());
        assert!(compatibility(SuiteId::FactorizationMPlus1, &build_system(3, 1, 0).unwrap()).is_ok());
        assert!(compatibility(SuiteId::FactorizationMPlus1, &c42).is_err());
        assert!(compatibility(SuiteId::HomogeneousOrbits, &c42).is_ok());
        assert!(compatibility(SuiteId::HomogeneousOrbits, &build_system(4, 2, 1).unwrap()).is_err());
        assert!(compatibility(SuiteId::NormalForms, &build_system(3, 2, 0).unwrap()).is_err());
        assert!(compatibility(SuiteId::Diameter, &build_system(8, 2, 0).unwrap()).is_ok());
        assert!(compatibility(SuiteId::Diameter, &c42).is_err());
        assert!(compatibility(SuiteId::FocalAndFibers, &build_system(2, 1, 0).unwrap()).is_err());
    }

    #[test]
    fn config_validation() {
        let c = Arc::new(build_system(2, 2, 0).unwrap());
        let run = |cfg: SuiteConfig| run_suite(&cfg);
        assert!(run(SuiteConfig::new(SuiteId::Relations, c.clone()).with_samples(0)).is_err());
        assert!(run(SuiteConfig::new(SuiteId::Relations, c.clone()).with_tolerance("relations", -1.0)).is_err());
        assert!(run(SuiteConfig::new(SuiteId::Relations, c.clone()).with_tolerance("nonsense", 1.0)).is_err());
        let r = run(SuiteConfig::new(SuiteId::Relations, c).with_samples(5).with_tolerance("span_isometry", 1e-3)).unwrap();
        assert!(r.pass);
        assert_eq!(r.checks.iter().find(|ch| ch.name == "span_isometry").unwrap().tol, 1e-3);
    }

    #[test]
    fn plan_shape() {
        let systems = plan_systems(64);
        assert!(systems.contains(&(1, 2, 0)) && systems.contains(&(8, 4, 1)) && systems.contains(&(10, 1, 0)));
        assert!(!systems.contains(&(1, 1, 0)) && !systems.contains(&(11, 1, 0)) && !systems.contains(&(9, 3, 0)));
        assert!(systems.iter().all(|&(m, k, _)| 2 * k * delta(m).unwrap() <= 64));
    }

    #[test]
    fn empty_matrix() {
        let (entries, summary) = run_matrix(&[], Execution::Sequential);
        assert!(entries.is_empty());
        assert_eq!(summary, Summary::default());
        assert!(summary.all_pass());
    }
}
