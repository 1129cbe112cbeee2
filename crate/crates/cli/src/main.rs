//! `cfl`: construct Clifford systems, run verification suites and emit
//! plot-ready data.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 usage error, invalid
//! input or incompatible suite.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use clifford_foliations::algebra::Sampler;
use clifford_foliations::clifford::{
    build_system_with_cap, equivalence_profile, system_from_json, system_to_json, trace_invariant, DEFAULT_MAX_DIM,
};
use clifford_foliations::composed::{builtin_spec, composed_class, composed_quotient_distance, same_leaf};
use clifford_foliations::foliation::fiber_sample;
use clifford_foliations::homogeneity::classify_homogeneity;
use clifford_foliations::verify::{
    compatibility, default_plan, run_matrix, run_suite, summarize, MatrixEntry, SuiteConfig, SuiteId, VerificationReport,
    DEFAULT_BUDGET,
};
use clifford_foliations::{pi_c, CliffordSystem, EquivalenceProfile, Execution, SpherePoint};

#[derive(Parser)]
#[command(name = "cfl", version, about = "Clifford systems, Clifford foliations and their verification suites")]
struct Cli {
    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the standard system with parameters (m, k, flips) and write it as JSON.
    Construct {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        flips: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one suite, or every compatible suite with `--suite all`.
    Verify {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Samples per suite; suite defaults when omitted.
        #[arg(long)]
        samples: Option<usize>,
        /// Leaf samples per pair for the transnormality suite.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        /// Tolerance override `check=value`; repeatable.
        #[arg(long = "tol", value_name = "CHECK=VALUE")]
        tolerances: Vec<String>,
        /// Report file (JSON); stdout when omitted.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the trace invariant and equivalence profile.
    Invariant {
        #[arg(long)]
        system: PathBuf,
    },
    /// Decide geometric equivalence of two systems.
    Classify {
        system: PathBuf,
        other: PathBuf,
    },
    /// Sample a fiber of pi_C as CSV: coordinates, then pi_C values.
    Fiber {
        #[arg(long)]
        system: PathBuf,
        /// Disk point `v_0,...,v_m`; a single `0` means the origin.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Composed leaf data of random points as CSV, relative to the first point.
    Compose {
        #[arg(long)]
        system: PathBuf,
        /// Boundary foliation: points, one_leaf, height or tensor_svd.
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Homogeneity verdict for a system file or a profile.
    Homogeneity(HomogeneityArgs),
    /// Run the default plan, or summarize saved reports.
    Report {
        /// Report files written by `verify`; the default plan runs when none are given.
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Summary file (JSON).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct HomogeneityArgs {
    #[arg(long, conflicts_with_all = ["m", "k", "kappa"])]
    system: Option<PathBuf>,
    #[arg(long, requires = "k")]
    m: Option<usize>,
    #[arg(long, requires = "m")]
    k: Option<usize>,
    #[arg(long, requires = "m")]
    kappa: Option<usize>,
}

/// Errors that should exit with status 1 rather than 2.
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("verification failed")
    }
}

impl std::error::Error for Failed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    match run(cli.command, exec) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Failed>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn max_dim() -> anyhow::Result<usize> {
    match std::env::var("CFL_MAX_DIM") {
        Ok(v) => v.trim().parse().with_context(|| format!("CFL_MAX_DIM must be a positive integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn load(path: &Path) -> anyhow::Result<CliffordSystem> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let c = system_from_json(&text).with_context(|| format!("cannot load {}", path.display()))?;
    let cap = max_dim()?;
    if c.dim() > cap {
        bail!("{}: dimension 2l = {} exceeds the cap {cap} (set CFL_MAX_DIM to raise it)", path.display(), c.dim());
    }
    Ok(c)
}

/// Writes to `path` through a temporary file in the same directory, or to stdout.
fn emit(path: Option<&Path>, contents: &str) -> anyhow::Result<()> {
    let Some(path) = path else {
        std::io::stdout().write_all(contents.as_bytes())?;
        return Ok(());
    };
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("cannot write to {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.persist(path).with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}

fn profile_json(p: &EquivalenceProfile) -> String {
    serde_json::to_string(p).expect("profiles serialize")
}

fn run(command: Command, exec: Execution) -> anyhow::Result<()> {
    match command {
        Command::Construct { m, k, flips, out } => {
            let c = build_system_with_cap(m, k, flips, max_dim()?)?;
            emit(out.as_deref(), &system_to_json(&c))?;
            let line = profile_json(&equivalence_profile(&c)?);
            if out.is_some() {
                println!("{line}");
            } else {
                eprintln!("{line}");
            }
            Ok(())
        }
        Command::Verify { system, suite, seed, samples, budget, tolerances, report } => {
            let c = Arc::new(load(&system)?);
            let mut overrides = Vec::new();
            for t in &tolerances {
                let (name, value) = t.split_once('=').ok_or_else(|| anyhow!("--tol expects CHECK=VALUE, got `{t}`"))?;
                let value: f64 = value.parse().with_context(|| format!("bad tolerance in `{t}`"))?;
                overrides.push((name.to_string(), value));
            }
            let configure = |id: SuiteId| {
                let mut cfg = SuiteConfig::new(id, c.clone()).with_seed(seed).with_budget(budget).with_execution(exec);
                if let Some(n) = samples {
                    cfg = cfg.with_samples(n);
                }
                cfg
            };
            if suite == "all" {
                if !overrides.is_empty() {
                    bail!("--tol needs a single --suite, since check names differ between suites");
                }
                verify_all(&c, configure, report.as_deref())
            } else {
                let id: SuiteId = suite.parse()?;
                let cfg = overrides.into_iter().fold(configure(id), |cfg, (name, v)| cfg.with_tolerance(&name, v));
                let r = run_suite(&cfg)?;
                emit(report.as_deref(), &r.to_json())?;
                print_report(&r);
                if r.pass {
                    Ok(())
                } else {
                    Err(Failed.into())
                }
            }
        }
        Command::Invariant { system } => {
            let c = load(&system)?;
            println!("trace_invariant {}", trace_invariant(&c));
            println!("profile {}", profile_json(&equivalence_profile(&c)?));
            Ok(())
        }
        Command::Classify { system, other } => {
            let (a, b) = (equivalence_profile(&load(&system)?)?, equivalence_profile(&load(&other)?)?);
            let verdict = if a == b { "equivalent" } else { "inequivalent" };
            println!("{verdict} {} {}", profile_json(&a), profile_json(&b));
            Ok(())
        }
        Command::Fiber { system, at, n, seed, out } => {
            let c = load(&system)?;
            let v = if at == [0.0] { vec![0.0; c.m() + 1] } else { at };
            let points = fiber_sample(&c, &v, n, seed)?;
            let mut csv = header(&[("x", c.dim()), ("pi", c.m() + 1)]);
            for x in &points {
                let q = pi_c(&c, x)?;
                push_row(&mut csv, x.coords().iter().chain(q.disk_coords()).copied());
            }
            emit(out.as_deref(), &csv)
        }
        Command::Compose { system, spec, n, seed, out } => {
            let c = load(&system)?;
            let spec = builtin_spec(&spec, c.m())?;
            let mut rng = Sampler::new(seed);
            let points: Vec<SpherePoint> =
                (0..n).map(|_| SpherePoint::new(rng.unit_vector(c.dim()))).collect::<Result<_, _>>()?;
            let tail_len = spec.invariant(&rng.unit_vector(c.m() + 1)).len();
            let mut csv = header(&[("tail", tail_len)]);
            csv.insert_str(0, "r,");
            csv.pop();
            csv.push_str(",same_leaf_as_0,distance_to_0\n");
            for x in &points {
                let class = composed_class(&c, &spec, x)?;
                let tail = class.tail.unwrap_or_else(|| vec![f64::NAN; tail_len]);
                let same = f64::from(u8::from(same_leaf(&c, &spec, x, &points[0], 1e-9)?));
                let d = composed_quotient_distance(&c, &spec, x, &points[0])?;
                push_row(&mut csv, std::iter::once(class.r).chain(tail).chain([same, d]));
            }
            emit(out.as_deref(), &csv)
        }
        Command::Homogeneity(args) => {
            let profile = match (args.system, args.m, args.k) {
                (Some(path), _, _) => equivalence_profile(&load(&path)?)?,
                (None, Some(m), Some(k)) => EquivalenceProfile { m, k, kappa: args.kappa },
                _ => bail!("give --system PATH or --m M --k K [--kappa KAPPA]"),
            };
            println!("{}", classify_homogeneity(&profile)?);
            Ok(())
        }
        Command::Report { inputs, seed, out } => {
            let entries: Vec<MatrixEntry> = if inputs.is_empty() {
                run_matrix(&default_plan(seed), exec).0
            } else {
                let mut entries = Vec::new();
                for path in &inputs {
                    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
                    let reports: Vec<VerificationReport> = match serde_json::from_str(&text) {
                        Ok(list) => list,
                        Err(_) => vec![serde_json::from_str(&text).with_context(|| format!("{} is not a report", path.display()))?],
                    };
                    entries.extend(reports.into_iter().map(|r| MatrixEntry { suite: r.suite, system: Some(r.system), outcome: Ok(r) }));
                }
                entries
            };
            let summary = summarize(&entries);
            if let Some(path) = out.as_deref() {
                emit(Some(path), &(serde_json::to_string_pretty(&summary)? + "\n"))?;
            }
            print!("{summary}");
            if summary.all_pass() {
                Ok(())
            } else {
                Err(Failed.into())
            }
        }
    }
}

/// Runs every compatible suite; the report file holds a JSON array.
fn verify_all(c: &CliffordSystem, configure: impl Fn(SuiteId) -> SuiteConfig, report: Option<&Path>) -> anyhow::Result<()> {
    let mut plan = Vec::new();
    for id in SuiteId::ALL {
        match compatibility(id, c) {
            Ok(()) => plan.push(configure(id)),
            Err(reason) => eprintln!("skip {id}: {reason}"),
        }
    }
    let (entries, summary) = run_matrix(&plan, Execution::Sequential);
    let reports: Vec<&VerificationReport> = entries.iter().filter_map(|e| e.outcome.as_ref().ok()).collect();
    emit(report, &(serde_json::to_string_pretty(&reports)? + "\n"))?;
    reports.iter().for_each(|r| print_report(r));
    print!("{summary}");
    if summary.errors > 0 {
        bail!("{} suites stopped with an error", summary.errors);
    }
    if summary.all_pass() {
        Ok(())
    } else {
        Err(Failed.into())
    }
}

fn print_report(r: &VerificationReport) {
    let status = if r.pass { "PASS" } else { "FAIL" };
    eprintln!("{status} {} ({} samples, max violation {:e})", r.suite, r.samples, r.max_violation());
    for ch in r.failed_checks() {
        eprintln!("  {}: violation {:e} > tol {:e} [{}]", ch.name, ch.violation, ch.tol, ch.claim);
    }
}

fn header(groups: &[(&str, usize)]) -> String {
    let names: Vec<String> = groups.iter().flat_map(|(p, n)| (0..*n).map(move |i| format!("{p}_{i}"))).collect();
    names.join(",") + "\n"
}

fn push_row(csv: &mut String, values: impl Iterator<Item = f64>) {
    // Debug formatting is the shortest round-trip form, with exponents for tiny values.
    let cells: Vec<String> = values.map(|v| format!("{v:?}")).collect();
    csv.push_str(&cells.join(","));
    csv.push('\n');
}
