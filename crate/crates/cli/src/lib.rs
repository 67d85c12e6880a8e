//! Scenario runner for `nc-arakelov`: parses JSON scenarios, executes their
//! tasks and assembles deterministic reports.

pub mod corpus;
pub mod error;
pub mod report;
pub mod resolve;
pub mod scenario;
pub mod suites;
pub mod tasks;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nc_arakelov::{Rational, Scalar};

pub use error::CliError;
pub use report::Report;
use report::{TaskReport, TOOL};
use scenario::{Arithmetic, Scenario};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub tolerance: Option<f64>,
    pub seed: Option<u64>,
    pub timings: bool,
}

pub fn run_scenario_text(text: &str, opts: &RunOptions) -> Result<Report, CliError> {
    let scenario = Scenario::parse(text)?;
    run_scenario(&scenario, opts)
}

pub fn run_scenario(s: &Scenario, opts: &RunOptions) -> Result<Report, CliError> {
    match s.arithmetic() {
        Arithmetic::Exact => run_with::<Rational>(s, opts),
        Arithmetic::Float => run_with::<f64>(s, opts),
    }
}

fn run_with<T: Scalar>(s: &Scenario, opts: &RunOptions) -> Result<Report, CliError> {
    let seed = opts.seed.or(s.seed).unwrap_or(DEFAULT_SEED);
    let tolerance_override = opts.tolerance.or(s.tolerance);
    let tolerance = tolerance_override.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance.is_finite() && tolerance >= 0.0) {
        return Err(CliError::validation("tolerance", "must be a finite nonnegative number"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let resolved = resolve::resolve::<T>(s, &mut rng)?;
    let cx = tasks::Context { resolved: &resolved, tolerance, tolerance_override, seed };

    let mut reports = Vec::new();
    let mut failures = Vec::new();
    for (index, spec) in s.tasks.iter().enumerate() {
        let id = spec.id.clone().unwrap_or_else(|| format!("task{index}"));
        let start = Instant::now();
        let out = tasks::execute(&id, &spec.task, &cx)?;
        failures.extend(out.failures);
        reports.push(TaskReport {
            index,
            id,
            kind: spec.task.kind(),
            passed: out.passed,
            warnings: out.warnings,
            result: out.result,
            elapsed_ms: opts.timings.then(|| start.elapsed().as_secs_f64() * 1e3),
        });
    }
    let passed = reports.iter().all(|t| t.passed);
    let draws = resolved
        .draws
        .iter()
        .map(|(k, v)| (k.clone(), serde_json::json!(v)))
        .collect();
    Ok(Report {
        tool: TOOL,
        scenario: serde_json::to_value(s).expect("scenarios serialize"),
        arithmetic: if T::EXACT { "exact" } else { "float" },
        seed,
        tolerance,
        random_draws: draws,
        warnings: resolved.warnings.clone(),
        tasks: reports,
        failures,
        passed,
    })
}
