//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use nc_arakelov_cli::suites::{
    cohomology_closed_forms, detline_algebra, duality_suite, left_right_determinants, oracle_equivalence, rr_suite,
    selftest, torsion_bookkeeping, SelftestOptions, SuiteResult,
};

const SEED: u64 = 1;

struct Line {
    passed: bool,
    text: String,
}

fn criterion(id: u32, s: SuiteResult, seconds: f64, min_cases: usize, time_limit: Option<f64>) -> Line {
    let in_time = time_limit.is_none_or(|t| seconds < t);
    let enough = s.cases >= min_cases;
    let passed = s.passed && in_time && enough;
    let mut text = format!("AC{id} {} {}: {} cases", if passed { "PASS" } else { "FAIL" }, s.name, s.cases);
    if let (Some(r), Some(t)) = (s.max_residual, s.tolerance) {
        text += &format!(", max residual {r:.3e} (tolerance {t:.0e})");
    }
    text += &format!(", {seconds:.3} s");
    if let Some(t) = time_limit {
        text += &format!(" (limit {t} s)");
    }
    if !enough {
        text += &format!("; expected at least {min_cases} cases");
    }
    for f in &s.failures {
        text += &format!("\n    {f}");
    }
    Line { passed, text }
}

fn timed(f: impl FnOnce() -> SuiteResult) -> (SuiteResult, f64) {
    let start = Instant::now();
    let s = f();
    (s, start.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let mut lines = Vec::new();

    let (s, t) = timed(cohomology_closed_forms);
    lines.push(criterion(1, s, t, 4 * 17, Some(1.0)));

    let (s, t) = timed(oracle_equivalence);
    lines.push(criterion(2, s, t, 20, Some(30.0)));

    let (s, t) = timed(|| left_right_determinants(SEED, None));
    lines.push(criterion(3, s, t, 4 * 100 + 1, None));

    let (s, t) = timed(|| duality_suite(SEED, None));
    lines.push(criterion(4, s, t, 3 * 7 * 5 * 2, Some(60.0)));

    let (s, t) = timed(|| rr_suite(SEED, None));
    lines.push(criterion(5, s, t, 3 * 7 * 5 * 2 + 1, None));

    let (s, t) = timed(|| detline_algebra(SEED, None));
    lines.push(criterion(6, s, t, 50, None));

    let (s, t) = timed(|| torsion_bookkeeping(None));
    lines.push(criterion(7, s, t, 1, None));

    let start = Instant::now();
    let opts = SelftestOptions { seed: 42, tolerance: None, include_scenarios: true };
    let first = selftest(&opts).to_json();
    let second = selftest(&opts).to_json();
    let same = first == second;
    lines.push(Line {
        passed: same,
        text: format!(
            "AC8 {} determinism: two selftest reports with seed 42 are {} ({} bytes), {:.3} s",
            if same { "PASS" } else { "FAIL" },
            if same { "byte-identical" } else { "different" },
            first.len(),
            start.elapsed().as_secs_f64()
        ),
    });

    for l in &lines {
        println!("{}", l.text);
    }
    let failed = lines.iter().filter(|l| !l.passed).count();
    println!("acceptance: {} of {} criteria passed", lines.len() - failed, lines.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
