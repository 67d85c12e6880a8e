//! Execution of scenario tasks.

use serde_json::{json, Value};

use nc_arakelov::arithbundles::{duality_residual, intersection, lambda, rr_residual, simplicity_warning};
use nc_arakelov::exactlin::FgAbGroup;
use nc_arakelov::gradedengine::{cech_cohomology, cech_window_top, GradedModule};
use nc_arakelov::p1cohomology::{h0_rank, h1_rank, twist_cohomology, TwistSum};
use nc_arakelov::zorder::semisimplicity_check;
use nc_arakelov::Scalar;

use crate::error::CliError;
use crate::report::{detline_json, group_json, matrix_json, Failure};
use crate::resolve::Resolved;
use crate::scenario::Task;
use crate::suites::{selftest, SelftestOptions};

/// Residual magnitude that counts as a genuine violation for negative controls.
pub const VIOLATION_THRESHOLD: f64 = 0.1;

pub struct Context<'a, T: Scalar> {
    pub resolved: &'a Resolved<T>,
    pub tolerance: f64,
    /// Tolerance given explicitly by the scenario or on the command line.
    pub tolerance_override: Option<f64>,
    pub seed: u64,
}

pub struct Outcome {
    pub passed: bool,
    pub warnings: Vec<String>,
    pub result: Value,
    pub failures: Vec<Failure>,
}

impl Outcome {
    fn ok(result: Value) -> Self {
        Outcome { passed: true, warnings: Vec::new(), result, failures: Vec::new() }
    }
}

pub fn shifted(e: &TwistSum, d: i64) -> TwistSum {
    let parts = e.summands().iter().map(|(p, n)| (p.clone(), n + d)).collect();
    TwistSum::new(e.order(), parts).expect("shifting keeps the summands valid")
}

/// `(H⁰, H¹)` of `E(d)` through the graded Čech oracle.
pub fn cech_pair(e: &TwistSum, d: i64) -> nc_arakelov::Result<(FgAbGroup, FgAbGroup)> {
    let pd = e.summands().iter().map(|(_, n)| -n).max().unwrap_or(0);
    let m = GradedModule::from_twist_sum(e, pd.min(d) - 1, cech_window_top(pd, d))?;
    cech_cohomology(&m, d)
}

fn twist_range(id: &str, twists: [i64; 2]) -> Result<std::ops::RangeInclusive<i64>, CliError> {
    if twists[0] > twists[1] {
        return Err(CliError::validation(id, "empty twist range"));
    }
    Ok(twists[0]..=twists[1])
}

pub fn execute<T: Scalar>(id: &str, task: &Task, cx: &Context<T>) -> Result<Outcome, CliError> {
    let r = cx.resolved;
    let core = |what: &str| CliError::core(format!("task {id}: {what}"));
    match task {
        Task::Cohomology { bundle, twists } => {
            let e = r.bundle(bundle)?.sheaf().clone();
            let mut rows = Vec::new();
            let mut passed = true;
            for n in twist_range(id, *twists)? {
                let en = shifted(&e, n);
                let h0 = twist_cohomology(&en, 0);
                let h1 = twist_cohomology(&en, 1);
                let e0: usize = en.summands().iter().map(|(p, m)| p.rank() * h0_rank(*m)).sum();
                let e1: usize = en.summands().iter().map(|(p, m)| p.rank() * h1_rank(*m)).sum();
                let ok = h0.group().rank() == e0 && h1.group().rank() == e1;
                passed &= ok;
                rows.push(json!({
                    "n": n,
                    "h0": h0.group().describe(),
                    "h1": h1.group().describe(),
                    "h0_rank": h0.group().rank(),
                    "h1_rank": h1.group().rank(),
                    "closed_form": ok,
                }));
            }
            let mut out = Outcome::ok(json!({ "bundle": bundle, "table": rows }));
            if !passed {
                out.passed = false;
                out.failures.push(Failure { task: id.into(), message: "ranks differ from closed form".into(), residual: None });
            }
            Ok(out)
        }
        Task::Lambda { line, bundle } => {
            let l = r.line(line)?;
            let eb = r.bundle(bundle)?;
            let d = lambda(&l, &eb, &r.omega).map_err(core("lambda"))?;
            Ok(Outcome::ok(json!({ "line": line, "bundle": bundle, "lambda": detline_json(&d), "alpha": matrix_json(r.omega.alpha()) })))
        }
        Task::Intersect { line, bundle } => {
            let l = r.line(line)?;
            let eb = r.bundle(bundle)?;
            let (d, number) = intersection(&l, &eb, &r.omega).map_err(core("intersection"))?;
            Ok(Outcome::ok(json!({
                "line": line,
                "bundle": bundle,
                "bundle_line": detline_json(&d),
                "intersection": number,
                "alpha": matrix_json(r.omega.alpha()),
            })))
        }
        Task::RrCheck { lines, expect_violation } | Task::DualityCheck { lines, expect_violation } => {
            let rr = matches!(task, Task::RrCheck { .. });
            let mut out = Outcome::ok(Value::Null);
            if let Some(w) = simplicity_warning(&r.order) {
                out.warnings.push(w);
            }
            let mut rows = Vec::new();
            for name in lines {
                let l = r.line(name)?;
                let res = if rr { rr_residual(&l, &r.omega) } else { duality_residual(&l, &r.omega) }
                    .map_err(core(name))?;
                let ok = if *expect_violation { res.abs() >= VIOLATION_THRESHOLD } else { res.abs() <= cx.tolerance };
                if !ok {
                    out.passed = false;
                    let message = if *expect_violation {
                        format!("{name}: expected a violation of magnitude at least {VIOLATION_THRESHOLD}")
                    } else {
                        format!("{name}: residual exceeds tolerance {:e}", cx.tolerance)
                    };
                    out.failures.push(Failure { task: id.into(), message, residual: Some(res) });
                }
                rows.push(json!({ "line": name, "twist": l.line().twist(), "residual": res, "passed": ok }));
            }
            out.result = json!({
                "residuals": rows,
                "alpha": matrix_json(r.omega.alpha()),
                "expect_violation": expect_violation,
            });
            Ok(out)
        }
        Task::SemisimpleCheck { expect_central_simple } => {
            let rep = semisimplicity_check(&r.order);
            let mut out = Outcome::ok(json!({
                "order": r.order.name(),
                "separable": rep.separable,
                "trace_form_determinant": rep.trace_form_determinant.to_string(),
                "trace_form_unimodular": rep.trace_form_unimodular,
                "center_rank": rep.center_rank,
                "central_simple": rep.central_simple(),
            }));
            if let Some(w) = simplicity_warning(&r.order) {
                out.warnings.push(w);
            }
            if let Some(expect) = expect_central_simple {
                if *expect != rep.central_simple() {
                    out.passed = false;
                    out.failures.push(Failure {
                        task: id.into(),
                        message: format!("expected central_simple = {expect}"),
                        residual: None,
                    });
                }
            }
            Ok(out)
        }
        Task::OracleCompare { bundle, twists } => {
            let e = r.bundle(bundle)?.sheaf().clone();
            let mut rows = Vec::new();
            let mut out = Outcome::ok(Value::Null);
            for n in twist_range(id, *twists)? {
                let en = shifted(&e, n);
                let s0 = twist_cohomology(&en, 0).group().clone();
                let s1 = twist_cohomology(&en, 1).group().clone();
                let (c0, c1) = cech_pair(&e, n).map_err(core("graded oracle"))?;
                let ok = s0.same_invariants(&c0) && s1.same_invariants(&c1);
                if !ok {
                    out.passed = false;
                    out.failures.push(Failure {
                        task: id.into(),
                        message: format!("models disagree at n = {n}"),
                        residual: None,
                    });
                }
                rows.push(json!({
                    "n": n,
                    "sheaf_h0": group_json(&s0)["group"],
                    "sheaf_h1": group_json(&s1)["group"],
                    "cech_h0": group_json(&c0)["group"],
                    "cech_h1": group_json(&c1)["group"],
                    "agree": ok,
                }));
            }
            out.result = json!({ "bundle": bundle, "table": rows });
            Ok(out)
        }
        Task::Selftest => {
            let rep = selftest(&SelftestOptions { seed: cx.seed, tolerance: cx.tolerance_override, include_scenarios: false });
            let mut out = Outcome::ok(serde_json::to_value(&rep).expect("selftest reports serialize"));
            for s in rep.suites.iter().filter(|s| !s.passed) {
                out.passed = false;
                out.failures.push(Failure { task: id.into(), message: format!("suite {} failed", s.name), residual: s.max_residual });
            }
            Ok(out)
        }
    }
}
