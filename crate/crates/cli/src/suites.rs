//! Self-test suites, one per acceptance criterion, plus a run of the
//! bundled scenario corpus.

use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use nc_arakelov::arithbundles::{
    det_line, duality_residual, euler_characteristic, rr_residual, ArithBundle, ArithLineBundle, DetLine, OmegaChoice,
};
use nc_arakelov::exactlin::{FgAbGroup, IntMatrix, Matrix};
use nc_arakelov::p1cohomology::{twist_cohomology, AutData, InvertibleObject, TwistSum};
use nc_arakelov::scalar::render_rational;
use nc_arakelov::zorder::{det_left_right_check, dual_bimodule, Bimodule, OrderElement, RightModule, ZOrder};
use nc_arakelov::{Rational, Scalar};

use crate::corpus::BUNDLED;
use crate::report::{Tool, TOOL};
use crate::resolve::random_unit;
use crate::tasks::{cech_pair, shifted, VIOLATION_THRESHOLD};

pub const COHOMOLOGY_ORDERS: [&str; 4] = ["Z", "Zi", "M2Z", "Lipschitz"];
pub const CERTIFIED_SIMPLE: [&str; 3] = ["Z", "M2Z", "Lipschitz"];
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const NORM_TOL: f64 = 1e-9;
pub const IDENTITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, Default)]
pub struct SelftestOptions {
    pub seed: u64,
    /// Replaces every suite tolerance when set.
    pub tolerance: Option<f64>,
    pub include_scenarios: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
    #[serde(skip)]
    pub seconds: f64,
}

impl SuiteResult {
    fn new(id: u32, name: &str, tolerance: Option<f64>) -> Self {
        SuiteResult {
            id,
            name: name.into(),
            passed: true,
            cases: 0,
            tolerance,
            max_residual: tolerance.map(|_| 0.0),
            notes: Vec::new(),
            failures: Vec::new(),
            seconds: 0.0,
        }
    }

    fn case(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.passed = false;
            if self.failures.len() < 20 {
                self.failures.push(describe());
            }
        }
    }

    /// Records a residual against the suite tolerance.
    fn residual(&mut self, r: f64, describe: impl FnOnce() -> String) {
        let tol = self.tolerance.expect("residual suites carry a tolerance");
        let m = self.max_residual.get_or_insert(0.0);
        if r.abs() > *m || r.is_nan() {
            *m = r.abs();
        }
        self.case(r.abs() <= tol, || format!("{} (residual {:e})", describe(), r));
    }

    fn error(&mut self, what: &str, e: nc_arakelov::Error) {
        self.case(false, || format!("{what}: {e}"));
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn order(name: &str) -> Arc<ZOrder> {
    Arc::new(ZOrder::builtin(name).expect("built-in order"))
}

fn timed(f: impl FnOnce() -> SuiteResult) -> SuiteResult {
    let start = Instant::now();
    let mut s = f();
    s.seconds = start.elapsed().as_secs_f64();
    s
}

/// Ranks of `H⁰`, `H¹` of `R ⊗ O(n)` against `rank(R)·max(n+1, 0)` and
/// `rank(R)·max(−n−1, 0)`, torsion free.
pub fn cohomology_closed_forms() -> SuiteResult {
    let mut s = SuiteResult::new(1, "cohomology closed forms", None);
    for name in COHOMOLOGY_ORDERS {
        let r = order(name);
        let k = r.rank() as i64;
        for n in -8..=8 {
            let e = TwistSum::structure(&r, n);
            let h0 = twist_cohomology(&e, 0);
            let h1 = twist_cohomology(&e, 1);
            let ok = h0.group().is_free()
                && h1.group().is_free()
                && h0.group().rank() as i64 == k * (n + 1).max(0)
                && h1.group().rank() as i64 == k * (-n - 1).max(0);
            s.case(ok, || format!("{name}, n = {n}: H0 = {}, H1 = {}", h0.group().describe(), h1.group().describe()));
        }
    }
    s
}

/// Sheaf model against the graded Čech oracle on twist sums with torsion.
pub fn oracle_equivalence() -> SuiteResult {
    let mut s = SuiteResult::new(2, "sheaf model vs graded Cech oracle", None);
    let z = order("Z");
    let m2 = order("M2Z");
    let scalar = |g: FgAbGroup| RightModule::over_integers(&z, g).expect("Z-modules");
    let corpus: Vec<(&str, TwistSum)> = vec![
        ("Z/6", TwistSum::single(scalar(FgAbGroup::cyclic(6)), 0)),
        ("Z+Z/4", TwistSum::single(scalar(FgAbGroup::from_invariants(1, &[4])), 0)),
        ("Z(1)+Z/6(-2)", TwistSum::new(&z, vec![(RightModule::regular(&z), 1), (scalar(FgAbGroup::cyclic(6)), -2)]).unwrap()),
        ("M2Z(0)", TwistSum::structure(&m2, 0)),
    ];
    for (label, e) in &corpus {
        for n in -4..=4 {
            let en = shifted(e, n);
            let s0 = twist_cohomology(&en, 0).group().clone();
            let s1 = twist_cohomology(&en, 1).group().clone();
            match cech_pair(e, n) {
                Ok((c0, c1)) => {
                    let ok = s0.same_invariants(&c0) && s1.same_invariants(&c1);
                    s.case(ok, || {
                        format!(
                            "{label}, n = {n}: sheaf ({}, {}) vs Cech ({}, {})",
                            s0.describe(),
                            s1.describe(),
                            c0.describe(),
                            c1.describe()
                        )
                    });
                }
                Err(e) => s.error(&format!("{label}, n = {n}"), e),
            }
        }
    }
    s
}

/// Bimodule `Z` with `a·m·b = a_left · b_right · m` over `Z×Z`.
pub fn mixed_bimodule(r: &Arc<ZOrder>, left: usize, right: usize) -> Bimodule {
    let mut rv = [0, 0];
    rv[right] = 1;
    let m = RightModule::through_character(r, FgAbGroup::free(1), &rv).expect("character of Z×Z");
    let lv = (0..2).map(|i| IntMatrix::diagonal(&[(i == left) as i64])).collect();
    Bimodule::new(m, lv).expect("commuting characters")
}

/// `det λ_a = det ρ_a` on seeded random integral elements, and the `Z×Z`
/// bimodule where they differ.
pub fn left_right_determinants(seed: u64, tol: Option<f64>) -> SuiteResult {
    let tol = tol.unwrap_or(NORM_TOL);
    let mut s = SuiteResult::new(3, "left and right determinants", Some(tol));
    let mut rng = rng_for(seed, 3);
    for name in COHOMOLOGY_ORDERS {
        let r = order(name);
        let reg = Bimodule::regular(&r);
        for _ in 0..100 {
            let c: Vec<i64> = (0..r.rank()).map(|_| rng.gen_range(-9..=9)).collect();
            let a = OrderElement::<f64>::from_ints(&c);
            match det_left_right_check(&reg, &a) {
                Ok((l, rr)) => {
                    let rel = (l - rr).abs() / l.abs().max(rr.abs()).max(1.0);
                    s.residual(rel, || format!("{name}, a = {c:?}: det λ = {l}, det ρ = {rr}"));
                }
                Err(e) => s.error(name, e),
            }
        }
    }
    let zz = order("ZxZ");
    let m = mixed_bimodule(&zz, 0, 1);
    let a = OrderElement::<Rational>::from_ints(&[2, 1]);
    match det_left_right_check(&m, &a) {
        Ok((l, rr)) => {
            let expected = (BigRational::from_integer(2.into()), BigRational::from_integer(1.into()));
            s.case((l.clone(), rr.clone()) == expected, || format!("ZxZ control: det λ = {l}, det ρ = {rr}"));
            s.notes.push(format!("ZxZ control: det λ(2,1) = {}, det ρ(2,1) = {}", render_rational(&l), render_rational(&rr)));
        }
        Err(e) => s.error("ZxZ control", e),
    }
    s
}

/// One instance of the duality / Riemann–Roch suite.
#[derive(Clone, Debug)]
pub struct ResidualCase {
    pub order: &'static str,
    pub twist: i64,
    pub beta: Vec<BigRational>,
    pub alpha: Option<Vec<BigRational>>,
}

impl ResidualCase {
    pub fn describe(&self) -> String {
        let render = |c: &[BigRational]| c.iter().map(render_rational).collect::<Vec<_>>().join(",");
        let alpha = self.alpha.as_deref().map(render).unwrap_or_else(|| "id".into());
        format!("{} n={} beta=({}) alpha={}", self.order, self.twist, render(&self.beta), alpha)
    }

    fn build<T: Scalar>(&self) -> nc_arakelov::Result<(ArithLineBundle<T>, OmegaChoice<T>)> {
        let r = order(self.order);
        let conv = |c: &[BigRational]| OrderElement(c.iter().map(T::from_rational).collect());
        let beta = Bimodule::regular(&r).real_left_action(&conv(&self.beta));
        let w = match &self.alpha {
            None => OmegaChoice::identity(&r),
            Some(c) => OmegaChoice::new(&r, dual_bimodule(&r).real_left_action(&conv(c)))?,
        };
        Ok((ArithLineBundle::new(InvertibleObject::structure(&r, self.twist), beta)?, w))
    }
}

/// {certified simple orders} × {n ∈ [−3, 3]} × {5 random β} × {id, random α}.
pub fn residual_cases(seed: u64) -> Vec<ResidualCase> {
    let mut rng = rng_for(seed, 4);
    let mut cases = Vec::new();
    for name in CERTIFIED_SIMPLE {
        let r = order(name);
        for twist in -3..=3 {
            for _ in 0..5 {
                let beta = random_unit(&r, &mut rng, 5, 3);
                let alpha = random_unit(&r, &mut rng, 5, 3);
                cases.push(ResidualCase { order: name, twist, beta: beta.clone(), alpha: None });
                cases.push(ResidualCase { order: name, twist, beta, alpha: Some(alpha) });
            }
        }
    }
    cases
}

fn residual_suite(
    id: u32,
    name: &str,
    seed: u64,
    tol: Option<f64>,
    f: fn(&ResidualCase) -> nc_arakelov::Result<(f64, f64)>,
) -> SuiteResult {
    let tol = tol.unwrap_or(RESIDUAL_TOL);
    let mut s = SuiteResult::new(id, name, Some(tol));
    let mut max_exact: f64 = 0.0;
    for c in residual_cases(seed) {
        match f(&c) {
            Ok((exact, float)) => {
                max_exact = max_exact.max(exact.abs());
                s.residual(exact.abs().max(float.abs()), || c.describe());
            }
            Err(e) => s.error(&c.describe(), e),
        }
    }
    s.notes.push(format!("largest exact-arithmetic residual {max_exact:e}; max_residual includes the f64 path"));
    s
}

fn duality_pair(c: &ResidualCase) -> nc_arakelov::Result<(f64, f64)> {
    let (l, w) = c.build::<Rational>()?;
    let (lf, wf) = c.build::<f64>()?;
    Ok((duality_residual(&l, &w)?, duality_residual(&lf, &wf)?))
}

fn rr_pair(c: &ResidualCase) -> nc_arakelov::Result<(f64, f64)> {
    let (l, w) = c.build::<Rational>()?;
    let (lf, wf) = c.build::<f64>()?;
    Ok((rr_residual(&l, &w)?, rr_residual(&lf, &wf)?))
}

fn negative_control() -> nc_arakelov::Result<(f64, f64)> {
    let r = order("ZxZ");
    let line = InvertibleObject::new(mixed_bimodule(&r, 0, 1), 0, Some(mixed_bimodule(&r, 1, 0)))?;
    let lb = ArithLineBundle::new(line, Matrix::<Rational>::identity(1))?;
    let a = OrderElement::<Rational>::from_ints(&[2, 1]);
    let w = OmegaChoice::new(&r, dual_bimodule(&r).real_left_action(&a))?;
    Ok((duality_residual(&lb, &w)?, rr_residual(&lb, &w)?))
}

pub fn duality_suite(seed: u64, tol: Option<f64>) -> SuiteResult {
    let mut s = residual_suite(4, "Serre duality residual", seed, tol, duality_pair);
    match negative_control() {
        Ok((d, _)) => {
            s.notes.push(format!("ZxZ negative control duality residual {d:.6}"));
            s.case(d.abs() >= VIOLATION_THRESHOLD, || format!("ZxZ negative control residual {d:e} is too small"));
        }
        Err(e) => s.error("ZxZ negative control", e),
    }
    s
}

pub fn rr_suite(seed: u64, tol: Option<f64>) -> SuiteResult {
    let mut s = residual_suite(5, "Riemann-Roch residual", seed, tol, rr_pair);
    let z = order("Z");
    for n in -8..=8 {
        let line = InvertibleObject::structure(&z, n);
        let exact = ArithLineBundle::new(line.clone(), Matrix::<Rational>::identity(1))
            .and_then(|l| rr_residual(&l, &OmegaChoice::identity(&z)));
        let float = ArithLineBundle::new(line, Matrix::<f64>::identity(1))
            .and_then(|l| rr_residual(&l, &OmegaChoice::identity(&z)));
        match (exact, float) {
            (Ok(a), Ok(b)) => s.case(a == 0.0 && b == 0.0, || format!("trivial Z, n = {n}: residuals {a:e}, {b:e}")),
            (Err(e), _) | (_, Err(e)) => s.error(&format!("trivial Z, n = {n}"), e),
        }
    }
    s.notes.push("all-trivial commutative case over Z, n in [-8, 8]: residual exactly 0".into());
    match negative_control() {
        Ok((_, r)) => s.notes.push(format!("ZxZ negative control RR residual {r:.6}")),
        Err(e) => s.error("ZxZ negative control", e),
    }
    s
}

fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> IntMatrix {
    let mut u = IntMatrix::identity(n);
    if n < 2 {
        return u;
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let mut e = IntMatrix::identity(n);
        e.set(i, j, rng.gen_range(-2i64..=2).into());
        u = &e * &u;
    }
    if rng.gen_bool(0.5) {
        let mut p = IntMatrix::identity(n);
        p.set(0, 0, BigInt::zero());
        p.set(1, 1, BigInt::zero());
        p.set(0, 1, 1.into());
        p.set(1, 0, 1.into());
        u = &p * &u;
    }
    u
}

fn random_rational(rng: &mut ChaCha8Rng, max: i64) -> BigRational {
    BigRational::new(rng.gen_range(-max..=max).into(), rng.gen_range(1..=4i64).into())
}

/// adeg identities on random lines and invariance of `(q, |t|)` under
/// random unimodular re-presentation.
pub fn detline_algebra(seed: u64, tol: Option<f64>) -> SuiteResult {
    let tol = tol.unwrap_or(IDENTITY_TOL);
    let mut s = SuiteResult::new(6, "determinant-line algebra", Some(tol));
    let mut rng = rng_for(seed, 6);
    let line = |rng: &mut ChaCha8Rng| {
        let q = BigRational::new(rng.gen_range(1..=60i64).into(), rng.gen_range(1..=60i64).into());
        let mut t: f64 = rng.gen_range(0.01..50.0);
        if rng.gen_bool(0.5) {
            t = -t;
        }
        DetLine::new(q, t).expect("positive q, nonzero t")
    };
    for _ in 0..100 {
        let a = line(&mut rng);
        let b = line(&mut rng);
        let e: i64 = rng.gen_range(-3..=3);
        s.residual(a.tensor(&b).adeg() - a.adeg() - b.adeg(), || "adeg(a⊗b) = adeg a + adeg b".into());
        s.residual(a.inverse().adeg() + a.adeg(), || "adeg(a⁻¹) = −adeg a".into());
        s.residual(a.pow(e).adeg() - e as f64 * a.adeg(), || format!("adeg(a^{e}) = {e}·adeg a"));
    }
    let mut float_gap: f64 = 0.0;
    for k in 0..50 {
        let rank = rng.gen_range(1..=3usize);
        let torsion: Vec<i64> = (0..rng.gen_range(0..=2)).map(|_| rng.gen_range(2..=12)).collect();
        let g = FgAbGroup::from_invariants(rank, &torsion);
        let n = g.generators();
        let mut phi = Matrix::<Rational>::identity(n);
        loop {
            for i in 0..rank {
                for j in 0..rank {
                    phi.set(i, j, random_rational(&mut rng, 6));
                }
            }
            if !phi.determinant().is_zero() {
                break;
            }
        }
        let u = random_unimodular(n, &mut rng);
        let uq = Matrix::<Rational>::from_int(&u);
        let phi2 = &(&uq * &phi) * &uq.inverse().expect("unimodular");
        let h = FgAbGroup::new(&u * g.relations());
        match (det_line(&g, &phi), det_line(&h, &phi2), det_line(&g, &phi.to_f64()), det_line(&h, &phi2.to_f64())) {
            (Ok(a), Ok(b), Ok(af), Ok(bf)) => {
                s.case(a.q() == b.q(), || format!("case {k}: q changed from {} to {}", a.q(), b.q()));
                let gap = ((a.t().abs() - b.t().abs()) / a.t().abs()).to_f64();
                s.residual(gap, || format!("case {k}: |t| changed from {} to {}", a.t(), b.t()));
                float_gap = float_gap.max((af.t().abs() - bf.t().abs()).abs() / af.t().abs());
            }
            _ => s.case(false, || format!("case {k}: det_line failed")),
        }
    }
    s.notes.push(format!("re-presentation compared in exact arithmetic; the f64 path differs by at most {float_gap:.3e} relative"));
    s
}

/// `χ((Z/6, 0), id) = log 6`.
pub fn torsion_bookkeeping(tol: Option<f64>) -> SuiteResult {
    let tol = tol.unwrap_or(IDENTITY_TOL);
    let mut s = SuiteResult::new(7, "torsion bookkeeping", Some(tol));
    let z = order("Z");
    let e = TwistSum::single(RightModule::over_integers(&z, FgAbGroup::cyclic(6)).expect("Z/6"), 0);
    let exact = ArithBundle::<Rational>::new(e.clone(), AutData::identity(&e))
        .and_then(|b| euler_characteristic(&b, &OmegaChoice::identity(&z)));
    let float =
        ArithBundle::<f64>::new(e.clone(), AutData::identity(&e)).and_then(|b| euler_characteristic(&b, &OmegaChoice::identity(&z)));
    for (label, chi) in [("exact", exact), ("f64", float)] {
        match chi {
            Ok(chi) => {
                s.residual(chi - 6f64.ln(), || format!("{label}: chi = {chi}"));
                s.notes.push(format!("{label}: chi((Z/6,0), id) = {chi:.15}"));
            }
            Err(e) => s.error(label, e),
        }
    }
    s
}

/// Suites 1–7 in order.
pub fn criteria_suites(seed: u64, tol: Option<f64>) -> Vec<SuiteResult> {
    vec![
        timed(cohomology_closed_forms),
        timed(oracle_equivalence),
        timed(|| left_right_determinants(seed, tol)),
        timed(|| duality_suite(seed, tol)),
        timed(|| rr_suite(seed, tol)),
        timed(|| detline_algebra(seed, tol)),
        timed(|| torsion_bookkeeping(tol)),
    ]
}

fn suites_json(suites: &[SuiteResult]) -> String {
    serde_json::to_string(suites).expect("suite results serialize")
}

#[derive(Clone, Debug, Serialize)]
pub struct ScenarioCheck {
    pub name: &'static str,
    pub expected_exit: u8,
    pub observed_exit: u8,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub tool: Tool,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub suites: Vec<SuiteResult>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scenarios: Vec<ScenarioCheck>,
    pub passed: bool,
}

pub fn selftest(opts: &SelftestOptions) -> SelftestReport {
    let mut suites = criteria_suites(opts.seed, opts.tolerance);
    let first = suites_json(&suites);
    let start = Instant::now();
    let again = suites_json(&criteria_suites(opts.seed, opts.tolerance));
    let mut det = SuiteResult::new(8, "determinism", None);
    det.case(first == again, || "two runs with the same seed serialized differently".into());
    det.seconds = start.elapsed().as_secs_f64();
    suites.push(det);

    let mut scenarios = Vec::new();
    if opts.include_scenarios {
        for b in BUNDLED {
            let ro = crate::RunOptions { tolerance: opts.tolerance, seed: None, timings: false };
            let observed = match crate::run_scenario_text(b.text, &ro) {
                Ok(r) => r.exit_code(),
                Err(_) => crate::report::EXIT_INPUT,
            };
            scenarios.push(ScenarioCheck {
                name: b.name,
                expected_exit: b.expected_exit,
                observed_exit: observed,
                passed: observed == b.expected_exit,
            });
        }
    }
    let passed = suites.iter().all(|s| s.passed) && scenarios.iter().all(|s| s.passed);
    SelftestReport { tool: TOOL, seed: opts.seed, tolerance: opts.tolerance, suites, scenarios, passed }
}

impl SelftestReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self, timings: bool) -> String {
        use std::fmt::Write as _;
        let mut out = String::new();
        let _ = writeln!(out, "{} {} selftest  seed {}", self.tool.name, self.tool.version, self.seed);
        let _ = writeln!(
            out,
            "{:<3} {:<36} {:>6} {:>13} {:>10}  {}{}",
            "#",
            "suite",
            "cases",
            "max residual",
            "tolerance",
            "result",
            if timings { "   seconds" } else { "" }
        );
        for s in &self.suites {
            let res = s.max_residual.map(|r| format!("{r:.3e}")).unwrap_or_else(|| "-".into());
            let tol = s.tolerance.map(|t| format!("{t:.0e}")).unwrap_or_else(|| "-".into());
            let time = if timings { format!("{:>10.3}", s.seconds) } else { String::new() };
            let _ = writeln!(
                out,
                "{:<3} {:<36} {:>6} {:>13} {:>10}  {}{}",
                s.id,
                s.name,
                s.cases,
                res,
                tol,
                if s.passed { "PASS" } else { "FAIL" },
                time
            );
            for n in &s.notes {
                let _ = writeln!(out, "      {n}");
            }
            for f in &s.failures {
                let _ = writeln!(out, "      failed: {f}");
            }
        }
        for c in &self.scenarios {
            let _ = writeln!(
                out,
                "scenario {:<28} exit {} (expected {})  {}",
                c.name,
                c.observed_exit,
                c.expected_exit,
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(out, "{}", if self.passed { "selftest passed" } else { "selftest FAILED" });
        out
    }
}
