//! Verification suites and their report.

use std::fmt;

use serde_json::{json, Map, Value};
use whitehead_core::cohomology::{cohomology_checks, DET_TOL};
use whitehead_core::reps::{discrete_faithful_filling_residual, prep_class_bound, PRepKind};
use whitehead_core::respq::{
    build_res, check_symmetries, constant_value, expected_span, expected_trivial_orders, nontrivial_root_bound,
    trivial_root_orders,
};
use whitehead_core::roots::{classify, RootSet};
use whitehead_core::seminorm::{
    detected_slopes, evaluate_norm, seifert_character_counts, seifert_norms, seminorm_profile, solve_linear_system,
    Resolution, SeminormError,
};
use whitehead_core::slopes::Slope;

use crate::commands::{collect_preps, insert_all, root_data};
use crate::json::SCHEMA;
use crate::{validate_filling, CliError, Output, Settings};

/// Smallest allowed distance between distinct nontrivial roots.
pub const SEPARATION_TOL: f64 = 1e-6;
/// Smallest allowed `||s| - 1|` for nontrivial roots when `p` is odd.
pub const UNIT_CIRCLE_GAP: f64 = 1e-6;
/// Smallest allowed filling residual of a discrete faithful representation.
pub const DISCRETE_FAITHFUL_GAP: f64 = 1e-3;
pub const CLOSURE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Suite {
    Resultant,
    Symmetries,
    Roots,
    Preps,
    Seifert,
    Linear,
    Cohomology,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Resultant,
        Suite::Symmetries,
        Suite::Roots,
        Suite::Preps,
        Suite::Seifert,
        Suite::Linear,
        Suite::Cohomology,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Resultant => "resultant",
            Suite::Symmetries => "symmetries",
            Suite::Roots => "roots",
            Suite::Preps => "preps",
            Suite::Seifert => "seifert",
            Suite::Linear => "linear",
            Suite::Cohomology => "cohomology",
        }
    }
}

/// Suite names, or `all`, to a sorted list without repeats. An empty list means all.
pub fn parse_suites<S: AsRef<str>>(names: &[S]) -> Result<Vec<Suite>, CliError> {
    if names.is_empty() {
        return Ok(Suite::ALL.to_vec());
    }
    let mut out = Vec::new();
    for n in names {
        let n = n.as_ref();
        if n == "all" {
            out.extend(Suite::ALL);
        } else {
            let s = Suite::ALL
                .into_iter()
                .find(|s| s.name() == n)
                .ok_or_else(|| CliError::Validation(format!("unknown suite {n:?}")))?;
            out.push(s);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteEntry {
    pub suite: Suite,
    pub p: i64,
    pub q: u32,
    pub status: Status,
    pub details: Map<String, Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub p: i64,
    pub q: u32,
    pub entries: Vec<SuiteEntry>,
}

impl VerificationReport {
    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }

    pub fn passed(&self) -> bool {
        self.count(Status::Fail) == 0
    }

    pub fn entry(&self, suite: Suite) -> Option<&SuiteEntry> {
        self.entries.iter().find(|e| e.suite == suite)
    }

    pub fn to_json(&self) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("schema".into(), json!(SCHEMA));
        m.insert("command".into(), json!("verify"));
        m.insert("p".into(), json!(self.p));
        m.insert("q".into(), json!(self.q));
        let entries = self
            .entries
            .iter()
            .map(|e| {
                json!({
                    "suite": e.suite.name(),
                    "p": e.p,
                    "q": e.q,
                    "status": e.status.label(),
                    "details": Value::Object(e.details.clone()),
                })
            })
            .collect();
        m.insert("entries".into(), Value::Array(entries));
        m.insert(
            "summary".into(),
            json!({
                "pass": self.count(Status::Pass),
                "fail": self.count(Status::Fail),
                "skipped": self.count(Status::Skipped),
            }),
        );
        m
    }
}

enum Outcome {
    Pass(Map<String, Value>),
    Skip(&'static str, Map<String, Value>),
}

type Check = Result<Outcome, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn text<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn details(pairs: Vec<(&str, Value)>) -> Map<String, Value> {
    let mut m = Map::new();
    insert_all(&mut m, pairs);
    m
}

fn out_of_scope(p: i64, q: u32) -> Option<&'static str> {
    if p.rem_euclid(2) == 0 {
        Some("p even")
    } else if p == 3 * q as i64 {
        Some("p/q = 3")
    } else {
        None
    }
}

fn resultant(p: i64, q: u32) -> Check {
    let r = build_res(p, q).map_err(text)?;
    ensure(r.verified(), || "closed form differs from the resultant".into())?;
    let want = expected_span(p, q);
    ensure(r.span() == want, || format!("span {} expected {want}", r.span()))?;
    Ok(Outcome::Pass(details(vec![
        ("y_convention", json!(r.y_convention.to_string())),
        ("span", json!(r.span())),
        ("degenerate", json!(r.is_degenerate())),
        ("constant", json!(constant_value(&r).map(|c| c.to_string()))),
    ])))
}

fn symmetries(p: i64, q: u32) -> Check {
    let r = build_res(p, q).map_err(text)?;
    let s = check_symmetries(&r).map_err(text)?;
    Ok(Outcome::Pass(details(vec![
        ("inverse", json!(s.inverse_invariant)),
        ("negation", json!(s.negation_invariant)),
        ("negation_expected", json!(s.negation_expected)),
        ("reflection", json!(s.reflection_invariant)),
        ("conjugation", json!(s.conjugation_invariant)),
    ])))
}

fn roots(p: i64, q: u32, settings: &Settings) -> Check {
    let data = root_data(p, q, settings).map_err(text)?;
    let Some(all) = &data.all else {
        return Ok(Outcome::Pass(details(vec![
            ("degenerate", json!(true)),
            ("constant", json!(constant_value(&data.res).map(|c| c.to_string()))),
            ("nontrivial_distinct", json!(0)),
        ])));
    };
    let odd = p.rem_euclid(2) == 1;
    let orders = trivial_root_orders(&data.res).map_err(text)?;
    let want = expected_trivial_orders(p, q);
    ensure(orders == want, || format!("trivial root orders {orders:?}, expected {want:?}"))?;
    let nt = RootSet { roots: data.nontrivial.clone(), ..all.clone() };
    let bound = nontrivial_root_bound(p, q).map_err(text)?;
    let n = nt.distinct() as u64;
    if odd {
        ensure(n == bound, || format!("{n} distinct nontrivial roots, expected {bound}"))?;
        ensure(nt.all_simple(), || "a nontrivial root is not simple".into())?;
        let sep = nt.min_separation().unwrap_or(f64::INFINITY);
        ensure(sep > SEPARATION_TOL, || format!("roots only {sep:e} apart"))?;
    } else {
        ensure(n <= bound, || format!("{n} distinct nontrivial roots exceed the bound {bound}"))?;
    }
    let report = classify(&nt, p, q).map_err(text)?;
    if odd {
        let gap = report.min_unit_distance.unwrap_or(f64::INFINITY);
        ensure(gap > UNIT_CIRCLE_GAP, || format!("a nontrivial root lies {gap:e} from the unit circle"))?;
    }
    let inverse = nt.closure_defect(|z| z.inv());
    let conjugate = nt.closure_defect(|z| z.conj());
    ensure(inverse <= CLOSURE_TOL && conjugate <= CLOSURE_TOL, || {
        format!("root set not closed under inversion ({inverse:e}) or conjugation ({conjugate:e})")
    })?;
    let negation = nt.closure_defect(|z| -z);
    if !odd {
        ensure(negation <= CLOSURE_TOL, || format!("root set not closed under negation ({negation:e})"))?;
    }
    Ok(Outcome::Pass(details(vec![
        ("trivial_root_orders", json!([orders.0, orders.1])),
        ("total_roots", json!(all.total_multiplicity())),
        ("nontrivial_distinct", json!(n)),
        ("nontrivial_root_bound", json!(bound)),
        ("all_simple", json!(report.all_simple)),
        ("min_separation", json!(report.min_separation)),
        ("real", json!(report.real)),
        ("positive_real", json!(report.positive_real)),
        ("imaginary", json!(report.imaginary)),
        ("unit_circle", json!(report.unit_circle)),
        ("min_unit_distance", json!(report.min_unit_distance)),
        ("max_residual", json!(all.max_residual())),
    ])))
}

fn preps(p: i64, q: u32, settings: &Settings) -> Check {
    let reps = collect_preps(p, q, settings).map_err(text)?;
    let reducible = reps.iter().filter(|r| r.kind == PRepKind::Reducible).count();
    let irreducible = reps.len() - reducible;
    let mut d = details(vec![("reducible", json!(reducible)), ("irreducible", json!(irreducible))]);
    if p == 0 || p == 4 * q as i64 {
        d.insert("note".into(), json!("res is a unit multiple of a constant"));
        return Ok(Outcome::Skip("no irreducible p-reps for this slope", d));
    }
    let expected = prep_class_bound(p, q).map_err(text)?;
    let odd = p.rem_euclid(2) == 1;
    if odd {
        ensure(reps.len() as u64 == expected, || format!("{} p-rep classes, expected {expected}", reps.len()))?;
    }
    let max = |f: &dyn Fn(&whitehead_core::reps::PRepResiduals) -> f64| {
        reps.iter().map(|r| f(&r.residuals)).fold(0.0, f64::max)
    };
    let df = discrete_faithful_filling_residual(p, q);
    ensure(df > DISCRETE_FAITHFUL_GAP, || format!("a discrete faithful representation fills to within {df:e}"))?;
    insert_all(
        &mut d,
        vec![
            ("total", json!(reps.len())),
            ("expected", json!(expected)),
            ("count_verified", json!(odd)),
            ("max_relator", json!(max(&|r| r.relator_scaled))),
            ("max_filling", json!(max(&|r| r.filling_scaled))),
            ("max_trace_mu1", json!(max(&|r| r.trace_mu1))),
            ("max_h", json!(max(&|r| r.h.iter().copied().fold(0.0, f64::max)))),
            ("max_f", json!(max(&|r| r.f))),
            ("discrete_faithful_filling", json!(df)),
        ],
    );
    Ok(Outcome::Pass(d))
}

fn seifert(p: i64, q: u32) -> Check {
    if let Some(reason) = out_of_scope(p, q) {
        return Ok(Outcome::Skip(reason, Map::new()));
    }
    let qi = q as i64;
    let profile = seminorm_profile(p, qi).map_err(text)?;
    let norms = seifert_norms(p, qi).map_err(text)?;
    let mut per_sigma = Vec::new();
    for sigma in 1u8..=3 {
        let value = evaluate_norm(&profile, &Slope::integer(sigma as i64));
        let want = norms[sigma as usize - 1];
        ensure(value as i64 == want, || format!("norm of {sigma} is {value}, character count gives {want}"))?;
        match seifert_character_counts(p, qi, sigma) {
            Ok(c) => {
                ensure(c.norm_consistent != Some(false), || format!("character count for {sigma} disagrees"))?;
                per_sigma.push(json!({
                    "sigma": sigma,
                    "norm": value,
                    "nonabelian_characters": c.sl2.map(|s| s.total),
                }));
            }
            Err(SeminormError::Scope { reason, .. }) => {
                per_sigma.push(json!({ "sigma": sigma, "norm": value, "skipped": reason }));
            }
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(Outcome::Pass(details(vec![("norms", json!(norms)), ("per_sigma", Value::Array(per_sigma))])))
}

fn linear(p: i64, q: u32) -> Check {
    if let Some(reason) = out_of_scope(p, q) {
        return Ok(Outcome::Skip(reason, Map::new()));
    }
    let qi = q as i64;
    let sol = solve_linear_system(p, qi).map_err(text)?;
    let ints = sol.as_integers().ok_or_else(|| "solution is not integral".to_string())?;
    let profile = seminorm_profile(p, qi).map_err(text)?;
    let closed = [profile.a[0] as i64, profile.a[1] as i64, profile.a[2] as i64, profile.s_min as i64];
    ensure(ints == closed, || format!("system gives {ints:?}, closed form {closed:?}"))?;
    let meridian = evaluate_norm(&profile, &Slope::INFINITY);
    ensure(meridian == profile.s_min, || format!("norm at infinity {meridian} differs from s_min"))?;
    let detection = detected_slopes(p, qi).map_err(text)?;
    ensure(detection.consistent(), || "strongly detected slopes differ from the criterion".into())?;
    let (resolution, admissible) = match &sol.resolution {
        Resolution::Unique => ("unique", None),
        Resolution::ZArgument(l) => ("z-argument", Some(l.admissible())),
        Resolution::Reflection { ledger, .. } => ("reflection", Some(ledger.admissible())),
    };
    Ok(Outcome::Pass(details(vec![
        ("range", json!(sol.range.label())),
        ("rank", json!(sol.rank)),
        ("solution", json!(ints)),
        ("resolution", json!(resolution)),
        ("admissible_z", json!(admissible)),
        ("detected", json!(detection.detected)),
    ])))
}

fn cohomology(p: i64, q: u32, settings: &Settings) -> Check {
    let r = cohomology_checks(p, q, settings.roots).map_err(text)?;
    let det = r.max_det_relative_error.unwrap_or(0.0);
    ensure(det <= DET_TOL, || format!("det P relative error {det:e}"))?;
    let d1 = r.d1.map(|d| {
        json!({
            "kind": d.kind.label(),
            "max_residual": d.max_residual,
            "min_distance_to_res": d.min_distance_to_res,
        })
    });
    Ok(Outcome::Pass(details(vec![
        ("reducible_points", json!(r.reducible_points)),
        ("irreducible_points", json!(r.irreducible_points)),
        ("min_coboundary_gap", json!(r.min_coboundary_gap)),
        ("min_presentation_gap", json!(r.min_presentation_gap)),
        ("max_det_relative_error", json!(r.max_det_relative_error)),
        ("d1", json!(d1)),
        ("d2_min_distance", json!(r.d2.min_distance)),
    ])))
}

/// Runs one suite; `q` must already be validated.
pub fn run_suite(suite: Suite, p: i64, q: u32, settings: &Settings) -> SuiteEntry {
    let result = match suite {
        Suite::Resultant => resultant(p, q),
        Suite::Symmetries => symmetries(p, q),
        Suite::Roots => roots(p, q, settings),
        Suite::Preps => preps(p, q, settings),
        Suite::Seifert => seifert(p, q),
        Suite::Linear => linear(p, q),
        Suite::Cohomology => cohomology(p, q, settings),
    };
    let (status, details) = match result {
        Ok(Outcome::Pass(d)) => (Status::Pass, d),
        Ok(Outcome::Skip(reason, mut d)) => {
            d.insert("reason".into(), json!(reason));
            (Status::Skipped, d)
        }
        Err(e) => (Status::Fail, details(vec![("error", json!(e))])),
    };
    SuiteEntry { suite, p, q, status, details }
}

pub fn run_report(p: i64, q: u32, suites: &[Suite], settings: &Settings) -> VerificationReport {
    VerificationReport { p, q, entries: suites.iter().map(|&s| run_suite(s, p, q, settings)).collect() }
}

pub fn verify(p: i64, q: i64, suites: &[Suite], settings: &Settings) -> Result<Output, CliError> {
    let qu = validate_filling(p, q)?;
    let report = run_report(p, qu, suites, settings);
    let code = if report.passed() { 0 } else { 2 };
    Ok(Output { stdout: crate::json::render(report.to_json()), code })
}
