//! `norm`, `respq`, `roots` and `preps`.

use std::path::Path;

use num_complex::Complex64 as C;
use serde_json::{json, Map, Value};
use whitehead_core::reps::{prep_class_bound, reconstruct_prep, reducible_points, PRep, RepError};
use whitehead_core::respq::{build_res, constant_value, nontrivial_root_bound, trivial_root_orders, ResError, ResPoly};
use whitehead_core::roots::{classify, find_res_roots, nontrivial_roots, Root, RootError, RootSet};
use whitehead_core::seminorm::{evaluate_norm, seminorm_profile, SeminormError};
use whitehead_core::slopes::Slope;

use crate::json::{complex, envelope, laurent, render};
use crate::{validate_filling, write_file, CliError, Output, Settings};

pub(crate) fn seminorm_error(e: SeminormError) -> CliError {
    match e {
        SeminormError::Scope { .. } => CliError::Scope(e.to_string()),
        SeminormError::Slope(_) => CliError::Validation(e.to_string()),
        _ => CliError::Verification(e.to_string()),
    }
}

pub(crate) fn res_error(e: ResError) -> CliError {
    match e {
        ResError::InvalidFilling { .. } => CliError::Validation(e.to_string()),
        _ => CliError::Verification(e.to_string()),
    }
}

fn root_error(e: RootError) -> CliError {
    CliError::Verification(e.to_string())
}

fn rep_error(e: RepError) -> CliError {
    CliError::Verification(e.to_string())
}

pub fn norm(p: i64, q: i64, slope: Option<&str>) -> Result<Output, CliError> {
    let qu = validate_filling(p, q)?;
    let gamma =
        slope.map(|s| s.parse::<Slope>().map_err(|e| CliError::Validation(format!("slope {s:?}: {e}")))).transpose()?;
    let profile = seminorm_profile(p, q).map_err(seminorm_error)?;
    let mut out = envelope("norm", p, qu);
    out.insert("range".into(), json!(profile.range.label()));
    out.insert("beta".into(), json!(profile.beta.map(|b| b.to_string())));
    out.insert("a".into(), json!(profile.a));
    out.insert("s_min".into(), json!(profile.s_min));
    if let Some(g) = gamma {
        out.insert("slope".into(), json!(g.to_string()));
        out.insert("norm_value".into(), json!(evaluate_norm(&profile, &g)));
    }
    Ok(Output::ok(render(out)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyFormat {
    Json,
    Text,
}

pub fn respq(p: i64, q: i64, format: PolyFormat) -> Result<Output, CliError> {
    let qu = validate_filling(p, q)?;
    let r = build_res(p, qu).map_err(res_error)?;
    let f = r.normalized();
    if format == PolyFormat::Text {
        return Ok(Output::ok(format!("res_{{{p},{qu}}}(s) = {f}\n")));
    }
    let mut out = envelope("respq", p, qu);
    out.insert("y_convention".into(), json!(r.y_convention.to_string()));
    out.insert("resultant_verified".into(), json!(r.verified()));
    out.insert("degenerate".into(), json!(r.is_degenerate()));
    out.insert("span".into(), json!(r.span()));
    if let Some(c) = constant_value(&r) {
        out.insert("constant".into(), json!(c.to_string()));
    } else {
        let (one, minus_one) = trivial_root_orders(&r).map_err(res_error)?;
        out.insert("trivial_root_orders".into(), json!({ "1": one, "-1": minus_one }));
        out.insert("nontrivial_root_bound".into(), json!(nontrivial_root_bound(p, qu).map_err(res_error)?));
    }
    out.insert("polynomial".into(), laurent(&f));
    Ok(Output::ok(render(out)))
}

/// `res_{p,q}` with all of its roots and the nontrivial ones; no roots when it is constant.
pub struct RootData {
    pub res: ResPoly,
    pub all: Option<RootSet>,
    pub nontrivial: Vec<Root>,
}

pub fn root_data(p: i64, q: u32, settings: &Settings) -> Result<RootData, CliError> {
    let res = build_res(p, q).map_err(res_error)?;
    if res.is_degenerate() {
        return Ok(RootData { res, all: None, nontrivial: Vec::new() });
    }
    let all = find_res_roots(&res, settings.roots).map_err(root_error)?;
    let orders = trivial_root_orders(&res).map_err(res_error)?;
    let nontrivial = nontrivial_roots(&all, orders).map_err(root_error)?.roots;
    Ok(RootData { res, all: Some(all), nontrivial })
}

fn flags(r: &Root) -> Vec<&'static str> {
    let f = r.flags;
    [(f.trivial_pm1, "trivial"), (f.real, "real"), (f.imaginary, "imaginary"), (f.unit_circle, "unit_circle")]
        .into_iter()
        .filter(|x| x.0)
        .map(|x| x.1)
        .collect()
}

fn sorted(roots: &[Root]) -> Vec<Root> {
    let mut v = roots.to_vec();
    v.sort_by(|a, b| a.value.re.total_cmp(&b.value.re).then(a.value.im.total_cmp(&b.value.im)));
    v
}

pub fn roots(p: i64, q: i64, csv: Option<&Path>, settings: &Settings) -> Result<Output, CliError> {
    let qu = validate_filling(p, q)?;
    let data = root_data(p, qu, settings)?;
    let all = data.all.as_ref().map(|rs| sorted(&rs.roots)).unwrap_or_default();
    let mut out = envelope("roots", p, qu);
    out.insert("degenerate".into(), json!(data.res.is_degenerate()));
    out.insert("nontrivial_distinct".into(), json!(data.nontrivial.len()));
    if let Some(rs) = &data.all {
        let nt = RootSet { roots: data.nontrivial.clone(), ..rs.clone() };
        let report = classify(&nt, p, qu).map_err(root_error)?;
        out.insert("nontrivial_root_bound".into(), json!(nontrivial_root_bound(p, qu).map_err(res_error)?));
        out.insert("all_simple".into(), json!(report.all_simple));
        out.insert("min_separation".into(), json!(report.min_separation));
        out.insert("max_residual".into(), json!(rs.max_residual()));
        out.insert(
            "classification".into(),
            json!({
                "real": report.real,
                "positive_real": report.positive_real,
                "imaginary": report.imaginary,
                "unit_circle": report.unit_circle,
                "min_unit_distance": report.min_unit_distance,
            }),
        );
    }
    let list: Vec<Value> = all
        .iter()
        .map(|r| {
            json!({
                "re": r.value.re,
                "im": r.value.im,
                "multiplicity": r.multiplicity,
                "flags": flags(r),
                "residual": r.residual,
            })
        })
        .collect();
    out.insert("roots".into(), Value::Array(list));
    if let Some(path) = csv {
        let mut text = String::from("re,im,multiplicity,trivial\n");
        for r in &all {
            text.push_str(&format!("{},{},{},{}\n", r.value.re, r.value.im, r.multiplicity, r.flags.trivial_pm1));
        }
        write_file(path, &text)?;
        out.insert("csv".into(), json!(path.display().to_string()));
    }
    Ok(Output::ok(render(out)))
}

/// One root from each pair `{s, 1/s}`.
fn pair_representatives(roots: &[Root]) -> Vec<C> {
    roots
        .iter()
        .map(|r| r.value)
        .filter(|s| {
            let d = s.norm() - 1.0;
            d > 1e-9 || (d.abs() <= 1e-9 && s.im > 0.0)
        })
        .collect()
}

/// One p-rep per conjugacy class, reducible classes first.
pub fn collect_preps(p: i64, q: u32, settings: &Settings) -> Result<Vec<PRep>, CliError> {
    let data = root_data(p, q, settings)?;
    let reps = pair_representatives(&data.nontrivial);
    if 2 * reps.len() != data.nontrivial.len() {
        return Err(CliError::Verification(format!(
            "nontrivial roots of res_{{{p},{q}}} are not closed under s -> 1/s"
        )));
    }
    let mut out = Vec::new();
    for s in reducible_points(p).into_iter().chain(reps) {
        for sign in [1, -1] {
            out.push(reconstruct_prep(s, sign, p, q, &settings.reps).map_err(rep_error)?);
        }
    }
    Ok(out)
}

pub fn prep_json(r: &PRep) -> Value {
    let res = &r.residuals;
    json!({
        "kind": r.kind.label(),
        "s": complex(r.eigen.s),
        "t": complex(r.eigen.t),
        "u": complex(r.eigen.u),
        "c": complex(r.c),
        "trace_mu0": complex(r.trace_mu0()),
        "trace_lambda0": complex(r.lambda0().trace()),
        "residuals": {
            "relator": res.relator_scaled,
            "filling": res.filling_scaled,
            "lambda0_spellings": res.lambda0_spellings,
            "det": res.det,
            "trace_mu1": res.trace_mu1,
            "trace_lambda1": res.trace_lambda1,
            "h": res.h,
            "f": res.f,
        },
    })
}

pub fn preps(p: i64, q: i64, settings: &Settings) -> Result<Output, CliError> {
    let qu = validate_filling(p, q)?;
    let reps = collect_preps(p, qu, settings)?;
    let reducible = reps.iter().filter(|r| r.kind == whitehead_core::reps::PRepKind::Reducible).count();
    let irreducible = reps.len() - reducible;
    let expected = prep_class_bound(p, qu).ok();
    let odd = p.rem_euclid(2) == 1;
    if let (true, Some(e)) = (odd, expected) {
        if e != reps.len() as u64 {
            return Err(CliError::Verification(format!("found {} p-rep classes, expected {e}", reps.len())));
        }
    }
    let mut out = envelope("preps", p, qu);
    out.insert(
        "counts".into(),
        json!({
            "reducible": reducible,
            "irreducible": irreducible,
            "total": reps.len(),
            "expected": expected,
            "count_verified": odd && expected.is_some(),
        }),
    );
    out.insert("classes".into(), Value::Array(reps.iter().map(prep_json).collect()));
    Ok(Output::ok(render(out)))
}

pub(crate) fn insert_all(m: &mut Map<String, Value>, pairs: Vec<(&str, Value)>) {
    for (k, v) in pairs {
        m.insert(k.into(), v);
    }
}
