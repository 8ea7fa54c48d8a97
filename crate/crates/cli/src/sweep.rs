//! Parameter sweeps written as CSV, one row per coprime `(p, q)`.

use std::path::Path;

use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};
use whitehead_core::seminorm::seminorm_profile;
use whitehead_core::slopes::{classify_range, Slope};

use crate::json::{render, SCHEMA};
use crate::verify::{run_report, Status, Suite, VerificationReport};
use crate::{write_file, CliError, Output, Settings, MAX_PARAMETER};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepSpec {
    pub p_min: i64,
    pub p_max: i64,
    pub q_min: i64,
    pub q_max: i64,
    pub odd_only: bool,
    pub suites: Vec<Suite>,
}

impl SweepSpec {
    fn validate(&self) -> Result<(), CliError> {
        if self.q_min < 1 {
            return Err(CliError::Validation(format!("q-min must be positive, got {}", self.q_min)));
        }
        let big = [self.p_min, self.p_max, self.q_max].iter().any(|x| x.abs() > MAX_PARAMETER);
        if big {
            return Err(CliError::Validation(format!("bounds must not exceed {MAX_PARAMETER} in absolute value")));
        }
        Ok(())
    }

    /// Coprime pairs ordered by `p`, then `q`.
    pub fn cells(&self) -> Vec<(i64, u32)> {
        let mut out = Vec::new();
        for p in self.p_min..=self.p_max {
            if self.odd_only && p.rem_euclid(2) == 0 {
                continue;
            }
            for q in self.q_min.max(1)..=self.q_max {
                if p.gcd(&q) == 1 {
                    out.push((p, q as u32));
                }
            }
        }
        out
    }
}

const FIXED_COLUMNS: [&str; 10] =
    ["p", "q", "range", "a1", "a2", "a3", "s_min", "nontrivial_roots", "reducible", "irreducible"];

pub fn header(suites: &[Suite]) -> String {
    let mut cols: Vec<&str> = FIXED_COLUMNS.to_vec();
    cols.extend(suites.iter().map(|s| s.name()));
    cols.join(",")
}

fn detail(report: &VerificationReport, suite: Suite, key: &str) -> String {
    match report.entry(suite).and_then(|e| e.details.get(key)) {
        Some(Value::Number(n)) => n.to_string(),
        _ => String::new(),
    }
}

fn row(p: i64, q: u32, suites: &[Suite], settings: &Settings) -> (String, bool) {
    let report = run_report(p, q, suites, settings);
    let range = Slope::new(p, q as i64).map(|s| classify_range(&s).label()).unwrap_or("");
    let mut cells = vec![p.to_string(), q.to_string(), range.to_string()];
    match seminorm_profile(p, q as i64) {
        Ok(pr) => {
            cells.extend(pr.a.iter().map(|a| a.to_string()));
            cells.push(pr.s_min.to_string());
        }
        Err(_) => cells.extend(std::iter::repeat_n(String::new(), 4)),
    }
    cells.push(detail(&report, Suite::Roots, "nontrivial_distinct"));
    cells.push(detail(&report, Suite::Preps, "reducible"));
    cells.push(detail(&report, Suite::Preps, "irreducible"));
    cells.extend(report.entries.iter().map(|e| e.status.label().to_string()));
    (cells.join(","), report.count(Status::Fail) == 0)
}

/// The CSV for `spec`; cells run in parallel and rows keep the order of [`SweepSpec::cells`].
pub fn sweep_csv(spec: &SweepSpec, settings: &Settings) -> Result<(String, usize, usize), CliError> {
    spec.validate()?;
    let cells = spec.cells();
    let rows: Vec<(String, bool)> = cells.par_iter().map(|&(p, q)| row(p, q, &spec.suites, settings)).collect();
    let failures = rows.iter().filter(|r| !r.1).count();
    let mut csv = header(&spec.suites);
    csv.push('\n');
    for (r, _) in &rows {
        csv.push_str(r);
        csv.push('\n');
    }
    Ok((csv, rows.len(), failures))
}

pub fn sweep(spec: &SweepSpec, out: &Path, settings: &Settings) -> Result<Output, CliError> {
    let (csv, rows, failures) = sweep_csv(spec, settings)?;
    write_file(out, &csv)?;
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!("sweep"));
    m.insert("out".into(), json!(out.display().to_string()));
    m.insert("rows".into(), json!(rows));
    m.insert("failures".into(), json!(failures));
    Ok(Output { stdout: render(m), code: if failures == 0 { 0 } else { 2 } })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(p_min: i64, p_max: i64, q_max: i64) -> SweepSpec {
        SweepSpec { p_min, p_max, q_min: 1, q_max, odd_only: false, suites: vec![Suite::Resultant] }
    }

    #[test]
    fn cells_are_coprime_and_ordered() {
        let c = spec(-2, 2, 2).cells();
        assert_eq!(c, vec![(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 1), (1, 2), (2, 1)]);
        assert!(spec(3, 2, 4).cells().is_empty());
    }

    #[test]
    fn empty_range_is_header_only() {
        let (csv, rows, _) = sweep_csv(&spec(5, 4, 3), &Settings::default()).unwrap();
        assert_eq!(rows, 0);
        assert_eq!(csv, format!("{}\n", header(&[Suite::Resultant])));
    }

    #[test]
    fn bad_bounds() {
        let mut s = spec(1, 3, 2);
        s.q_min = 0;
        assert_eq!(sweep_csv(&s, &Settings::default()).unwrap_err().exit_code(), 1);
    }
}
