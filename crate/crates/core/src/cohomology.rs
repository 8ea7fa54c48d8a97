//! Twisted cohomology at p-reps: coboundary matrices, the presentation matrix
//! in the reducible case, `det P`, and the obstruction polynomials `d1`, `d2`.
//!
//! Cochains `u` are identified with `(x1, x2, x3, y1, y2, y3)` where
//! `u(mu0) = [[x1, x2], [x3, -x1]]` and `u(mu1) = [[y1, y2], [y3, -y1]]`, with
//! `mu0 = diag(s, 1/s)` and `mu1 = [[a, -(a-1)^2], [1, 2-a]]`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::poly::LaurentPoly;
use crate::reps::{partially_diagonal_solve, reducible_points};
use crate::respq::{build_res, trivial_root_orders, ResError};
use crate::roots::{find_res_roots, find_roots, nontrivial_roots, RootError, RootSet, RootTolerances};

type C = Complex64;

const ONE: C = C { re: 1.0, im: 0.0 };

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOL: f64 = 1e-8;
pub const DET_TOL: f64 = 1e-8;
/// Root sets closer than this are reported as possibly sharing a root.
pub const COMMON_ROOT_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Coboundary,
    ReduciblePresentation,
    /// Reducible presentation plus the row of `tr(u(mu1) rho(mu1))`.
    ReducibleP,
    General,
}

impl MatrixKind {
    pub fn label(self) -> &'static str {
        match self {
            MatrixKind::Coboundary => "coboundary",
            MatrixKind::ReduciblePresentation => "reducible presentation",
            MatrixKind::ReducibleP => "reducible P",
            MatrixKind::General => "matrix",
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NumMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C>,
    pub kind: MatrixKind,
}

impl NumMatrix {
    pub fn from_rows(kind: MatrixKind, rows: Vec<Vec<C>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        NumMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect(), kind }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[C] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn with_row(&self, kind: MatrixKind, row: Vec<C>) -> Self {
        assert_eq!(row.len(), self.cols);
        let mut data = self.data.clone();
        data.extend(row);
        NumMatrix { rows: self.rows + 1, cols: self.cols, data, kind }
    }

    /// Product of the Euclidean row norms, an upper bound for `|det|`.
    pub fn hadamard_bound(&self) -> f64 {
        (0..self.rows).map(|i| self.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).product()
    }

    /// Singular values in decreasing order, by one-sided Jacobi rotations.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut cols: Vec<Vec<C>> = if self.rows >= self.cols {
            (0..self.cols).map(|j| (0..self.rows).map(|i| self.get(i, j)).collect()).collect()
        } else {
            (0..self.rows).map(|i| self.row(i).iter().map(|z| z.conj()).collect()).collect()
        };
        let n = cols.len();
        let norm2 = |v: &[C]| v.iter().map(|z| z.norm_sqr()).sum::<f64>();
        for _ in 0..100 {
            let mut rotated = false;
            for i in 0..n {
                for j in i + 1..n {
                    let alpha = norm2(&cols[i]);
                    let beta = norm2(&cols[j]);
                    let gamma: C = cols[i].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                    let g = gamma.norm();
                    if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let phase = (gamma / g).conj();
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for k in 0..cols[i].len() {
                        let x = cols[i][k];
                        let y = cols[j][k] * phase;
                        cols[i][k] = x * c - y * s;
                        cols[j][k] = x * s + y * c;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<f64> = cols.iter().map(|c| norm2(c).sqrt()).collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Number of singular values above `rel` times the largest.
    pub fn rank(&self, rel: f64) -> usize {
        rank_of(&self.singular_values(), rel)
    }

    /// LU with partial pivoting; `None` for a non-square matrix.
    pub fn determinant(&self) -> Option<C> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = ONE;
        for k in 0..n {
            let piv = (k..n).max_by(|&a, &b| m[a * n + k].norm().total_cmp(&m[b * n + k].norm()))?;
            if m[piv * n + k].is_zero() {
                return Some(C::zero());
            }
            if piv != k {
                for j in 0..n {
                    m.swap(k * n + j, piv * n + j);
                }
                det = -det;
            }
            let d = m[k * n + k];
            det *= d;
            for i in k + 1..n {
                let f = m[i * n + k] / d;
                for j in k + 1..n {
                    let v = m[k * n + j];
                    m[i * n + j] -= f * v;
                }
            }
        }
        Some(det)
    }
}

impl fmt::Display for NumMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<alloc::string::String> =
                self.row(i).iter().map(|z| alloc::format!("{:.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

fn rank_of(sv: &[f64], rel: f64) -> usize {
    match sv.first() {
        Some(&top) if top > 0.0 => sv.iter().filter(|&&x| x > rel * top).count(),
        _ => 0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CohomologyError {
    InvalidParameter { what: &'static str, value: C },
    RankMismatch { matrix: MatrixKind, rank: usize, expected: usize, singular_values: Vec<f64> },
    ClosedFormMismatch { s: C, numeric: C, closed_form: C, relative: f64 },
    DegenerateCase { p: i64, q: u32 },
    ClassificationMismatch { p: i64, q: u32, expected: D1RootKind, roots: [C; 4] },
    CommonRootSuspected { p: i64, q: u32, polynomial: &'static str, distance: f64, root: C, res_root: C },
    Res(ResError),
    Roots(RootError),
}

impl fmt::Display for CohomologyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomologyError::InvalidParameter { what, value } => write!(f, "invalid parameter {value}: {what}"),
            CohomologyError::RankMismatch { matrix, rank, expected, .. } => {
                write!(f, "{} matrix has rank {rank}, expected {expected}", matrix.label())
            }
            CohomologyError::ClosedFormMismatch { s, numeric, closed_form, relative } => write!(
                f,
                "det P at s = {s}: numeric {numeric}, closed form {closed_form} (relative error {relative:e})"
            ),
            CohomologyError::DegenerateCase { p, q } => write!(f, "d1 vanishes identically for {p}/{q}"),
            CohomologyError::ClassificationMismatch { p, q, expected, .. } => {
                write!(f, "roots of d1 for {p}/{q} are not all {}", expected.label())
            }
            CohomologyError::CommonRootSuspected { p, q, polynomial, distance, root, res_root } => {
                write!(f, "{polynomial} root {root} lies within {distance:e} of the res_{{{p},{q}}} root {res_root}")
            }
            CohomologyError::Res(e) => write!(f, "{e}"),
            CohomologyError::Roots(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CohomologyError {}

impl From<ResError> for CohomologyError {
    fn from(e: ResError) -> Self {
        CohomologyError::Res(e)
    }
}

impl From<RootError> for CohomologyError {
    fn from(e: RootError) -> Self {
        CohomologyError::Roots(e)
    }
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

/// Coordinates of the coboundaries `u_E(g) = E - g E g^{-1}` for `E = e, h, f`.
pub fn coboundary_matrix(s: C, a: C) -> NumMatrix {
    let w = a - ONE;
    let w2 = w * w;
    NumMatrix::from_rows(
        MatrixKind::Coboundary,
        vec![
            vec![C::zero(), ONE - s * s, C::zero(), a, ONE - a * a, ONE],
            vec![C::zero(), C::zero(), C::zero(), w2 * 2.0, -a * w2 * 2.0, (a - 2.0) * 2.0],
            vec![C::zero(), C::zero(), ONE - s.inv() * s.inv(), (re(2.0) - a) * w2, w2 * w2, -w * (a - 3.0)],
        ],
    )
}

/// The row of the linear form `u -> tr(u(mu1) rho(mu1)) = 2(a-1) y1 + y2 - (a-1)^2 y3`.
pub fn trace_row(a: C) -> Vec<C> {
    let w = a - ONE;
    vec![C::zero(), C::zero(), C::zero(), w * 2.0, ONE, -w * w]
}

/// Coboundary rows at `a = 1`, the relator condition scaled by `s^-2`, and the
/// filling condition `(p/q) x1 + l1 = 0`. No preconditions are checked.
pub fn reducible_presentation_rows(s: C, p: i64, q: u32) -> NumMatrix {
    let z = C::zero();
    let s2 = s * s;
    let si2 = s2.inv();
    let w = s2 - ONE;
    let r = re(p as f64 / q as f64);
    NumMatrix::from_rows(
        MatrixKind::ReduciblePresentation,
        vec![
            vec![z, ONE - s2, z, ONE, z, ONE],
            vec![z, z, z, z, z, re(-2.0)],
            vec![z, z, ONE - si2, z, z, z],
            vec![z, -w * si2 * 2.0, z, -w * w * si2 * 2.0, w * w * (s2 * s2 - s2 - ONE) * si2 * si2, z],
            vec![r, z, z, z, (s2 * s2 - ONE) * si2, z],
        ],
    )
}

fn check_reducible_point(s: C, p: i64, q: u32) -> Result<(), CohomologyError> {
    if q == 0 {
        return Err(CohomologyError::InvalidParameter { what: "q must be positive", value: re(0.0) });
    }
    if (s - ONE).norm() < 1e-9 || (s + ONE).norm() < 1e-9 {
        return Err(CohomologyError::InvalidParameter { what: "s must differ from +-1", value: s });
    }
    if (s.powi(p as i32) - ONE).norm() > 1e-9 {
        return Err(CohomologyError::InvalidParameter { what: "s^p must equal 1", value: s });
    }
    Ok(())
}

/// Presentation matrix of `H^1` at the reducible p-rep with eigenvalue `s`;
/// its kernel is one-dimensional.
pub fn reducible_presentation_matrix(s: C, p: i64, q: u32) -> Result<NumMatrix, CohomologyError> {
    check_reducible_point(s, p, q)?;
    let m = reducible_presentation_rows(s, p, q);
    let sv = m.singular_values();
    let rank = rank_of(&sv, RANK_TOL);
    if rank != 5 {
        return Err(CohomologyError::RankMismatch {
            matrix: MatrixKind::ReduciblePresentation,
            rank,
            expected: 5,
            singular_values: sv,
        });
    }
    Ok(m)
}

pub fn reducible_p_matrix(s: C, p: i64, q: u32) -> NumMatrix {
    reducible_presentation_rows(s, p, q).with_row(MatrixKind::ReducibleP, trace_row(ONE))
}

/// `(4p/q) s^-4 (s^2-1)^2 (s^4-2s^2+2)`.
pub fn det_p_closed_form(s: C, p: i64, q: u32) -> C {
    let s2 = s * s;
    let w = s2 - ONE;
    re(4.0 * p as f64 / q as f64) * (s2 * s2).inv() * w * w * (s2 * s2 - s2 * 2.0 + 2.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetPReport {
    pub s: C,
    pub numeric: C,
    pub closed_form: C,
    /// `|numeric - closed|` over `|closed|`, floored at `1e-14` times Hadamard's bound.
    pub relative_error: f64,
}

pub fn det_p_reducible(s: C, p: i64, q: u32) -> Result<DetPReport, CohomologyError> {
    if s.is_zero() || q == 0 {
        return Err(CohomologyError::InvalidParameter { what: "need s != 0 and q > 0", value: s });
    }
    let m = reducible_p_matrix(s, p, q);
    let numeric = m.determinant().unwrap_or_else(C::zero);
    let closed_form = det_p_closed_form(s, p, q);
    let diff = (numeric - closed_form).norm();
    let scale = closed_form.norm().max(1e-14 * m.hadamard_bound());
    let relative_error = if diff == 0.0 { 0.0 } else { diff / scale };
    if relative_error > DET_TOL {
        return Err(CohomologyError::ClosedFormMismatch { s, numeric, closed_form, relative: relative_error });
    }
    Ok(DetPReport { s, numeric, closed_form, relative_error })
}

fn nonzero_p_term(p: i64, q: u32) -> Result<i64, CohomologyError> {
    let lead = p * (p - 4 * q as i64);
    if lead == 0 {
        return Err(CohomologyError::DegenerateCase { p, q });
    }
    Ok(lead)
}

/// `p(p-4q) s^4 + (-6p^2 + 24pq - 32q^2) s^2 + p(p-4q)`.
pub fn d1_poly(p: i64, q: u32) -> Result<LaurentPoly<BigInt>, CohomologyError> {
    let lead = nonzero_p_term(p, q)?;
    let q = q as i64;
    let mid = -6 * p * p + 24 * p * q - 32 * q * q;
    Ok(LaurentPoly::from_i64_terms([(0, lead), (2, mid), (4, lead)]))
}

/// The four roots `+-sqrt((A +- B) / (p(p-4q)))` with `A = 3(p-2q)^2 + 4q^2` and
/// `B = 2|p-2q| sqrt(2(p-2q)^2 + 8q^2)`.
pub fn d1_roots(p: i64, q: u32) -> Result<[C; 4], CohomologyError> {
    let lead = nonzero_p_term(p, q)? as f64;
    let (pf, qf) = (p as f64, q as f64);
    let m = pf - 2.0 * qf;
    let a = 3.0 * m * m + 4.0 * qf * qf;
    let b = 2.0 * m.abs() * (2.0 * m * m + 8.0 * qf * qf).sqrt();
    // A - B = p^2 (p-4q)^2 / (A + B) avoids cancellation
    let plus = re((a + b) / lead).sqrt();
    let minus = re(lead / (a + b)).sqrt();
    Ok([plus, -plus, minus, -minus])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum D1RootKind {
    Real,
    Imaginary,
}

impl D1RootKind {
    pub fn label(self) -> &'static str {
        match self {
            D1RootKind::Real => "real",
            D1RootKind::Imaginary => "imaginary",
        }
    }

    /// Real for `p > 4q` or `p < 0`, imaginary for `0 < p < 4q`.
    pub fn expected(p: i64, q: u32) -> Option<D1RootKind> {
        let q = q as i64;
        if p > 4 * q || p < 0 {
            Some(D1RootKind::Real)
        } else if p > 0 && p < 4 * q {
            Some(D1RootKind::Imaginary)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D1Report {
    pub roots: [C; 4],
    pub kind: D1RootKind,
    /// Largest `|d1(s)| / sum |c_k| |s|^k` over the closed-form roots.
    pub max_residual: f64,
    pub min_distance_to_res: Option<f64>,
}

fn min_distance(roots: &[C], rs: &RootSet) -> Option<(f64, C, C)> {
    let mut best: Option<(f64, C, C)> = None;
    for &z in roots {
        for r in &rs.roots {
            let d = (z - r.value).norm();
            if best.is_none_or(|b| d < b.0) {
                best = Some((d, z, r.value));
            }
        }
    }
    best
}

fn res_roots(p: i64, q: u32, tol: RootTolerances) -> Result<RootSet, CohomologyError> {
    Ok(find_res_roots(&build_res(p, q)?, tol)?)
}

fn d1_check_with(p: i64, q: u32, rs: &RootSet) -> Result<D1Report, CohomologyError> {
    let roots = d1_roots(p, q)?;
    let poly = d1_poly(p, q)?.to_complex();
    let max_residual = roots
        .iter()
        .map(|&z| {
            let scale: f64 = poly.terms().map(|(e, c)| c.norm() * z.norm().powi(e as i32)).sum();
            poly.eval(z).norm() / scale
        })
        .fold(0.0, f64::max);
    let expected = D1RootKind::expected(p, q).ok_or(CohomologyError::DegenerateCase { p, q })?;
    let fits = |z: &C| match expected {
        D1RootKind::Real => z.im.abs() <= 1e-12 * (1.0 + z.norm()),
        D1RootKind::Imaginary => z.re.abs() <= 1e-12 * (1.0 + z.norm()),
    };
    if !roots.iter().all(fits) || max_residual > 1e-12 {
        return Err(CohomologyError::ClassificationMismatch { p, q, expected, roots });
    }
    let near = min_distance(&roots, rs);
    if let Some((distance, root, res_root)) = near {
        if distance <= COMMON_ROOT_TOL {
            return Err(CohomologyError::CommonRootSuspected { p, q, polynomial: "d1", distance, root, res_root });
        }
    }
    Ok(D1Report { roots, kind: expected, max_residual, min_distance_to_res: near.map(|n| n.0) })
}

/// Checks the closed-form roots of `d1`, their classification, and their
/// distance from the roots of `res_{p,q}`.
pub fn d1_check(p: i64, q: u32, tol: RootTolerances) -> Result<D1Report, CohomologyError> {
    let rs = res_roots(p, q, tol)?;
    d1_check_with(p, q, &rs)
}

/// Coefficients of `s^0, s^2, ..., s^40` in `d2`.
pub const D2_COEFFS: [i64; 21] = [
    11, -164, 1097, -4582, 14586, -41808, 115452, -286072, 595850, -1027864, 1466502, -1708564, 1598312, -1182928,
    683740, -304088, 101875, -24868, 4185, -438, 22,
];

pub fn d2_poly() -> LaurentPoly<BigInt> {
    LaurentPoly::from_i64_terms(D2_COEFFS.iter().enumerate().map(|(k, &c)| (2 * k as i64, c)))
}

pub fn d2_roots(tol: RootTolerances) -> Result<RootSet, CohomologyError> {
    Ok(find_roots(&d2_poly().to_complex(), tol)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct D2Report {
    pub d2_distinct: usize,
    pub res_distinct: usize,
    /// `None` when `res_{p,q}` has no roots.
    pub min_distance: Option<f64>,
    pub closest: Option<(C, C)>,
}

fn d2_check_with(p: i64, q: u32, d2: &RootSet, rs: &RootSet) -> Result<D2Report, CohomologyError> {
    let values: Vec<C> = d2.roots.iter().map(|r| r.value).collect();
    let near = min_distance(&values, rs);
    if let Some((distance, root, res_root)) = near {
        if distance <= COMMON_ROOT_TOL {
            return Err(CohomologyError::CommonRootSuspected { p, q, polynomial: "d2", distance, root, res_root });
        }
    }
    Ok(D2Report {
        d2_distinct: d2.roots.len(),
        res_distinct: rs.roots.len(),
        min_distance: near.map(|n| n.0),
        closest: near.map(|n| (n.1, n.2)),
    })
}

/// Minimum distance between the roots of `d2` and those of `res_{p,q}`.
pub fn d2_check(p: i64, q: u32, tol: RootTolerances) -> Result<D2Report, CohomologyError> {
    let rs = res_roots(p, q, tol)?;
    d2_check_with(p, q, &d2_roots(tol)?, &rs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyReport {
    pub p: i64,
    pub q: u32,
    pub reducible_points: usize,
    pub irreducible_points: usize,
    /// Smallest `sigma_3 / sigma_1` of the coboundary matrix over all p-reps.
    pub min_coboundary_gap: Option<f64>,
    /// Smallest `sigma_5 / sigma_1` of the reducible presentation matrix.
    pub min_presentation_gap: Option<f64>,
    pub max_det_relative_error: Option<f64>,
    pub d1: Option<D1Report>,
    pub d2: D2Report,
}

fn gap(m: &NumMatrix, expected: usize) -> Result<f64, CohomologyError> {
    let sv = m.singular_values();
    let rank = rank_of(&sv, RANK_TOL);
    if rank != expected {
        return Err(CohomologyError::RankMismatch { matrix: m.kind, rank, expected, singular_values: sv });
    }
    Ok(sv[expected - 1] / sv[0])
}

fn fold_min(acc: Option<f64>, x: f64) -> Option<f64> {
    Some(acc.map_or(x, |a| a.min(x)))
}

/// Runs every check of this module at all p-reps of `W(p/q)`: coboundary rank 3,
/// reducible presentation rank 5, `det P` against its closed form, and the `d1`,
/// `d2` root separation from `res_{p,q}`.
pub fn cohomology_checks(p: i64, q: u32, tol: RootTolerances) -> Result<CohomologyReport, CohomologyError> {
    if q == 0 {
        return Err(CohomologyError::InvalidParameter { what: "q must be positive", value: re(0.0) });
    }
    let res = build_res(p, q)?;
    let rs = find_res_roots(&res, tol)?;
    let nontrivial =
        if res.is_degenerate() { Vec::new() } else { nontrivial_roots(&rs, trivial_root_orders(&res)?)?.roots };
    let mut report = CohomologyReport {
        p,
        q,
        reducible_points: 0,
        irreducible_points: 0,
        min_coboundary_gap: None,
        min_presentation_gap: None,
        max_det_relative_error: None,
        d1: None,
        d2: d2_check_with(p, q, &d2_roots(tol)?, &rs)?,
    };
    for s in reducible_points(p) {
        let g = gap(&coboundary_matrix(s, ONE), 3)?;
        report.min_coboundary_gap = fold_min(report.min_coboundary_gap, g);
        let pres = reducible_presentation_matrix(s, p, q)?;
        report.min_presentation_gap = fold_min(report.min_presentation_gap, gap(&pres, 5)?);
        let det = det_p_reducible(s, p, q)?;
        report.max_det_relative_error = Some(report.max_det_relative_error.unwrap_or(0.0).max(det.relative_error));
        report.reducible_points += 1;
    }
    for r in &nontrivial {
        let a = partially_diagonal_solve(r.value, p, q);
        let g = gap(&coboundary_matrix(r.value, a), 3)?;
        report.min_coboundary_gap = fold_min(report.min_coboundary_gap, g);
        report.irreducible_points += 1;
    }
    if D1RootKind::expected(p, q).is_some() {
        report.d1 = Some(d1_check_with(p, q, &rs)?);
    }
    Ok(report)
}
