//! Simultaneous root finding (Aberth-Ehrlich), clustering, and the structural
//! checks on the roots of `res_{p,q}`.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::poly::LaurentPoly;
use crate::respq::{eval_closed, trivial_root_orders, ResError, ResPoly, YConvention};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTolerances {
    /// Relative distance below which approximations are merged into one cluster.
    pub cluster: f64,
    /// `|Im|` (resp. `|Re|`) threshold, relative to `1 + |s|`, for real (resp. imaginary) roots.
    pub classify: f64,
    pub unit_circle: f64,
    /// Bound on `|f(s)| / sum |c_k| |s|^k` after polishing.
    pub residual: f64,
    pub max_iterations: usize,
}

impl Default for RootTolerances {
    fn default() -> Self {
        RootTolerances { cluster: 1e-7, classify: 1e-8, unit_circle: 1e-8, residual: 1e-10, max_iterations: 1000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RootFlags {
    pub trivial_pm1: bool,
    pub real: bool,
    pub imaginary: bool,
    pub unit_circle: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub multiplicity: u32,
    pub flags: RootFlags,
    /// Relative residual `|f(s)| / sum |c_k| |s|^k`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Span of the polynomial the roots were computed from.
    pub source_span: u64,
    pub tolerances: RootTolerances,
    pub iterations: usize,
}

impl RootSet {
    pub fn total_multiplicity(&self) -> u64 {
        self.roots.iter().map(|r| r.multiplicity as u64).sum()
    }

    pub fn distinct(&self) -> usize {
        self.roots.len()
    }

    pub fn max_residual(&self) -> f64 {
        self.roots.iter().map(|r| r.residual).fold(0.0, f64::max)
    }

    pub fn all_simple(&self) -> bool {
        self.roots.iter().all(|r| r.multiplicity == 1)
    }

    /// Smallest pairwise distance between cluster centres, `None` for fewer than two roots.
    pub fn min_separation(&self) -> Option<f64> {
        let mut best: Option<f64> = None;
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                let d = (a.value - b.value).norm();
                best = Some(best.map_or(d, |x| x.min(d)));
            }
        }
        best
    }

    /// Largest distance from a root to the nearest root of the transformed set.
    pub fn closure_defect<F: Fn(Complex64) -> Complex64>(&self, f: F) -> f64 {
        self.roots
            .iter()
            .map(|r| {
                let w = f(r.value);
                self.roots.iter().map(|o| (o.value - w).norm()).fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RootError {
    ZeroPolynomial,
    ConvergenceFailure { iterations: usize, unconverged: usize, max_correction: f64, worst: Complex64 },
    ResidualTooLarge { root: Complex64, residual: f64 },
    TrivialRootMismatch { at: i8, expected: u32, found: u32 },
    PropertyViolation { property: &'static str, detail: &'static str, root: Option<Complex64> },
    Res(ResError),
}

impl fmt::Display for RootError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootError::ZeroPolynomial => f.write_str("cannot find roots of the zero polynomial"),
            RootError::ConvergenceFailure { iterations, unconverged, max_correction, worst } => write!(
                f,
                "no convergence after {iterations} iterations ({unconverged} roots moving near {worst}, last correction {max_correction:e})"
            ),
            RootError::ResidualTooLarge { root, residual } => {
                write!(f, "residual {residual:e} at root {root}")
            }
            RootError::TrivialRootMismatch { at, expected, found } => {
                write!(f, "root {at} has multiplicity {found}, expected {expected}")
            }
            RootError::PropertyViolation { property, detail, root } => match root {
                Some(z) => write!(f, "{property}: {detail} (root {z})"),
                None => write!(f, "{property}: {detail}"),
            },
            RootError::Res(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RootError {}

impl From<ResError> for RootError {
    fn from(e: ResError) -> Self {
        RootError::Res(e)
    }
}

/// A polynomial of known degree that can report its logarithmic derivative `P'/P`.
pub trait RootTarget {
    fn degree(&self) -> usize;
    fn log_derivative(&self, z: Complex64) -> Complex64;
    /// Relative backward error of `P(z) = 0`; used as a stopping test.
    fn residual(&self, z: Complex64) -> f64;
    fn initial_radius(&self) -> f64;
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let r = z.norm();
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    let mut scale = 0.0;
    for ck in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + ck;
        scale = scale * r + ck.norm();
    }
    (p, dp, scale)
}

/// Dense ordinary polynomial `sum c[k] z^k`.
#[derive(Debug, Clone)]
pub struct HornerTarget {
    coeffs: Vec<Complex64>,
    reversed: Vec<Complex64>,
}

impl HornerTarget {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut reversed = coeffs.clone();
        reversed.reverse();
        HornerTarget { coeffs, reversed }
    }

    /// Shifts the lowest exponent to zero.
    pub fn from_laurent(f: &LaurentPoly<Complex64>) -> Self {
        let lo = f.mindeg().unwrap_or(0);
        let n = f.span() as usize;
        let mut c = vec![Complex64::zero(); n + 1];
        for (e, v) in f.terms() {
            c[(e - lo) as usize] = *v;
        }
        Self::new(c)
    }
}

impl RootTarget for HornerTarget {
    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn log_derivative(&self, z: Complex64) -> Complex64 {
        let n = self.degree() as f64;
        if z.norm() <= 1.0 {
            let (p, dp, _) = horner(&self.coeffs, z);
            dp / p
        } else {
            let w = z.inv();
            let (q, dq, _) = horner(&self.reversed, w);
            (Complex64::new(n, 0.0) - w * dq / q) * w
        }
    }

    fn residual(&self, z: Complex64) -> f64 {
        let (p, _, scale) = if z.norm() <= 1.0 { horner(&self.coeffs, z) } else { horner(&self.reversed, z.inv()) };
        if scale == 0.0 {
            0.0
        } else {
            p.norm() / scale
        }
    }

    fn initial_radius(&self) -> f64 {
        let n = self.degree();
        let a0 = self.coeffs[0].norm();
        let an = self.coeffs[n].norm();
        if n == 0 || a0 == 0.0 || an == 0.0 {
            1.0
        } else {
            (a0 / an).powf(1.0 / n as f64)
        }
    }
}

/// `s^m res_{p,q}(s)` evaluated through the closed form and Chebyshev recurrences.
#[derive(Debug, Clone)]
pub struct ResTarget {
    p: i64,
    q: u32,
    conv: YConvention,
    shift: i64,
    degree: usize,
    fallback: HornerTarget,
}

impl ResTarget {
    pub fn new(r: &ResPoly) -> Self {
        let f = r.closed_form.to_complex();
        ResTarget {
            p: r.p,
            q: r.q,
            conv: r.y_convention,
            shift: -f.mindeg().unwrap_or(0),
            degree: f.span() as usize,
            fallback: HornerTarget::from_laurent(&f),
        }
    }

    fn structured(&self, z: Complex64) -> bool {
        z.norm().ln().abs() * (self.shift.unsigned_abs() as f64 + 4.0) < 600.0
    }
}

impl RootTarget for ResTarget {
    fn degree(&self) -> usize {
        self.degree
    }

    fn log_derivative(&self, z: Complex64) -> Complex64 {
        if !self.structured(z) {
            return self.fallback.log_derivative(z);
        }
        let (v, d) = eval_closed(self.p, self.q, self.conv, z);
        d / v + (self.shift as f64) / z
    }

    fn residual(&self, z: Complex64) -> f64 {
        if !self.structured(z) {
            return self.fallback.residual(z);
        }
        let (v, _) = eval_closed(self.p, self.q, self.conv, z);
        let e = self.p - 2 * self.q as i64;
        let (y, _) = self.conv.eval(z);
        let (t, _) = crate::poly::chebyshev_t_u_eval(self.q, y);
        let scale = z.norm().powi(e as i32) + z.norm().powi(-e as i32) + 2.0 * t.norm();
        v.norm() / scale
    }

    fn initial_radius(&self) -> f64 {
        1.0
    }
}

/// Removes known roots `sigma` with multiplicity `k` from the Newton correction.
#[derive(Debug, Clone)]
pub struct Deflated<T> {
    inner: T,
    known: Vec<(Complex64, u32)>,
}

impl<T: RootTarget> Deflated<T> {
    pub fn new(inner: T, known: Vec<(Complex64, u32)>) -> Self {
        Deflated { inner, known }
    }
}

impl<T: RootTarget> RootTarget for Deflated<T> {
    fn degree(&self) -> usize {
        let removed: u32 = self.known.iter().map(|k| k.1).sum();
        self.inner.degree() - removed as usize
    }

    fn log_derivative(&self, z: Complex64) -> Complex64 {
        let mut logd = self.inner.log_derivative(z);
        for (sigma, k) in &self.known {
            logd -= (z - sigma).inv() * (*k as f64);
        }
        logd
    }

    fn residual(&self, z: Complex64) -> f64 {
        self.inner.residual(z)
    }

    fn initial_radius(&self) -> f64 {
        self.inner.initial_radius()
    }
}

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;

fn initial_points(n: usize, radius: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| {
            let phase = 2.0 * PI * (k as f64) / (n as f64) + 0.5 * GOLDEN_ANGLE / (n as f64);
            let wobble = 1.0 + 0.05 * ((k as f64 * GOLDEN_ANGLE).sin());
            Complex64::from_polar(radius * wobble, phase)
        })
        .collect()
}

/// Aberth-Ehrlich iteration followed by Newton polishing. Returns `(roots, iterations)`.
pub fn aberth<T: RootTarget>(target: &T, max_iterations: usize) -> Result<(Vec<Complex64>, usize), RootError> {
    let n = target.degree();
    if n == 0 {
        return Ok((Vec::new(), 0));
    }
    let mut z = initial_points(n, target.initial_radius());
    let mut done = vec![false; n];
    let stop = 64.0 * f64::EPSILON * n as f64;
    let mut last_max = 0.0;
    for iter in 1..=max_iterations {
        last_max = 0.0f64;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let zi = z[i];
            let mut sum = Complex64::zero();
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    sum += (zi - zj).inv();
                }
            }
            let w = (target.log_derivative(zi) - sum).inv();
            if !w.is_finite() {
                // zi is an exact root
                done[i] = true;
                continue;
            }
            z[i] = zi - w;
            let size = w.norm();
            last_max = last_max.max(size);
            if size <= 1e-15 * z[i].norm().max(1e-300) || target.residual(z[i]) <= stop {
                done[i] = true;
            }
        }
        if done.iter().all(|d| *d) {
            polish(target, &mut z);
            return Ok((z, iter));
        }
    }
    let unconverged = done.iter().filter(|d| !**d).count();
    let worst = z.iter().zip(&done).find(|(_, d)| !**d).map_or(Complex64::zero(), |(v, _)| *v);
    Err(RootError::ConvergenceFailure { iterations: max_iterations, unconverged, max_correction: last_max, worst })
}

fn polish<T: RootTarget>(target: &T, z: &mut [Complex64]) {
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let step = target.log_derivative(*zi).inv();
            if !step.is_finite() {
                break;
            }
            let cand = *zi - step;
            if target.residual(cand) <= target.residual(*zi) {
                *zi = cand;
            } else {
                break;
            }
        }
    }
}

fn same_cluster(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0)
}

/// Connected components of the "closer than tolerance" graph, with multiplicity-weighted centres.
fn cluster(points: &[(Complex64, u32)], tol: f64) -> Vec<(Complex64, u32)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if same_cluster(points[i].0, points[j].0, tol) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[b] = a;
                }
            }
        }
    }
    let mut groups: Vec<(usize, Complex64, u32)> = Vec::new();
    for (i, &(z, m)) in points.iter().enumerate() {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => {
                g.1 += z * m as f64;
                g.2 += m;
            }
            None => groups.push((r, z * m as f64, m)),
        }
    }
    groups.into_iter().map(|(_, sum, m)| (sum / m as f64, m)).collect()
}

/// Real parts are rounded so that conjugate pairs always sort by imaginary part.
fn sort_key(z: Complex64) -> (f64, f64) {
    ((z.re * 1e9).round(), z.im)
}

fn flags(z: Complex64, tol: &RootTolerances) -> RootFlags {
    let scale = 1.0 + z.norm();
    RootFlags {
        trivial_pm1: same_cluster(z, Complex64::new(1.0, 0.0), tol.cluster)
            || same_cluster(z, Complex64::new(-1.0, 0.0), tol.cluster),
        real: z.im.abs() <= tol.classify * scale,
        imaginary: z.re.abs() <= tol.classify * scale,
        unit_circle: (z.norm() - 1.0).abs() <= tol.unit_circle,
    }
}

fn assemble<R: Fn(Complex64) -> f64>(
    points: &[(Complex64, u32)],
    source_span: u64,
    tol: RootTolerances,
    iterations: usize,
    residual: R,
) -> Result<RootSet, RootError> {
    let mut roots: Vec<Root> = cluster(points, tol.cluster)
        .into_iter()
        .map(|(value, multiplicity)| Root { value, multiplicity, flags: flags(value, &tol), residual: residual(value) })
        .collect();
    roots.sort_by(|a, b| sort_key(a.value).partial_cmp(&sort_key(b.value)).unwrap_or(Ordering::Equal));
    for r in &roots {
        // a cluster centre of a multiple root only satisfies f = 0 to about eps^(1/m)
        let allowed = if r.multiplicity == 1 { tol.residual } else { tol.residual.sqrt() };
        if r.residual.is_nan() || r.residual > allowed {
            return Err(RootError::ResidualTooLarge { root: r.value, residual: r.residual });
        }
    }
    Ok(RootSet { roots, source_span, tolerances: tol, iterations })
}

/// All roots of a numeric Laurent polynomial, clustered by multiplicity.
pub fn find_roots(f: &LaurentPoly<Complex64>, tol: RootTolerances) -> Result<RootSet, RootError> {
    if f.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    let target = HornerTarget::from_laurent(f);
    let (z, iterations) = aberth(&target, tol.max_iterations)?;
    let points: Vec<(Complex64, u32)> = z.into_iter().map(|v| (v, 1)).collect();
    assemble(&points, f.span(), tol, iterations, |s| f.eval(s).norm() / f.abs_eval(s))
}

/// Roots of `res_{p,q}`: exact trivial roots are deflated first, the rest found
/// with the closed-form evaluator.
pub fn find_res_roots(r: &ResPoly, tol: RootTolerances) -> Result<RootSet, RootError> {
    if r.is_degenerate() {
        return Ok(RootSet { roots: Vec::new(), source_span: 0, tolerances: tol, iterations: 0 });
    }
    let (kp, km) = trivial_root_orders(r)?;
    let one = Complex64::new(1.0, 0.0);
    let mut known = Vec::new();
    if kp > 0 {
        known.push((one, kp));
    }
    if km > 0 {
        known.push((-one, km));
    }
    let target = Deflated::new(ResTarget::new(r), known.clone());
    let (z, iterations) = aberth(&target, tol.max_iterations)?;
    let mut points: Vec<(Complex64, u32)> = z.into_iter().map(|v| (v, 1)).collect();
    points.extend(known);
    let f = r.closed_form.to_complex();
    let (p, q, conv) = (r.p, r.q, r.y_convention);
    assemble(&points, f.span(), tol, iterations, |s| {
        let trivial = (s - one).norm() == 0.0 || (s + one).norm() == 0.0;
        if trivial {
            f.eval(s).norm() / f.abs_eval(s)
        } else {
            eval_closed(p, q, conv, s).0.norm() / f.abs_eval(s)
        }
    })
}

/// Drops the clusters at `+-1`, checking their multiplicities against `expected = (at +1, at -1)`.
pub fn nontrivial_roots(rs: &RootSet, expected: (u32, u32)) -> Result<RootSet, RootError> {
    let tol = rs.tolerances.cluster;
    let mut found = (0u32, 0u32);
    let mut kept = Vec::new();
    for r in &rs.roots {
        if same_cluster(r.value, Complex64::new(1.0, 0.0), tol) {
            found.0 += r.multiplicity;
        } else if same_cluster(r.value, Complex64::new(-1.0, 0.0), tol) {
            found.1 += r.multiplicity;
        } else {
            kept.push(*r);
        }
    }
    if found.0 != expected.0 {
        return Err(RootError::TrivialRootMismatch { at: 1, expected: expected.0, found: found.0 });
    }
    if found.1 != expected.1 {
        return Err(RootError::TrivialRootMismatch { at: -1, expected: expected.1, found: found.1 });
    }
    Ok(RootSet { roots: kept, ..rs.clone() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassificationReport {
    pub distinct: usize,
    pub real: usize,
    pub positive_real: usize,
    pub imaginary: usize,
    pub unit_circle: usize,
    pub min_unit_distance: Option<f64>,
    pub all_simple: bool,
    pub min_separation: Option<f64>,
}

fn violation(property: &'static str, detail: &'static str, root: Option<Complex64>) -> RootError {
    RootError::PropertyViolation { property, detail, root }
}

/// Counts real, imaginary and unit-circle roots among the nontrivial roots of
/// `res_{p,q}` and checks them against the known counts.
pub fn classify(rs: &RootSet, p: i64, q: u32) -> Result<ClassificationReport, RootError> {
    let count = |f: fn(&Root) -> bool| rs.roots.iter().filter(|r| f(r)).count();
    let report = ClassificationReport {
        distinct: rs.roots.len(),
        real: count(|r| r.flags.real),
        positive_real: count(|r| r.flags.real && r.value.re > 0.0),
        imaginary: count(|r| r.flags.imaginary),
        unit_circle: count(|r| r.flags.unit_circle),
        min_unit_distance: rs.roots.iter().map(|r| (r.value.norm() - 1.0).abs()).reduce(f64::min),
        all_simple: rs.all_simple(),
        min_separation: rs.min_separation(),
    };
    if let Some(r) = rs.roots.iter().find(|r| r.flags.trivial_pm1) {
        return Err(violation("trivial roots", "root at +-1 left in the nontrivial set", Some(r.value)));
    }
    let qi = q as i64;
    let degenerate = p == 0 || p == 4 * qi;
    if degenerate {
        if !rs.roots.is_empty() {
            return Err(violation("degenerate filling", "constant res has roots", None));
        }
        return Ok(report);
    }
    let outer = p < 0 || p > 4 * qi;
    let odd = p.rem_euclid(2) == 1;
    let real_root = || rs.roots.iter().find(|r| r.flags.real).map(|r| r.value);
    if outer {
        if report.real != 0 {
            return Err(violation("real roots", "no nontrivial real roots expected", real_root()));
        }
    } else if odd {
        if report.real != 2 || report.positive_real != 2 {
            return Err(violation("real roots", "expected exactly two positive real roots", real_root()));
        }
    } else if report.real != 4 {
        return Err(violation("real roots", "expected exactly four real roots", real_root()));
    }
    let expected_imag = if outer && p.rem_euclid(4) == 0 { 4 } else { 0 };
    if report.imaginary != expected_imag {
        let root = rs.roots.iter().find(|r| r.flags.imaginary).map(|r| r.value);
        return Err(violation("imaginary roots", "imaginary root count differs", root));
    }
    if let Some(r) = rs.roots.iter().find(|r| r.flags.unit_circle) {
        return Err(violation("unit circle", "nontrivial root on the unit circle", Some(r.value)));
    }
    Ok(report)
}
