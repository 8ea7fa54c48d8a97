//! `SL(2, C)` matrices, words in the meridians, the eigenvalue variety, and
//! reconstruction of p-reps (representations sending `mu1` to a parabolic).

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Mul, Sub};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::Zero;

use crate::respq::{build_res, nontrivial_root_bound, trivial_root_orders, ResError};
use crate::roots::{find_res_roots, nontrivial_roots, RootError, RootTolerances};

type C = Complex64;

const ONE: C = C::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: C,
    pub b: C,
    pub c: C,
    pub d: C,
}

impl Mat2 {
    pub const fn new(a: C, b: C, c: C, d: C) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(ONE, C::zero(), C::zero(), ONE)
    }

    pub fn det(&self) -> C {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> C {
        self.a + self.d
    }

    /// Inverse assuming determinant one.
    pub fn sl_inverse(&self) -> Self {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn scale(&self, k: C) -> Self {
        Mat2::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()).sqrt()
    }

    /// Integer power by repeated squaring, negative powers through the `SL(2)` inverse.
    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.sl_inverse() } else { *self };
        let mut k = n.unsigned_abs();
        let mut acc = Mat2::identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    pub fn commutes_with(&self, other: &Mat2) -> f64 {
        (*self * *other - *other * *self).norm()
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    Mu0,
    Mu1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub exponent: i64,
}

/// A reduced word in `mu0`, `mu1`: adjacent letters always have distinct generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn empty() -> Self {
        GroupWord::default()
    }

    pub fn new<I: IntoIterator<Item = (Generator, i64)>>(letters: I) -> Self {
        let mut w = GroupWord::empty();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    pub fn push(&mut self, generator: Generator, exponent: i64) {
        if exponent == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.generator == generator {
                last.exponent += exponent;
                if last.exponent == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push(Letter { generator, exponent });
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GroupWord::new(self.letters.iter().rev().map(|l| (l.generator, -l.exponent)))
    }

    pub fn concat(&self, other: &GroupWord) -> Self {
        let mut w = self.clone();
        for l in &other.letters {
            w.push(l.generator, l.exponent);
        }
        w
    }

    pub fn power(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut w = GroupWord::empty();
        for _ in 0..n.unsigned_abs() {
            w = w.concat(&base);
        }
        w
    }

    /// Exponent sums `(mu0, mu1)`.
    pub fn exponent_sums(&self) -> (i64, i64) {
        self.letters.iter().fold((0, 0), |(a, b), l| match l.generator {
            Generator::Mu0 => (a + l.exponent, b),
            Generator::Mu1 => (a, b + l.exponent),
        })
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            let g = match l.generator {
                Generator::Mu0 => "m0",
                Generator::Mu1 => "m1",
            };
            if l.exponent == 1 {
                f.write_str(g)?;
            } else {
                write!(f, "{g}^{}", l.exponent)?;
            }
        }
        Ok(())
    }
}

use Generator::{Mu0, Mu1};

fn word(letters: &[(Generator, i64)]) -> GroupWord {
    GroupWord::new(letters.iter().copied())
}

/// Left side of the defining relation `w1 = w2`.
pub fn relator_lhs() -> GroupWord {
    word(&[(Mu0, 1), (Mu1, 1), (Mu0, -1), (Mu1, -1), (Mu0, -1), (Mu1, 1), (Mu0, 1), (Mu1, 1)])
}

pub fn relator_rhs() -> GroupWord {
    word(&[(Mu1, 1), (Mu0, 1), (Mu1, 1), (Mu0, -1), (Mu1, -1), (Mu0, -1), (Mu1, 1), (Mu0, 1)])
}

/// Longitude of the first component.
pub fn lambda0() -> GroupWord {
    word(&[(Mu0, 1), (Mu1, 1), (Mu0, 1), (Mu1, -1), (Mu0, -1), (Mu1, -1), (Mu0, 1), (Mu1, 1), (Mu0, -2)])
}

/// The second spelling of `lambda0`, equal to [`lambda0`] in the link group.
pub fn lambda0_alt() -> GroupWord {
    word(&[(Mu1, 1), (Mu0, 1), (Mu1, -1), (Mu0, -1), (Mu1, -1), (Mu0, 1), (Mu1, 1), (Mu0, -1)])
}

/// Longitude of the second component.
pub fn lambda1() -> GroupWord {
    word(&[(Mu0, 1), (Mu1, 1), (Mu0, -1), (Mu1, -1), (Mu0, -1), (Mu1, 1), (Mu0, 1), (Mu1, -1)])
}

/// The filling word `mu0^p lambda0^q`.
pub fn filling_word(p: i64, q: i64) -> GroupWord {
    GroupWord::new([(Mu0, p)]).concat(&lambda0().power(q))
}

pub fn evaluate_word(w: &GroupWord, m0: &Mat2, m1: &Mat2) -> Mat2 {
    evaluate_word_scaled(w, m0, m1).0
}

/// Also returns the product of the norms of the letter images, a natural scale
/// for rounding errors in the product.
pub fn evaluate_word_scaled(w: &GroupWord, m0: &Mat2, m1: &Mat2) -> (Mat2, f64) {
    let mut acc = Mat2::identity();
    let mut scale = 1.0;
    for l in &w.letters {
        let m = match l.generator {
            Mu0 => m0,
            Mu1 => m1,
        };
        let f = m.pow(l.exponent);
        scale *= f.norm().max(1.0);
        acc = acc * f;
    }
    (acc, scale)
}

/// Eigenvalues of `(mu0, lambda0, mu1, lambda1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenTuple {
    pub s: C,
    pub t: C,
    pub u: C,
    pub v: C,
}

impl EigenTuple {
    pub fn new(s: C, t: C, u: C, v: C) -> Self {
        EigenTuple { s, t, u, v }
    }

    fn vars(&self) -> [C; 4] {
        [self.s, self.t, self.u, self.v]
    }
}

/// A signed monomial `coeff * x0^e0 * x1^e1 * ...`.
type Term<const N: usize> = (i32, [i32; N]);

/// Value and sum of absolute values of the terms.
fn eval_terms<const N: usize>(terms: &[Term<N>], x: [C; N]) -> (C, f64) {
    let mut value = C::zero();
    let mut scale = 0.0;
    for (coeff, exps) in terms {
        let mut m = C::new(*coeff as f64, 0.0);
        for (xi, e) in x.iter().zip(exps) {
            m *= xi.powi(*e);
        }
        value += m;
        scale += m.norm();
    }
    (value, scale)
}

/// Monomials of `f(s, u, c)` in the order `(s, u, c)`.
const F_TERMS: [Term<3>; 16] = [
    (1, [1, 1, 0]),
    (-1, [1, -1, 0]),
    (-1, [-1, 1, 0]),
    (1, [-1, -1, 0]),
    (1, [-2, -2, 1]),
    (-1, [0, -2, 1]),
    (-1, [-2, 0, 1]),
    (4, [0, 0, 1]),
    (-1, [2, 0, 1]),
    (-1, [0, 2, 1]),
    (1, [2, 2, 1]),
    (2, [-1, -1, 2]),
    (-1, [1, -1, 2]),
    (-1, [-1, 1, 2]),
    (2, [1, 1, 2]),
    (1, [0, 0, 3]),
];

const H1: [Term<4>; 14] = [
    (1, [0, 1, 0, 0]),
    (-1, [2, 1, 0, 0]),
    (1, [2, 2, 0, 0]),
    (-1, [4, 2, 0, 0]),
    (-1, [0, 0, 2, 0]),
    (-2, [2, 1, 2, 0]),
    (1, [4, 1, 2, 0]),
    (-1, [0, 2, 2, 0]),
    (2, [2, 2, 2, 0]),
    (1, [4, 3, 2, 0]),
    (1, [0, 1, 4, 0]),
    (-1, [2, 1, 4, 0]),
    (1, [2, 2, 4, 0]),
    (-1, [4, 2, 4, 0]),
];

const H2: [Term<4>; 14] = [
    (1, [2, 0, 0, 0]),
    (-1, [0, 0, 0, 1]),
    (-1, [4, 0, 0, 1]),
    (1, [0, 0, 2, 1]),
    (2, [2, 0, 2, 1]),
    (1, [4, 0, 2, 1]),
    (-1, [2, 0, 4, 1]),
    (1, [2, 0, 0, 2]),
    (-1, [0, 0, 2, 2]),
    (-2, [2, 0, 2, 2]),
    (-1, [4, 0, 2, 2]),
    (1, [0, 0, 4, 2]),
    (1, [4, 0, 4, 2]),
    (-1, [2, 0, 4, 3]),
];

const H3: [Term<4>; 11] = [
    (1, [4, 1, 0, 0]),
    (-1, [6, 1, 0, 0]),
    (-1, [2, 1, 2, 0]),
    (1, [4, 1, 2, 0]),
    (1, [6, 2, 2, 0]),
    (-1, [2, 0, 2, 1]),
    (1, [0, 0, 4, 1]),
    (1, [2, 0, 4, 1]),
    (-2, [4, 1, 4, 1]),
    (-1, [0, 0, 6, 1]),
    (1, [2, 0, 6, 2]),
];

const G1: [Term<4>; 8] = [
    (1, [4, 3, 0, 0]),
    (-2, [4, 2, 0, 0]),
    (1, [4, 1, 0, 0]),
    (4, [2, 2, 0, 0]),
    (-4, [2, 1, 0, 0]),
    (-1, [0, 2, 0, 0]),
    (2, [0, 1, 0, 0]),
    (-1, [0, 0, 0, 0]),
];

const G2: [Term<4>; 4] = [(-1, [2, 0, 0, 3]), (-1, [2, 0, 0, 2]), (1, [2, 0, 0, 1]), (1, [2, 0, 0, 0])];

const G3: [Term<4>; 6] = [
    (1, [6, 2, 0, 0]),
    (-1, [6, 1, 0, 0]),
    (2, [4, 1, 0, 0]),
    (-2, [4, 1, 0, 1]),
    (1, [2, 0, 0, 2]),
    (-1, [2, 1, 0, 0]),
];

/// The cubic in `c` cutting out the representation variety in the normal form.
pub fn slice_f(s: C, u: C, c: C) -> C {
    eval_terms(&F_TERMS, [s, u, c]).0
}

/// `|f| / sum |terms|`.
pub fn slice_f_scaled(s: C, u: C, c: C) -> f64 {
    let (v, scale) = eval_terms(&F_TERMS, [s, u, c]);
    if scale == 0.0 {
        0.0
    } else {
        v.norm() / scale
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenvarietyValues {
    pub h: [C; 3],
    pub g: [C; 3],
    pub h_scale: [f64; 3],
    pub g_scale: [f64; 3],
}

impl EigenvarietyValues {
    /// `|h_i| / sum |terms of h_i|`.
    pub fn h_relative(&self) -> [f64; 3] {
        core::array::from_fn(|i| relative(self.h[i], self.h_scale[i]))
    }

    pub fn g_relative(&self) -> [f64; 3] {
        core::array::from_fn(|i| relative(self.g[i], self.g_scale[i]))
    }
}

fn relative(v: C, scale: f64) -> f64 {
    if scale == 0.0 {
        0.0
    } else {
        v.norm() / scale
    }
}

/// `h1, h2, h3` (the eigenvalue variety) and `g1, g2, g3` (the abelian component) at `e`.
pub fn eigenvariety_polys(e: &EigenTuple) -> EigenvarietyValues {
    let x = e.vars();
    let pair = |t: &[Term<4>]| eval_terms(t, x);
    let hs = [pair(&H1), pair(&H2), pair(&H3)];
    let gs = [pair(&G1), pair(&G2), pair(&G3)];
    EigenvarietyValues { h: hs.map(|h| h.0), g: gs.map(|g| g.0), h_scale: hs.map(|h| h.1), g_scale: gs.map(|g| g.1) }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RepError {
    InvalidPoint { s: C, reason: &'static str },
    AmbiguousT { s: C, candidates: [C; 2] },
    NoT { s: C, best_residual: f64 },
    SingularPoint { s: C, u: C },
    VerificationFailure { check: &'static str, residual: f64, tolerance: f64 },
    CountMismatch { p: i64, q: u32, expected: u64, found: u64 },
    Res(ResError),
    Roots(RootError),
}

impl fmt::Display for RepError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepError::InvalidPoint { s, reason } => write!(f, "invalid point s = {s}: {reason}"),
            RepError::AmbiguousT { s, candidates } => write!(
                f,
                "both roots t = {} and t = {} satisfy the filling equation at s = {s}",
                candidates[0], candidates[1]
            ),
            RepError::NoT { s, best_residual } => {
                write!(f, "no t satisfies the filling equation at s = {s} (best {best_residual:e})")
            }
            RepError::SingularPoint { s, u } => write!(f, "singular point s = {s}, u = {u}"),
            RepError::VerificationFailure { check, residual, tolerance } => {
                write!(f, "{check} residual {residual:e} exceeds {tolerance:e}")
            }
            RepError::CountMismatch { p, q, expected, found } => {
                write!(f, "W({p}/{q}): counted {found} p-rep classes, closed form gives {expected}")
            }
            RepError::Res(e) => write!(f, "{e}"),
            RepError::Roots(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RepError {}

impl From<ResError> for RepError {
    fn from(e: ResError) -> Self {
        RepError::Res(e)
    }
}

impl From<RootError> for RepError {
    fn from(e: RootError) -> Self {
        RepError::Roots(e)
    }
}

/// Tolerance for `|s^p t^q - 1|` when selecting `t`.
pub const T_SELECT_TOL: f64 = 1e-7;

fn k1_residual(s: C, t: C, p: i64, q: u32) -> f64 {
    (s.powi(p as i32) * t.powu(q) - ONE).norm()
}

/// Both roots of `s^4 t^2 + (-s^4 + 4 s^2 - 1) t + 1`, computed without cancellation.
pub fn k2_roots(s: C) -> [C; 2] {
    let s2 = s * s;
    let a = s2 * s2;
    let b = -a + s2 * 4.0 - ONE;
    let mut sq = (b * b - a * 4.0).sqrt();
    if (b.conj() * sq).re < 0.0 {
        sq = -sq;
    }
    let big = -(b + sq) * 0.5;
    if big.is_zero() {
        let t = -b / (a * 2.0);
        return [t, t];
    }
    [big / a, big.inv()]
}

/// The unique root `t` of `k2(s, .)` that also satisfies `s^p t^q = 1`.
pub fn solve_t(s: C, p: i64, q: u32) -> Result<C, RepError> {
    if s.is_zero() {
        return Err(RepError::InvalidPoint { s, reason: "s = 0" });
    }
    let [t1, t2] = k2_roots(s);
    let (r1, r2) = (k1_residual(s, t1, p, q), k1_residual(s, t2, p, q));
    let ok1 = r1 <= T_SELECT_TOL;
    let ok2 = r2 <= T_SELECT_TOL;
    // a double root is only resolved to about sqrt(eps)
    let coincide = (t1 - t2).norm() <= 1e-6 * (1.0 + t1.norm());
    match (ok1, ok2) {
        (true, true) if coincide => Ok((t1 + t2) * 0.5),
        (true, true) => Err(RepError::AmbiguousT { s, candidates: [t1, t2] }),
        (true, false) => Ok(t1),
        (false, true) => Ok(t2),
        (false, false) => Err(RepError::NoT { s, best_residual: r1.min(r2) }),
    }
}

/// Recovers the normal-form parameters `(s, u, c)` from an eigenvalue tuple.
pub fn inverse_eigenvalue_map(e: &EigenTuple) -> Result<(C, C, C), RepError> {
    let EigenTuple { s, t, u, v } = *e;
    let s2 = s * s;
    let u2 = u * u;
    let gap = 1e-12 * (1.0 + s2.norm());
    if (s2 - u2).norm() <= gap || (s2 - ONE).norm() <= gap || s.is_zero() || u.is_zero() {
        return Err(RepError::SingularPoint { s, u });
    }
    let c = (s2 * (t - ONE) + u2 * (ONE - v)) * s * u / (s2 - u2);
    Ok((s, u, c))
}

/// `rho(mu0) = [[s, c], [0, 1/s]]`.
pub fn normal_form_mu0(s: C, c: C) -> Mat2 {
    Mat2::new(s, c, C::zero(), s.inv())
}

/// `rho(mu1) = [[u, 0], [1, 1/u]]`.
pub fn normal_form_mu1(u: C) -> Mat2 {
    Mat2::new(u, C::zero(), ONE, u.inv())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PRepKind {
    Reducible,
    Irreducible,
}

impl PRepKind {
    pub fn label(self) -> &'static str {
        match self {
            PRepKind::Reducible => "reducible",
            PRepKind::Irreducible => "irreducible",
        }
    }
}

/// Verification residuals for a reconstructed representation.
///
/// Matrix residuals are reported both absolutely and relative to the size of
/// the factors; the relative values are the ones compared against tolerances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PRepResiduals {
    pub relator: f64,
    pub relator_scaled: f64,
    pub filling: f64,
    pub filling_scaled: f64,
    pub lambda0_spellings: f64,
    pub det: f64,
    pub trace_mu1: f64,
    pub trace_lambda1: Option<f64>,
    pub h: [f64; 3],
    pub f: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepTolerances {
    pub residual: f64,
    pub trace: f64,
    pub det: f64,
    /// `|s^p - 1|` below which a point is treated as reducible.
    pub root_of_unity: f64,
}

impl Default for RepTolerances {
    fn default() -> Self {
        RepTolerances { residual: 1e-8, trace: 1e-9, det: 1e-10, root_of_unity: 1e-9 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PRep {
    pub p: i64,
    pub q: u32,
    pub kind: PRepKind,
    pub sign_u: i8,
    pub eigen: EigenTuple,
    pub c: C,
    pub mu0: Mat2,
    pub mu1: Mat2,
    pub residuals: PRepResiduals,
}

impl PRep {
    pub fn trace_mu0(&self) -> C {
        self.mu0.trace()
    }

    pub fn lambda0(&self) -> Mat2 {
        evaluate_word(&lambda0(), &self.mu0, &self.mu1)
    }

    /// Traces of `mu0, mu1, mu0 mu1, lambda0`; equal for the two representatives of a class.
    pub fn character_sample(&self) -> [C; 4] {
        [self.mu0.trace(), self.mu1.trace(), (self.mu0 * self.mu1).trace(), self.lambda0().trace()]
    }
}

/// Relative residual of `w1 = w2`.
pub fn relator_residual(m0: &Mat2, m1: &Mat2) -> (f64, f64) {
    let (l, sl) = evaluate_word_scaled(&relator_lhs(), m0, m1);
    let (r, sr) = evaluate_word_scaled(&relator_rhs(), m0, m1);
    let abs = (l - r).norm();
    (abs, abs / sl.max(sr))
}

/// `|| rho(mu0)^p rho(lambda0)^q - I ||`, absolutely and relative to `max(1, ||mu0^p|| ||lambda0^q||)`.
pub fn filling_residual(m0: &Mat2, m1: &Mat2, p: i64, q: i64) -> (f64, f64) {
    let a = m0.pow(p);
    let b = evaluate_word(&lambda0(), m0, m1).pow(q);
    let abs = (a * b - Mat2::identity()).norm();
    (abs, abs / (a.norm() * b.norm()).max(1.0))
}

fn residuals(m0: &Mat2, m1: &Mat2, eigen: &EigenTuple, c: C, p: i64, q: u32, kind: PRepKind) -> PRepResiduals {
    let (relator, relator_scaled) = relator_residual(m0, m1);
    let (filling, filling_scaled) = filling_residual(m0, m1, p, q as i64);
    let (la, sa) = evaluate_word_scaled(&lambda0(), m0, m1);
    let (lb, sb) = evaluate_word_scaled(&lambda0_alt(), m0, m1);
    let det = (m0.det() - ONE).norm().max((m1.det() - ONE).norm());
    let trace_lambda1 = match kind {
        PRepKind::Irreducible => Some((evaluate_word(&lambda1(), m0, m1).trace() + 2.0).norm()),
        PRepKind::Reducible => None,
    };
    PRepResiduals {
        relator,
        relator_scaled,
        filling,
        filling_scaled,
        lambda0_spellings: (la - lb).norm() / sa.max(sb),
        det,
        trace_mu1: (m1.trace() - eigen.u * 2.0).norm(),
        trace_lambda1,
        h: eigenvariety_polys(eigen).h_relative(),
        f: slice_f_scaled(eigen.s, eigen.u, c),
    }
}

fn check(name: &'static str, residual: f64, tolerance: f64) -> Result<(), RepError> {
    if residual <= tolerance {
        Ok(())
    } else {
        Err(RepError::VerificationFailure { check: name, residual, tolerance })
    }
}

/// Builds and verifies the p-rep attached to `s` and `u = sign_u`.
///
/// If `s^p = 1` the representation is the reducible non-abelian one with
/// `c = 0`; otherwise `s` should be a root of `res_{p,q}` and the irreducible
/// representation with `v = -1` is reconstructed.
pub fn reconstruct_prep(s: C, sign_u: i8, p: i64, q: u32, tol: &RepTolerances) -> Result<PRep, RepError> {
    if s.norm() < 1e-300 || !s.is_finite() {
        return Err(RepError::InvalidPoint { s, reason: "s must be a nonzero finite number" });
    }
    if (s - ONE).norm() <= 1e-9 || (s + ONE).norm() <= 1e-9 {
        return Err(RepError::InvalidPoint { s, reason: "s = +-1 gives only abelian representations" });
    }
    if sign_u != 1 && sign_u != -1 {
        return Err(RepError::InvalidPoint { s, reason: "sign of u must be +1 or -1" });
    }
    let u = C::new(sign_u as f64, 0.0);
    let reducible = (s.powi(p as i32) - ONE).norm() <= tol.root_of_unity;
    let (kind, eigen, c) = if reducible {
        (PRepKind::Reducible, EigenTuple::new(s, ONE, u, ONE), C::zero())
    } else {
        let t = solve_t(s, p, q)?;
        let eigen = EigenTuple::new(s, t, u, -ONE);
        let (_, _, c) = inverse_eigenvalue_map(&eigen)?;
        (PRepKind::Irreducible, eigen, c)
    };
    let mu0 = normal_form_mu0(s, c);
    let mu1 = normal_form_mu1(u);
    let r = residuals(&mu0, &mu1, &eigen, c, p, q, kind);
    check("determinant", r.det, tol.det)?;
    check("relator", r.relator_scaled, tol.residual)?;
    check("filling", r.filling_scaled, tol.residual)?;
    check("lambda0 spellings", r.lambda0_spellings, tol.residual)?;
    check("trace mu1", r.trace_mu1, tol.trace)?;
    if let Some(tl) = r.trace_lambda1 {
        check("trace lambda1", tl, tol.residual)?;
    }
    for h in r.h {
        check("eigenvariety", h, tol.residual)?;
    }
    check("slice f", r.f, tol.residual)?;
    Ok(PRep { p, q, kind, sign_u, eigen, c, mu0, mu1, residuals: r })
}

/// The eight discrete faithful representations of the link group: `s, u = +-1`
/// and `rho(mu0) = [[s, -s u +- i], [0, s]]`.
pub fn discrete_faithful_reps() -> Vec<(Mat2, Mat2)> {
    let mut out = Vec::with_capacity(8);
    for s in [1.0, -1.0] {
        for u in [1.0, -1.0] {
            for im in [1.0, -1.0] {
                let s = C::new(s, 0.0);
                let u = C::new(u, 0.0);
                let m0 = Mat2::new(s, -s * u + C::new(0.0, im), C::zero(), s);
                let m1 = Mat2::new(u, C::zero(), ONE, u);
                out.push((m0, m1));
            }
        }
    }
    out
}

/// Smallest filling residual over the discrete faithful representations.
pub fn discrete_faithful_filling_residual(p: i64, q: u32) -> f64 {
    discrete_faithful_reps()
        .iter()
        .map(|(m0, m1)| filling_residual(m0, m1, p, q as i64).1)
        .fold(f64::INFINITY, f64::min)
}

/// `rho(mu1)` in the partially diagonal slice: `[[a, -(a-1)^2], [1, 2-a]]`, negated for the minus sign.
pub fn partially_diagonal_mu1(a: C, sign: i8) -> Mat2 {
    let m = Mat2::new(a, -(a - ONE) * (a - ONE), ONE, C::new(2.0, 0.0) - a);
    if sign < 0 {
        m.scale(-ONE)
    } else {
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartiallyDiagonalResiduals {
    /// `(a - 1) r`, with `r` the quadratic below.
    pub r1_factored: C,
    /// `-(s^2-1)^2 a^2 + (s^2-1)(s^2-3) a - 2`.
    pub r1_deflated: C,
    /// `s^p (a / (2 - a))^q - 1`.
    pub r2: C,
    pub t: C,
    pub relator_scaled: f64,
    /// Distance between `t` and the `(1,1)` entry of `rho(lambda0)`.
    pub t_defect: f64,
}

pub fn r1_deflated(s: C, a: C) -> C {
    let w = s * s - ONE;
    -(w * w) * a * a + w * (s * s - 3.0) * a - 2.0
}

pub fn partially_diagonal_check(s: C, a: C, p: i64, q: u32, sign: i8) -> PartiallyDiagonalResiduals {
    let defl = r1_deflated(s, a);
    let t = a / (C::new(2.0, 0.0) - a);
    let m0 = Mat2::new(s, C::zero(), C::zero(), s.inv());
    let m1 = partially_diagonal_mu1(a, sign);
    let l0 = evaluate_word(&lambda0(), &m0, &m1);
    PartiallyDiagonalResiduals {
        r1_factored: (a - ONE) * defl,
        r1_deflated: defl,
        r2: s.powi(p as i32) * t.powu(q) - ONE,
        t,
        relator_scaled: relator_residual(&m0, &m1).1,
        t_defect: (l0.a - t).norm(),
    }
}

/// The root `a` of the deflated `r1` with the smallest `|r2|`.
pub fn partially_diagonal_solve(s: C, p: i64, q: u32) -> C {
    let w = s * s - ONE;
    let qa = -(w * w);
    let qb = w * (s * s - 3.0);
    let qc = C::new(-2.0, 0.0);
    let disc = (qb * qb - qa * qc * 4.0).sqrt();
    let cands = [(-qb + disc) / (qa * 2.0), (-qb - disc) / (qa * 2.0)];
    if (cands[0] - cands[1]).norm() <= 1e-6 * (1.0 + cands[0].norm()) {
        return (cands[0] + cands[1]) * 0.5;
    }
    let score = |a: C| (s.powi(p as i32) * (a / (C::new(2.0, 0.0) - a)).powu(q) - ONE).norm();
    if score(cands[0]) <= score(cands[1]) {
        cands[0]
    } else {
        cands[1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PRepCounts {
    pub reducible: u64,
    pub irreducible: u64,
    pub total: u64,
}

/// Closed-form count of p-rep conjugacy classes, attained exactly when all nontrivial roots are simple.
pub fn prep_class_bound(p: i64, q: u32) -> Result<u64, ResError> {
    if q == 0 || p == 0 || p == 4 * q as i64 {
        return Err(ResError::InvalidFilling { p, q: q as i64, reason: "no generic count for this slope" });
    }
    let (ap, aq) = (p.unsigned_abs(), q as u64);
    let odd = p.rem_euclid(2) == 1;
    let base = if p < 0 {
        3 * ap + 4 * aq
    } else if p < 4 * q as i64 {
        ap + 4 * aq
    } else {
        3 * ap - 4 * aq
    };
    Ok(if odd { base - 3 } else { base - 2 })
}

/// Reducible classes: `s^p = 1`, `s != +-1`, one class per pair `{s, 1/s}` and sign of `u`.
pub fn reducible_class_count(p: i64) -> u64 {
    let ap = p.unsigned_abs();
    if p.rem_euclid(2) == 1 {
        ap - 1
    } else {
        ap.saturating_sub(2)
    }
}

/// Counts p-rep classes; the irreducible count is the number of distinct nontrivial roots of `res_{p,q}`.
pub fn count_prep_classes(p: i64, q: u32, tol: RootTolerances) -> Result<PRepCounts, RepError> {
    let expected = prep_class_bound(p, q)?;
    let r = build_res(p, q)?;
    let rs = find_res_roots(&r, tol)?;
    let nt = nontrivial_roots(&rs, trivial_root_orders(&r)?)?;
    let reducible = reducible_class_count(p);
    let irreducible = nt.roots.len() as u64;
    debug_assert!(irreducible <= nontrivial_root_bound(p, q).unwrap_or(u64::MAX));
    let counts = PRepCounts { reducible, irreducible, total: reducible + irreducible };
    if counts.total != expected {
        return Err(RepError::CountMismatch { p, q, expected, found: counts.total });
    }
    Ok(counts)
}

/// `s^k` with `k` chosen so that `s` runs over the `p`-th roots of unity other than `+-1`,
/// one from each pair `{s, 1/s}`.
pub fn reducible_points(p: i64) -> Vec<C> {
    let n = p.unsigned_abs();
    let mut out = Vec::new();
    for k in 1..n {
        if 2 * k > n {
            break;
        }
        if 2 * k == n {
            continue;
        }
        let theta = 2.0 * core::f64::consts::PI * k as f64 / n as f64;
        out.push(C::from_polar(1.0, theta));
    }
    out
}
