//! The p-rep polynomial `res_{p,q}(s)`, built from its closed form and checked
//! against the Sylvester resultant of `k1 = s^p t^q - 1` and `k2`.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::poly::{chebyshev_t, chebyshev_t_u_eval, k1, k2, sylvester_resultant_t, LaurentPoly, PolyError};

type ZPoly = LaurentPoly<BigInt>;

/// The substitution `y(s)` fed into `T_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum YConvention {
    /// `y = (-s^2 + 4 - s^-2) / 2`
    HalfFourMinus,
    /// `y = -s^2 + 2 - s^-2`
    TwoMinus,
}

impl YConvention {
    /// The convention that reproduces the Sylvester resultant; see [`YConvention::calibrate`].
    pub const CALIBRATED: YConvention = YConvention::HalfFourMinus;

    pub const ALL: [YConvention; 2] = [YConvention::HalfFourMinus, YConvention::TwoMinus];

    pub fn formula(self) -> &'static str {
        match self {
            YConvention::HalfFourMinus => "y = (-s^2 + 4 - s^-2)/2",
            YConvention::TwoMinus => "y = -s^2 + 2 - s^-2",
        }
    }

    pub fn y_poly(self) -> LaurentPoly<BigRational> {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        match self {
            YConvention::HalfFourMinus => LaurentPoly::from_terms([(2, r(-1, 2)), (0, r(2, 1)), (-2, r(-1, 2))]),
            YConvention::TwoMinus => LaurentPoly::from_terms([(2, r(-1, 1)), (0, r(2, 1)), (-2, r(-1, 1))]),
        }
    }

    /// `(y(s), y'(s))`.
    pub fn eval(self, s: Complex64) -> (Complex64, Complex64) {
        let s2 = s * s;
        let si2 = s2.inv();
        let si3 = si2 / s;
        match self {
            YConvention::HalfFourMinus => ((-s2 + 4.0 - si2) * 0.5, -s + si3),
            YConvention::TwoMinus => (-s2 + 2.0 - si2, (-s + si3) * 2.0),
        }
    }

    /// The conventions whose closed form matches the resultant on every seed.
    pub fn calibrate(seeds: &[(i64, u32)]) -> Vec<YConvention> {
        YConvention::ALL
            .into_iter()
            .filter(|conv| {
                seeds.iter().all(|&(p, q)| match (closed_form_with(p, q, *conv), oracle_form(p, q)) {
                    (Ok(c), Ok(o)) => c.unit_equivalent(&o),
                    _ => false,
                })
            })
            .collect()
    }
}

impl fmt::Display for YConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.formula())
    }
}

/// Seed fillings used to pin down the `y` convention.
pub const CALIBRATION_SEEDS: [(i64, u32); 6] = [(-1, 1), (1, 1), (2, 1), (5, 1), (3, 2), (-5, 3)];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResError {
    InvalidFilling { p: i64, q: i64, reason: &'static str },
    ResultantIdentityMismatch { p: i64, q: u32 },
    Degenerate { p: i64, q: u32 },
    SymmetryViolation(&'static str),
    Poly(PolyError),
}

impl fmt::Display for ResError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResError::InvalidFilling { p, q, reason } => write!(f, "invalid filling {p}/{q}: {reason}"),
            ResError::ResultantIdentityMismatch { p, q } => {
                write!(f, "closed form and Sylvester resultant differ for ({p},{q})")
            }
            ResError::Degenerate { p, q } => {
                write!(f, "res for ({p},{q}) is a constant; there are no roots")
            }
            ResError::SymmetryViolation(which) => write!(f, "symmetry violated: {which}"),
            ResError::Poly(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for ResError {}

impl From<PolyError> for ResError {
    fn from(e: PolyError) -> Self {
        ResError::Poly(e)
    }
}

fn validate(p: i64, q: i64) -> Result<(), ResError> {
    if q < 0 {
        return Err(ResError::InvalidFilling { p, q, reason: "q must be nonnegative" });
    }
    if q == 0 && p.abs() != 1 {
        return Err(ResError::InvalidFilling { p, q, reason: "q = 0 only as the formal case (+-1, 0)" });
    }
    if p.gcd(&q) != 1 {
        return Err(ResError::InvalidFilling { p, q, reason: "p and q must be coprime" });
    }
    Ok(())
}

/// `s^(p-2q) + (-1)^(q+1) 2 T_q(y(s)) + s^(2q-p)` with the given convention.
pub fn closed_form_with(p: i64, q: u32, conv: YConvention) -> Result<ZPoly, ResError> {
    validate(p, q as i64)?;
    let y = conv.y_poly();
    let tq = chebyshev_t(q).map(|c| BigRational::from_integer(c.clone()));
    let mut two_t = tq.compose(&y).expect("Chebyshev polynomials have no negative powers");
    let sign = if q.is_multiple_of(2) { -2 } else { 2 };
    two_t = two_t.scale(&BigRational::from_integer(BigInt::from(sign)));
    let e = p - 2 * q as i64;
    two_t.add_term(e, BigRational::one());
    two_t.add_term(-e, BigRational::one());
    let mut out = ZPoly::zero();
    for (k, c) in two_t.terms() {
        if !c.is_integer() {
            return Err(ResError::Poly(PolyError::NotIntegral));
        }
        out.add_term(k, c.to_integer());
    }
    Ok(out)
}

pub fn closed_form(p: i64, q: u32) -> Result<ZPoly, ResError> {
    closed_form_with(p, q, YConvention::CALIBRATED)
}

/// Resultant of `k1` and `k2` in `t`; for `q = 0` this is `(s^p - 1)^2`.
pub fn oracle_form(p: i64, q: u32) -> Result<ZPoly, ResError> {
    validate(p, q as i64)?;
    if q == 0 {
        let f = ZPoly::from_i64_terms([(p, 1), (0, -1)]);
        return Ok(f.pow(2));
    }
    Ok(sylvester_resultant_t(&k1(p, q), &k2())?)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResPoly {
    pub p: i64,
    pub q: u32,
    pub closed_form: ZPoly,
    /// `None` when built without the resultant check.
    pub oracle_form: Option<ZPoly>,
    pub y_convention: YConvention,
}

impl ResPoly {
    /// Canonical unit-normalized form.
    pub fn normalized(&self) -> ZPoly {
        self.closed_form.normalize_unit().expect("res is never the zero polynomial")
    }

    /// True when the polynomial is a nonzero constant up to units, i.e. `p/q` is 0 or 4.
    pub fn is_degenerate(&self) -> bool {
        self.closed_form.span() == 0
    }

    pub fn span(&self) -> u64 {
        self.closed_form.span()
    }

    pub fn verified(&self) -> bool {
        self.oracle_form.as_ref().is_some_and(|o| o.unit_equivalent(&self.closed_form))
    }
}

/// Builds the closed form and verifies it against the Sylvester resultant.
pub fn build_res(p: i64, q: u32) -> Result<ResPoly, ResError> {
    build_res_with(p, q, YConvention::CALIBRATED)
}

pub fn build_res_with(p: i64, q: u32, conv: YConvention) -> Result<ResPoly, ResError> {
    let closed = closed_form_with(p, q, conv)?;
    let oracle = oracle_form(p, q)?;
    if !closed.unit_equivalent(&oracle) {
        return Err(ResError::ResultantIdentityMismatch { p, q });
    }
    Ok(ResPoly { p, q, closed_form: closed, oracle_form: Some(oracle), y_convention: conv })
}

/// Closed form only; the resultant identity is not rechecked.
pub fn build_res_unchecked(p: i64, q: u32) -> Result<ResPoly, ResError> {
    let closed = closed_form(p, q)?;
    Ok(ResPoly { p, q, closed_form: closed, oracle_form: None, y_convention: YConvention::CALIBRATED })
}

/// Numeric value and derivative of `res_{p,q}` straight from the closed form.
///
/// Much better conditioned than expanding into monomials when `q` is large.
pub fn eval_closed(p: i64, q: u32, conv: YConvention, s: Complex64) -> (Complex64, Complex64) {
    let e = p - 2 * q as i64;
    let (y, dy) = conv.eval(s);
    let (t, u) = chebyshev_t_u_eval(q, y);
    let kappa = if q.is_multiple_of(2) { -2.0 } else { 2.0 };
    let se = s.powi(e as i32);
    let sme = se.inv();
    let value = se + sme + t * kappa;
    let deriv = (se - sme) * (e as f64) / s + u * dy * (kappa * q as f64);
    (value, deriv)
}

fn root_order(f: &ZPoly, negative: bool) -> u32 {
    let mut g = f.clone();
    let mut k = 0;
    while !g.is_zero() && g.eval_at_unit(negative).is_zero() {
        g = g.derivative();
        k += 1;
    }
    k
}

/// Orders of vanishing at `s = 1` and `s = -1`, from exact derivatives.
pub fn trivial_root_orders(r: &ResPoly) -> Result<(u32, u32), ResError> {
    if r.is_degenerate() {
        return Err(ResError::Degenerate { p: r.p, q: r.q });
    }
    let f = r.normalized();
    Ok((root_order(&f, false), root_order(&f, true)))
}

/// The trivial root orders predicted by parity: `(2,0)` for q even, `(0,2)` for p, q odd, else `(0,0)`.
pub fn expected_trivial_orders(p: i64, q: u32) -> (u32, u32) {
    if q.is_multiple_of(2) {
        (2, 0)
    } else if p.rem_euclid(2) == 1 {
        (0, 2)
    } else {
        (0, 0)
    }
}

/// `2 max(|p - 2q|, 2q)`, or 0 when `p/q` is 0 or 4.
pub fn expected_span(p: i64, q: u32) -> u64 {
    let q = q as i64;
    if p == 0 || p == 4 * q {
        return 0;
    }
    2 * (p - 2 * q).unsigned_abs().max(2 * q as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetryReport {
    pub inverse_invariant: bool,
    pub negation_invariant: bool,
    pub negation_expected: bool,
    pub reflection_invariant: bool,
    /// Integer coefficients make the root set closed under conjugation.
    pub conjugation_invariant: bool,
}

/// Checks invariance under `s -> 1/s`, `s -> -s` (iff p even) and `p -> 4q - p`.
pub fn check_symmetries(r: &ResPoly) -> Result<SymmetryReport, ResError> {
    let f = &r.closed_form;
    let inverse_invariant = f.substitute_inv_s().unit_equivalent(f);
    let negation_invariant = f.substitute_neg_s().unit_equivalent(f);
    let negation_expected = r.p.rem_euclid(2) == 0;
    let reflected = closed_form_with(-r.p + 4 * r.q as i64, r.q, r.y_convention)?;
    let reflection_invariant = reflected.unit_equivalent(f);
    let report = SymmetryReport {
        inverse_invariant,
        negation_invariant,
        negation_expected,
        reflection_invariant,
        conjugation_invariant: true,
    };
    if !inverse_invariant {
        return Err(ResError::SymmetryViolation("s -> 1/s"));
    }
    if negation_invariant != negation_expected {
        return Err(ResError::SymmetryViolation("s -> -s iff p even"));
    }
    if !reflection_invariant {
        return Err(ResError::SymmetryViolation("p -> -p + 4q"));
    }
    Ok(report)
}

/// Upper bound on the number of distinct roots outside `{0, 1, -1}`.
pub fn nontrivial_root_bound(p: i64, q: u32) -> Result<u64, ResError> {
    validate(p, q as i64)?;
    let qi = q as i64;
    if q == 0 || p == 0 || p == 4 * qi {
        return Err(ResError::Degenerate { p, q });
    }
    let ap = p.unsigned_abs();
    let q4 = 4 * q as u64;
    let base = if p < 0 {
        2 * ap + q4
    } else if p < 4 * qi {
        q4
    } else {
        2 * ap - q4
    };
    Ok(if p.rem_euclid(2) == 1 { base - 2 } else { base })
}

/// The constant a degenerate `res` collapses to, up to sign.
pub fn constant_value(r: &ResPoly) -> Option<BigInt> {
    if r.is_degenerate() {
        r.closed_form.trailing().map(|c| c.abs())
    } else {
        None
    }
}
