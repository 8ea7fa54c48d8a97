//! Total Culler-Shalen seminorm of `W(p/q)` for `p` odd, Seifert slope norms and
//! character counts, and exact reconstruction of the norm from linear systems.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
#[allow(unused_imports)]
use num_traits::Float;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::poly::LaurentPoly;
use crate::reps::prep_class_bound;
use crate::slopes::{boundary_slopes, distance_row, Slope, SlopeError, SlopeRange};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeminormError {
    Scope { p: i64, q: i64, reason: &'static str },
    Slope(SlopeError),
    DegenerateCase { p: i64, q: i64 },
    SystemInconsistent { p: i64, q: i64 },
    RankUnexpected { p: i64, q: i64, rank: usize, expected: usize },
    ZUnresolved { p: i64, q: i64, admissible: Vec<u64> },
    ProfileMismatch { p: i64, q: i64 },
    ConsistencyViolation { p: i64, q: i64, what: &'static str },
}

impl fmt::Display for SeminormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeminormError::Scope { p, q, reason } => write!(f, "W({p}/{q}) out of scope: {reason}"),
            SeminormError::Slope(e) => write!(f, "{e}"),
            SeminormError::DegenerateCase { p, q } => write!(f, "degenerate case {p}/{q}"),
            SeminormError::SystemInconsistent { p, q } => {
                write!(f, "linear system for {p}/{q} is inconsistent")
            }
            SeminormError::RankUnexpected { p, q, rank, expected } => {
                write!(f, "linear system for {p}/{q} has rank {rank}, expected {expected}")
            }
            SeminormError::ZUnresolved { p, q, admissible } => {
                write!(f, "z not determined for {p}/{q}: admissible values {admissible:?}")
            }
            SeminormError::ProfileMismatch { p, q } => {
                write!(f, "linear-system solution for {p}/{q} differs from the closed form")
            }
            SeminormError::ConsistencyViolation { p, q, what } => {
                write!(f, "{what} fails for {p}/{q}")
            }
        }
    }
}

impl core::error::Error for SeminormError {}

impl From<SlopeError> for SeminormError {
    fn from(e: SlopeError) -> Self {
        SeminormError::Slope(e)
    }
}

fn validate(p: i64, q: i64) -> Result<(), SeminormError> {
    if q <= 0 {
        return Err(SeminormError::Scope { p, q, reason: "q must be positive" });
    }
    Slope::new(p, q)?;
    Ok(())
}

fn check_scope(p: i64, q: i64) -> Result<(), SeminormError> {
    validate(p, q)?;
    if p.rem_euclid(2) == 0 {
        return Err(SeminormError::Scope { p, q, reason: "p even" });
    }
    if p == 3 * q {
        return Err(SeminormError::Scope { p, q, reason: "p/q = 3" });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeminormProfile {
    pub p: i64,
    pub q: i64,
    pub range: SlopeRange,
    pub beta: [Slope; 3],
    pub a: [u64; 3],
    pub s_min: u64,
}

/// `||gamma|| = sum_j a_j Delta(gamma, beta_j)`.
pub fn seminorm_profile(p: i64, q: i64) -> Result<SeminormProfile, SeminormError> {
    check_scope(p, q)?;
    let b = boundary_slopes(p, q)?;
    let (a, s) = match b.range {
        SlopeRange::NegInf0 => ([-p + 2 * q - 1, 2, 2 * q - 2], -3 * p + 4 * q - 3),
        SlopeRange::Zero2 => ([-p + 2 * q - 1, 2, 2 * q - 2], p + 4 * q - 3),
        SlopeRange::Two4 => ([p - 2 * q - 1, 4, 2 * q - 2], p + 4 * q - 3),
        SlopeRange::FourInf => ([p - 2 * q - 1, 2, 2 * q - 2], 3 * p - 4 * q - 3),
        _ => return Err(SeminormError::Scope { p, q, reason: "slope at a range endpoint" }),
    };
    let profile = SeminormProfile { p, q, range: b.range, beta: b.beta, a: a.map(|x| x as u64), s_min: s as u64 };
    if a.iter().any(|x| *x < 0 || x % 2 != 0) || s < 0 {
        return Err(SeminormError::ConsistencyViolation { p, q, what: "non-negative even coefficients" });
    }
    if evaluate_norm(&profile, &Slope::INFINITY) != profile.s_min {
        return Err(SeminormError::ConsistencyViolation { p, q, what: "meridian norm equals s_min" });
    }
    Ok(profile)
}

pub fn evaluate_norm(profile: &SeminormProfile, gamma: &Slope) -> u64 {
    profile.a.iter().zip(&profile.beta).map(|(a, beta)| a * gamma.distance(beta)).sum()
}

/// Norms of the Seifert slopes `1, 2, 3`.
pub fn seifert_norms(p: i64, q: i64) -> Result<[i64; 3], SeminormError> {
    let s = seminorm_profile(p, q)?.s_min as i64;
    Ok(seifert_offsets(p, q).map(|k| s + k))
}

/// `||sigma|| - s` for `sigma = 1, 2, 3`.
fn seifert_offsets(p: i64, q: i64) -> [i64; 3] {
    [2 * (p - 6 * q).abs() - 2, 3 * (p - 4 * q).abs() - 3, 4 * (p - 3 * q).abs() - 4]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PslCounts {
    pub total: i64,
    pub irreducible: i64,
    pub dihedral: i64,
    pub reducible: i64,
    pub nonabelian_reducible: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sl2Counts {
    pub irreducible_nondihedral: i64,
    pub dihedral: i64,
    pub nonabelian_reducible: i64,
    /// Total number of non-abelian characters, the constant `A` in `||sigma|| = s + 2A`.
    pub total: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeifertCounts {
    pub sigma: u8,
    /// `gcd(6, p)` for `sigma = 1, 3`, `gcd(4, p)` for `sigma = 2`.
    pub gcd_key: i64,
    pub psl: PslCounts,
    /// Only for `p` odd, where every `PSL(2)` character lifts.
    pub sl2: Option<Sl2Counts>,
    /// `||sigma|| = s + 2A`, when the norm is in scope.
    pub norm_consistent: Option<bool>,
}

fn half(x: i64, p: i64, q: i64) -> Result<i64, SeminormError> {
    if x % 2 != 0 {
        return Err(SeminormError::Scope { p, q, reason: "table row not integral" });
    }
    Ok(x / 2)
}

/// `PSL(2, C)` character counts of the Seifert filling `W(p/q)(sigma)`, and the
/// non-abelian `SL(2, C)` count when `p` is odd.
pub fn seifert_character_counts(p: i64, q: i64, sigma: u8) -> Result<SeifertCounts, SeminormError> {
    validate(p, q)?;
    let ap = p.abs();
    let (d, key) = match sigma {
        1 => ((p - 6 * q).abs(), 6i64.gcd(&p)),
        2 => ((p - 4 * q).abs(), 4i64.gcd(&p)),
        3 => ((p - 3 * q).abs(), 6i64.gcd(&p)),
        _ => return Err(SeminormError::Scope { p, q, reason: "sigma must be 1, 2 or 3" }),
    };
    if d == 0 {
        return Err(SeminormError::Scope { p, q, reason: "filling slope equals the Seifert slope" });
    }
    let h = |x| half(x, p, q);
    let row = |total, irreducible, dihedral, reducible, nonabelian_reducible| PslCounts {
        total,
        irreducible,
        dihedral,
        reducible,
        nonabelian_reducible,
    };
    let psl = match (sigma, key) {
        (1, 1) | (1, 3) => row(h(ap + d)?, h(d - 1)?, 0, h(ap + 1)?, 0),
        (1, 2) => row(h(ap + d)? + 1, h(d)?, 1, h(ap)? + 1, 0),
        (1, 6) => row(h(ap + d)?, h(d)? - 1, 1, h(ap)? + 1, 1),
        (2, 1) => row(ap + d, d - 1, h(d - 1)?, ap + 1, 0),
        (2, 2) => row(ap + d + 2, d, h(d)? + 1, ap + 2, 0),
        (2, 4) => row(ap + d + 1, d - 1, h(d)? + 1, ap + 2, 1),
        (3, 1) => row(h(3 * (ap - 1))? + d, d - 1, 0, h(3 * (ap - 1))? + 1, 0),
        (3, 3) => row(h(3 * (ap - 1))? + d - 1, d - 2, 0, h(3 * (ap - 1))? + 1, 1),
        (3, 2) => row(h(3 * ap)? + d, d - 1, 0, h(3 * ap)? + 1, 0),
        (3, 6) => row(h(3 * ap)? + d - 1, d - 2, 0, h(3 * ap)? + 1, 1),
        _ => return Err(SeminormError::Scope { p, q, reason: "no table row for this gcd" }),
    };
    if psl.total != psl.irreducible + psl.reducible || psl.dihedral > psl.irreducible {
        return Err(SeminormError::ConsistencyViolation { p, q, what: "character table row sums" });
    }
    let odd = p.rem_euclid(2) == 1;
    let sl2 = odd.then(|| {
        let irreducible_nondihedral = 2 * (psl.irreducible - psl.dihedral);
        let nonabelian_reducible = 2 * psl.nonabelian_reducible;
        Sl2Counts {
            irreducible_nondihedral,
            dihedral: psl.dihedral,
            nonabelian_reducible,
            total: irreducible_nondihedral + psl.dihedral + nonabelian_reducible,
        }
    });
    if let Some(c) = sl2 {
        let closed = match sigma {
            1 => 2 * (d - 1),
            2 => 3 * (d - 1),
            _ => 4 * (d - 1),
        };
        // closed form is 2A
        if 2 * c.total != closed {
            return Err(SeminormError::ConsistencyViolation { p, q, what: "non-abelian SL2 count" });
        }
    }
    let norm_consistent = match (sl2, seifert_norms(p, q)) {
        (Some(c), Ok(norms)) => {
            let s = seminorm_profile(p, q)?.s_min as i64;
            Some(norms[sigma as usize - 1] == s + 2 * c.total)
        }
        _ => None,
    };
    if norm_consistent == Some(false) {
        return Err(SeminormError::ConsistencyViolation { p, q, what: "norm = s + 2A" });
    }
    Ok(SeifertCounts { sigma, gcd_key: key, psl, sl2, norm_consistent })
}

/// Twisted Alexander polynomial in `t` of the non-abelian reducible representations.
pub fn twisted_alexander(p: i64, q: i64, s_squared_is_one: bool) -> LaurentPoly<BigInt> {
    if s_squared_is_one {
        LaurentPoly::from_i64_terms([(2, q), (1, p - 2 * q), (0, q)])
    } else {
        LaurentPoly::from_i64_terms([(1, 1), (0, -1)])
    }
}

/// The values of `u^2` at non-abelian reducible representations with `s^2 = 1`.
pub fn nonabelian_reducible_u2(p: i64, q: i64) -> Result<[Complex64; 2], SeminormError> {
    if p == 0 || q == 0 {
        return Err(SeminormError::DegenerateCase { p, q });
    }
    let (pf, qf) = (p as f64, q as f64);
    let root = Complex64::new(pf * (pf - 4.0 * qf), 0.0).sqrt();
    let base = Complex64::new(-pf + 2.0 * qf, 0.0);
    let u2 = [(base + root) / (2.0 * qf), (base - root) / (2.0 * qf)];
    for x in u2 {
        let v = x * x * qf + x * (pf - 2.0 * qf) + qf;
        if v.norm() > 1e-9 * (qf + pf.abs()) * (1.0 + x.norm_sqr()) {
            return Err(SeminormError::ConsistencyViolation { p, q, what: "u^2 solves the Alexander quadratic" });
        }
    }
    Ok(u2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectionReport {
    /// `beta_j` is strongly detected iff `a_j > 0`.
    pub detected: [bool; 3],
    /// The criterion `p != 2q +- 1`, always, `q > 1`.
    pub predicted: [bool; 3],
}

impl DetectionReport {
    pub fn consistent(&self) -> bool {
        self.detected == self.predicted
    }
}

pub fn detected_slopes(p: i64, q: i64) -> Result<DetectionReport, SeminormError> {
    let profile = seminorm_profile(p, q)?;
    Ok(DetectionReport {
        detected: profile.a.map(|a| a > 0),
        predicted: [p != 2 * q + 1 && p != 2 * q - 1, true, q > 1],
    })
}

type Q = BigRational;

fn rat(x: i64) -> Q {
    Q::from_integer(BigInt::from(x))
}

/// Row-reduces `m` in place; returns the pivot columns.
fn rref(m: &mut [Vec<Q>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(pr) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let k = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(pivot_row) {
                    *x = &*x - &(&k * y);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(m: &[Vec<Q>]) -> usize {
    let cols = m.first().map_or(0, |r| r.len());
    rref(&mut m.to_vec(), cols).len()
}

/// Unique solution of the augmented system `[A | b]`, if any.
fn solve_unique(aug: &[Vec<Q>], n: usize) -> Result<Option<Vec<Q>>, ()> {
    let mut m = aug.to_vec();
    let pivots = rref(&mut m, n + 1);
    if pivots.contains(&n) {
        return Err(());
    }
    if pivots.len() < n {
        return Ok(None);
    }
    Ok(Some((0..n).map(|i| m[i][n].clone()).collect()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SystemRange {
    Negative,
    ZeroTwo,
    TwoThree,
    ThreeFour,
    FourSix,
    SixInf,
}

impl SystemRange {
    pub fn label(self) -> &'static str {
        match self {
            SystemRange::Negative => "(-inf,0)",
            SystemRange::ZeroTwo => "(0,2)",
            SystemRange::TwoThree => "(2,3)",
            SystemRange::ThreeFour => "(3,4)",
            SystemRange::FourSix => "(4,6)",
            SystemRange::SixInf => "(6,inf)",
        }
    }

    pub fn of(p: i64, q: i64) -> Option<SystemRange> {
        use core::cmp::Ordering::*;
        let cmp = |k: i64| p.cmp(&(k * q));
        Some(match (cmp(0), cmp(2), cmp(3), cmp(4), cmp(6)) {
            (Less, ..) => SystemRange::Negative,
            (Greater, Less, ..) => SystemRange::ZeroTwo,
            (_, Greater, Less, ..) => SystemRange::TwoThree,
            (_, _, Greater, Less, _) => SystemRange::ThreeFour,
            (_, _, _, Greater, Less) => SystemRange::FourSix,
            (_, _, _, _, Greater) => SystemRange::SixInf,
            _ => return None,
        })
    }

    /// `p/q -> 4 - p/q` maps this range onto one where parity alone fixes `z`.
    pub fn has_reflection(self) -> bool {
        matches!(self, SystemRange::TwoThree | SystemRange::SixInf)
    }

    pub fn expected_rank(self) -> usize {
        match self {
            SystemRange::ThreeFour | SystemRange::FourSix => 4,
            _ => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZVerdict {
    Admissible,
    NotInteger(usize),
    Odd(usize),
    Negative(usize),
}

/// Solutions `x(z) = base + z dir` of the rank-3 system with `s = bound - z`,
/// and the verdict for every `z` in `0..=bound`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZLedger {
    pub bound: u64,
    pub base: [Q; 4],
    pub dir: [Q; 4],
    pub verdicts: Vec<(u64, ZVerdict)>,
}

impl ZLedger {
    pub fn admissible(&self) -> Vec<u64> {
        self.verdicts.iter().filter(|v| v.1 == ZVerdict::Admissible).map(|v| v.0).collect()
    }

    pub fn at(&self, z: u64) -> [Q; 4] {
        let z = rat(z as i64);
        core::array::from_fn(|i| &self.base[i] + &(&self.dir[i] * &z))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Resolution {
    /// Full rank: the system alone determines the solution.
    Unique,
    /// Evenness and non-negativity leave only `z = 0`.
    ZArgument(ZLedger),
    /// Parity leaves more than one `z`; `z = 0` follows from the solved system of
    /// `(-p + 4q, q)`, which has the same `res` and hence the same number of
    /// irreducible p-reps.
    Reflection { ledger: ZLedger, reflected: Box<LinearSolution> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearSolution {
    pub p: i64,
    pub q: i64,
    pub range: SystemRange,
    /// Rows for `sigma = 1, 2, 3, infinity`; columns `a1, a2, a3, s`, then the right-hand side.
    pub system: Vec<Vec<Q>>,
    pub rank: usize,
    /// `(a1, a2, a3, s)`.
    pub solution: [Q; 4],
    pub resolution: Resolution,
}

impl LinearSolution {
    pub fn as_integers(&self) -> Option<[i64; 4]> {
        let mut out = [0i64; 4];
        for (o, x) in out.iter_mut().zip(&self.solution) {
            if !x.is_integer() {
                return None;
            }
            *o = x.to_integer().to_i64()?;
        }
        Some(out)
    }
}

/// The system `sum_j a_j Delta(gamma, beta_j) - s = ||gamma|| - s` over `gamma = 1, 2, 3, infinity`.
pub fn build_system(p: i64, q: i64) -> Result<Vec<Vec<Q>>, SeminormError> {
    let offsets = seifert_offsets(p, q);
    let gammas = [Slope::integer(1), Slope::integer(2), Slope::integer(3), Slope::INFINITY];
    let mut rows = Vec::with_capacity(4);
    for (i, g) in gammas.iter().enumerate() {
        let d = distance_row(p, q, g)?;
        let rhs = if i < 3 { offsets[i] } else { 0 };
        rows.push(vec![rat(d[0] as i64), rat(d[1] as i64), rat(d[2] as i64), rat(-1), rat(rhs)]);
    }
    Ok(rows)
}

fn verdict(x: &[Q; 4]) -> ZVerdict {
    let two = BigInt::from(2);
    for (i, v) in x.iter().enumerate() {
        if !v.is_integer() {
            return ZVerdict::NotInteger(i);
        }
        if v.is_negative() {
            return ZVerdict::Negative(i);
        }
        if i < 3 && !v.to_integer().is_multiple_of(&two) {
            return ZVerdict::Odd(i);
        }
    }
    ZVerdict::Admissible
}

fn z_ledger(p: i64, q: i64, system: &[Vec<Q>], bound: u64) -> Result<ZLedger, SeminormError> {
    let at = |z: i64| -> Result<[Q; 4], SeminormError> {
        let mut aug = system.to_vec();
        aug.push(vec![rat(0), rat(0), rat(0), rat(1), rat(bound as i64 - z)]);
        match solve_unique(&aug, 4) {
            Err(()) => Err(SeminormError::SystemInconsistent { p, q }),
            Ok(None) => Err(SeminormError::RankUnexpected { p, q, rank: rank(system), expected: 3 }),
            Ok(Some(x)) => Ok([x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()]),
        }
    };
    let base = at(0)?;
    let one = at(1)?;
    let dir: [Q; 4] = core::array::from_fn(|i| &one[i] - &base[i]);
    let mut ledger = ZLedger { bound, base, dir, verdicts: Vec::new() };
    for z in 0..=bound {
        let x = ledger.at(z);
        ledger.verdicts.push((z, verdict(&x)));
    }
    Ok(ledger)
}

/// Solves for `(a1, a2, a3, s)` exactly, resolving rank deficiency with the
/// bound `s <= (number of p-rep classes)` and parity, and checks the result
/// against [`seminorm_profile`].
pub fn solve_linear_system(p: i64, q: i64) -> Result<LinearSolution, SeminormError> {
    check_scope(p, q)?;
    let range = SystemRange::of(p, q).ok_or(SeminormError::Scope { p, q, reason: "slope at a range endpoint" })?;
    let system = build_system(p, q)?;
    let coeffs: Vec<Vec<Q>> = system.iter().map(|r| r[..4].to_vec()).collect();
    let rk = rank(&coeffs);
    if rk != range.expected_rank() {
        return Err(SeminormError::RankUnexpected { p, q, rank: rk, expected: range.expected_rank() });
    }
    let bound = prep_class_bound(p, q as u32).map_err(|_| SeminormError::DegenerateCase { p, q })?;
    let (solution, resolution) = if rk == 4 {
        let x = solve_unique(&system, 4)
            .map_err(|_| SeminormError::SystemInconsistent { p, q })?
            .ok_or(SeminormError::RankUnexpected { p, q, rank: rk, expected: 4 })?;
        ([x[0].clone(), x[1].clone(), x[2].clone(), x[3].clone()], Resolution::Unique)
    } else {
        let ledger = z_ledger(p, q, &system, bound)?;
        let admissible = ledger.admissible();
        if admissible == [0] {
            (ledger.at(0), Resolution::ZArgument(ledger))
        } else if range.has_reflection() && admissible.first() == Some(&0) {
            let reflected = solve_linear_system(-p + 4 * q, q)?;
            if !matches!(reflected.resolution, Resolution::ZArgument(_)) {
                return Err(SeminormError::ZUnresolved { p, q, admissible });
            }
            (ledger.at(0), Resolution::Reflection { ledger, reflected: Box::new(reflected) })
        } else {
            return Err(SeminormError::ZUnresolved { p, q, admissible });
        }
    };
    let out = LinearSolution { p, q, range, system, rank: rk, solution, resolution };
    let profile = seminorm_profile(p, q)?;
    let want = [profile.a[0], profile.a[1], profile.a[2], profile.s_min].map(|x| x as i64);
    if out.as_integers() != Some(want) {
        return Err(SeminormError::ProfileMismatch { p, q });
    }
    Ok(out)
}
