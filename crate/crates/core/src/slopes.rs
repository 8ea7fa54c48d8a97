//! Slopes on a boundary torus and the candidate boundary slopes of `W(p/q)`.

use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_integer::Integer;

/// A primitive curve class `p/q` on a torus, stored with `q > 0` or as `1/0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    p: i64,
    q: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlopeError {
    ZeroZero,
    NotCoprime { p: i64, q: i64 },
    NonPositiveDenominator { q: i64 },
    DegenerateSlope { p: i64, q: i64 },
    Parse(alloc::string::String),
}

impl fmt::Display for SlopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeError::ZeroZero => write!(f, "0/0 is not a slope"),
            SlopeError::NotCoprime { p, q } => write!(f, "{p} and {q} are not coprime"),
            SlopeError::NonPositiveDenominator { q } => {
                write!(f, "denominator must be positive, got {q}")
            }
            SlopeError::DegenerateSlope { p, q } => {
                write!(f, "boundary slope formula degenerates at {p}/{q}")
            }
            SlopeError::Parse(s) => write!(f, "cannot parse slope {s:?}"),
        }
    }
}

impl core::error::Error for SlopeError {}

impl Slope {
    pub const INFINITY: Slope = Slope { p: 1, q: 0 };

    /// Validates a coprime pair and flips signs so that `q > 0` (or `1/0`).
    pub fn new(p: i64, q: i64) -> Result<Slope, SlopeError> {
        if p == 0 && q == 0 {
            return Err(SlopeError::ZeroZero);
        }
        if p.gcd(&q) != 1 {
            return Err(SlopeError::NotCoprime { p, q });
        }
        Ok(Self::canonical_unchecked(p, q))
    }

    /// Reduces an arbitrary nonzero pair to lowest terms first.
    pub fn reduced(p: i64, q: i64) -> Result<Slope, SlopeError> {
        if p == 0 && q == 0 {
            return Err(SlopeError::ZeroZero);
        }
        let g = p.gcd(&q);
        Ok(Self::canonical_unchecked(p / g, q / g))
    }

    pub const fn integer(n: i64) -> Slope {
        Slope { p: n, q: 1 }
    }

    fn canonical_unchecked(p: i64, q: i64) -> Slope {
        if q < 0 || (q == 0 && p < 0) {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_infinite(&self) -> bool {
        self.q == 0
    }

    /// Geometric intersection number `|p1 q2 - q1 p2|`.
    pub fn distance(&self, other: &Slope) -> u64 {
        let d = self.p as i128 * other.q as i128 - self.q as i128 * other.p as i128;
        d.unsigned_abs() as u64
    }
}

pub fn distance(a: &Slope, b: &Slope) -> u64 {
    a.distance(b)
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_infinite(), other.is_infinite()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128)),
        }
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for Slope {
    type Err = SlopeError;

    /// Accepts `p/q`, a bare integer `p`, or `inf`.
    fn from_str(s: &str) -> Result<Slope, SlopeError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "1/0" {
            return Ok(Slope::INFINITY);
        }
        let bad = || SlopeError::Parse(alloc::string::String::from(s));
        let (p, q) = match t.split_once('/') {
            Some((a, b)) => (a.trim().parse::<i64>().map_err(|_| bad())?, b.trim().parse::<i64>().map_err(|_| bad())?),
            None => (t.parse::<i64>().map_err(|_| bad())?, 1),
        };
        Slope::new(p, q)
    }
}

/// Which row of the boundary slope table a filling slope falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SlopeRange {
    NegInf0,
    AtZero,
    Zero2,
    AtTwo,
    Two4,
    AtFour,
    FourInf,
}

impl SlopeRange {
    pub fn is_endpoint(self) -> bool {
        matches!(self, SlopeRange::AtZero | SlopeRange::AtTwo | SlopeRange::AtFour)
    }

    pub fn label(self) -> &'static str {
        match self {
            SlopeRange::NegInf0 => "(-inf,0)",
            SlopeRange::AtZero => "0",
            SlopeRange::Zero2 => "(0,2)",
            SlopeRange::AtTwo => "2",
            SlopeRange::Two4 => "(2,4)",
            SlopeRange::AtFour => "4",
            SlopeRange::FourInf => "(4,inf)",
        }
    }
}

impl fmt::Display for SlopeRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Classifies a finite slope `p/q` with `q > 0`.
pub fn classify_range(r: &Slope) -> SlopeRange {
    debug_assert!(!r.is_infinite());
    let (p, q) = (r.p, r.q);
    match p.cmp(&0) {
        Ordering::Less => SlopeRange::NegInf0,
        Ordering::Equal => SlopeRange::AtZero,
        Ordering::Greater => match p.cmp(&(2 * q)) {
            Ordering::Less => SlopeRange::Zero2,
            Ordering::Equal => SlopeRange::AtTwo,
            Ordering::Greater => match p.cmp(&(4 * q)) {
                Ordering::Less => SlopeRange::Two4,
                Ordering::Equal => SlopeRange::AtFour,
                Ordering::Greater => SlopeRange::FourInf,
            },
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundarySlopes {
    pub beta: [Slope; 3],
    /// The unreduced `(numerator, denominator)` produced by the formula for the middle slope.
    pub beta2_raw: (i64, i64),
    pub range: SlopeRange,
}

/// Raw middle-slope formula for the given range; endpoints use the row to their left.
fn beta2_formula(p: i64, q: i64, range: SlopeRange) -> (i64, i64) {
    match range {
        SlopeRange::NegInf0 | SlopeRange::AtZero => (4 * q, p),
        SlopeRange::Zero2 | SlopeRange::AtTwo => (2 * p + 4 * q, p),
        SlopeRange::Two4 | SlopeRange::AtFour => (-p + 6 * q, q),
        SlopeRange::FourInf => (4 * q, p - 2 * q),
    }
}

/// Candidate boundary slopes `(4, beta2, 0)` of `W(p/q)`.
pub fn boundary_slopes(p: i64, q: i64) -> Result<BoundarySlopes, SlopeError> {
    if q <= 0 {
        return Err(SlopeError::NonPositiveDenominator { q });
    }
    let r = Slope::new(p, q)?;
    let range = classify_range(&r);
    let raw = beta2_formula(p, q, range);
    if raw == (0, 0) {
        return Err(SlopeError::DegenerateSlope { p, q });
    }
    Ok(BoundarySlopes {
        beta: [Slope::integer(4), Slope::reduced(raw.0, raw.1)?, Slope::integer(0)],
        beta2_raw: raw,
        range,
    })
}

/// `(distance(gamma, beta_j))_j` for the candidate boundary slopes of `W(p/q)`.
pub fn distance_row(p: i64, q: i64, gamma: &Slope) -> Result<[u64; 3], SlopeError> {
    let b = boundary_slopes(p, q)?;
    Ok(b.beta.map(|beta| gamma.distance(&beta)))
}
