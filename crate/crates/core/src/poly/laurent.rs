use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write as _};
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{FromPrimitive, One, Signed, Zero};

use super::{Coeff, ExactDiv, PolyError};

/// Sparse Laurent polynomial `sum c_e x^e` with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly<C> {
    terms: BTreeMap<i64, C>,
}

impl<C: Coeff> LaurentPoly<C> {
    pub fn zero() -> Self {
        LaurentPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: C, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    /// Sums the given `(exponent, coefficient)` pairs; repeated exponents accumulate.
    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Dense coefficients `c[k]` of `x^(lo + k)`.
    pub fn from_dense(lo: i64, coeffs: Vec<C>) -> Self {
        Self::from_terms(coeffs.into_iter().enumerate().map(|(k, c)| (lo + k as i64, c)))
    }

    pub fn add_term(&mut self, e: i64, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(e, sum);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Option<&C> {
        self.terms.get(&e)
    }

    pub fn mindeg(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn maxdeg(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `maxdeg - mindeg`, zero for the zero polynomial.
    pub fn span(&self) -> u64 {
        match (self.mindeg(), self.maxdeg()) {
            (Some(lo), Some(hi)) => (hi - lo) as u64,
            _ => 0,
        }
    }

    pub fn leading(&self) -> Option<&C> {
        self.terms.values().next_back()
    }

    pub fn trailing(&self) -> Option<&C> {
        self.terms.values().next()
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, a: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone() * a.clone())))
    }

    /// `x -> 1/x`.
    pub fn substitute_inv_s(&self) -> Self {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect() }
    }

    /// `x -> -x`.
    pub fn substitute_neg_s(&self) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, if e.rem_euclid(2) == 1 { -c.clone() } else { c.clone() }))
                .collect(),
        }
    }

    pub fn map<D: Coeff, F: Fn(&C) -> D>(&self, f: F) -> LaurentPoly<D> {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(C::one());
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `y` for the variable; only nonnegative exponents are allowed.
    pub fn compose(&self, y: &Self) -> Option<Self> {
        if self.mindeg().is_some_and(|e| e < 0) {
            return None;
        }
        let Some(top) = self.maxdeg() else {
            return Some(Self::zero());
        };
        let mut acc = Self::zero();
        for e in (0..=top).rev() {
            acc = &acc * y;
            if let Some(c) = self.coeff(e) {
                acc.add_term(0, c.clone());
            }
        }
        Some(acc)
    }

    /// `sum c * sign^e` for `sign = +1` or `-1`.
    pub fn eval_at_unit(&self, negative: bool) -> C {
        let mut acc = C::zero();
        for (e, c) in &self.terms {
            if negative && e.rem_euclid(2) == 1 {
                acc = acc - c.clone();
            } else {
                acc = acc + c.clone();
            }
        }
        acc
    }
}

impl<C: Coeff + FromPrimitive> LaurentPoly<C> {
    pub fn derivative(&self) -> Self {
        Self::from_terms(self.terms.iter().filter(|(e, _)| **e != 0).map(|(e, c)| {
            let k = C::from_i64(*e).expect("exponent fits the coefficient ring");
            (e - 1, c.clone() * k)
        }))
    }
}

impl<C: Coeff + Signed> LaurentPoly<C> {
    /// Canonical representative up to units `+-x^k`: lowest exponent 0, positive leading coefficient.
    pub fn normalize_unit(&self) -> Result<Self, PolyError> {
        let lo = self.mindeg().ok_or(PolyError::ZeroPolynomial)?;
        let shifted = self.shift(-lo);
        if shifted.leading().is_some_and(|c| c.is_negative()) {
            Ok(-shifted)
        } else {
            Ok(shifted)
        }
    }

    /// Equality up to multiplication by `+-x^k`.
    pub fn unit_equivalent(&self, other: &Self) -> bool {
        match (self.normalize_unit(), other.normalize_unit()) {
            (Ok(a), Ok(b)) => a == b,
            (Err(_), Err(_)) => true,
            _ => false,
        }
    }
}

impl<C: Coeff + ExactDiv> ExactDiv for LaurentPoly<C> {
    /// Exact quotient in the Laurent ring, or `None` if the division leaves a remainder.
    fn div_exact(&self, d: &Self) -> Option<Self> {
        let dlo = d.mindeg()?;
        let dhi = d.maxdeg()?;
        let dlead = d.leading()?.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(rhi) = rem.maxdeg() {
            let rlo = rem.mindeg()?;
            if rhi - rlo < dhi - dlo {
                return None;
            }
            let c = rem.leading()?.div_exact(&dlead)?;
            let e = rhi - dhi;
            for (de, dc) in d.terms() {
                rem.add_term(de + e, -(dc.clone() * c.clone()));
            }
            quot.add_term(e, c);
        }
        Some(quot)
    }
}

impl LaurentPoly<Complex64> {
    /// Horner evaluation including negative powers.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let (Some(lo), Some(hi)) = (self.mindeg(), self.maxdeg()) else {
            return Complex64::zero();
        };
        let mut acc = Complex64::zero();
        for e in (lo..=hi).rev() {
            acc *= z;
            if let Some(c) = self.coeff(e) {
                acc += c;
            }
        }
        acc * z.powi(lo as i32)
    }

    /// `sum |c_e| |z|^e`, the natural scale for the rounding error of `eval`.
    pub fn abs_eval(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.terms().map(|(e, c)| c.norm() * num_traits::Float::powi(r, e as i32)).sum()
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }
}

impl LaurentPoly<BigInt> {
    pub fn to_complex(&self) -> LaurentPoly<Complex64> {
        use num_traits::ToPrimitive;
        self.map(|c| Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0))
    }

    pub fn from_i64_terms<I: IntoIterator<Item = (i64, i64)>>(terms: I) -> Self {
        Self::from_terms(terms.into_iter().map(|(e, c)| (e, BigInt::from(c))))
    }
}

impl<C: Coeff + fmt::Display + Signed> LaurentPoly<C> {
    /// Human-readable form in descending powers of `var`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return String::from("0");
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let unit = mag.is_one();
            match (*e, unit) {
                (0, _) => {
                    let _ = write!(out, "{mag}");
                }
                (_, true) => {}
                (_, false) => {
                    let _ = write!(out, "{mag}*");
                }
            }
            match *e {
                0 => {}
                1 => out.push_str(var),
                _ => {
                    let _ = write!(out, "{var}^{e}");
                }
            }
        }
        out
    }
}

impl<C: Coeff + fmt::Display + Signed> fmt::Display for LaurentPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("s"))
    }
}

impl<C: Coeff> Add for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn add(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl<C: Coeff> Sub for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn sub(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl<C: Coeff> Mul for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn mul(self, rhs: &LaurentPoly<C>) -> LaurentPoly<C> {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<C: Coeff> Neg for &LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        LaurentPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<C: Coeff> $tr for LaurentPoly<C> {
            type Output = LaurentPoly<C>;
            fn $m(self, rhs: LaurentPoly<C>) -> LaurentPoly<C> {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<C: Coeff> Neg for LaurentPoly<C> {
    type Output = LaurentPoly<C>;
    fn neg(self) -> LaurentPoly<C> {
        -&self
    }
}

impl<C: Coeff> Zero for LaurentPoly<C> {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coeff> One for LaurentPoly<C> {
    fn one() -> Self {
        LaurentPoly::constant(C::one())
    }
}
