use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};

use super::{determinant, LaurentPoly, PolyError};

/// Integer polynomial in `s` (Laurent) and `t` (ordinary), keyed by `(s-exponent, t-exponent)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(i64, u32), BigInt>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly::default()
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, u32), BigInt)>>(terms: I) -> Self {
        let mut p = BivarPoly::zero();
        for (k, c) in terms {
            p.add_term(k.0, k.1, c);
        }
        p
    }

    pub fn add_term(&mut self, es: i64, et: u32, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let sum = self.terms.remove(&(es, et)).unwrap_or_default() + c;
        if !sum.is_zero() {
            self.terms.insert((es, et), sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = ((i64, u32), &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn t_degree(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// Coefficient of `t^k` as a Laurent polynomial in `s`.
    pub fn coeff_in_t(&self, k: u32) -> LaurentPoly<BigInt> {
        LaurentPoly::from_terms(self.terms.iter().filter(|((_, et), _)| *et == k).map(|((es, _), c)| (*es, c.clone())))
    }

    pub fn eval(&self, s: Complex64, t: Complex64) -> Complex64 {
        self.terms.iter().map(|((es, et), c)| s.powi(*es as i32) * t.powu(*et) * c.to_f64().unwrap_or(f64::NAN)).sum()
    }
}

/// `s^p t^q - 1`.
pub fn k1(p: i64, q: u32) -> BivarPoly {
    BivarPoly::from_terms([((p, q), BigInt::one()), ((0, 0), -BigInt::one())])
}

/// `s^4 t^2 + (-s^4 + 4 s^2 - 1) t + 1`.
pub fn k2() -> BivarPoly {
    BivarPoly::from_terms(
        [((4, 2), 1), ((4, 1), -1), ((2, 1), 4), ((0, 1), -1), ((0, 0), 1)].map(|(k, c)| (k, BigInt::from(c))),
    )
}

/// Sylvester matrix of `f` and `g` viewed as polynomials in `t`.
pub fn sylvester_matrix(f: &BivarPoly, g: &BivarPoly) -> Result<Vec<Vec<LaurentPoly<BigInt>>>, PolyError> {
    let m = f.t_degree().ok_or(PolyError::ZeroPolynomial)? as usize;
    let n = g.t_degree().ok_or(PolyError::ZeroPolynomial)? as usize;
    if m == 0 || n == 0 {
        return Err(PolyError::DegenerateInput("t-degree 0"));
    }
    let fc: Vec<_> = (0..=m).rev().map(|k| f.coeff_in_t(k as u32)).collect();
    let gc: Vec<_> = (0..=n).rev().map(|k| g.coeff_in_t(k as u32)).collect();
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for (count, coeffs) in [(n, &fc), (m, &gc)] {
        for shift in 0..count {
            let mut row = alloc::vec![LaurentPoly::zero(); size];
            for (j, c) in coeffs.iter().enumerate() {
                row[shift + j] = c.clone();
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Resultant with respect to `t`, computed exactly over `Z[s, 1/s]`.
pub fn sylvester_resultant_t(f: &BivarPoly, g: &BivarPoly) -> Result<LaurentPoly<BigInt>, PolyError> {
    let m = sylvester_matrix(f, g)?;
    determinant(m).ok_or(PolyError::DegenerateInput("inexact division during elimination"))
}
