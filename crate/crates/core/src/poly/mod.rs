//! Exact and numeric polynomial arithmetic.

mod bivar;
mod chebyshev;
mod det;
mod laurent;

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub use bivar::{k1, k2, sylvester_matrix, sylvester_resultant_t, BivarPoly};
pub use chebyshev::{chebyshev_t, chebyshev_t_u_eval, chebyshev_u};
pub use det::{det_bareiss, det_cofactor, determinant};
pub use laurent::LaurentPoly;

/// Commutative ring elements usable as polynomial coefficients.
pub trait Coeff:
    Clone + PartialEq + Zero + One + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Coeff for T where
    T: Clone + PartialEq + Zero + One + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// Division that succeeds only when the quotient lies in the ring.
pub trait ExactDiv: Sized {
    fn div_exact(&self, d: &Self) -> Option<Self>;
}

impl ExactDiv for BigInt {
    fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }
}

impl ExactDiv for BigRational {
    fn div_exact(&self, d: &Self) -> Option<Self> {
        (!d.is_zero()).then(|| self / d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    ZeroPolynomial,
    DegenerateInput(&'static str),
    NotIntegral,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::ZeroPolynomial => f.write_str("zero polynomial"),
            PolyError::DegenerateInput(why) => write!(f, "degenerate input: {why}"),
            PolyError::NotIntegral => f.write_str("polynomial has non-integral coefficients"),
        }
    }
}

impl core::error::Error for PolyError {}
