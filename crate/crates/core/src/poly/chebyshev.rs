use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::LaurentPoly;

type P = LaurentPoly<BigInt>;

fn recurrence(q: u32, first: P) -> P {
    let y2 = P::monomial(BigInt::from(2), 1);
    let mut prev = P::constant(BigInt::one());
    if q == 0 {
        return prev;
    }
    let mut cur = first;
    for _ in 1..q {
        let next = &(&y2 * &cur) - &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Chebyshev polynomial of the first kind `T_q(y)`.
pub fn chebyshev_t(q: u32) -> P {
    recurrence(q, P::monomial(BigInt::one(), 1))
}

/// Chebyshev polynomial of the second kind `U_q(y)`.
pub fn chebyshev_u(q: u32) -> P {
    recurrence(q, P::monomial(BigInt::from(2), 1))
}

/// `(T_q(y), U_{q-1}(y))` by the three-term recurrences, with `U_{-1} = 0`.
pub fn chebyshev_t_u_eval(q: u32, y: Complex64) -> (Complex64, Complex64) {
    let one = Complex64::new(1.0, 0.0);
    if q == 0 {
        return (one, Complex64::zero());
    }
    let (mut t0, mut t1) = (one, y);
    let (mut u0, mut u1) = (Complex64::zero(), one);
    for _ in 1..q {
        let t2 = y * t1 * 2.0 - t0;
        let u2 = y * u1 * 2.0 - u0;
        t0 = t1;
        t1 = t2;
        u0 = u1;
        u1 = u2;
    }
    (t1, u1)
}
