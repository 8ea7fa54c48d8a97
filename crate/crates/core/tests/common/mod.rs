#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use whitehead_core::poly::LaurentPoly;

pub const PRIME: u64 = 1_000_000_007;

pub fn coprime_samples(p_max: i64, q_max: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    for q in 1..=q_max {
        for p in -p_max..=p_max {
            if p.gcd(&q) == 1 {
                out.push((p, q));
            }
        }
    }
    out
}

pub fn reduce(c: &BigInt) -> u64 {
    c.mod_floor(&BigInt::from(PRIME)).to_u64().unwrap()
}

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn inv(a: u64) -> u64 {
    let (mut base, mut e, mut acc) = (a, PRIME - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

/// Dense polynomial over `GF(PRIME)`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModPoly(pub Vec<u64>);

impl ModPoly {
    pub fn from_laurent(f: &LaurentPoly<BigInt>) -> ModPoly {
        let lo = f.mindeg().unwrap_or(0);
        let hi = f.maxdeg().unwrap_or(0);
        let mut c = vec![0; (hi - lo + 1) as usize];
        for (e, x) in f.terms() {
            c[(e - lo) as usize] = reduce(x);
        }
        ModPoly(c).trimmed()
    }

    fn trimmed(mut self) -> ModPoly {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.0.iter().rev().fold(0, |acc, &c| (mul(acc, x) + c) % PRIME)
    }

    pub fn derivative(&self) -> ModPoly {
        ModPoly(self.0.iter().enumerate().skip(1).map(|(k, &c)| mul(c, k as u64 % PRIME)).collect()).trimmed()
    }

    /// Quotient by `x - r`, assuming `r` is a root.
    pub fn deflate(&self, r: u64) -> ModPoly {
        let n = self.0.len();
        let mut out = vec![0; n - 1];
        let mut carry = 0;
        for k in (1..n).rev() {
            carry = (self.0[k] + mul(carry, r)) % PRIME;
            out[k - 1] = carry;
        }
        ModPoly(out).trimmed()
    }

    pub fn rem(&self, d: &ModPoly) -> ModPoly {
        let mut r = self.0.clone();
        let dd = d.0.len() - 1;
        let lead_inv = inv(*d.0.last().unwrap());
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let f = mul(r[k], lead_inv);
            for j in 0..=dd {
                let sub = mul(f, d.0[j]);
                r[k - dd + j] = (r[k - dd + j] + PRIME - sub) % PRIME;
            }
            r.pop();
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        ModPoly(r)
    }

    pub fn gcd(&self, other: &ModPoly) -> ModPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.0.is_empty() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}
