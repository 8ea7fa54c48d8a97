use alloc::vec::Vec;

use super::{Coeff, ExactDiv};

/// Fraction-free Gaussian elimination; every division is exact in an integral domain.
///
/// Returns `None` only if an intermediate division fails, which means the ring
/// is not an integral domain or the division routine is wrong.
pub fn det_bareiss<R: Coeff + ExactDiv>(mut m: Vec<Vec<R>>) -> Option<R> {
    let n = m.len();
    if n == 0 {
        return Some(R::one());
    }
    let mut negate = false;
    let mut prev = R::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let pivot = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match pivot {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return Some(R::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].clone() * m[k][k].clone() - m[i][k].clone() * m[k][j].clone();
                m[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    Some(if negate { -d } else { d })
}

/// Laplace expansion along the first row. Exponential cost; meant for small matrices.
pub fn det_cofactor<R: Coeff>(m: &[Vec<R>]) -> R {
    let n = m.len();
    match n {
        0 => R::one(),
        1 => m[0][0].clone(),
        2 => m[0][0].clone() * m[1][1].clone() - m[0][1].clone() * m[1][0].clone(),
        _ => {
            let mut acc = R::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<R>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let term = m[0][j].clone() * det_cofactor(&minor);
                acc = if j % 2 == 0 { acc + term } else { acc - term };
            }
            acc
        }
    }
}

/// Bareiss for larger matrices, cofactor expansion up to 5x5.
pub fn determinant<R: Coeff + ExactDiv>(m: Vec<Vec<R>>) -> Option<R> {
    if m.len() <= 5 {
        Some(det_cofactor(&m))
    } else {
        det_bareiss(m)
    }
}
