//! Resultants and discriminants of dense integer polynomials via
//! fraction-free (Bareiss) elimination on the Sylvester matrix.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ring::Integers;
use super::upoly;

/// Determinant of a square integer matrix.
pub fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// `Res(a, b)` for nonzero `a`, `b` (little-endian coefficients).
pub fn resultant(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let a = upoly::trimmed(&Integers, a.to_vec());
    let b = upoly::trimmed(&Integers, b.to_vec());
    assert!(!a.is_empty() && !b.is_empty(), "resultant of the zero polynomial");
    let (m, n) = (a.len() - 1, b.len() - 1);
    if m + n == 0 {
        return BigInt::one();
    }
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in a.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![BigInt::zero(); size];
        for (j, c) in b.iter().rev().enumerate() {
            row[i + j] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

/// `disc(f) = (-1)^{n(n-1)/2} Res(f, f') / lc(f)` for `deg f >= 1`.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let f = upoly::trimmed(&Integers, f.to_vec());
    let n = f.len() - 1;
    assert!(n >= 1, "discriminant of a constant");
    if n == 1 {
        return BigInt::one();
    }
    let df = upoly::derivative(&Integers, &f);
    let r = resultant(&f, &df) / f.last().unwrap();
    if (n * (n - 1) / 2) % 2 == 1 {
        -r
    } else {
        r
    }
}
