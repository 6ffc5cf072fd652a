//! Cyclotomic polynomials over the integers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::arith::divisors;
use super::gf::GaloisField;
use super::ring::Ring;
use super::upoly;

/// Dense coefficients of `Phi_n`, obtained by dividing `x^n - 1` by every
/// `Phi_d` with `d | n`, `d < n`.
pub fn cyclotomic(n: u64) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic index must be positive");
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in divisors(n) {
        if d < n {
            num = div_monic(&num, &cyclotomic(d));
        }
    }
    num
}

/// Exact quotient by a monic integer polynomial.
fn div_monic(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    let mut rem = a.to_vec();
    let mut quot = vec![BigInt::zero(); a.len() - db];
    for i in (0..quot.len()).rev() {
        let c = rem[i + db].clone();
        if c.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            rem[i + j] -= &c * bc;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// Coefficient-wise reduction of an integer polynomial into a finite field.
pub fn reduce_dense(f: &GaloisField, a: &[BigInt]) -> Vec<u64> {
    upoly::trimmed(f, a.iter().map(|c| f.from_int(c)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::arith::euler_phi;
    use crate::algebra::ring::Integers;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(cyclotomic(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic(7), ints(&[1; 7]));
        assert_eq!(cyclotomic(6), ints(&[1, -1, 1]));
    }

    #[test]
    fn product_over_divisors() {
        for n in 1..=30u64 {
            let prod = divisors(n)
                .into_iter()
                .fold(ints(&[1]), |acc, d| upoly::mul(&Integers, &acc, &cyclotomic(d)));
            let mut expect = vec![BigInt::zero(); n as usize + 1];
            expect[0] = -BigInt::one();
            expect[n as usize] = BigInt::one();
            assert_eq!(prod, expect, "n = {n}");
            assert_eq!(cyclotomic(n).len() as u64 - 1, euler_phi(n));
        }
    }

    #[test]
    fn phi_105_has_a_coefficient_minus_two() {
        assert!(cyclotomic(105).contains(&BigInt::from(-2)));
    }
}
