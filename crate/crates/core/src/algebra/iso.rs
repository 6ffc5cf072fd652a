//! Finite powers `R^n`, truncated polynomial rings `R[x]/(x^m)`, and the
//! coefficient-transpose isomorphism `R^n[x]/(x^m) = (R[x]/(x^m))^n`.

use num_bigint::BigInt;

use super::ring::Ring;

/// Componentwise product `R^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerRing<R: Ring> {
    pub base: R,
    pub n: usize,
}

impl<R: Ring> PowerRing<R> {
    pub fn new(base: R, n: usize) -> Self {
        assert!(n > 0, "empty product");
        Self { base, n }
    }
}

impl<R: Ring> Ring for PowerRing<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.n]
    }
    fn one(&self) -> Self::Elem {
        vec![self.base.one(); self.n]
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.mul(x, y)).collect()
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        vec![self.base.from_int(n); self.n]
    }
}

/// `R[x]/(x^m)` with elements stored as length-`m` coefficient vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncPolyRing<R: Ring> {
    pub base: R,
    pub m: usize,
}

impl<R: Ring> TruncPolyRing<R> {
    pub fn new(base: R, m: usize) -> Self {
        assert!(m > 0, "truncation order must be positive");
        Self { base, m }
    }
}

impl<R: Ring> Ring for TruncPolyRing<R> {
    type Elem = Vec<R::Elem>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.m]
    }
    fn one(&self) -> Self::Elem {
        let mut out = self.zero();
        out[0] = self.base.one();
        out
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = self.zero();
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b[..self.m - i].iter().enumerate() {
                out[i + j] = self.base.add(&out[i + j], &self.base.mul(x, y));
            }
        }
        out
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
    fn from_int(&self, n: &BigInt) -> Self::Elem {
        let mut out = self.zero();
        out[0] = self.base.from_int(n);
        out
    }
}

/// The two sides of the isomorphism together with the transpose maps.
pub struct PowerQuotientIso<R: Ring> {
    pub left: TruncPolyRing<PowerRing<R>>,
    pub right: PowerRing<TruncPolyRing<R>>,
}

pub fn power_quotient_iso<R: Ring>(base: R, m: usize, n: usize) -> PowerQuotientIso<R> {
    PowerQuotientIso {
        left: TruncPolyRing::new(PowerRing::new(base.clone(), n), m),
        right: PowerRing::new(TruncPolyRing::new(base, m), n),
    }
}

impl<R: Ring> PowerQuotientIso<R> {
    /// `sum_i (a_{i,1}, ..., a_{i,n}) x^i -> (sum_i a_{i,j} x^i)_j`
    pub fn forward(&self, a: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
        transpose(a, self.right.n, self.left.m)
    }

    pub fn backward(&self, b: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
        transpose(b, self.left.m, self.right.n)
    }
}

fn transpose<E: Clone>(a: &[Vec<E>], cols: usize, rows: usize) -> Vec<Vec<E>> {
    assert_eq!(a.len(), rows, "outer length");
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gf::GaloisField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn f2_m2_n3_is_an_isomorphism() {
        let iso = power_quotient_iso(GaloisField::prime(2).unwrap(), 2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut sample = || -> Vec<Vec<u64>> {
            (0..2).map(|_| (0..3).map(|_| rng.gen_range(0..2)).collect()).collect()
        };
        for _ in 0..100 {
            let a = sample();
            let b = sample();
            assert_eq!(iso.backward(&iso.forward(&a)), a);
            let fa = iso.forward(&a);
            let fb = iso.forward(&b);
            assert_eq!(iso.forward(&iso.left.add(&a, &b)), iso.right.add(&fa, &fb));
            assert_eq!(iso.forward(&iso.left.mul(&a, &b)), iso.right.mul(&fa, &fb));
        }
        assert_eq!(iso.forward(&iso.left.one()), iso.right.one());
    }
}
