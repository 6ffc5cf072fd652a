//! Quotient rings `F_q[x]/(m)` and the Chinese remainder decomposition
//! along pairwise coprime factors of the modulus.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use super::error::AlgebraError;
use super::factor::factor_dense;
use super::gf::GaloisField;
use super::ring::{Field, Ring};
use super::upoly;

#[derive(Clone)]
pub struct QuotientRing(Arc<QInner>);

struct QInner {
    field: GaloisField,
    modulus: Vec<u64>,
}

impl PartialEq for QuotientRing {
    fn eq(&self, other: &Self) -> bool {
        self.0.field == other.0.field && self.0.modulus == other.0.modulus
    }
}
impl Eq for QuotientRing {}

impl fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[x]/({:?})", self.0.field, self.0.modulus)
    }
}

impl QuotientRing {
    /// `F_q[x]/(modulus)`; the modulus is made monic and must have positive degree.
    pub fn new(field: &GaloisField, modulus: &[u64]) -> Result<Self, AlgebraError> {
        let m = upoly::monic(field, &upoly::trimmed(field, modulus.to_vec()));
        if m.len() < 2 {
            return Err(AlgebraError::InvalidContext("modulus must have positive degree".into()));
        }
        Ok(QuotientRing(Arc::new(QInner {
            field: field.clone(),
            modulus: m,
        })))
    }

    pub fn field(&self) -> &GaloisField {
        &self.0.field
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }
    pub fn degree(&self) -> usize {
        self.0.modulus.len() - 1
    }

    pub fn reduce(&self, a: &[u64]) -> Vec<u64> {
        upoly::rem(&self.0.field, a, &self.0.modulus)
    }

    /// The class of `x`.
    pub fn x(&self) -> Vec<u64> {
        self.reduce(&[0, 1])
    }

    /// Number of elements, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        self.0.field.order().checked_pow(self.degree() as u32)
    }
}

impl Ring for QuotientRing {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        Vec::new()
    }
    fn one(&self) -> Vec<u64> {
        vec![1]
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        upoly::add(&self.0.field, a, b)
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        upoly::neg(&self.0.field, a)
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        upoly::mul_mod(&self.0.field, a, b, &self.0.modulus)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.is_empty()
    }
    fn from_int(&self, n: &BigInt) -> Vec<u64> {
        upoly::constant(&self.0.field, self.0.field.from_int(n))
    }
}

/// Decomposition of `F[x]/(m_1 ... m_r)` into `prod F[x]/(m_i)`.
#[derive(Clone, Debug)]
pub struct Crt {
    pub ring: QuotientRing,
    pub components: Vec<QuotientRing>,
    idempotents: Vec<Vec<u64>>,
}

impl Crt {
    pub fn new(field: &GaloisField, moduli: &[Vec<u64>]) -> Result<Self, AlgebraError> {
        let components = moduli
            .iter()
            .map(|m| QuotientRing::new(field, m))
            .collect::<Result<Vec<_>, _>>()?;
        for i in 0..components.len() {
            for j in i + 1..components.len() {
                let g = upoly::gcd(field, components[i].modulus(), components[j].modulus());
                if g.len() > 1 {
                    return Err(AlgebraError::NotCoprime);
                }
            }
        }
        let total = components
            .iter()
            .fold(vec![1u64], |acc, c| upoly::mul(field, &acc, c.modulus()));
        let ring = QuotientRing::new(field, &total)?;
        let idempotents = components
            .iter()
            .map(|c| {
                let cofactor = upoly::div_exact(field, &total, c.modulus()).unwrap();
                let (_, s, _) = upoly::ext_gcd(field, &cofactor, c.modulus());
                upoly::mul_mod(field, &cofactor, &s, &total)
            })
            .collect();
        Ok(Crt {
            ring,
            components,
            idempotents,
        })
    }

    /// Decomposition of `F[x]/(poly)` along its prime-power factors.
    pub fn from_factorization(field: &GaloisField, poly: &[u64]) -> Result<Self, AlgebraError> {
        let (_, factors) = factor_dense(field, poly)?;
        let moduli: Vec<Vec<u64>> = factors
            .iter()
            .map(|(h, m)| upoly::pow(field, h, *m as u64))
            .collect();
        Self::new(field, &moduli)
    }

    pub fn split(&self, a: &[u64]) -> Vec<Vec<u64>> {
        self.components.iter().map(|c| c.reduce(a)).collect()
    }

    pub fn join(&self, parts: &[Vec<u64>]) -> Vec<u64> {
        assert_eq!(parts.len(), self.components.len(), "component count");
        let f = self.ring.field();
        let sum = parts
            .iter()
            .zip(&self.idempotents)
            .fold(Vec::new(), |acc, (a, e)| upoly::add(f, &acc, &upoly::mul(f, a, e)));
        self.ring.reduce(&sum)
    }
}

/// Inverse of a unit in `F[x]/(m)`.
pub fn quotient_inverse(r: &QuotientRing, a: &[u64]) -> Option<Vec<u64>> {
    let (g, s, _) = upoly::ext_gcd(r.field(), a, r.modulus());
    (g.len() == 1 && r.field().is_one(&g[0])).then(|| r.reduce(&s))
}

impl QuotientRing {
    pub fn try_inverse(&self, a: &[u64]) -> Option<Vec<u64>> {
        quotient_inverse(self, a)
    }
}

/// Only meaningful when the modulus is irreducible.
impl Field for QuotientRing {
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        quotient_inverse(self, a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_factor_is_identity() {
        let f = GaloisField::prime(5).unwrap();
        let crt = Crt::new(&f, &[vec![1, 0, 1]]).unwrap();
        let a = vec![3, 4];
        assert_eq!(crt.split(&a), vec![a.clone()]);
        assert_eq!(crt.join(&[a.clone()]), a);
    }

    #[test]
    fn x_splits_to_roots() {
        let f = GaloisField::prime(2).unwrap();
        let crt = Crt::new(&f, &[vec![0, 1], vec![1, 1]]).unwrap();
        assert_eq!(crt.split(&[0, 1]), vec![vec![], vec![1]]);
    }

    #[test]
    fn rejects_shared_factors() {
        let f = GaloisField::prime(3).unwrap();
        let err = Crt::new(&f, &[vec![0, 1], vec![0, 0, 1]]).unwrap_err();
        assert_eq!(err, AlgebraError::NotCoprime);
    }

    #[test]
    fn roundtrip_and_homomorphism() {
        let f = GaloisField::prime(3).unwrap();
        // x^2 (x + 1)
        let crt = Crt::from_factorization(&f, &[0, 0, 1, 1]).unwrap();
        assert_eq!(crt.components.len(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a: Vec<u64> = upoly::trimmed(&f, (0..3).map(|_| rng.gen_range(0..3)).collect());
            let b: Vec<u64> = upoly::trimmed(&f, (0..3).map(|_| rng.gen_range(0..3)).collect());
            assert_eq!(crt.join(&crt.split(&a)), a);
            let ab = crt.ring.mul(&a, &b);
            let parts: Vec<Vec<u64>> = crt
                .split(&a)
                .iter()
                .zip(crt.split(&b))
                .zip(&crt.components)
                .map(|((x, y), c)| c.mul(x, &y))
                .collect();
            assert_eq!(crt.split(&ab), parts);
        }
    }
}
