//! Factorization of univariate integer polynomials over `Q`.
//!
//! Content/primitive split, squarefree decomposition over `Q`, then
//! factorization modulo a single prime larger than twice the Mignotte
//! bound followed by recombination of modular factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::next_prime;
use super::error::AlgebraError;
use super::factor::factor_dense;
use super::gf::GaloisField;
use super::resultant::discriminant;
use super::ring::{Integers, Rationals, Ring};
use super::upoly;

/// Dense integer polynomial, little-endian.
pub type ZPoly = Vec<BigInt>;

/// Recombination is exponential in the number of modular factors.
pub const MAX_MODULAR_FACTORS: usize = 16;
const MAX_PRIME: u64 = 1 << 61;

pub fn content(f: &[BigInt]) -> BigInt {
    f.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub fn primitive(f: &[BigInt]) -> ZPoly {
    let f = upoly::trimmed(&Integers, f.to_vec());
    let c = content(&f);
    if c.is_zero() {
        return f;
    }
    let c = if f.last().unwrap().is_negative() { -c } else { c };
    f.iter().map(|x| x / &c).collect()
}

fn to_q(f: &[BigInt]) -> Vec<BigRational> {
    f.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn from_q(f: &[BigRational]) -> ZPoly {
    let lcm = f.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: ZPoly = f
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    primitive(&ints)
}

/// Exact quotient over `Z`, if it exists.
pub fn div_exact_z(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let (q, r) = upoly::divrem(&Rationals, &to_q(a), &to_q(b));
    if !r.is_empty() || q.iter().any(|c| !c.is_integer()) {
        return None;
    }
    Some(q.into_iter().map(|c| c.to_integer()).collect())
}

/// Squarefree decomposition of a primitive polynomial over `Q`; factors
/// are primitive with positive leading coefficient.
pub fn squarefree_q(f: &[BigInt]) -> Vec<(ZPoly, u32)> {
    let r = Rationals;
    let fq = upoly::monic(&r, &to_q(f));
    let mut out = Vec::new();
    if fq.len() <= 1 {
        return out;
    }
    let mut c = upoly::gcd(&r, &fq, &upoly::derivative(&r, &fq));
    let mut w = upoly::div_exact(&r, &fq, &c).unwrap();
    let mut i = 1;
    while w.len() > 1 {
        let y = upoly::gcd(&r, &w, &c);
        let z = upoly::div_exact(&r, &w, &y).unwrap();
        if z.len() > 1 {
            out.push((from_q(&z), i));
        }
        i += 1;
        c = upoly::div_exact(&r, &c, &y).unwrap();
        w = y;
    }
    out
}

/// Irreducible factors of a squarefree primitive polynomial of positive degree.
pub fn factor_squarefree_z(f: &[BigInt]) -> Result<Vec<ZPoly>, AlgebraError> {
    let f = primitive(f);
    let n = f.len() - 1;
    if n == 1 {
        return Ok(vec![f]);
    }
    let lc = f.last().unwrap().clone();
    let norm2: BigInt = f.iter().map(|c| c * c).sum();
    let bound = (BigInt::one() << n) * (norm2.sqrt() + 1u32) * lc.abs() * 2u32 + 1u32;
    let start = bound
        .to_u64()
        .filter(|&b| b < MAX_PRIME)
        .ok_or_else(|| AlgebraError::ResourceLimit("coefficient bound exceeds 61 bits".into()))?;
    let disc = discriminant(&f);
    let mut p = next_prime(start);
    while (&lc % p).is_zero() || (&disc % p).is_zero() {
        p = next_prime(p + 1);
    }
    let field = GaloisField::prime(p)?;
    let reduced: Vec<u64> = f.iter().map(|c| field.from_int(c)).collect();
    let (_, modular) = factor_dense(&field, &reduced)?;
    let mut modular: Vec<Vec<u64>> = modular.into_iter().map(|(h, _)| h).collect();
    if modular.len() > MAX_MODULAR_FACTORS {
        return Err(AlgebraError::ResourceLimit(format!(
            "{} modular factors exceed the recombination limit",
            modular.len()
        )));
    }
    let pz = BigInt::from(p);
    let half = &pz / 2;
    let symmetric = |v: u64| {
        let b = BigInt::from(v);
        if b > half {
            b - &pz
        } else {
            b
        }
    };
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= modular.len() {
        let mut found = None;
        for subset in subsets(modular.len(), size) {
            let rest_lc = rest.last().unwrap().clone();
            let prod = subset.iter().fold(vec![field.from_int(&rest_lc)], |acc, &i| {
                upoly::mul(&field, &acc, &modular[i])
            });
            let cand = primitive(&prod.iter().map(|&c| symmetric(c)).collect::<Vec<_>>());
            if let Some(q) = div_exact_z(&rest, &cand) {
                found = Some((subset, cand, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                rest = q;
                let mut idx = 0;
                modular.retain(|_| {
                    idx += 1;
                    !subset.contains(&(idx - 1))
                });
            }
            None => size += 1,
        }
    }
    out.push(primitive(&rest));
    out.sort_by(zpoly_order);
    Ok(out)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

pub fn zpoly_order(a: &ZPoly, b: &ZPoly) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Factorization over `Q`: `f = unit * prod h^m` with primitive irreducible
/// `h` of positive leading coefficient. The unit is the signed content.
pub fn factor_q(f: &[BigInt]) -> Result<(BigInt, Vec<(ZPoly, u32)>), AlgebraError> {
    let f = upoly::trimmed(&Integers, f.to_vec());
    if f.is_empty() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let c = content(&f);
    let unit = if f.last().unwrap().is_negative() { -c } else { c };
    let mut out = Vec::new();
    for (g, m) in squarefree_q(&f) {
        for h in factor_squarefree_z(&g)? {
            out.push((h, m));
        }
    }
    out.sort_by(|a, b| zpoly_order(&a.0, &b.0));
    Ok((unit, out))
}
