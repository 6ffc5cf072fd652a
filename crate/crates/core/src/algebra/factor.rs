//! Univariate factorization over finite fields: squarefree decomposition,
//! distinct-degree splitting and Cantor-Zassenhaus equal-degree splitting.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arith::factor_u64;
use super::error::AlgebraError;
use super::gf::GaloisField;
use super::ring::Ring;
use super::upoly;

type P = Vec<u64>;

const SPLIT_SEED: u64 = 0x00fa_c7c0_7e5e_ed00;

/// Rabin's irreducibility test for a polynomial over `F_q`.
pub fn is_irreducible(f: &GaloisField, poly: &[u64]) -> bool {
    let Some(n) = upoly::degree(poly) else {
        return false;
    };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let poly = upoly::monic(f, poly);
    let x = vec![0, 1];
    let q = f.order();
    // frob[i] = x^(q^i) mod poly
    let mut frob = vec![upoly::rem(f, &x, &poly)];
    for i in 1..=n {
        let next = upoly::pow_mod(f, &frob[i - 1], q, &poly);
        frob.push(next);
    }
    if upoly::sub(f, &frob[n], &upoly::rem(f, &x, &poly)).len() > 0 {
        return false;
    }
    for (r, _) in factor_u64(n as u64) {
        let d = n / r as usize;
        let diff = upoly::sub(f, &frob[d], &x);
        if upoly::gcd(f, &diff, &poly).len() != 1 {
            return false;
        }
    }
    true
}

/// Squarefree decomposition `f = lc * prod g_i^{m_i}` with monic, pairwise
/// coprime, squarefree `g_i`.
pub fn squarefree(f: &GaloisField, poly: &[u64]) -> Vec<(P, u32)> {
    let poly = upoly::monic(f, poly);
    let mut out = Vec::new();
    if poly.len() <= 1 {
        return out;
    }
    let d = upoly::derivative(f, &poly);
    let mut c = upoly::gcd(f, &poly, &d);
    let mut w = upoly::div_exact(f, &poly, &c).expect("gcd divides");
    let mut i = 1u32;
    while w.len() > 1 {
        let y = upoly::gcd(f, &w, &c);
        let z = upoly::div_exact(f, &w, &y).unwrap();
        if z.len() > 1 {
            out.push((z, i));
        }
        i += 1;
        c = upoly::div_exact(f, &c, &y).unwrap();
        w = y;
    }
    if c.len() > 1 {
        let root = pth_root_poly(f, &c);
        let p = f.p() as u32;
        for (g, m) in squarefree(f, &root) {
            out.push((g, m * p));
        }
    }
    out
}

/// For a polynomial in `x^p`, returns its `p`-th root.
fn pth_root_poly(f: &GaloisField, poly: &[u64]) -> P {
    let p = f.p() as usize;
    poly.iter()
        .step_by(p)
        .map(|c| f.pth_root(*c))
        .collect()
}

/// Splits a monic squarefree polynomial into `(product of all irreducible
/// factors of degree d, d)` pairs.
pub fn distinct_degree(f: &GaloisField, poly: &[u64]) -> Vec<(P, usize)> {
    let mut rest = upoly::monic(f, poly);
    let mut out = Vec::new();
    let x: P = vec![0, 1];
    let q = f.order();
    let mut h = upoly::rem(f, &x, &rest);
    let mut d = 0usize;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            let deg = rest.len() - 1;
            out.push((rest, deg));
            break;
        }
        h = upoly::pow_mod(f, &h, q, &rest);
        let g = upoly::gcd(f, &upoly::sub(f, &h, &x), &rest);
        if g.len() > 1 {
            rest = upoly::div_exact(f, &rest, &g).unwrap();
            h = upoly::rem(f, &h, &rest);
            out.push((g, d));
        }
    }
    out
}

/// Splits a monic product of distinct irreducibles of degree `d`.
pub fn equal_degree(f: &GaloisField, poly: &[u64], d: usize) -> Vec<P> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED ^ poly.len() as u64);
    let mut out = Vec::new();
    equal_degree_rec(f, &upoly::monic(f, poly), d, &mut rng, &mut out);
    out.sort_by(poly_order);
    out
}

fn equal_degree_rec(f: &GaloisField, poly: &[u64], d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<P>) {
    let n = poly.len() - 1;
    if n == d {
        out.push(poly.to_vec());
        return;
    }
    let q = f.order();
    loop {
        let a: P = upoly::trimmed(f, (0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.len() <= 1 {
            continue;
        }
        let b = if q % 2 == 1 {
            let exp = (BigUint::from(q).pow(d as u32) - 1u32) / 2u32;
            let s = upoly::pow_mod_big(f, &a, &exp, poly);
            upoly::sub(f, &s, &[1])
        } else {
            // absolute trace to F_2: sum of a^(2^i) for i < k*d
            let steps = f.k() as usize * d;
            let mut term = upoly::rem(f, &a, poly);
            let mut acc = term.clone();
            for _ in 1..steps {
                term = upoly::mul_mod(f, &term, &term, poly);
                acc = upoly::add(f, &acc, &term);
            }
            acc
        };
        let g = upoly::gcd(f, &b, poly);
        if g.len() > 1 && g.len() < poly.len() {
            let h = upoly::div_exact(f, poly, &g).unwrap();
            equal_degree_rec(f, &g, d, rng, out);
            equal_degree_rec(f, &h, d, rng, out);
            return;
        }
    }
}

/// Degree first, then coefficients from the top.
pub fn poly_order(a: &P, b: &P) -> std::cmp::Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// Full factorization `poly = lc * prod h^m` with monic irreducible `h`,
/// sorted by degree and then coefficients.
pub fn factor_dense(f: &GaloisField, poly: &[u64]) -> Result<(u64, Vec<(P, u32)>), AlgebraError> {
    let poly = upoly::trimmed(f, poly.to_vec());
    let Some(&lc) = poly.last() else {
        return Err(AlgebraError::ZeroPolynomial);
    };
    let mut out = Vec::new();
    for (g, m) in squarefree(f, &poly) {
        for (part, d) in distinct_degree(f, &g) {
            for h in equal_degree(f, &part, d) {
                out.push((h, m));
            }
        }
    }
    out.sort_by(|a, b| poly_order(&a.0, &b.0));
    Ok((lc, out))
}

/// Distinct roots in `F_q`, in increasing encoding order.
pub fn roots(f: &GaloisField, poly: &[u64]) -> Vec<u64> {
    let poly = upoly::trimmed(f, poly.to_vec());
    if poly.len() <= 1 {
        return Vec::new();
    }
    let poly = upoly::monic(f, &poly);
    let x: P = vec![0, 1];
    let xq = upoly::pow_mod(f, &x, f.order(), &poly);
    let lin = upoly::gcd(f, &upoly::sub(f, &xq, &x), &poly);
    if lin.len() <= 1 {
        return Vec::new();
    }
    let mut out: Vec<u64> = equal_degree(f, &lin, 1)
        .into_iter()
        .map(|h| f.neg(&h[0]))
        .collect();
    out.sort_unstable();
    out
}

/// Images of the generator of `from` in `to` defining an embedding
/// `F_{p^k} -> F_{p^k'}`; `None` unless `k | k'` and the characteristics agree.
pub fn embedding(from: &GaloisField, to: &GaloisField) -> Option<u64> {
    if from.p() != to.p() || to.k() % from.k() != 0 {
        return None;
    }
    if from.k() == 1 {
        return Some(to.zero());
    }
    roots(to, from.modulus()).first().copied()
}

/// Applies the embedding fixed by the image `beta` of the generator.
pub fn embed(from: &GaloisField, to: &GaloisField, beta: u64, a: u64) -> u64 {
    if from.k() == 1 {
        return a;
    }
    let digits = from.digits(a);
    digits
        .iter()
        .rev()
        .fold(0u64, |acc, &d| to.add(&to.mul(&acc, &beta), &d))
}
