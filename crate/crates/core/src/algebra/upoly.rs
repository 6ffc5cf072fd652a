//! Dense univariate polynomials, stored little-endian (`a[i]` is the
//! coefficient of `x^i`) and always trimmed: the zero polynomial is the
//! empty vector.

use num_bigint::BigUint;

use super::ring::{Field, Ring};

pub fn trim<R: Ring>(r: &R, a: &mut Vec<R::Elem>) {
    while a.last().is_some_and(|c| r.is_zero(c)) {
        a.pop();
    }
}

pub fn trimmed<R: Ring>(r: &R, mut a: Vec<R::Elem>) -> Vec<R::Elem> {
    trim(r, &mut a);
    a
}

pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<R: Ring>(r: &R, c: R::Elem) -> Vec<R::Elem> {
    trimmed(r, vec![c])
}

/// `x - c`
pub fn linear<R: Ring>(r: &R, c: &R::Elem) -> Vec<R::Elem> {
    vec![r.neg(c), r.one()]
}

pub fn monomial<R: Ring>(r: &R, c: R::Elem, deg: usize) -> Vec<R::Elem> {
    let mut out = vec![r.zero(); deg + 1];
    out[deg] = c;
    trimmed(r, out)
}

pub fn add<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    let zero = r.zero();
    let out = (0..n)
        .map(|i| r.add(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trimmed(r, out)
}

pub fn sub<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    let n = a.len().max(b.len());
    let zero = r.zero();
    let out = (0..n)
        .map(|i| r.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trimmed(r, out)
}

pub fn neg<R: Ring>(r: &R, a: &[R::Elem]) -> Vec<R::Elem> {
    a.iter().map(|c| r.neg(c)).collect()
}

pub fn scale<R: Ring>(r: &R, a: &[R::Elem], c: &R::Elem) -> Vec<R::Elem> {
    trimmed(r, a.iter().map(|x| r.mul(x, c)).collect())
}

pub fn mul<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![r.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if r.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = r.add(&out[i + j], &r.mul(x, y));
        }
    }
    trimmed(r, out)
}

pub fn pow<R: Ring>(r: &R, a: &[R::Elem], mut e: u64) -> Vec<R::Elem> {
    let mut acc = constant(r, r.one());
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(r, &acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(r, &base, &base);
        }
    }
    acc
}

pub fn eval<R: Ring>(r: &R, a: &[R::Elem], x: &R::Elem) -> R::Elem {
    a.iter()
        .rev()
        .fold(r.zero(), |acc, c| r.add(&r.mul(&acc, x), c))
}

pub fn derivative<R: Ring>(r: &R, a: &[R::Elem]) -> Vec<R::Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| r.mul(c, &r.from_i64(i as i64)))
        .collect();
    trimmed(r, out)
}

/// Substitute `x -> b(x)` into `a`.
pub fn compose<R: Ring>(r: &R, a: &[R::Elem], b: &[R::Elem]) -> Vec<R::Elem> {
    a.iter().rev().fold(Vec::new(), |acc, c| {
        add(r, &mul(r, &acc, b), &constant(r, c.clone()))
    })
}

pub fn leading<R: Ring>(a: &[R::Elem]) -> Option<&R::Elem> {
    a.last()
}

pub fn monic<F: Field>(f: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = f.inv(lc).expect("nonzero leading coefficient");
            scale(f, a, &inv)
        }
    }
}

/// Euclidean division; panics on division by the zero polynomial.
pub fn divrem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(b).expect("division by zero polynomial");
    let lc_inv = f.inv(&b[db]).expect("nonzero leading coefficient");
    let mut rem = a.to_vec();
    trim(f, &mut rem);
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let mut quot = vec![f.zero(); rem.len() - db];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = f.mul(rem.last().unwrap(), &lc_inv);
        for (i, bc) in b.iter().enumerate() {
            rem[shift + i] = f.sub(&rem[shift + i], &f.mul(&c, bc));
        }
        quot[shift] = c;
        trim(f, &mut rem);
    }
    (trimmed(f, quot), rem)
}

pub fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    divrem(f, a, b).1
}

/// Exact quotient; `None` when `b` does not divide `a`.
pub fn div_exact<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let (q, r) = divrem(f, a, b);
    r.is_empty().then_some(q)
}

/// Monic greatest common divisor (zero if both inputs are zero).
pub fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = trimmed(f, a.to_vec());
    let mut y = trimmed(f, b.to_vec());
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn ext_gcd<F: Field>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<F::Elem>) {
    let mut r0 = trimmed(f, a.to_vec());
    let mut r1 = trimmed(f, b.to_vec());
    let mut s0 = constant(f, f.one());
    let mut s1 = Vec::new();
    let mut t0 = Vec::new();
    let mut t1 = constant(f, f.one());
    while !r1.is_empty() {
        let (q, r) = divrem(f, &r0, &r1);
        let s2 = sub(f, &s0, &mul(f, &q, &s1));
        let t2 = sub(f, &t0, &mul(f, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = f.inv(lc).unwrap();
            (scale(f, &r0, &inv), scale(f, &s0, &inv), scale(f, &t0, &inv))
        }
    }
}

pub fn mul_mod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

pub fn pow_mod<F: Field>(f: &F, base: &[F::Elem], exp: u64, m: &[F::Elem]) -> Vec<F::Elem> {
    pow_mod_big(f, base, &BigUint::from(exp), m)
}

pub fn pow_mod_big<F: Field>(
    f: &F,
    base: &[F::Elem],
    exp: &BigUint,
    m: &[F::Elem],
) -> Vec<F::Elem> {
    let mut acc = rem(f, &constant(f, f.one()), m);
    let b = rem(f, base, m);
    for i in (0..exp.bits()).rev() {
        acc = mul_mod(f, &acc, &acc, m);
        if exp.bit(i) {
            acc = mul_mod(f, &acc, &b, m);
        }
    }
    acc
}
