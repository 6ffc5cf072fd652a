//! Finite fields `F_{p^k}` presented as `F_p[a]/(h(a))`.
//!
//! Elements are encoded as integers in `[0, q)`: the base-`p` digits of the
//! encoding are the coefficients of `1, a, a^2, ...`. For `k = 1` the
//! encoding is the residue itself. Fields with `q <= 2^16` multiply through
//! discrete-log tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::arith::{factor_u64, is_prime};
use super::error::AlgebraError;
use super::factor::is_irreducible;
use super::ring::{Field, Ring};

/// Seed used for modulus selection unless a caller overrides it.
pub const DEFAULT_FIELD_SEED: u64 = 0x0ab0_d5ee_d000_0001;

const TABLE_LIMIT: u64 = 1 << 16;
const MAX_ENCODED: u64 = 1 << 62;
const MAX_DEGREE: usize = 64;

#[derive(Clone)]
pub struct GaloisField(Arc<Inner>);

struct Inner {
    p: u64,
    k: u32,
    q: u64,
    /// Monic modulus over `F_p`, little-endian, length `k + 1`.
    modulus: Vec<u64>,
    tables: Option<LogTables>,
}

struct LogTables {
    exp: Vec<u64>,
    log: Vec<u32>,
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}
impl Eq for GaloisField {}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{}; {:?})", self.0.p, self.0.k, self.0.modulus)
        }
    }
}

/// Builds (or fetches from the process-wide cache) the field `F_{p^k}`
/// with the default seed.
pub fn make_ext_field(p: u64, k: u32) -> Result<GaloisField, AlgebraError> {
    make_ext_field_seeded(p, k, DEFAULT_FIELD_SEED)
}

pub fn make_ext_field_seeded(p: u64, k: u32, seed: u64) -> Result<GaloisField, AlgebraError> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32, u64), GaloisField>>> = OnceLock::new();
    if !is_prime(p) || p >= MAX_ENCODED {
        return Err(AlgebraError::NotPrime(p));
    }
    if k == 0 {
        return Err(AlgebraError::ZeroDegree);
    }
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&(p, k, seed)) {
        return Ok(f.clone());
    }
    let field = if k == 1 {
        GaloisField::prime(p)?
    } else {
        let modulus = find_irreducible(p, k, seed)?;
        GaloisField::with_modulus(p, modulus)?
    };
    cache
        .lock()
        .unwrap()
        .entry((p, k, seed))
        .or_insert_with(|| field.clone());
    Ok(field)
}

fn find_irreducible(p: u64, k: u32, seed: u64) -> Result<Vec<u64>, AlgebraError> {
    if p.checked_pow(k).is_none_or(|q| q >= MAX_ENCODED) || k as usize >= MAX_DEGREE {
        return Err(AlgebraError::FieldTooLarge { p, k });
    }
    let base = GaloisField::prime(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p.rotate_left(17) ^ (k as u64).rotate_left(47));
    loop {
        let mut cand: Vec<u64> = (0..k).map(|_| rng.gen_range(0..p)).collect();
        cand.push(1);
        if cand[0] != 0 && is_irreducible(&base, &cand) {
            return Ok(cand);
        }
    }
}

impl GaloisField {
    /// The prime field `F_p`, presented with modulus `x`.
    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        if !is_prime(p) || p >= MAX_ENCODED {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Self::build(p, vec![0, 1]))
    }

    /// `F_p[a]/(modulus)`; the modulus must be monic and irreducible over `F_p`.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<Self, AlgebraError> {
        if !is_prime(p) || p >= MAX_ENCODED {
            return Err(AlgebraError::NotPrime(p));
        }
        let k = modulus.len().saturating_sub(1) as u32;
        if k == 0 {
            return Err(AlgebraError::ZeroDegree);
        }
        if p.checked_pow(k).is_none_or(|q| q >= MAX_ENCODED) || k as usize >= MAX_DEGREE {
            return Err(AlgebraError::FieldTooLarge { p, k });
        }
        if modulus.last() != Some(&1) || !is_irreducible(&Self::prime(p)?, &modulus) {
            return Err(AlgebraError::InvalidContext(
                "field modulus must be monic irreducible".into(),
            ));
        }
        Ok(Self::build(p, modulus))
    }

    fn build(p: u64, modulus: Vec<u64>) -> Self {
        let k = (modulus.len() - 1) as u32;
        let q = p.pow(k);
        let mut inner = Inner {
            p,
            k,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_LIMIT && q > 2 {
            inner.tables = Some(build_tables(&inner));
        }
        GaloisField(Arc::new(inner))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn order(&self) -> u64 {
        self.0.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.0.q
    }

    pub fn digits(&self, a: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.0.k as usize);
        let mut x = a;
        for _ in 0..self.0.k {
            out.push(x % self.0.p);
            x /= self.0.p;
        }
        out
    }

    /// Encodes a coefficient vector (any length; reduced modulo the field modulus).
    pub fn from_digits(&self, digits: &[u64]) -> u64 {
        let p = self.0.p;
        let mut buf: Vec<u64> = digits.iter().map(|d| d % p).collect();
        reduce_digits(&mut buf, &self.0.modulus, p);
        encode(&buf, p, self.0.k as usize)
    }

    /// The class of the indeterminate `a`.
    pub fn generator(&self) -> u64 {
        self.from_digits(&[0, 1])
    }

    pub fn random_elem<R: Rng>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.0.q)
    }

    pub fn frobenius(&self, a: u64) -> u64 {
        self.pow(&a, self.0.p)
    }

    /// The unique `p`-th root, `a^(q/p)`.
    pub fn pth_root(&self, a: u64) -> u64 {
        self.pow(&a, self.0.q / self.0.p)
    }

    /// Human-readable element: a residue for prime fields, otherwise a
    /// polynomial in the generator `a`.
    pub fn format_elem(&self, x: u64) -> String {
        if self.0.k == 1 {
            return x.to_string();
        }
        let digits = self.digits(x);
        let mut parts = Vec::new();
        for (i, &d) in digits.iter().enumerate().rev() {
            if d == 0 {
                continue;
            }
            let mon = match i {
                0 => String::new(),
                1 => "a".to_string(),
                _ => format!("a^{i}"),
            };
            parts.push(match (d, i) {
                (_, 0) => d.to_string(),
                (1, _) => mon,
                _ => format!("{d}*{mon}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    fn mul_slow(&self, a: u64, b: u64) -> u64 {
        let Inner { p, k, .. } = *self.0;
        if k == 1 {
            return ((a as u128 * b as u128) % p as u128) as u64;
        }
        let k = k as usize;
        let mut da = [0u64; MAX_DEGREE];
        let mut db = [0u64; MAX_DEGREE];
        split(a, p, &mut da[..k]);
        split(b, p, &mut db[..k]);
        let mut prod = vec![0u64; 2 * k - 1];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = ((prod[i + j] as u128 + da[i] as u128 * db[j] as u128) % p as u128) as u64;
            }
        }
        reduce_digits(&mut prod, &self.0.modulus, p);
        encode(&prod, p, k)
    }
}

fn split(mut x: u64, p: u64, out: &mut [u64]) {
    for d in out.iter_mut() {
        *d = x % p;
        x /= p;
    }
}

fn encode(digits: &[u64], p: u64, k: usize) -> u64 {
    digits
        .iter()
        .take(k)
        .rev()
        .fold(0u64, |acc, &d| acc * p + d)
}

/// Reduces a little-endian digit vector modulo a monic polynomial over `F_p`.
fn reduce_digits(buf: &mut Vec<u64>, modulus: &[u64], p: u64) {
    let k = modulus.len() - 1;
    while buf.len() > k {
        let top = buf.pop().unwrap();
        if top == 0 {
            continue;
        }
        let shift = buf.len() - k;
        for (i, &m) in modulus[..k].iter().enumerate() {
            let sub = ((top as u128 * m as u128) % p as u128) as u64;
            buf[shift + i] = (buf[shift + i] + p - sub) % p;
        }
    }
}

fn build_tables(inner: &Inner) -> LogTables {
    let q = inner.q;
    let tmp = GaloisField(Arc::new(Inner {
        p: inner.p,
        k: inner.k,
        q,
        modulus: inner.modulus.clone(),
        tables: None,
    }));
    let order = q - 1;
    let prime_factors: Vec<u64> = factor_u64(order).into_iter().map(|(r, _)| r).collect();
    let gen = (2..q)
        .find(|&g| prime_factors.iter().all(|r| tmp.pow(&g, order / r) != 1))
        .expect("multiplicative group is cyclic");
    let mut exp = Vec::with_capacity(2 * order as usize);
    let mut log = vec![0u32; q as usize];
    let mut x = 1u64;
    for i in 0..order {
        exp.push(x);
        log[x as usize] = i as u32;
        x = tmp.mul_slow(x, gen);
    }
    let head = exp.clone();
    exp.extend(head);
    LogTables { exp, log }
}

impl Ring for GaloisField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let Inner { p, k, .. } = *self.0;
        if k == 1 {
            let s = a + b;
            return if s >= p { s - p } else { s };
        }
        if p == 2 {
            return a ^ b;
        }
        let (mut x, mut y, mut place, mut res) = (*a, *b, 1u64, 0u64);
        for _ in 0..k {
            let d = (x % p + y % p) % p;
            res += d * place;
            place = place.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        res
    }
    fn neg(&self, a: &u64) -> u64 {
        let Inner { p, k, .. } = *self.0;
        if k == 1 {
            return if *a == 0 { 0 } else { p - a };
        }
        if p == 2 {
            return *a;
        }
        let (mut x, mut place, mut res) = (*a, 1u64, 0u64);
        for _ in 0..k {
            let d = x % p;
            res += ((p - d) % p) * place;
            place = place.wrapping_mul(p);
            x /= p;
        }
        res
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        match &self.0.tables {
            Some(t) => t.exp[t.log[*a as usize] as usize + t.log[*b as usize] as usize],
            None => self.mul_slow(*a, *b),
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn from_int(&self, n: &BigInt) -> u64 {
        n.mod_floor(&BigInt::from(self.0.p)).to_u64().unwrap()
    }
    fn pow(&self, a: &u64, exp: u64) -> u64 {
        if let (Some(t), true) = (&self.0.tables, *a != 0) {
            let e = (t.log[*a as usize] as u128 * exp as u128) % (self.0.q - 1) as u128;
            return t.exp[e as usize];
        }
        let (mut base, mut e, mut acc) = (*a, exp, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

impl Field for GaloisField {
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        if let Some(t) = &self.0.tables {
            let order = (self.0.q - 1) as usize;
            let l = t.log[*a as usize] as usize;
            return Some(t.exp[(order - l) % order]);
        }
        Some(self.pow(a, self.0.q - 2))
    }
}

/// An element bundled with its field, for callers that want checked mixing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldElem {
    pub field: GaloisField,
    pub value: u64,
}

impl FieldElem {
    pub fn new(field: &GaloisField, value: u64) -> Self {
        Self {
            field: field.clone(),
            value: value % field.order(),
        }
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::ContextMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Self::new(&self.field, self.field.add(&self.value, &other.value)))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(Self::new(&self.field, self.field.mul(&self.value, &other.value)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::upoly;

    #[test]
    fn rejects_composite() {
        assert_eq!(make_ext_field(4, 1).unwrap_err(), AlgebraError::NotPrime(4));
        assert_eq!(make_ext_field(3, 0).unwrap_err(), AlgebraError::ZeroDegree);
    }

    #[test]
    fn gf2_has_modulus_x() {
        let f = make_ext_field(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.order(), 2);
    }

    #[test]
    fn gf16_frobenius_fixes_everything() {
        let f = make_ext_field(2, 4).unwrap();
        assert_eq!(f.order(), 16);
        for x in f.elements() {
            assert_eq!(f.pow(&x, 16), x);
        }
    }

    #[test]
    fn gf9_modulus_divides_x9_minus_x() {
        let f = make_ext_field(3, 2).unwrap();
        let fp = GaloisField::prime(3).unwrap();
        let mut x9mx = vec![0u64; 10];
        x9mx[9] = 1;
        x9mx[1] = 2;
        let r = upoly::rem(&fp, &x9mx, f.modulus());
        assert!(r.is_empty());
    }

    #[test]
    fn tables_agree_with_schoolbook() {
        for (p, k) in [(2u64, 5u32), (3, 3), (5, 2), (7, 2)] {
            let f = make_ext_field(p, k).unwrap();
            for a in f.elements().step_by(3) {
                for b in f.elements().step_by(5) {
                    assert_eq!(f.mul(&a, &b), f.mul_slow(a, b), "p={p} k={k}");
                }
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = make_ext_field(13, 6).unwrap();
        let a = 123_456u64;
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), 1);
        assert_eq!(f.pow(&a, f.order()), a);
    }

    #[test]
    fn deterministic_modulus() {
        let a = make_ext_field_seeded(5, 3, 7).unwrap();
        let b = GaloisField::with_modulus(5, a.modulus().to_vec()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mixed_contexts_are_rejected() {
        let f4 = make_ext_field(2, 2).unwrap();
        let f8 = make_ext_field(2, 3).unwrap();
        let x = FieldElem::new(&f4, 1);
        let y = FieldElem::new(&f8, 1);
        assert_eq!(x.try_add(&y).unwrap_err(), AlgebraError::ContextMismatch);
        assert_eq!(x.try_mul(&x).unwrap().value, 1);
    }
}
