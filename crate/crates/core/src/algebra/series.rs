//! Truncated ramified power series `F_{p^k}[t^{1/p^e}]/(t^M)`.
//!
//! Elements are coefficient vectors in the uniformizer `v = t^{1/p^e}` of
//! fixed length `p^e * M`. The ring is exactly `F_{p^k}[v]/(v^{p^e M})`.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use super::error::AlgebraError;
use super::factor::{embed, embedding};
use super::gf::GaloisField;
use super::ring::Ring;

pub type Q64 = Ratio<u64>;

/// Valuation of a truncated series. `AtLeastCap(M)` means the element
/// vanished in the truncation, so its true valuation is at least `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Q64),
    AtLeastCap(Q64),
}

impl Valuation {
    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }
    pub fn value(&self) -> Q64 {
        match *self {
            Valuation::Finite(q) | Valuation::AtLeastCap(q) => q,
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        use Valuation::*;
        match (self, other) {
            (Finite(a), Finite(b)) | (AtLeastCap(a), AtLeastCap(b)) => a.cmp(b),
            (Finite(a), AtLeastCap(b)) => {
                if a < b {
                    Ordering::Less
                } else {
                    a.cmp(b).then(Ordering::Less)
                }
            }
            (AtLeastCap(_), Finite(_)) => other.cmp(self).reverse(),
        }
    }
}
impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => write!(f, "{}", fmt_q(q)),
            Valuation::AtLeastCap(q) => write!(f, ">={}", fmt_q(q)),
        }
    }
}

pub fn fmt_q(q: &Q64) -> String {
    if *q.denom() == 1 {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Clone)]
pub struct SeriesCtx(Arc<CtxInner>);

struct CtxInner {
    field: GaloisField,
    e: u32,
    pe: u64,
    len: usize,
}

impl PartialEq for SeriesCtx {
    fn eq(&self, other: &Self) -> bool {
        self.0.field == other.0.field && self.0.e == other.0.e && self.0.len == other.0.len
    }
}
impl Eq for SeriesCtx {}

impl fmt::Debug for SeriesCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Series(p={}, k={}, e={}, cap={})",
            self.p(),
            self.k(),
            self.0.e,
            fmt_q(&self.cap())
        )
    }
}

impl SeriesCtx {
    /// Context with cap `M`; `p^e * M` must be a positive integer.
    pub fn new(field: &GaloisField, e: u32, cap: Q64) -> Result<Self, AlgebraError> {
        let pe = field
            .p()
            .checked_pow(e)
            .ok_or_else(|| AlgebraError::InvalidContext("ramification too large".into()))?;
        let scaled = cap * Q64::from_integer(pe);
        if !scaled.is_integer() || scaled.is_zero() {
            return Err(AlgebraError::InvalidContext(format!(
                "cap {} times {pe} is not a positive integer",
                fmt_q(&cap)
            )));
        }
        Ok(Self::with_len(field, e, scaled.to_integer() as usize))
    }

    /// Context holding `len` coefficients in `t^{1/p^e}`.
    pub fn with_len(field: &GaloisField, e: u32, len: usize) -> Self {
        assert!(len > 0, "empty truncation");
        SeriesCtx(Arc::new(CtxInner {
            field: field.clone(),
            e,
            pe: field.p().pow(e),
            len,
        }))
    }

    pub fn field(&self) -> &GaloisField {
        &self.0.field
    }
    pub fn p(&self) -> u64 {
        self.0.field.p()
    }
    pub fn k(&self) -> u32 {
        self.0.field.k()
    }
    pub fn e(&self) -> u32 {
        self.0.e
    }
    /// `p^e`, the denominator of exponents.
    pub fn denom(&self) -> u64 {
        self.0.pe
    }
    /// Number of stored coefficients, `p^e * M`.
    pub fn len(&self) -> usize {
        self.0.len
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn cap(&self) -> Q64 {
        Q64::new(self.0.len as u64, self.0.pe)
    }

    pub fn constant(&self, c: u64) -> Vec<u64> {
        let mut out = vec![0; self.0.len];
        out[0] = c;
        out
    }

    /// `c * t^exp`, zero when the exponent reaches the cap.
    pub fn monomial(&self, c: u64, exp: Q64) -> Result<Vec<u64>, AlgebraError> {
        let idx = exp * Q64::from_integer(self.0.pe);
        if !idx.is_integer() {
            return Err(AlgebraError::InvalidScale(format!(
                "exponent {} needs a finer ramification than {}",
                fmt_q(&exp),
                self.0.pe
            )));
        }
        let mut out = vec![0; self.0.len];
        if let Some(slot) = out.get_mut(idx.to_integer() as usize) {
            *slot = c;
        }
        Ok(out)
    }

    /// The uniformizer `t^{1/p^e}`.
    pub fn uniformizer(&self) -> Vec<u64> {
        let mut out = vec![0; self.0.len];
        if self.0.len > 1 {
            out[1] = 1;
        }
        out
    }

    pub fn valuation(&self, a: &[u64]) -> Valuation {
        match a.iter().position(|&c| c != 0) {
            Some(i) => Valuation::Finite(Q64::new(i as u64, self.0.pe)),
            None => Valuation::AtLeastCap(self.cap()),
        }
    }

    /// Image under `t -> t^q` for a positive `q` with `p`-power denominator,
    /// in a context whose cap is `q * M` so nothing below the cap is lost.
    pub fn rescale(&self, a: &[u64], q: Q64) -> Result<(SeriesCtx, Vec<u64>), AlgebraError> {
        if q.is_zero() {
            return Err(AlgebraError::InvalidScale("scale must be positive".into()));
        }
        let j = p_power_exponent(*q.denom(), self.p())
            .ok_or_else(|| AlgebraError::InvalidScale(format!("denominator of {} is not a power of {}", fmt_q(&q), self.p())))?;
        let num = *q.numer() as usize;
        let ctx = SeriesCtx::with_len(&self.0.field, self.0.e + j, self.0.len * num);
        let mut out = vec![0; ctx.len()];
        for (i, &c) in a.iter().enumerate() {
            out[i * num] = c;
        }
        Ok((ctx, out))
    }

    /// Embeds into a context with finer ramification and/or a larger field
    /// and a cap no larger than this one (truncating).
    pub fn embed_into(&self, target: &SeriesCtx, a: &[u64]) -> Result<Vec<u64>, AlgebraError> {
        if target.e() < self.e() || target.cap() > self.cap() {
            return Err(AlgebraError::InvalidContext("target does not refine the source".into()));
        }
        let beta = embedding(self.field(), target.field()).ok_or(AlgebraError::ContextMismatch)?;
        let step = (target.denom() / self.denom()) as usize;
        let mut out = vec![0; target.len()];
        for (i, &c) in a.iter().enumerate() {
            if let Some(slot) = out.get_mut(i * step) {
                *slot = embed(self.field(), target.field(), beta, c);
            }
        }
        Ok(out)
    }

    /// Sum of `c*t^(a/b)` terms in increasing exponent order.
    pub fn format(&self, a: &[u64]) -> String {
        let f = &self.0.field;
        let mut parts = Vec::new();
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let coeff = f.format_elem(c);
            let coeff = if coeff.contains(' ') { format!("({coeff})") } else { coeff };
            if i == 0 {
                parts.push(coeff);
                continue;
            }
            let exp = Q64::new(i as u64, self.0.pe);
            let tpow = if exp == Q64::from_integer(1) {
                "t".to_string()
            } else if exp.is_integer() {
                format!("t^{}", exp.numer())
            } else {
                format!("t^({}/{})", exp.numer(), exp.denom())
            };
            parts.push(if coeff == "1" { tpow } else { format!("{coeff}*{tpow}") });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Parses the output of [`SeriesCtx::format`].
    pub fn parse(&self, text: &str) -> Result<Vec<u64>, AlgebraError> {
        let bad = |msg: &str| AlgebraError::InvalidScale(format!("{msg} in series '{text}'"));
        let mut out = self.zero();
        let text = text.trim();
        if text == "0" {
            return Ok(out);
        }
        for term in split_top_level(text, '+') {
            let term = term.trim();
            let (coeff_txt, exp) = match top_level_find(term, 't') {
                Some(pos) => {
                    let exp_txt = term[pos + 1..].trim();
                    let exp = if exp_txt.is_empty() {
                        Q64::from_integer(1)
                    } else {
                        let body = exp_txt.strip_prefix('^').ok_or_else(|| bad("expected '^'"))?;
                        let body = body.trim().trim_start_matches('(').trim_end_matches(')');
                        parse_q(body).ok_or_else(|| bad("bad exponent"))?
                    };
                    let c = term[..pos].trim().trim_end_matches('*').trim();
                    (if c.is_empty() { "1" } else { c }, exp)
                }
                None => (term, Q64::zero()),
            };
            let c = parse_field_elem(&self.0.field, coeff_txt).ok_or_else(|| bad("bad coefficient"))?;
            let m = self.monomial(c, exp)?;
            out = self.add(&out, &m);
        }
        Ok(out)
    }
}

fn parse_q(s: &str) -> Option<Q64> {
    match s.split_once('/') {
        Some((a, b)) => {
            let d: u64 = b.trim().parse().ok()?;
            let n: u64 = a.trim().parse().ok()?;
            (d != 0).then(|| Q64::new(n, d))
        }
        None => Some(Q64::from_integer(s.trim().parse().ok()?)),
    }
}

fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut start = 0;
    let mut out = Vec::new();
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn top_level_find(s: &str, target: char) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == target && depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

/// Parses a residue, or a polynomial in the generator `a` for extensions.
pub fn parse_field_elem(f: &GaloisField, s: &str) -> Option<u64> {
    let s = s.trim();
    let s = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(s);
    let mut digits = vec![0u64; f.k() as usize];
    for mono in s.split('+') {
        let mono = mono.trim();
        let (c, pw) = match mono.split_once('a') {
            None => (mono.parse::<u64>().ok()?, 0usize),
            Some((c, rest)) => {
                let c = c.trim().trim_end_matches('*').trim();
                let c = if c.is_empty() { 1 } else { c.parse::<u64>().ok()? };
                let rest = rest.trim();
                let pw = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')?.trim().parse::<usize>().ok()?
                };
                (c, pw)
            }
        };
        if pw >= digits.len() {
            digits.resize(pw + 1, 0);
        }
        digits[pw] = (digits[pw] + c) % f.p();
    }
    Some(f.from_digits(&digits))
}

/// `j` with `d = p^j`, if any.
pub fn p_power_exponent(mut d: u64, p: u64) -> Option<u32> {
    let mut j = 0;
    while d > 1 {
        if d % p != 0 {
            return None;
        }
        d /= p;
        j += 1;
    }
    (d == 1).then_some(j)
}

impl Ring for SeriesCtx {
    type Elem = Vec<u64>;

    fn zero(&self) -> Vec<u64> {
        vec![0; self.0.len]
    }
    fn one(&self) -> Vec<u64> {
        self.constant(1)
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = &self.0.field;
        a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let f = &self.0.field;
        a.iter().map(|x| f.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = &self.0.field;
        let n = self.0.len;
        let mut out = vec![0u64; n];
        for (i, x) in a.iter().enumerate() {
            if *x == 0 {
                continue;
            }
            for (j, y) in b[..n - i].iter().enumerate() {
                if *y != 0 {
                    out[i + j] = f.add(&out[i + j], &f.mul(x, y));
                }
            }
        }
        out
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn from_int(&self, n: &BigInt) -> Vec<u64> {
        let p = BigInt::from(self.p());
        self.constant(n.mod_floor(&p).to_u64().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gf::make_ext_field;

    fn ctx(p: u64, k: u32, e: u32, cap: u64) -> SeriesCtx {
        SeriesCtx::new(&make_ext_field(p, k).unwrap(), e, Q64::from_integer(cap)).unwrap()
    }

    #[test]
    fn basic_valuations() {
        let c = ctx(2, 1, 1, 1);
        let one_plus_v = c.add(&c.one(), &c.uniformizer());
        assert_eq!(c.valuation(&one_plus_v), Valuation::Finite(Q64::zero()));
        assert_eq!(c.valuation(&c.uniformizer()), Valuation::Finite(Q64::new(1, 2)));
        assert_eq!(c.valuation(&c.zero()), Valuation::AtLeastCap(Q64::from_integer(1)));
    }

    #[test]
    fn at_least_cap_dominates_finite() {
        let m = Valuation::AtLeastCap(Q64::from_integer(1));
        assert!(m > Valuation::Finite(Q64::new(1, 2)));
        assert!(Valuation::Finite(Q64::new(1, 4)) < Valuation::Finite(Q64::new(1, 2)));
    }

    #[test]
    fn rescale_examples() {
        let c = ctx(2, 1, 1, 1);
        let (c2, v2) = c.rescale(&c.uniformizer(), Q64::from_integer(2)).unwrap();
        assert_eq!(c2.valuation(&v2), Valuation::Finite(Q64::from_integer(1)));

        let c = ctx(3, 1, 0, 2);
        let a = c.add(&c.one(), &c.monomial(1, Q64::from_integer(1)).unwrap());
        let (c3, b) = c.rescale(&a, Q64::new(1, 3)).unwrap();
        assert_eq!(c3.format(&b), "1 + t^(1/3)");
        let am1 = c3.sub(&b, &c3.one());
        assert_eq!(c3.valuation(&am1), Valuation::Finite(Q64::new(1, 3)));
        assert!(c.rescale(&a, Q64::new(1, 2)).is_err());
    }

    #[test]
    fn flagship_arithmetic() {
        // (1 + v)^2 = 1 in F_2[v]/v^2
        let c = ctx(2, 1, 1, 1);
        let x = c.add(&c.one(), &c.uniformizer());
        assert_eq!(c.mul(&x, &x), c.one());
    }

    #[test]
    fn format_parse_roundtrip() {
        let c = ctx(3, 2, 1, 2);
        let f = c.field().clone();
        let a = f.generator();
        let mut x = c.constant(f.add(&a, &1));
        x = c.add(&x, &c.monomial(2, Q64::new(1, 3)).unwrap());
        x = c.add(&x, &c.monomial(f.mul(&a, &a), Q64::from_integer(1)).unwrap());
        let s = c.format(&x);
        assert_eq!(c.parse(&s).unwrap(), x);
        assert_eq!(c.parse("0").unwrap(), c.zero());
    }

    #[test]
    fn embedding_refines() {
        let small = ctx(2, 1, 1, 1);
        let big = ctx(2, 2, 2, 1);
        let x = small.add(&small.one(), &small.uniformizer());
        let y = small.embed_into(&big, &x).unwrap();
        assert_eq!(big.format(&y), "1 + t^(1/2)");
    }
}
