//! Sparse multivariate polynomials over a pluggable coefficient ring.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ring::{fmt_rational, Integers, Rationals, Ring};

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n])
    }
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }
    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}
impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ordered variable names shared by a family of polynomials.
pub type Vars = Arc<Vec<String>>;

pub fn vars(names: &[&str]) -> Vars {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

#[derive(Clone, Debug)]
pub struct Polynomial<R: Ring> {
    ring: R,
    vars: Vars,
    terms: BTreeMap<Mono, R::Elem>,
}

impl<R: Ring> PartialEq for Polynomial<R> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}
impl<R: Ring> Eq for Polynomial<R> {}

impl<R: Ring> std::hash::Hash for Polynomial<R> {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (m, c) in &self.terms {
            m.hash(state);
            c.hash(state);
        }
    }
}

impl<R: Ring> Polynomial<R> {
    pub fn zero(ring: &R, vars: &Vars) -> Self {
        Self {
            ring: ring.clone(),
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &R, vars: &Vars, c: R::Elem) -> Self {
        let mut p = Self::zero(ring, vars);
        p.add_term(Mono::one(vars.len()), c);
        p
    }

    pub fn var(ring: &R, vars: &Vars, i: usize) -> Self {
        let mut m = Mono::one(vars.len());
        m.0[i] = 1;
        let mut p = Self::zero(ring, vars);
        p.add_term(m, ring.one());
        p
    }

    pub fn from_terms(ring: &R, vars: &Vars, terms: impl IntoIterator<Item = (Vec<u32>, R::Elem)>) -> Self {
        let mut p = Self::zero(ring, vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector arity");
            p.add_term(Mono(e), c);
        }
        p
    }

    /// Univariate polynomial in variable `i` from dense little-endian coefficients.
    pub fn from_dense(ring: &R, vars: &Vars, i: usize, coeffs: &[R::Elem]) -> Self {
        let mut p = Self::zero(ring, vars);
        for (d, c) in coeffs.iter().enumerate() {
            let mut m = Mono::one(vars.len());
            m.0[i] = d as u32;
            p.add_term(m, c.clone());
        }
        p
    }

    fn add_term(&mut self, m: Mono, c: R::Elem) {
        if self.ring.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                let s = self.ring.add(old, &c);
                if self.ring.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn vars(&self) -> &Vars {
        &self.vars
    }
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &R::Elem)> {
        self.terms.iter()
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> R::Elem {
        self.terms
            .get(&Mono::one(self.vars.len()))
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Mono::degree)
    }

    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[i]).max()
    }

    /// Leading term under the graded-lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &R::Elem)> {
        self.terms.iter().next_back()
    }

    /// Indices of variables that actually occur.
    pub fn support(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    fn check(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable registries"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            ring: self.ring.clone(),
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), self.ring.neg(c)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &R::Elem) -> Self {
        let mut out = Self::zero(&self.ring, &self.vars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), self.ring.mul(a, c));
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let mut out = Self::zero(&self.ring, &self.vars);
        for (ma, a) in &self.terms {
            for (mb, b) in &other.terms {
                out.add_term(ma.mul(mb), self.ring.mul(a, b));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut acc = Self::constant(&self.ring, &self.vars, self.ring.one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Evaluates in a ring `S`, mapping coefficients through `coeff`.
    pub fn eval_with<S: Ring>(&self, s: &S, values: &[S::Elem], coeff: impl Fn(&R::Elem) -> S::Elem) -> S::Elem {
        assert_eq!(values.len(), self.vars.len(), "assignment arity");
        let mut acc = s.zero();
        for (m, c) in &self.terms {
            let mut t = coeff(c);
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = s.mul(&t, &s.pow(&values[i], e as u64));
                }
            }
            acc = s.add(&acc, &t);
        }
        acc
    }

    /// Maps coefficients into another ring, dropping terms that vanish.
    pub fn map_coeffs<S: Ring>(&self, s: &S, f: impl Fn(&R::Elem) -> S::Elem) -> Polynomial<S> {
        let mut out = Polynomial::zero(s, &self.vars);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(c));
        }
        out
    }

    /// Moves to a new registry; variable `i` becomes `target[i]`.
    pub fn relabel(&self, vars: &Vars, target: &[usize]) -> Self {
        let mut out = Self::zero(&self.ring, vars);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; vars.len()];
            for (i, &d) in m.0.iter().enumerate() {
                e[target[i]] += d;
            }
            out.add_term(Mono(e), c.clone());
        }
        out
    }

    /// Dense coefficients in variable `i`; `None` if another variable occurs.
    pub fn to_dense(&self, i: usize) -> Option<Vec<R::Elem>> {
        let deg = self.degree_in(i).unwrap_or(0) as usize;
        let mut out = vec![self.ring.zero(); if self.is_zero() { 0 } else { deg + 1 }];
        for (m, c) in &self.terms {
            if m.0.iter().enumerate().any(|(j, &e)| j != i && e > 0) {
                return None;
            }
            out[m.0[i] as usize] = c.clone();
        }
        Some(out)
    }
}

impl<R: Ring> Polynomial<R> {
    /// Display with a caller-provided coefficient renderer returning
    /// `(is_negative, magnitude)`.
    pub fn render(&self, coeff: impl Fn(&R::Elem) -> (bool, String)) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = coeff(c);
            let mon = render_mono(&self.vars, m);
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mon.is_empty(), mag == "1") {
                (true, _) => out.push_str(&mag),
                (false, true) => out.push_str(&mon),
                (false, false) => {
                    out.push_str(&mag);
                    out.push('*');
                    out.push_str(&mon);
                }
            }
        }
        out
    }
}

fn render_mono(vars: &[String], m: &Mono) -> String {
    let parts: Vec<String> = m
        .0
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                vars[i].clone()
            } else {
                format!("{}^{}", vars[i], e)
            }
        })
        .collect();
    parts.join("*")
}

pub type IntPoly = Polynomial<Integers>;
pub type RatPoly = Polynomial<Rationals>;

impl IntPoly {
    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn to_rational(&self) -> RatPoly {
        self.map_coeffs(&Rationals, |c| BigRational::from_integer(c.clone()))
    }

    pub fn leading_sign_positive(&self) -> bool {
        self.leading().is_none_or(|(_, c)| c.is_positive())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|c| (c.is_negative(), c.abs().to_string())))
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(|c| (c.is_negative(), fmt_rational(&c.abs()))))
    }
}

impl RatPoly {
    /// Clears denominators and content, returning a primitive integer
    /// polynomial with positive leading coefficient (zero stays zero).
    pub fn primitive_part(&self) -> IntPoly {
        use num_integer::Integer;
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self.map_coeffs(&Integers, |c| (c * BigRational::from_integer(lcm.clone())).to_integer());
        let content = ints.content();
        if content.is_zero() {
            return ints;
        }
        let sign = if ints.leading_sign_positive() { content } else { -content };
        ints.map_coeffs(&Integers, |c| c / &sign)
    }
}
