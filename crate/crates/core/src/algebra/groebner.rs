//! Buchberger's algorithm over an exact field, with optional tracking of
//! cofactors expressing every basis element in terms of the inputs.
//!
//! An observer sees every coefficient the algorithm divides by or
//! eliminates, which is how callers over `Q` collect the primes at which
//! the computation would not specialize.

use std::cmp::Ordering;

use super::error::AlgebraError;
use super::poly::{Mono, Polynomial, Vars};
use super::ring::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonoOrder {
    Grevlex,
    Lex,
}

impl MonoOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            MonoOrder::Lex => a.cmp(b),
            MonoOrder::Grevlex => {
                let da: u32 = a.iter().sum();
                let db: u32 = b.iter().sum();
                da.cmp(&db).then_with(|| {
                    for (x, y) in a.iter().zip(b).rev() {
                        if x != y {
                            return y.cmp(x);
                        }
                    }
                    Ordering::Equal
                })
            }
        }
    }
}

/// Terms sorted in decreasing monomial order, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbPoly<E> {
    pub terms: Vec<(Vec<u32>, E)>,
}

impl<E: Clone> GbPoly<E> {
    pub fn zero() -> Self {
        GbPoly { terms: Vec::new() }
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0)
    }
    pub fn lm(&self) -> &[u32] {
        &self.terms[0].0
    }
    pub fn lc(&self) -> &E {
        &self.terms[0].1
    }
}

pub fn from_polynomial<F: Field>(p: &Polynomial<F>, order: MonoOrder) -> GbPoly<F::Elem> {
    let mut terms: Vec<(Vec<u32>, F::Elem)> = p.terms().map(|(m, c)| (m.0.clone(), c.clone())).collect();
    terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
    GbPoly { terms }
}

pub fn to_polynomial<F: Field>(f: &F, vars: &Vars, g: &GbPoly<F::Elem>) -> Polynomial<F> {
    Polynomial::from_terms(f, vars, g.terms.iter().map(|(m, c)| (m.clone(), c.clone())))
}

fn mono_div(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.checked_sub(*y))
        .collect()
}

fn mono_lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

/// `a - c * m * b`
fn sub_mul<F: Field>(f: &F, order: MonoOrder, a: &GbPoly<F::Elem>, c: &F::Elem, m: &[u32], b: &GbPoly<F::Elem>) -> GbPoly<F::Elem> {
    let shifted = b
        .terms
        .iter()
        .map(|(mb, cb)| (Mono(mb.clone()).mul(&Mono(m.to_vec())).0, f.neg(&f.mul(c, cb))));
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let mut ia = a.terms.iter().cloned().peekable();
    let mut ib = shifted.peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(ia.next().unwrap()),
            (None, Some(_)) => out.push(ib.next().unwrap()),
            (Some(x), Some(y)) => match order.cmp(&x.0, &y.0) {
                Ordering::Greater => out.push(ia.next().unwrap()),
                Ordering::Less => out.push(ib.next().unwrap()),
                Ordering::Equal => {
                    let (m, cx) = ia.next().unwrap();
                    let (_, cy) = ib.next().unwrap();
                    let s = f.add(&cx, &cy);
                    if !f.is_zero(&s) {
                        out.push((m, s));
                    }
                }
            },
        }
    }
    GbPoly { terms: out }
}

fn add_polys<F: Field>(f: &F, order: MonoOrder, a: &GbPoly<F::Elem>, b: &GbPoly<F::Elem>) -> GbPoly<F::Elem> {
    let zero_mono = vec![0u32; a.terms.first().or(b.terms.first()).map_or(0, |t| t.0.len())];
    sub_mul(f, order, a, &f.neg(&f.one()), &zero_mono, b)
}

fn scale<F: Field>(f: &F, a: &GbPoly<F::Elem>, c: &F::Elem) -> GbPoly<F::Elem> {
    GbPoly {
        terms: a
            .terms
            .iter()
            .map(|(m, x)| (m.clone(), f.mul(x, c)))
            .filter(|(_, x)| !f.is_zero(x))
            .collect(),
    }
}

pub type Cofactors<E> = Vec<GbPoly<E>>;

#[derive(Clone, Copy, Debug)]
pub struct GbConfig {
    pub order: MonoOrder,
    pub max_basis: usize,
    pub max_pairs: usize,
    pub track_cofactors: bool,
}

impl Default for GbConfig {
    fn default() -> Self {
        GbConfig {
            order: MonoOrder::Grevlex,
            max_basis: 400,
            max_pairs: 20_000,
            track_cofactors: false,
        }
    }
}

pub struct GbResult<E> {
    /// Reduced, monic basis (just `[1]` when the ideal is trivial).
    pub basis: Vec<GbPoly<E>>,
    /// When tracked: for each basis element, its cofactors against the inputs.
    pub cofactors: Option<Vec<Cofactors<E>>>,
}

impl<E: Clone> GbResult<E> {
    pub fn is_trivial(&self) -> bool {
        self.basis.iter().any(GbPoly::is_constant)
    }
}

struct Elem<E> {
    poly: GbPoly<E>,
    cof: Cofactors<E>,
}

struct Engine<'a, F: Field> {
    f: &'a F,
    cfg: GbConfig,
    ninputs: usize,
    observe: &'a mut dyn FnMut(&F::Elem),
}

impl<F: Field> Engine<'_, F> {
    fn zero_cof(&self) -> Cofactors<F::Elem> {
        if self.cfg.track_cofactors {
            vec![GbPoly::zero(); self.ninputs]
        } else {
            Vec::new()
        }
    }

    fn make_monic(&mut self, mut e: Elem<F::Elem>) -> Elem<F::Elem> {
        let lc = e.poly.lc().clone();
        (self.observe)(&lc);
        let inv = self.f.inv(&lc).expect("nonzero leading coefficient");
        e.poly = scale(self.f, &e.poly, &inv);
        e.cof = e.cof.iter().map(|c| scale(self.f, c, &inv)).collect();
        e
    }

    /// Full reduction of `e` by the (monic) basis.
    fn reduce(&mut self, mut e: Elem<F::Elem>, basis: &[Elem<F::Elem>]) -> Elem<F::Elem> {
        let order = self.cfg.order;
        let mut rem = GbPoly::zero();
        while let Some((m, c)) = e.poly.terms.first().cloned() {
            let hit = basis
                .iter()
                .find_map(|g| mono_div(&m, g.poly.lm()).map(|q| (g, q)));
            match hit {
                Some((g, q)) => {
                    (self.observe)(&c);
                    e.poly = sub_mul(self.f, order, &e.poly, &c, &q, &g.poly);
                    if self.cfg.track_cofactors {
                        for (ci, gi) in e.cof.iter_mut().zip(&g.cof) {
                            *ci = sub_mul(self.f, order, ci, &c, &q, gi);
                        }
                    }
                }
                None => {
                    rem.terms.push((m, c));
                    e.poly.terms.remove(0);
                }
            }
        }
        Elem { poly: rem, cof: e.cof }
    }

    fn spoly(&mut self, a: &Elem<F::Elem>, b: &Elem<F::Elem>) -> Elem<F::Elem> {
        let order = self.cfg.order;
        let l = mono_lcm(a.poly.lm(), b.poly.lm());
        let qa = mono_div(&l, a.poly.lm()).unwrap();
        let qb = mono_div(&l, b.poly.lm()).unwrap();
        let one = self.f.one();
        let neg_one = self.f.neg(&one);
        // monic inputs: qa*a - qb*b
        let base = sub_mul(self.f, order, &GbPoly::zero(), &neg_one, &qa, &a.poly);
        let poly = sub_mul(self.f, order, &base, &one, &qb, &b.poly);
        let cof = if self.cfg.track_cofactors {
            a.cof
                .iter()
                .zip(&b.cof)
                .map(|(ca, cb)| {
                    let x = sub_mul(self.f, order, &GbPoly::zero(), &neg_one, &qa, ca);
                    sub_mul(self.f, order, &x, &one, &qb, cb)
                })
                .collect()
        } else {
            Vec::new()
        };
        Elem { poly, cof }
    }
}

/// Reduced Gröbner basis of the ideal generated by `inputs`.
pub fn groebner<F: Field>(
    f: &F,
    inputs: &[GbPoly<F::Elem>],
    cfg: GbConfig,
    observe: &mut dyn FnMut(&F::Elem),
) -> Result<GbResult<F::Elem>, AlgebraError> {
    let mut eng = Engine {
        f,
        cfg,
        ninputs: inputs.len(),
        observe,
    };
    let mut basis: Vec<Elem<F::Elem>> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let order = cfg.order;

    let mut queue: Vec<Elem<F::Elem>> = inputs
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut cof = eng.zero_cof();
            if cfg.track_cofactors {
                let nv = p.terms.first().map_or(0, |t| t.0.len());
                cof[i] = GbPoly {
                    terms: vec![(vec![0; nv], f.one())],
                };
            }
            Elem { poly: p.clone(), cof }
        })
        .collect();
    let mut processed = 0usize;

    loop {
        while let Some(e) = queue.pop() {
            let r = eng.reduce(e, &basis);
            if r.poly.is_zero() {
                continue;
            }
            let r = eng.make_monic(r);
            if r.poly.is_constant() {
                return Ok(finish_trivial(f, r, cfg));
            }
            let idx = basis.len();
            for j in 0..idx {
                pairs.push((j, idx));
            }
            basis.push(r);
            if basis.len() > cfg.max_basis {
                return Err(AlgebraError::ResourceLimit("Gröbner basis size limit".into()));
            }
        }
        if pairs.is_empty() {
            break;
        }
        // normal selection: smallest lcm first
        let (best, _) = pairs
            .iter()
            .enumerate()
            .min_by(|(_, x), (_, y)| {
                let lx = mono_lcm(basis[x.0].poly.lm(), basis[x.1].poly.lm());
                let ly = mono_lcm(basis[y.0].poly.lm(), basis[y.1].poly.lm());
                order.cmp(&lx, &ly)
            })
            .unwrap();
        let (i, j) = pairs.swap_remove(best);
        processed += 1;
        if processed > cfg.max_pairs {
            return Err(AlgebraError::ResourceLimit("Gröbner pair limit".into()));
        }
        let (a, b) = (basis[i].poly.lm(), basis[j].poly.lm());
        if a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let s = eng.spoly(&basis[i], &basis[j]);
        queue.push(s);
    }

    // interreduce: drop redundant leading monomials, then tail-reduce
    let mut keep: Vec<Elem<F::Elem>> = Vec::new();
    let lms: Vec<Vec<u32>> = basis.iter().map(|e| e.poly.lm().to_vec()).collect();
    for (i, e) in basis.into_iter().enumerate() {
        let redundant = lms.iter().enumerate().any(|(j, m)| {
            j != i && mono_div(&lms[i], m).is_some() && (lms[i] != *m || j < i)
        });
        if !redundant {
            keep.push(e);
        }
    }
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Elem<F::Elem>> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, e)| Elem {
                poly: e.poly.clone(),
                cof: e.cof.clone(),
            })
            .collect();
        let e = Elem {
            poly: keep[i].poly.clone(),
            cof: keep[i].cof.clone(),
        };
        let lead = (e.poly.terms[0].clone(), e.cof.clone());
        let tail = Elem {
            poly: GbPoly {
                terms: e.poly.terms[1..].to_vec(),
            },
            cof: eng.zero_cof(),
        };
        let r = eng.reduce(tail, &others);
        let mut poly = GbPoly {
            terms: vec![lead.0],
        };
        poly = add_polys(f, order, &poly, &r.poly);
        let cof = if cfg.track_cofactors {
            lead.1
                .iter()
                .zip(&r.cof)
                .map(|(a, b)| add_polys(f, order, a, b))
                .collect()
        } else {
            Vec::new()
        };
        reduced.push(Elem { poly, cof });
    }
    reduced.sort_by(|a, b| order.cmp(a.poly.lm(), b.poly.lm()));
    let cofactors = cfg
        .track_cofactors
        .then(|| reduced.iter().map(|e| e.cof.clone()).collect());
    Ok(GbResult {
        basis: reduced.into_iter().map(|e| e.poly).collect(),
        cofactors,
    })
}

fn finish_trivial<F: Field>(f: &F, one: Elem<F::Elem>, cfg: GbConfig) -> GbResult<F::Elem> {
    let nv = one.poly.terms[0].0.len();
    GbResult {
        basis: vec![GbPoly {
            terms: vec![(vec![0; nv], f.one())],
        }],
        cofactors: cfg.track_cofactors.then(|| vec![one.cof]),
    }
}

/// Multiplies two polynomials (used to re-check cofactor identities).
pub fn mul_polys<F: Field>(f: &F, order: MonoOrder, a: &GbPoly<F::Elem>, b: &GbPoly<F::Elem>) -> GbPoly<F::Elem> {
    let mut acc = GbPoly::zero();
    let neg_one = f.neg(&f.one());
    for (m, c) in &a.terms {
        let scaled = scale(f, b, c);
        acc = sub_mul(f, order, &acc, &neg_one, m, &scaled);
    }
    acc
}
