//! Ground truth by exhaustive enumeration over explicit finite rings.

mod models;
mod scan;
mod table;

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::crt::QuotientRing;
use crate::algebra::iso::PowerRing;
use crate::algebra::{AlgebraError, GaloisField, IntPoly, Ring, SeriesCtx};
use crate::formula::Conjunct;
use crate::reduction::{pad, replicate};

pub use models::{
    build_cyclotomic_model, build_local_model, componentwise_sat, CyclotomicModel, LocalModel,
};
pub use scan::UnivariateScan;
pub use table::TabulatedRing;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} of {size} exceeds the enumeration budget {limit}")]
    Budget { what: &'static str, size: String, limit: u64 },
    #[error("invalid oracle input: {0}")]
    Input(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_ring: u64,
    pub max_assignments: u64,
    /// Largest `phi(N)` accepted when building a cyclotomic model.
    pub max_cyclotomic_degree: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_ring: 1 << 16,
            max_assignments: 1 << 24,
            max_cyclotomic_degree: 1 << 10,
        }
    }
}

/// A ring whose elements can be listed by index; index 0 is zero.
pub trait FiniteRing: Ring {
    /// Number of elements, saturating at `u64::MAX`.
    fn size(&self) -> u64;
    fn element(&self, idx: u64) -> Self::Elem;
    fn describe(&self) -> String;
    fn format_elem(&self, a: &Self::Elem) -> String;
}

fn digits_of(mut idx: u64, base: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = idx % base;
        idx /= base;
    }
    out
}

impl FiniteRing for GaloisField {
    fn size(&self) -> u64 {
        self.order()
    }
    fn element(&self, idx: u64) -> u64 {
        idx
    }
    fn describe(&self) -> String {
        format!("F_{}", self.order())
    }
    fn format_elem(&self, a: &u64) -> String {
        GaloisField::format_elem(self, *a)
    }
}

impl FiniteRing for SeriesCtx {
    fn size(&self) -> u64 {
        self.field().order().saturating_pow(self.len() as u32)
    }
    fn element(&self, idx: u64) -> Vec<u64> {
        digits_of(idx, self.field().order(), self.len())
    }
    fn describe(&self) -> String {
        format!("F_{}[v]/v^{} with t = v^{}", self.field().order(), self.len(), self.denom())
    }
    fn format_elem(&self, a: &Vec<u64>) -> String {
        self.format(a)
    }
}

impl FiniteRing for QuotientRing {
    fn size(&self) -> u64 {
        self.size().unwrap_or(u64::MAX)
    }
    fn element(&self, idx: u64) -> Vec<u64> {
        self.reduce(&digits_of(idx, self.field().order(), self.degree()))
    }
    fn describe(&self) -> String {
        format!("F_{}[x]/({})", self.field().order(), format_dense(self.field(), self.modulus(), "x"))
    }
    fn format_elem(&self, a: &Vec<u64>) -> String {
        format_dense(self.field(), a, "x")
    }
}

impl<R: FiniteRing> FiniteRing for PowerRing<R> {
    fn size(&self) -> u64 {
        self.base.size().saturating_pow(self.n as u32)
    }
    fn element(&self, mut idx: u64) -> Vec<R::Elem> {
        let s = self.base.size();
        let mut out = vec![self.base.zero(); self.n];
        for slot in out.iter_mut().rev() {
            *slot = self.base.element(idx % s);
            idx /= s;
        }
        out
    }
    fn describe(&self) -> String {
        format!("({})^{}", self.base.describe(), self.n)
    }
    fn format_elem(&self, a: &Vec<R::Elem>) -> String {
        let parts: Vec<String> = a.iter().map(|x| self.base.format_elem(x)).collect();
        format!("({})", parts.join(", "))
    }
}

/// Dense univariate polynomial over a finite field, highest degree first.
pub fn format_dense(f: &GaloisField, a: &[u64], var: &str) -> String {
    let mut parts = Vec::new();
    for (i, &c) in a.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let coeff = f.format_elem(c);
        let coeff = if coeff.contains(' ') { format!("({coeff})") } else { coeff };
        let mon = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        parts.push(match (i, coeff.as_str()) {
            (0, _) => coeff,
            (_, "1") => mon,
            _ => format!("{coeff}*{mon}"),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

/// A polynomial with coefficients already mapped into the target ring.
struct Compiled<E> {
    terms: Vec<(E, Vec<(usize, u32)>)>,
}

impl<E: Clone> Compiled<E> {
    fn new<R: Ring<Elem = E>>(r: &R, p: &IntPoly) -> Self {
        let terms = p
            .terms()
            .map(|(m, c)| {
                let exps = m.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e)).collect();
                (r.from_int(c), exps)
            })
            .filter(|(c, _)| !r.is_zero(c))
            .collect();
        Compiled { terms }
    }

    fn eval<R: Ring<Elem = E>>(&self, r: &R, values: &[E]) -> E {
        let mut acc = r.zero();
        for (c, exps) in &self.terms {
            let mut t = c.clone();
            for &(i, e) in exps {
                t = r.mul(&t, &r.pow(&values[i], e as u64));
            }
            acc = r.add(&acc, &t);
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SatOutcome<E> {
    pub sat: bool,
    /// Lexicographically smallest satisfying assignment.
    pub witness: Option<Vec<E>>,
    /// Size of the (decoupled) search space.
    pub assignments: u64,
}

/// Groups variables that share a literal; variables in different groups
/// can be searched independently.
pub fn components(c: &Conjunct) -> Vec<Vec<usize>> {
    let m = c.vars.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for p in c.eqs.iter().chain(&c.neqs) {
        let s = p.support();
        for w in s.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let active: Vec<usize> = {
        let mut v: Vec<usize> = c.eqs.iter().chain(&c.neqs).flat_map(|p| p.support()).collect();
        v.sort_unstable();
        v.dedup();
        v
    };
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_of: Vec<Option<usize>> = vec![None; m];
    for v in active {
        let r = find(&mut parent, v);
        match root_of[r] {
            Some(g) => groups[g].push(v),
            None => {
                root_of[r] = Some(groups.len());
                groups.push(vec![v]);
            }
        }
    }
    groups
}

/// Exhaustive satisfiability of a conjunct in a finite ring. Independent
/// variable groups are searched separately; within a group the first
/// variable is sharded across threads and the smallest witness wins.
pub fn brute_sat<R: FiniteRing>(
    ring: &R,
    c: &Conjunct,
    budget: &OracleBudget,
) -> Result<SatOutcome<R::Elem>, OracleError> {
    let size = ring.size();
    if size > budget.max_ring {
        return Err(OracleError::Budget {
            what: "ring size",
            size: size.to_string(),
            limit: budget.max_ring,
        });
    }
    let groups = components(c);
    let mut total: u64 = 0;
    for g in &groups {
        total = total.saturating_add(size.saturating_pow(g.len() as u32));
    }
    if total > budget.max_assignments {
        return Err(OracleError::Budget {
            what: "assignment count",
            size: total.to_string(),
            limit: budget.max_assignments,
        });
    }
    let m = c.vars.len();
    let elems: Arc<Vec<R::Elem>> = Arc::new((0..size).map(|i| ring.element(i)).collect());
    let mut witness = vec![ring.zero(); m];

    let constant_ok = c.eqs.iter().filter(|p| p.support().is_empty()).all(|p| ring.is_zero(&ring.from_int(&p.constant_term())))
        && c.neqs.iter().filter(|p| p.support().is_empty()).all(|p| !ring.is_zero(&ring.from_int(&p.constant_term())));
    if !constant_ok {
        return Ok(SatOutcome {
            sat: false,
            witness: None,
            assignments: total,
        });
    }

    for g in &groups {
        let touches = |p: &IntPoly| p.support().first().is_some_and(|v| g.contains(v));
        let eqs: Vec<Compiled<R::Elem>> = c.eqs.iter().filter(|p| touches(p)).map(|p| Compiled::new(ring, p)).collect();
        let neqs: Vec<Compiled<R::Elem>> = c.neqs.iter().filter(|p| touches(p)).map(|p| Compiled::new(ring, p)).collect();
        let check = |vals: &[R::Elem]| {
            eqs.iter().all(|p| ring.is_zero(&p.eval(ring, vals))) && neqs.iter().all(|p| !ring.is_zero(&p.eval(ring, vals)))
        };
        let found = (0..size).into_par_iter().find_map_first(|first| {
            let mut vals = vec![ring.zero(); m];
            vals[g[0]] = elems[first as usize].clone();
            let rest = &g[1..];
            let mut idx = vec![0u64; rest.len()];
            for &v in rest {
                vals[v] = elems[0].clone();
            }
            loop {
                if check(&vals) {
                    return Some(vals);
                }
                // odometer, last variable fastest
                let mut pos = rest.len();
                loop {
                    if pos == 0 {
                        return None;
                    }
                    pos -= 1;
                    idx[pos] += 1;
                    if idx[pos] < size {
                        vals[rest[pos]] = elems[idx[pos] as usize].clone();
                        break;
                    }
                    idx[pos] = 0;
                    vals[rest[pos]] = elems[0].clone();
                }
            }
        });
        match found {
            Some(vals) => {
                for &v in g {
                    witness[v] = vals[v].clone();
                }
            }
            None => {
                return Ok(SatOutcome {
                    sat: false,
                    witness: None,
                    assignments: total,
                })
            }
        }
    }
    if !c.holds(ring, &witness) {
        return Err(OracleError::Input(format!("witness failed re-verification in {}", ring.describe())));
    }
    Ok(SatOutcome {
        sat: true,
        witness: Some(witness),
        assignments: total,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TransferCheck {
    /// `S^r |= exists x. c`
    pub product: bool,
    /// `S |= exists x_1..x_n. replicate(c)`
    pub replicated: bool,
}

impl TransferCheck {
    pub fn agrees(&self) -> bool {
        self.product == self.replicated
    }
}

/// Compares satisfaction in the power `S^r` with satisfaction of the
/// padded, replicated conjunct in `S` itself.
pub fn product_transfer_check<R: FiniteRing>(
    s: &R,
    r: usize,
    c: &Conjunct,
    budget: &OracleBudget,
) -> Result<TransferCheck, OracleError> {
    let padded = pad(c);
    let n = padded.eqs.len();
    if r < n {
        return Err(OracleError::Input(format!("power {r} is below the block count {n}")));
    }
    let power = PowerRing::new(s.clone(), r);
    let product = if power.size() <= TABULATE_LIMIT {
        brute_sat(&TabulatedRing::new(&power)?, &padded, budget)?.sat
    } else {
        brute_sat(&power, &padded, budget)?.sat
    };
    let replicated = brute_sat(s, &replicate(&padded).as_conjunct(), budget)?.sat;
    Ok(TransferCheck { product, replicated })
}

/// Rings up to this size are worth turning into lookup tables.
pub const TABULATE_LIMIT: u64 = 1024;
