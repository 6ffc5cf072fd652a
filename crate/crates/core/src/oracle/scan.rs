//! Exhaustive univariate search in a local model, organised by the linear
//! relations each element satisfies among its powers.
//!
//! Every element `x` is enumerated once. Writing `x^0, ..., x^D` in
//! coordinates over `F_p`, an integer polynomial `c_0 + ... + c_D X^D`
//! vanishes at `x` exactly when `(c_i mod p)` lies in the kernel of that
//! coordinate matrix. Elements are grouped by kernel, so deciding a
//! univariate literal set afterwards costs one test per group.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::algebra::{IntPoly, Ring};
use crate::formula::Conjunct;

use super::{components, FiniteRing, LocalModel, OracleBudget, OracleError, SatOutcome};

struct Class {
    /// Smallest element index in the class.
    first: u64,
    /// Reduced row echelon basis of the row space of the power matrix.
    rows: Vec<Vec<u64>>,
}

pub struct UnivariateScan {
    model: LocalModel,
    degree: usize,
    size: u64,
    classes: Vec<Class>,
    cache: Mutex<HashMap<Vec<u64>, Arc<Vec<u64>>>>,
}

impl UnivariateScan {
    /// Enumerates the model once; literals may have degree at most `degree`.
    pub fn new(model: &LocalModel, degree: usize, budget: &OracleBudget) -> Result<Self, OracleError> {
        let ring = &model.ring;
        let size = ring.size();
        if size > budget.max_ring {
            return Err(OracleError::Budget {
                what: "ring size",
                size: size.to_string(),
                limit: budget.max_ring,
            });
        }
        let p = model.p;
        let field = ring.field().clone();
        let coords = |a: &Vec<u64>| -> Vec<u64> { a.iter().flat_map(|&c| field.digits(c)).collect() };
        let mut index: HashMap<Vec<Vec<u64>>, usize> = HashMap::new();
        let mut classes = Vec::new();
        for i in 0..size {
            let x = ring.element(i);
            let mut cols = Vec::with_capacity(degree + 1);
            let mut pw = ring.one();
            for d in 0..=degree {
                if d > 0 {
                    pw = ring.mul(&pw, &x);
                }
                cols.push(coords(&pw));
            }
            let rows = row_space(&cols, p);
            if !index.contains_key(&rows) {
                index.insert(rows.clone(), classes.len());
                classes.push(Class { first: i, rows });
            }
        }
        Ok(UnivariateScan {
            model: model.clone(),
            degree,
            size,
            classes,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn model(&self) -> &LocalModel {
        &self.model
    }

    pub fn elements(&self) -> u64 {
        self.size
    }

    /// Number of distinct kernels met during enumeration.
    pub fn classes(&self) -> usize {
        self.classes.len()
    }

    /// Bitset over classes of those where the polynomial with these
    /// residues vanishes.
    fn zero_classes(&self, residues: &[u64]) -> Arc<Vec<u64>> {
        if let Some(hit) = self.cache.lock().unwrap().get(residues) {
            return hit.clone();
        }
        let p = self.model.p;
        let mut bits = vec![0u64; self.classes.len().div_ceil(64)];
        for (ci, class) in self.classes.iter().enumerate() {
            let vanishes = class
                .rows
                .iter()
                .all(|r| r.iter().zip(residues).fold(0u64, |acc, (a, b)| (acc + a * b) % p) == 0);
            if vanishes {
                bits[ci / 64] |= 1 << (ci % 64);
            }
        }
        let bits = Arc::new(bits);
        self.cache.lock().unwrap().insert(residues.to_vec(), bits.clone());
        bits
    }

    fn residues(&self, p: &IntPoly, var: usize) -> Result<Vec<u64>, OracleError> {
        let dense = p
            .to_dense(var)
            .ok_or_else(|| OracleError::Input(format!("{p} is not univariate")))?;
        if dense.len() > self.degree + 1 {
            return Err(OracleError::Input(format!("{p} exceeds scan degree {}", self.degree)));
        }
        let m = BigInt::from(self.model.p);
        let mut out: Vec<u64> = dense.iter().map(|c| c.mod_floor(&m).to_u64().unwrap()).collect();
        out.resize(self.degree + 1, 0);
        Ok(out)
    }

    /// Satisfiability of a conjunct whose variables are pairwise
    /// independent (no literal mentions two variables).
    pub fn sat(&self, c: &Conjunct) -> Result<SatOutcome<Vec<u64>>, OracleError> {
        let ring = &self.model.ring;
        let groups = components(c);
        if groups.iter().any(|g| g.len() > 1) {
            return Err(OracleError::Input("literal couples two variables".into()));
        }
        let total = self.size.saturating_mul(groups.len() as u64);
        let unsat = Ok(SatOutcome {
            sat: false,
            witness: None,
            assignments: total,
        });
        let p = BigInt::from(self.model.p);
        let zero_mod_p = |q: &IntPoly| q.constant_term().mod_floor(&p) == BigInt::from(0);
        if c.eqs.iter().any(|q| q.support().is_empty() && !zero_mod_p(q))
            || c.neqs.iter().any(|q| q.support().is_empty() && zero_mod_p(q))
        {
            return unsat;
        }
        let mut witness = vec![ring.zero(); c.vars.len()];
        for g in &groups {
            let v = g[0];
            let mut live = vec![u64::MAX; self.classes.len().div_ceil(64)];
            for q in c.eqs.iter().filter(|q| q.support() == [v]) {
                let z = self.zero_classes(&self.residues(q, v)?);
                live.iter_mut().zip(z.iter()).for_each(|(a, b)| *a &= b);
            }
            for q in c.neqs.iter().filter(|q| q.support() == [v]) {
                let z = self.zero_classes(&self.residues(q, v)?);
                live.iter_mut().zip(z.iter()).for_each(|(a, b)| *a &= !b);
            }
            let best = self
                .classes
                .iter()
                .enumerate()
                .filter(|(ci, _)| live[ci / 64] >> (ci % 64) & 1 == 1)
                .map(|(_, cl)| cl.first)
                .min();
            match best {
                Some(i) => witness[v] = ring.element(i),
                None => return unsat,
            }
        }
        if !c.holds(ring, &witness) {
            return Err(OracleError::Input("scan witness failed re-verification".into()));
        }
        Ok(SatOutcome {
            sat: true,
            witness: Some(witness),
            assignments: total,
        })
    }
}

/// Reduced row echelon form of the matrix whose columns are `cols`.
fn row_space(cols: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let ncols = cols.len();
    let nrows = cols[0].len();
    let mut m: Vec<Vec<u64>> = (0..nrows).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let inv = |a: u64| crate::algebra::arith::pow_mod(a, p - 2, p);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, piv);
        let s = inv(m[rank][col]);
        for x in m[rank].iter_mut() {
            *x = *x * s % p;
        }
        for r in 0..nrows {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for c in 0..ncols {
                    m[r][c] = (m[r][c] + (p - f) * m[rank][c]) % p;
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    m.truncate(rank);
    m
}
