use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::algebra::Ring;

use super::{FiniteRing, OracleError};

/// Largest ring accepted by [`TabulatedRing::new`].
pub const MAX_TABULATED: u64 = 2048;

/// A small finite ring copied into addition and multiplication tables;
/// elements are indices into the source ring's element listing.
#[derive(Clone)]
pub struct TabulatedRing(Arc<Inner>);

struct Inner {
    size: usize,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    /// Images of `0, 1, ..., char - 1`.
    ints: Vec<u32>,
    labels: Vec<String>,
    name: String,
}

impl TabulatedRing {
    pub fn new<R: FiniteRing>(r: &R) -> Result<Self, OracleError> {
        let size = r.size();
        if size > MAX_TABULATED {
            return Err(OracleError::Budget {
                what: "tabulated ring size",
                size: size.to_string(),
                limit: MAX_TABULATED,
            });
        }
        let n = size as usize;
        let elems: Vec<R::Elem> = (0..size).map(|i| r.element(i)).collect();
        let index: HashMap<R::Elem, u32> = elems.iter().cloned().enumerate().map(|(i, e)| (e, i as u32)).collect();
        if index.len() != n {
            return Err(OracleError::Input(format!("{} lists repeated elements", r.describe())));
        }
        let at = |e: R::Elem| index[&e];
        let mut add = vec![0u32; n * n];
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                add[i * n + j] = at(r.add(&elems[i], &elems[j]));
                mul[i * n + j] = at(r.mul(&elems[i], &elems[j]));
            }
        }
        let neg = elems.iter().map(|e| at(r.neg(e))).collect();
        let one = at(r.one());
        let mut ints = vec![0u32];
        let mut acc = one;
        while acc != 0 {
            ints.push(acc);
            acc = add[acc as usize * n + one as usize];
        }
        let labels = elems.iter().map(|e| r.format_elem(e)).collect();
        Ok(TabulatedRing(Arc::new(Inner {
            size: n,
            add,
            mul,
            neg,
            ints,
            labels,
            name: r.describe(),
        })))
    }

    pub fn characteristic(&self) -> usize {
        self.0.ints.len()
    }
}

impl fmt::Debug for TabulatedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tabulated({})", self.0.name)
    }
}

impl Ring for TabulatedRing {
    type Elem = u32;

    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        self.0.ints.get(1).copied().unwrap_or(0)
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.0.add[*a as usize * self.0.size + *b as usize]
    }
    fn neg(&self, a: &u32) -> u32 {
        self.0.neg[*a as usize]
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.0.mul[*a as usize * self.0.size + *b as usize]
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn from_int(&self, n: &BigInt) -> u32 {
        let c = BigInt::from(self.0.ints.len());
        self.0.ints[n.mod_floor(&c).to_usize().unwrap()]
    }
}

impl FiniteRing for TabulatedRing {
    fn size(&self) -> u64 {
        self.0.size as u64
    }
    fn element(&self, idx: u64) -> u32 {
        idx as u32
    }
    fn describe(&self) -> String {
        self.0.name.clone()
    }
    fn format_elem(&self, a: &u32) -> String {
        self.0.labels[*a as usize].clone()
    }
}
