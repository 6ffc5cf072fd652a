//! Reduction of a conjunct to a balanced, variable-replicated form and then
//! to a valuation-gap sentence over a valuation ring.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::algebra::{IntPoly, Integers, Vars};
use crate::formula::Conjunct;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Fragment {
    Positive,
    InequationsOnly,
    Separated,
    General,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::Positive => "positive",
            Fragment::InequationsOnly => "inequations_only",
            Fragment::Separated => "separated",
            Fragment::General => "general",
        })
    }
}

/// Variables that occur somewhere in the conjunct.
pub fn active_vars(c: &Conjunct) -> Vec<usize> {
    let mut out: Vec<usize> = c
        .eqs
        .iter()
        .chain(&c.neqs)
        .flat_map(|p| p.support())
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn classify(c: &Conjunct) -> Fragment {
    if c.neqs.is_empty() {
        Fragment::Positive
    } else if c.eqs.is_empty() {
        Fragment::InequationsOnly
    } else if active_vars(c).len() <= 1 {
        Fragment::Separated
    } else {
        Fragment::General
    }
}

/// Pads with `0 = 0` and `1 != 0` until both sides have `max(|eqs|, |neqs|, 1)` entries.
pub fn pad(c: &Conjunct) -> Conjunct {
    let n = c.eqs.len().max(c.neqs.len()).max(1);
    let mut out = c.clone();
    while out.eqs.len() < n {
        out.eqs.push(IntPoly::zero(&Integers, &c.vars));
    }
    while out.neqs.len() < n {
        out.neqs.push(IntPoly::constant(&Integers, &c.vars, BigInt::one()));
    }
    out
}

/// `f_1..f_n`, `g_1..g_n` over `m` variables, evaluated on `n` disjoint
/// copies of the variable tuple: every `f_i` on every block, `g_i` on block `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReplicatedConjunct {
    pub n: usize,
    pub m: usize,
    pub original: Conjunct,
    /// Names of the `n * m` block variables, block-major.
    pub vars: Vars,
}

/// Name of variable `v` in block `j` (0-based): the original name when
/// there is a single block, otherwise `name.j` with `j` counted from 1.
pub fn block_var_name(name: &str, j: usize, n: usize) -> String {
    if n == 1 {
        name.to_string()
    } else {
        format!("{name}.{}", j + 1)
    }
}

impl ReplicatedConjunct {
    /// Index of variable `v` of block `j` in the replicated registry.
    pub fn var_index(&self, j: usize, v: usize) -> usize {
        j * self.m + v
    }

    /// A polynomial of the original conjunct, moved onto block `j`.
    pub fn on_block(&self, p: &IntPoly, j: usize) -> IntPoly {
        let target: Vec<usize> = (0..self.m).map(|v| self.var_index(j, v)).collect();
        p.relabel(&self.vars, &target)
    }

    /// The replicated system as an ordinary conjunct.
    pub fn as_conjunct(&self) -> Conjunct {
        let mut eqs = Vec::with_capacity(self.n * self.n);
        for f in &self.original.eqs {
            for j in 0..self.n {
                eqs.push(self.on_block(f, j));
            }
        }
        let neqs = self
            .original
            .neqs
            .iter()
            .enumerate()
            .map(|(i, g)| self.on_block(g, i))
            .collect();
        Conjunct {
            vars: self.vars.clone(),
            eqs,
            neqs,
        }
    }
}

/// Requires a balanced conjunct (see [`pad`]).
pub fn replicate(c: &Conjunct) -> ReplicatedConjunct {
    assert_eq!(c.eqs.len(), c.neqs.len(), "replicate needs a balanced conjunct");
    let n = c.eqs.len();
    let m = c.vars.len();
    let names: Vec<String> = (0..n)
        .flat_map(|j| c.vars.iter().map(move |v| block_var_name(v, j, n)))
        .collect();
    ReplicatedConjunct {
        n,
        m,
        original: c.clone(),
        vars: Arc::new(names),
    }
}

/// One side of a valuation comparison: polynomial `index` evaluated on block `block`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapTerm {
    pub index: usize,
    pub block: usize,
    #[serde(serialize_with = "ser_poly")]
    pub poly: IntPoly,
}

fn ser_poly<S: serde::Serializer>(p: &IntPoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Existence of a point in the valuation ring at which every upper term
/// has strictly larger valuation than every lower term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapSentence {
    pub replicated: ReplicatedConjunct,
    pub upper: Vec<GapTerm>,
    pub lower: Vec<GapTerm>,
}

impl GapSentence {
    pub fn n(&self) -> usize {
        self.replicated.n
    }
    pub fn m(&self) -> usize {
        self.replicated.m
    }
    pub fn vars(&self) -> &Vars {
        &self.replicated.vars
    }
}

pub fn to_gap(r: &ReplicatedConjunct) -> GapSentence {
    let mut upper = Vec::new();
    for (i, f) in r.original.eqs.iter().enumerate() {
        for j in 0..r.n {
            upper.push(GapTerm {
                index: i,
                block: j,
                poly: r.on_block(f, j),
            });
        }
    }
    let lower = r
        .original
        .neqs
        .iter()
        .enumerate()
        .map(|(k, g)| GapTerm {
            index: k,
            block: k,
            poly: r.on_block(g, k),
        })
        .collect();
    GapSentence {
        replicated: r.clone(),
        upper,
        lower,
    }
}

impl fmt::Display for GapSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exists {} in O: ", self.vars().join(", "))?;
        let ups: Vec<String> = self.upper.iter().map(|t| format!("v({})", t.poly)).collect();
        let lows: Vec<String> = self.lower.iter().map(|t| format!("v({})", t.poly)).collect();
        write!(f, "min[{}] > max[{}]", ups.join(", "), lows.join(", "))
    }
}
