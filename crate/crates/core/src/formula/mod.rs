//! Input language: existential sentences over integer polynomial
//! (in)equations, their syntax tree, and disjunctive normal form.

mod dnf;
mod parser;

use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::algebra::{IntPoly, Ring, Vars};

pub use dnf::{to_dnf, DEFAULT_DNF_CAP};
pub use parser::parse;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Neq,
}

impl Rel {
    pub fn flip(self) -> Rel {
        match self {
            Rel::Eq => Rel::Neq,
            Rel::Neq => Rel::Eq,
        }
    }
    fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Neq => "!=",
        }
    }
}

/// `poly = 0` or `poly != 0`, with `poly` normalized to a positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub poly: IntPoly,
    pub rel: Rel,
}

impl Literal {
    pub fn new(poly: IntPoly, rel: Rel) -> Self {
        let poly = if poly.leading_sign_positive() { poly } else { poly.neg() };
        Literal { poly, rel }
    }

    pub fn holds<S: Ring>(&self, s: &S, values: &[S::Elem]) -> bool {
        let v = self.poly.eval_with(s, values, |c| s.from_int(c));
        s.is_zero(&v) == (self.rel == Rel::Eq)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} 0", self.poly, self.rel.symbol())
    }
}

/// Negation-free, quantifier-free matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    Lit(Literal),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    /// Truth value under an assignment in `s`.
    pub fn eval<S: Ring>(&self, s: &S, values: &[S::Elem]) -> bool {
        match self {
            Formula::Lit(l) => l.holds(s, values),
            Formula::And(xs) => xs.iter().all(|x| x.eval(s, values)),
            Formula::Or(xs) => xs.iter().any(|x| x.eval(s, values)),
        }
    }

    /// De Morgan dual with every relation flipped.
    pub fn negate(self) -> Formula {
        match self {
            Formula::Lit(l) => Formula::Lit(Literal {
                poly: l.poly,
                rel: l.rel.flip(),
            }),
            Formula::And(xs) => Formula::Or(xs.into_iter().map(Formula::negate).collect()),
            Formula::Or(xs) => Formula::And(xs.into_iter().map(Formula::negate).collect()),
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, parent_and: bool) -> fmt::Result {
        match self {
            Formula::Lit(l) => write!(f, "{l}"),
            Formula::And(xs) => join(f, xs, " & ", true),
            Formula::Or(xs) => {
                if parent_and {
                    f.write_str("(")?;
                    join(f, xs, " | ", false)?;
                    f.write_str(")")
                } else {
                    join(f, xs, " | ", false)
                }
            }
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, xs: &[Formula], sep: &str, and: bool) -> fmt::Result {
    if xs.is_empty() {
        // empty conjunction / disjunction
        return f.write_str(if and { "0 = 0" } else { "1 = 0" });
    }
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        match x {
            Formula::And(_) if !and => {
                x.write(f, false)?;
            }
            _ => x.write(f, and)?,
        }
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, false)
    }
}

/// `exists vars: matrix`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub vars: Vars,
    pub matrix: Formula,
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exists {}: {}", self.vars.join(", "), self.matrix)
    }
}

/// A conjunction of equations and inequations over a shared registry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Conjunct {
    pub vars: Vars,
    pub eqs: Vec<IntPoly>,
    pub neqs: Vec<IntPoly>,
}

impl Conjunct {
    pub fn holds<S: Ring>(&self, s: &S, values: &[S::Elem]) -> bool {
        let val = |p: &IntPoly| p.eval_with(s, values, |c: &BigInt| s.from_int(c));
        self.eqs.iter().all(|p| s.is_zero(&val(p))) && self.neqs.iter().all(|p| !s.is_zero(&val(p)))
    }

    pub fn to_formula(&self) -> Formula {
        let lits = self
            .eqs
            .iter()
            .map(|p| Formula::Lit(Literal::new(p.clone(), Rel::Eq)))
            .chain(self.neqs.iter().map(|p| Formula::Lit(Literal::new(p.clone(), Rel::Neq))));
        Formula::And(lits.collect())
    }
}

impl fmt::Display for Conjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_formula())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("undeclared variable '{name}' at line {line}, column {col}")]
    Undeclared { name: String, line: usize, col: usize },
    #[error("disjunctive normal form exceeds {cap} conjuncts")]
    DnfLimit { cap: usize },
}
