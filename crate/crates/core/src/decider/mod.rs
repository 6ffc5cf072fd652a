//! Per-prime decisions: complete for equation-only, inequation-only and
//! one-variable conjuncts, a budgeted witness search otherwise.

pub mod acf;
pub mod certificate;
pub mod positive;
pub mod separated;
pub mod witness;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::groebner::GbConfig;
use crate::algebra::{upoly, AlgebraError, GaloisField, IntPoly};
use crate::formula::{to_dnf, Conjunct, FormulaError, Sentence, DEFAULT_DNF_CAP};
use crate::reduction::{classify, pad, replicate, to_gap, Fragment, GapSentence};

pub use acf::{acf_decide, AcfOutcome, Characteristic};
pub use certificate::{check_certificate, NoCertificate};
pub use separated::{block_choices, decide_separated, ord_profile, ord_profile_q, separated_rule, BlockChoice, OrdProfile};
pub use witness::{verify_witness, witness_search, PrimeWitness};

#[derive(Debug, Error)]
pub enum DecideError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl DecideError {
    /// Whether this is a resource limit rather than bad input or a bug.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            DecideError::Algebra(AlgebraError::ResourceLimit(_) | AlgebraError::FieldTooLarge { .. })
                | DecideError::Formula(FormulaError::DnfLimit { .. })
        )
    }
}

#[derive(Clone, Copy, Debug)]
pub struct DecideBudget {
    /// Largest residue field degree `K` in the witness search.
    pub max_field_deg: u32,
    /// Largest ramification exponent `E`: exponents have denominator `p^E`.
    pub max_ram: u32,
    /// Largest integer truncation `M`; witnesses use at most `min(p - 1, M)`.
    pub precision: u32,
    /// Block assignment spaces up to this size are enumerated exhaustively.
    pub enum_cap: u64,
    /// Random block assignments tried per level otherwise.
    pub samples: usize,
    pub seed: u64,
    /// Largest field degree searched for common zeros of equations.
    pub positive_max_k: u32,
    pub dnf_cap: usize,
    pub gb: GbConfig,
}

pub const DEFAULT_SEED: u64 = 0x5eed_ab0d;

impl Default for DecideBudget {
    fn default() -> Self {
        DecideBudget {
            max_field_deg: 3,
            max_ram: 2,
            precision: 2,
            enum_cap: 1 << 14,
            samples: 2000,
            seed: DEFAULT_SEED,
            positive_max_k: 12,
            dnf_cap: DEFAULT_DNF_CAP,
            gb: GbConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetReport {
    pub max_field_deg: u32,
    pub max_ram: u32,
    pub precision: u32,
    pub levels_tried: usize,
    pub reason: String,
}

impl BudgetReport {
    pub fn to_json(&self) -> Value {
        json!({
            "max_field_deg": self.max_field_deg,
            "max_ram": self.max_ram,
            "precision": self.precision,
            "levels_tried": self.levels_tried,
            "reason": self.reason,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes(Box<PrimeWitness>),
    /// One certificate per conjunct of the disjunctive normal form.
    No(Vec<NoCertificate>),
    Inconclusive(BudgetReport),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No(_) => "no",
            Verdict::Inconclusive(_) => "inconclusive",
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No(_))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Verdict::Yes(w) => json!({"verdict": "yes", "witness": w.to_json()}),
            Verdict::No(certs) => json!({
                "verdict": "no",
                "certificate": certs.iter().map(NoCertificate::to_json).collect::<Vec<_>>(),
            }),
            Verdict::Inconclusive(r) => json!({"verdict": "inconclusive", "budget": r.to_json()}),
        }
    }
}

/// Coefficients mod `p` in variable `var`, trimmed; constants when `var` is `None`.
pub fn dense_residues(f: &GaloisField, q: &IntPoly, var: Option<usize>) -> Vec<u64> {
    let p = BigInt::from(f.p());
    let dense = match var {
        Some(v) => q.to_dense(v).expect("polynomial in one variable"),
        None => {
            debug_assert!(q.is_constant() || q.is_zero());
            vec![q.constant_term()]
        }
    };
    let coeffs = dense.iter().map(|c| c.mod_floor(&p).to_u64().unwrap()).collect();
    upoly::trimmed(f, coeffs)
}

/// The padded, replicated gap form of a conjunct.
pub fn gap_form(c: &Conjunct) -> GapSentence {
    to_gap(&replicate(&pad(c)))
}

/// Decides one conjunct of a disjunctive normal form modulo `p`.
pub fn decide_conjunct(c: &Conjunct, p: u64, budget: &DecideBudget, index: usize) -> Result<Verdict, DecideError> {
    if !crate::algebra::arith::is_prime(p) {
        return Err(AlgebraError::NotPrime(p).into());
    }
    let gap = gap_form(c);
    let outcome = match classify(c) {
        Fragment::Positive => positive::decide_positive(c, &gap, p, budget, index),
        Fragment::InequationsOnly => positive::decide_inequations(c, &gap, p, budget, index),
        Fragment::Separated => decide_separated(&gap, p, budget.precision, index),
        Fragment::General => decide_general(c, &gap, p, budget, index),
    };
    let verdict = match outcome {
        Err(e) if e.is_resource() => Verdict::Inconclusive(BudgetReport {
            max_field_deg: budget.max_field_deg,
            max_ram: budget.max_ram,
            precision: budget.precision,
            levels_tried: 0,
            reason: e.to_string(),
        }),
        other => other?,
    };
    // Nothing leaves without passing the independent checks.
    match &verdict {
        Verdict::Yes(w) if !verify_witness(&gap, w)? => Err(DecideError::Internal(format!(
            "witness for conjunct {index} at p = {p} fails verification"
        ))),
        Verdict::No(certs) if !certs.iter().all(|cert| check_certificate(c, cert).unwrap_or(false)) => Err(
            DecideError::Internal(format!("certificate for conjunct {index} at p = {p} fails its check")),
        ),
        _ => Ok(verdict),
    }
}

/// Several variables on both sides: necessary conditions first, then the
/// witness search. Never says No without a certificate.
fn decide_general(
    c: &Conjunct,
    gap: &GapSentence,
    p: u64,
    budget: &DecideBudget,
    index: usize,
) -> Result<Verdict, DecideError> {
    let fp = GaloisField::prime(p)?;
    if let Some(i) = c
        .neqs
        .iter()
        .position(|g| g.terms().all(|(_, a)| a.mod_floor(&BigInt::from(p)) == BigInt::from(0)))
    {
        return Ok(Verdict::No(vec![NoCertificate::PolyVanishes {
            conjunct: index,
            p,
            index: i,
            poly: c.neqs[i].clone(),
        }]));
    }
    let residues: Vec<_> = c.eqs.iter().map(|q| q.map_coeffs(&fp, |a| crate::algebra::Ring::from_int(&fp, a))).collect();
    if let Some(cofactors) = acf::unit_ideal(&fp, &c.vars, &residues, budget.gb, &mut |_| {})? {
        return Ok(Verdict::No(vec![NoCertificate::ResidueObstruction {
            conjunct: index,
            p,
            generators: c.eqs.clone(),
            cofactors,
        }]));
    }
    Ok(match witness_search(gap, p, budget, index)? {
        Ok(w) => Verdict::Yes(Box::new(w)),
        Err(report) => Verdict::Inconclusive(report),
    })
}

/// Decides an existential sentence modulo `p`: the first satisfied
/// conjunct wins, No needs a certificate for every conjunct.
pub fn decide_mod_p(s: &Sentence, p: u64, budget: &DecideBudget) -> Result<Verdict, DecideError> {
    let conjuncts = to_dnf(s, budget.dnf_cap)?;
    let verdicts = conjuncts
        .par_iter()
        .enumerate()
        .map(|(i, c)| decide_conjunct(c, p, budget, i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(aggregate(verdicts))
}

/// Order-independent combination of per-conjunct verdicts (listed in conjunct order).
pub fn aggregate(verdicts: Vec<Verdict>) -> Verdict {
    let mut certs = Vec::new();
    let mut open = None;
    for v in verdicts {
        match v {
            Verdict::Yes(w) => return Verdict::Yes(w),
            Verdict::No(c) => certs.extend(c),
            Verdict::Inconclusive(r) => {
                open.get_or_insert(r);
            }
        }
    }
    match open {
        Some(r) => Verdict::Inconclusive(r),
        None => Verdict::No(certs),
    }
}

/// Verifies a Yes or No against the sentence it answers.
pub fn recheck(s: &Sentence, v: &Verdict, dnf_cap: usize) -> Result<bool, DecideError> {
    let conjuncts = to_dnf(s, dnf_cap)?;
    Ok(match v {
        Verdict::Yes(w) => match conjuncts.get(w.conjunct) {
            Some(c) => verify_witness(&gap_form(c), w)?,
            None => false,
        },
        Verdict::No(certs) => {
            certs.len() == conjuncts.len()
                && certs.iter().enumerate().all(|(i, cert)| {
                    cert.conjunct() == i && check_certificate(&conjuncts[i], cert).unwrap_or(false)
                })
        }
        Verdict::Inconclusive(_) => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn decide(src: &str, p: u64) -> Verdict {
        let s = parse(src).unwrap();
        let v = decide_mod_p(&s, p, &DecideBudget::default()).unwrap();
        assert!(recheck(&s, &v, 64).unwrap(), "{src} at {p}");
        v
    }

    #[test]
    fn examples() {
        let Verdict::Yes(w) = decide("exists x: x^2 = 1 & x != 1", 2) else { panic!() };
        assert_eq!(w.assignment()["x"], "1 + t^(1/2)");
        let Verdict::Yes(w) = decide("exists x: x^2 + x + 1 = 0", 5) else { panic!() };
        assert_eq!(w.k(), 2);
        assert!(matches!(
            decide("exists x: x - 1 = 0 & (x - 1)^2 != 0", 3),
            Verdict::No(ref c) if matches!(c[0], NoCertificate::OrdProfile { .. })
        ));
    }

    #[test]
    fn disjunctions_aggregate() {
        assert!(decide("exists x: x^2 = 2 | x = 3", 5).is_yes());
        let v = decide("exists x: 2*x = 1 | (x = 1 & x^2 - 1 != 0)", 2);
        let Verdict::No(certs) = v else { panic!() };
        assert_eq!(certs.len(), 2);
        assert_eq!(certs[1].conjunct(), 1);
    }

    #[test]
    fn general_fragment() {
        assert!(decide("exists x, y: x*y - 1 = 0 & x^2 = 0 & y != 0", 7).is_no());
        assert!(decide("exists x, y: x - y = 0 & 7*x*y != 0", 7).is_no());
        assert!(decide("exists x, y: x + y = 0 & x - 1 != 0 & y != 0", 3).is_yes());
    }

    #[test]
    fn inconclusive_is_not_no() {
        let b = DecideBudget {
            max_field_deg: 1,
            max_ram: 0,
            precision: 1,
            ..DecideBudget::default()
        };
        let s = parse("exists x, y: x^2 - y^3 = 0 & x*y - 1 != 0 & x != 0").unwrap();
        let v = decide_mod_p(&s, 2, &b).unwrap();
        assert!(!v.is_no());
    }

    #[test]
    fn composite_modulus_is_rejected() {
        let s = parse("exists x: x = 1").unwrap();
        assert!(decide_mod_p(&s, 4, &DecideBudget::default()).is_err());
    }
}
