//! Satisfiability over an algebraically closed field, with no valuation.

use std::sync::Arc;

use num_rational::BigRational;

use crate::algebra::groebner::{from_polynomial, groebner, to_polynomial, GbConfig, GbPoly};
use crate::algebra::{Field, GaloisField, IntPoly, Polynomial, Rationals, Ring, Vars};
use crate::formula::Conjunct;
use crate::reduction::{classify, Fragment};

use super::DecideError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Characteristic {
    Zero,
    Prime(u64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AcfOutcome {
    Sat,
    Unsat,
}

/// Whether `1` lies in the ideal generated by the nonzero inputs, with
/// cofactors for every input (zero for zero inputs) when it does.
pub fn unit_ideal<F: Field>(
    f: &F,
    vars: &Vars,
    inputs: &[Polynomial<F>],
    cfg: GbConfig,
    observe: &mut dyn FnMut(&F::Elem),
) -> Result<Option<Vec<Polynomial<F>>>, DecideError> {
    let live: Vec<usize> = (0..inputs.len()).filter(|&i| !inputs[i].is_zero()).collect();
    let gens: Vec<GbPoly<F::Elem>> = live.iter().map(|&i| from_polynomial(&inputs[i], cfg.order)).collect();
    if gens.is_empty() {
        return Ok(None);
    }
    let cfg = GbConfig {
        track_cofactors: true,
        ..cfg
    };
    let res = groebner(f, &gens, cfg, observe)?;
    if !res.is_trivial() {
        return Ok(None);
    }
    let cof = &res.cofactors.expect("tracked")[0];
    let mut out = vec![Polynomial::zero(f, vars); inputs.len()];
    for (slot, c) in live.iter().zip(cof) {
        out[*slot] = to_polynomial(f, vars, c);
    }
    Ok(Some(out))
}

/// Conjunct with a fresh variable `y` and the equation `y * prod(g) - 1 = 0`
/// in place of the inequations.
pub fn rabinowitsch(c: &Conjunct) -> (Vars, Vec<IntPoly>) {
    let mut name = "y".to_string();
    while c.vars.contains(&name) {
        name.push('_');
    }
    let m = c.vars.len();
    let mut names = (*c.vars).clone();
    names.push(name);
    let vars: Vars = Arc::new(names);
    let target: Vec<usize> = (0..m).collect();
    let ints = crate::algebra::Integers;
    let mut eqs: Vec<IntPoly> = c.eqs.iter().map(|f| f.relabel(&vars, &target)).collect();
    let mut prod = Polynomial::var(&ints, &vars, m);
    for g in &c.neqs {
        prod = prod.mul(&g.relabel(&vars, &target));
    }
    eqs.push(prod.sub(&Polynomial::constant(&ints, &vars, ints.one())));
    (vars, eqs)
}

fn trivial_in<F: Field>(f: &F, vars: &Vars, eqs: &[IntPoly], lift: impl Fn(&num_bigint::BigInt) -> F::Elem) -> Result<bool, DecideError> {
    let polys: Vec<Polynomial<F>> = eqs
        .iter()
        .map(|q| q.map_coeffs(f, &lift))
        .collect();
    Ok(unit_ideal(f, vars, &polys, GbConfig::default(), &mut |_| {})?.is_some())
}

/// Satisfiability over an algebraic closure of `F_p` or `Q`.
///
/// Equations only: the ideal is proper. Inequations only: every inequation
/// is a nonzero polynomial. Mixed conjuncts go through the Rabinowitsch
/// form of the inequations.
pub fn acf_decide(c: &Conjunct, ch: Characteristic) -> Result<AcfOutcome, DecideError> {
    let nonzero = |g: &IntPoly| match ch {
        Characteristic::Zero => !g.is_zero(),
        Characteristic::Prime(p) => {
            let f = GaloisField::prime(p).expect("prime");
            g.terms().any(|(_, a)| !f.is_zero(&f.from_int(a)))
        }
    };
    let (vars, eqs) = match classify(c) {
        Fragment::InequationsOnly => {
            return Ok(if c.neqs.iter().all(nonzero) {
                AcfOutcome::Sat
            } else {
                AcfOutcome::Unsat
            })
        }
        Fragment::Positive => (c.vars.clone(), c.eqs.clone()),
        Fragment::Separated | Fragment::General => rabinowitsch(c),
    };
    let trivial = match ch {
        Characteristic::Zero => trivial_in(&Rationals, &vars, &eqs, |a| BigRational::from_integer(a.clone()))?,
        Characteristic::Prime(p) => {
            let f = GaloisField::prime(p)?;
            trivial_in(&f, &vars, &eqs, |a| f.from_int(a))?
        }
    };
    Ok(if trivial { AcfOutcome::Unsat } else { AcfOutcome::Sat })
}
