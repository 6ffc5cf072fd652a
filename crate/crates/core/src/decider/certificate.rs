//! Refutation certificates and the routines that re-check them from the
//! input conjunct alone.

use serde_json::{json, Value};

use crate::algebra::factor::is_irreducible;
use crate::algebra::{upoly, GaloisField, IntPoly, Polynomial, Ring};
use crate::formula::Conjunct;
use crate::oracle::format_dense;
use crate::reduction::{active_vars, pad};

use super::{dense_residues, DecideError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NoCertificate {
    /// Factor multiplicities of the reduced polynomials of a one-variable
    /// conjunct, laid out as padded equations then padded inequations.
    OrdProfile {
        conjunct: usize,
        p: u64,
        eqs: Vec<Vec<u64>>,
        neqs: Vec<Vec<u64>>,
        basis: Vec<Vec<u64>>,
        units: Vec<Option<u64>>,
        mults: Vec<Option<Vec<u32>>>,
    },
    /// `sum cofactors[i] * generators[i] = 1` over `F_p`: the equations
    /// have no common zero in any field of characteristic `p`.
    ResidueObstruction {
        conjunct: usize,
        p: u64,
        generators: Vec<IntPoly>,
        cofactors: Vec<Polynomial<GaloisField>>,
    },
    /// An inequation whose every coefficient is divisible by `p`.
    PolyVanishes { conjunct: usize, p: u64, index: usize, poly: IntPoly },
}

impl NoCertificate {
    pub fn conjunct(&self) -> usize {
        match self {
            NoCertificate::OrdProfile { conjunct, .. }
            | NoCertificate::ResidueObstruction { conjunct, .. }
            | NoCertificate::PolyVanishes { conjunct, .. } => *conjunct,
        }
    }

    pub fn p(&self) -> u64 {
        match self {
            NoCertificate::OrdProfile { p, .. }
            | NoCertificate::ResidueObstruction { p, .. }
            | NoCertificate::PolyVanishes { p, .. } => *p,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            NoCertificate::OrdProfile {
                conjunct,
                p,
                eqs,
                neqs,
                basis,
                mults,
                ..
            } => {
                let f = GaloisField::prime(*p).expect("prime");
                let show = |v: &Vec<Vec<u64>>| v.iter().map(|a| format_dense(&f, a, "x")).collect::<Vec<_>>();
                let table: Vec<Value> = mults
                    .iter()
                    .map(|row| match row {
                        None => json!("inf"),
                        Some(r) => json!(r),
                    })
                    .collect();
                json!({
                    "kind": "ord_profile",
                    "conjunct": conjunct,
                    "p": p,
                    "equations": show(eqs),
                    "inequations": show(neqs),
                    "basis": show(basis),
                    "multiplicities": table,
                })
            }
            NoCertificate::ResidueObstruction {
                conjunct,
                p,
                generators,
                cofactors,
            } => json!({
                "kind": "residue_obstruction",
                "conjunct": conjunct,
                "p": p,
                "generators": generators.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "cofactors": cofactors.iter().map(render_fp).collect::<Vec<_>>(),
            }),
            NoCertificate::PolyVanishes { conjunct, p, index, poly } => json!({
                "kind": "poly_vanishes",
                "conjunct": conjunct,
                "p": p,
                "index": index,
                "poly": poly.to_string(),
            }),
        }
    }
}

pub fn render_fp(q: &Polynomial<GaloisField>) -> String {
    q.render(|c| (false, c.to_string()))
}

/// Re-checks a certificate against the (unpadded) conjunct it refutes.
/// Returns `Ok(false)` when the certificate does not prove what it claims.
pub fn check_certificate(c: &Conjunct, cert: &NoCertificate) -> Result<bool, DecideError> {
    let f = GaloisField::prime(cert.p())?;
    match cert {
        NoCertificate::PolyVanishes { index, poly, .. } => {
            Ok(c.neqs.get(*index) == Some(poly) && dense_like_zero(&f, poly))
        }
        NoCertificate::ResidueObstruction {
            generators, cofactors, ..
        } => {
            if *generators != c.eqs || cofactors.len() != generators.len() {
                return Ok(false);
            }
            let mut sum = Polynomial::zero(&f, &c.vars);
            for (g, q) in generators.iter().zip(cofactors) {
                if q.vars() != &c.vars {
                    return Ok(false);
                }
                let gbar = g.map_coeffs(&f, |a| f.from_int(a));
                sum = sum.add(&q.mul(&gbar));
            }
            Ok(sum == Polynomial::constant(&f, &c.vars, f.one()))
        }
        NoCertificate::OrdProfile {
            eqs,
            neqs,
            basis,
            units,
            mults,
            ..
        } => {
            let padded = pad(c);
            let var = match active_vars(&padded).as_slice() {
                [] => None,
                [v] => Some(*v),
                _ => return Ok(false),
            };
            let want_eqs: Vec<Vec<u64>> = padded.eqs.iter().map(|q| dense_residues(&f, q, var)).collect();
            let want_neqs: Vec<Vec<u64>> = padded.neqs.iter().map(|q| dense_residues(&f, q, var)).collect();
            if *eqs != want_eqs || *neqs != want_neqs {
                return Ok(false);
            }
            Ok(check_profile(&f, eqs, neqs, basis, units, mults))
        }
    }
}

fn dense_like_zero(f: &GaloisField, q: &IntPoly) -> bool {
    q.terms().all(|(_, a)| f.is_zero(&f.from_int(a)))
}

fn check_profile(
    f: &GaloisField,
    eqs: &[Vec<u64>],
    neqs: &[Vec<u64>],
    basis: &[Vec<u64>],
    units: &[Option<u64>],
    mults: &[Option<Vec<u32>>],
) -> bool {
    let n = eqs.len();
    if neqs.len() != n || units.len() != 2 * n || mults.len() != 2 * n {
        return false;
    }
    let basis_ok = basis.iter().enumerate().all(|(i, h)| {
        h.last() == Some(&1) && h.len() >= 2 && is_irreducible(f, h) && !basis[..i].contains(h)
    });
    if !basis_ok {
        return false;
    }
    // Every polynomial must equal its claimed factorization.
    for (poly, (unit, row)) in eqs.iter().chain(neqs).zip(units.iter().zip(mults)) {
        match (unit, row) {
            (None, None) => {
                if !poly.is_empty() {
                    return false;
                }
            }
            (Some(u), Some(row)) if row.len() == basis.len() && *u != 0 => {
                let mut prod = vec![*u];
                for (h, &m) in basis.iter().zip(row) {
                    prod = upoly::mul(f, &prod, &upoly::pow(f, h, m as u64));
                }
                if upoly::trimmed(f, prod) != *poly {
                    return false;
                }
            }
            _ => return false,
        }
    }
    // Some block must be dead: its inequation vanishes identically, or no
    // basis factor divides all nonzero equations more often than it.
    (0..n).any(|k| {
        let Some(g) = &mults[n + k] else {
            return true;
        };
        let rows: Vec<&Vec<u32>> = mults[..n].iter().flatten().collect();
        !rows.is_empty() && (0..basis.len()).all(|b| rows.iter().map(|r| r[b]).min().unwrap() <= g[b])
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decider::{decide_mod_p, DecideBudget, Verdict};
    use crate::formula::{parse, to_dnf};

    fn conjunct(src: &str) -> Conjunct {
        to_dnf(&parse(src).unwrap(), 16).unwrap().remove(0)
    }

    fn refute(src: &str, p: u64) -> NoCertificate {
        match decide_mod_p(&parse(src).unwrap(), p, &DecideBudget::default()).unwrap() {
            Verdict::No(mut certs) => certs.remove(0),
            v => panic!("{src} at {p}: {v:?}"),
        }
    }

    #[test]
    fn issued_certificates_recheck() {
        for (src, p) in [
            ("exists x: x - 1 = 0 & (x - 1)^2 != 0", 3),
            ("exists x: x^2 + 1 = 0 & x^2 + 2 = 0", 2),
            ("exists x, y: x*y = 1 & x = 0", 5),
            ("exists x: 3*x != 0", 3),
            ("exists x, y: x*y - 1 = 0 & x^2 = 0 & y != 0", 7),
        ] {
            let cert = refute(src, p);
            assert!(check_certificate(&conjunct(src), &cert).unwrap(), "{src}");
        }
    }

    #[test]
    fn tampered_certificates_fail() {
        let src = "exists x: x - 1 = 0 & (x - 1)^2 != 0";
        let c = conjunct(src);
        let NoCertificate::OrdProfile {
            conjunct: ci,
            p,
            eqs,
            neqs,
            basis,
            units,
            mults,
        } = refute(src, 3)
        else {
            panic!()
        };
        let bad = NoCertificate::OrdProfile {
            conjunct: ci,
            p,
            eqs: eqs.clone(),
            neqs: neqs.clone(),
            basis: basis.clone(),
            units: units.clone(),
            mults: vec![Some(vec![1]), Some(vec![0])],
        };
        assert!(!check_certificate(&c, &bad).unwrap());
        // a valid factorization of a satisfiable system is not a refutation
        let sat = conjunct("exists x: (x - 1)^2 = 0 & x - 1 != 0");
        let flipped = NoCertificate::OrdProfile {
            conjunct: ci,
            p,
            eqs: neqs,
            neqs: eqs,
            basis,
            units: units.into_iter().rev().collect(),
            mults: mults.into_iter().rev().collect(),
        };
        assert!(!check_certificate(&sat, &flipped).unwrap());

        let other = conjunct("exists x: 3*x + 1 != 0");
        let cert = refute("exists x: 3*x != 0", 3);
        assert!(!check_certificate(&other, &cert).unwrap());
    }

    #[test]
    fn wrong_cofactors_fail() {
        let src = "exists x, y: x*y = 1 & x = 0";
        let c = conjunct(src);
        let NoCertificate::ResidueObstruction {
            conjunct: ci,
            p,
            generators,
            mut cofactors,
        } = refute(src, 5)
        else {
            panic!()
        };
        cofactors.swap(0, 1);
        let cert = NoCertificate::ResidueObstruction {
            conjunct: ci,
            p,
            generators,
            cofactors,
        };
        assert!(!check_certificate(&c, &cert).unwrap());
    }
}
