use std::collections::BTreeSet;

use crate::algebra::arith::euler_phi;
use crate::algebra::crt::{Crt, QuotientRing};
use crate::algebra::cyclotomic::{cyclotomic, reduce_dense};
use crate::algebra::factor::factor_dense;
use crate::algebra::{make_ext_field, GaloisField, SeriesCtx, Q64};
use crate::formula::Conjunct;

use super::{Compiled, FiniteRing, OracleBudget, OracleError};

/// `F_{p^k}[v]/(v^{p^e (p-1)})`, with `t = v^{p^e}`.
#[derive(Clone, Debug)]
pub struct LocalModel {
    pub p: u64,
    pub k: u32,
    pub e: u32,
    pub ring: SeriesCtx,
}

impl LocalModel {
    pub fn t(&self) -> Vec<u64> {
        self.ring.monomial(1, Q64::from_integer(1)).expect("integral exponent")
    }
}

/// Number of elements of the local model, if it fits in a `u64`.
pub fn local_model_size(p: u64, k: u32, e: u32) -> Option<u64> {
    let len = p.checked_pow(e)?.checked_mul(p - 1)?;
    p.checked_pow(k)?.checked_pow(u32::try_from(len).ok()?)
}

pub fn build_local_model(p: u64, k: u32, e: u32, budget: &OracleBudget) -> Result<LocalModel, OracleError> {
    let field = make_ext_field(p, k)?;
    match local_model_size(p, k, e) {
        Some(s) if s <= budget.max_ring => {}
        s => {
            return Err(OracleError::Budget {
                what: "local model size",
                size: s.map_or_else(|| "more than 2^64".to_string(), |s| s.to_string()),
                limit: budget.max_ring,
            })
        }
    }
    let ring = SeriesCtx::new(&field, e, Q64::from_integer(p - 1))?;
    Ok(LocalModel { p, k, e, ring })
}

/// `F_p[x]/(Phi_N mod p)` together with its decomposition into local factors.
#[derive(Clone, Debug)]
pub struct CyclotomicModel {
    pub n: u64,
    pub p: u64,
    pub ring: QuotientRing,
    pub crt: Crt,
    /// Monic irreducible factors of the reduced cyclotomic polynomial with multiplicities.
    pub factors: Vec<(Vec<u64>, u32)>,
}

impl CyclotomicModel {
    /// Components whose modulus is irreducible, i.e. that are fields.
    pub fn field_components(&self) -> usize {
        self.factors.iter().filter(|(_, m)| *m == 1).count()
    }
}

pub fn build_cyclotomic_model(n: u64, p: u64, budget: &OracleBudget) -> Result<CyclotomicModel, OracleError> {
    if n == 0 {
        return Err(OracleError::Input("cyclotomic index must be positive".into()));
    }
    let field = GaloisField::prime(p)?;
    let deg = euler_phi(n);
    if deg > budget.max_cyclotomic_degree {
        return Err(OracleError::Budget {
            what: "cyclotomic degree",
            size: deg.to_string(),
            limit: budget.max_cyclotomic_degree,
        });
    }
    let phi = reduce_dense(&field, &cyclotomic(n));
    let ring = QuotientRing::new(&field, &phi)?;
    let (_, factors) = factor_dense(&field, &phi)?;
    let crt = Crt::from_factorization(&field, &phi)?;
    Ok(CyclotomicModel {
        n,
        p,
        ring,
        crt,
        factors,
    })
}

/// Satisfiability in a product of rings decided one component at a time:
/// every equation must vanish in every component, and every inequation
/// must be nonzero in at least one of them.
pub fn componentwise_sat<R: FiniteRing>(
    parts: &[R],
    c: &Conjunct,
    budget: &OracleBudget,
) -> Result<bool, OracleError> {
    let k = c.neqs.len();
    if k > 20 {
        return Err(OracleError::Input("too many inequations for mask search".into()));
    }
    let full: u32 = if k == 0 { 0 } else { (1u32 << k) - 1 };
    let mut reachable: BTreeSet<u32> = BTreeSet::from([0]);
    for part in parts {
        let masks = equation_masks(part, c, budget)?;
        if masks.is_empty() {
            return Ok(false);
        }
        reachable = reachable
            .iter()
            .flat_map(|a| masks.iter().map(move |b| a | b))
            .collect();
    }
    Ok(reachable.contains(&full))
}

/// For each assignment solving the equations in `r`, the set of
/// inequations it makes nonzero.
fn equation_masks<R: FiniteRing>(r: &R, c: &Conjunct, budget: &OracleBudget) -> Result<BTreeSet<u32>, OracleError> {
    let size = r.size();
    let m = c.vars.len() as u32;
    let total = size.checked_pow(m).filter(|&t| t <= budget.max_assignments && size <= budget.max_ring);
    let Some(total) = total else {
        return Err(OracleError::Budget {
            what: "assignment count",
            size: format!("{size}^{m}"),
            limit: budget.max_assignments,
        });
    };
    let eqs: Vec<Compiled<R::Elem>> = c.eqs.iter().map(|p| Compiled::new(r, p)).collect();
    let neqs: Vec<Compiled<R::Elem>> = c.neqs.iter().map(|p| Compiled::new(r, p)).collect();
    let elems: Vec<R::Elem> = (0..size).map(|i| r.element(i)).collect();
    let mut out = BTreeSet::new();
    let mut vals = vec![r.zero(); m as usize];
    for mut idx in 0..total {
        for v in vals.iter_mut().rev() {
            *v = elems[(idx % size) as usize].clone();
            idx /= size;
        }
        if eqs.iter().all(|p| r.is_zero(&p.eval(r, &vals))) {
            let mask = neqs
                .iter()
                .enumerate()
                .filter(|(_, p)| !r.is_zero(&p.eval(r, &vals)))
                .fold(0u32, |acc, (i, _)| acc | 1 << i);
            out.insert(mask);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::arith::multiplicative_order;
    use crate::algebra::Ring;
    use crate::oracle::brute_sat;
    use crate::formula::{parse, to_dnf};

    fn conjunct(src: &str) -> Conjunct {
        to_dnf(&parse(src).unwrap(), 16).unwrap().remove(0)
    }

    #[test]
    fn local_model_shapes() {
        let b = OracleBudget::default();
        let m = build_local_model(2, 1, 0, &b).unwrap();
        assert_eq!(m.ring.size(), 2);
        let m = build_local_model(2, 1, 1, &b).unwrap();
        assert_eq!(m.ring.size(), 4);
        assert!(m.ring.is_zero(&m.t()));
        let v = m.ring.uniformizer();
        assert!(!m.ring.is_zero(&v));
        assert!(m.ring.is_zero(&m.ring.mul(&v, &v)));
        let m = build_local_model(3, 1, 1, &b).unwrap();
        assert_eq!(m.ring.len(), 6);
        let t = m.t();
        assert!(!m.ring.is_zero(&t));
        assert!(m.ring.is_zero(&m.ring.mul(&t, &t)));
        assert!(matches!(build_local_model(5, 1, 1, &b), Err(OracleError::Budget { .. })));
    }

    #[test]
    fn cyclotomic_models() {
        let b = OracleBudget::default();
        let m = build_cyclotomic_model(15, 2, &b).unwrap();
        assert_eq!(m.factors.len(), 2);
        assert!(m.factors.iter().all(|(h, e)| h.len() == 5 && *e == 1));
        let m = build_cyclotomic_model(8, 3, &b).unwrap();
        assert_eq!(m.factors.len(), 2);
        assert!(m.factors.iter().all(|(h, _)| h.len() == 3));
        let m = build_cyclotomic_model(5, 5, &b).unwrap();
        assert_eq!(m.factors, vec![(vec![4, 1], 4)]);
        assert_eq!(m.field_components(), 0);
    }

    #[test]
    fn splitting_counts_small() {
        let b = OracleBudget::default();
        for (p, mdeg) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2)] {
            let q = p.pow(mdeg);
            let m = build_cyclotomic_model(q - 1, p, &b).unwrap();
            assert_eq!(multiplicative_order(p, q - 1), Some(mdeg as u64));
            assert_eq!(m.factors.len() as u64, euler_phi(q - 1) / mdeg as u64);
        }
    }

    #[test]
    fn componentwise_matches_product_search() {
        let b = OracleBudget::default();
        let model = build_cyclotomic_model(12, 5, &b).unwrap();
        for src in [
            "exists x: x^2 + 1 = 0 & x - 2 != 0",
            "exists x: x^2 = 1 & x != 1 & x != -1",
            "exists x: x^3 = 1 & x != 1",
            "exists x: x^4 = 1 & x^2 != 1",
            "exists x: x^2 = 0 & x != 0",
        ] {
            let c = conjunct(src);
            let whole = brute_sat(&model.ring, &c, &b).unwrap().sat;
            let parts = componentwise_sat(&model.crt.components, &c, &b).unwrap();
            assert_eq!(whole, parts, "{src}");
        }
    }

    #[test]
    fn totally_ramified_level() {
        // F_3[x]/(x-1)^2 contains a nontrivial cube root of unity only if
        // the cube map is not injective; x itself is one
        let b = OracleBudget::default();
        let model = build_cyclotomic_model(3, 3, &b).unwrap();
        assert_eq!(model.factors, vec![(vec![2, 1], 2)]);
        let out = brute_sat(&model.ring, &conjunct("exists x: x^3 = 1 & x != 1"), &b).unwrap();
        assert!(out.sat);
        assert!(conjunct("exists x: x^3 = 1 & x != 1").holds(&model.ring, &[model.ring.x()]));
    }
}
