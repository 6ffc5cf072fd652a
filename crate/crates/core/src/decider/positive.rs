//! Conjuncts with only equations or only inequations. Neither needs the
//! valuation: a residue point solves the gap form outright.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::factor::roots;
use crate::algebra::groebner::{from_polynomial, groebner, to_polynomial, GbConfig, MonoOrder};
use crate::algebra::{make_ext_field, AlgebraError, GaloisField, IntPoly, Polynomial, Ring, SeriesCtx, Vars, Q64};
use crate::formula::Conjunct;
use crate::reduction::GapSentence;

use super::acf::unit_ideal;
use super::certificate::NoCertificate;
use super::witness::PrimeWitness;
use super::{BudgetReport, DecideBudget, DecideError, Verdict};

type FpPoly = Polynomial<GaloisField>;

fn reduce(f: &GaloisField, polys: &[IntPoly]) -> Vec<FpPoly> {
    polys.iter().map(|q| q.map_coeffs(f, |a| f.from_int(a))).collect()
}

/// Replaces variable `v` by the constant `a`.
fn substitute(f: &GaloisField, q: &FpPoly, v: usize, a: u64) -> FpPoly {
    let terms = q.terms().map(|(m, c)| {
        let mut e = m.0.clone();
        let d = std::mem::take(&mut e[v]);
        (e, f.mul(c, &f.pow(&a, d as u64)))
    });
    Polynomial::from_terms(f, q.vars(), terms)
}

struct Solver<'a> {
    field: &'a GaloisField,
    vars: Vars,
    calls: usize,
    max_calls: usize,
    rng: ChaCha8Rng,
    gb: GbConfig,
}

impl Solver<'_> {
    /// A common zero in the solver's field, extending `point`.
    fn solve(&mut self, polys: Vec<FpPoly>, point: &mut Vec<u64>) -> Result<bool, DecideError> {
        self.calls += 1;
        if self.calls > self.max_calls {
            return Ok(false);
        }
        let polys: Vec<FpPoly> = polys.into_iter().filter(|q| !q.is_zero()).collect();
        if polys.iter().any(|q| q.is_constant()) {
            return Ok(false);
        }
        let Some(v) = polys.iter().flat_map(|q| q.support()).max() else {
            return Ok(true);
        };
        let f = self.field;
        let gens: Vec<_> = polys.iter().map(|q| from_polynomial(q, MonoOrder::Lex)).collect();
        let cfg = GbConfig {
            order: MonoOrder::Lex,
            track_cofactors: false,
            ..self.gb
        };
        let gb = groebner(f, &gens, cfg, &mut |_| {})?;
        if gb.is_trivial() {
            return Ok(false);
        }
        let basis: Vec<FpPoly> = gb.basis.iter().map(|g| to_polynomial(f, &self.vars, g)).collect();
        // Under lex the elimination ideal in the last variable is generated
        // by the basis elements that only involve it.
        let candidates: Vec<u64> = match basis.iter().find(|g| g.support() == [v]) {
            Some(g) => roots(f, &g.to_dense(v).expect("univariate")),
            None => {
                let mut vals = vec![0, 1 % f.order()];
                vals.extend((0..4).map(|_| f.random_elem(&mut self.rng)));
                vals.dedup();
                vals
            }
        };
        for a in candidates {
            let next: Vec<FpPoly> = basis.iter().map(|g| substitute(f, g, v, a)).collect();
            point[v] = a;
            if self.solve(next, point)? {
                return Ok(true);
            }
            point[v] = 0;
        }
        Ok(false)
    }
}

/// Equations only: a certificate of inconsistency over `F_p`, or a common
/// zero in the smallest extension the search reaches.
pub fn decide_positive(
    c: &Conjunct,
    gap: &GapSentence,
    p: u64,
    budget: &DecideBudget,
    conjunct: usize,
) -> Result<Verdict, DecideError> {
    let fp = GaloisField::prime(p)?;
    let residues = reduce(&fp, &c.eqs);
    if let Some(cofactors) = unit_ideal(&fp, &c.vars, &residues, budget.gb, &mut |_| {})? {
        return Ok(Verdict::No(vec![NoCertificate::ResidueObstruction {
            conjunct,
            p,
            generators: c.eqs.clone(),
            cofactors,
        }]));
    }
    let m = c.vars.len();
    for k in 1..=budget.positive_max_k {
        let field = match make_ext_field(p, k) {
            Ok(f) => f,
            Err(AlgebraError::FieldTooLarge { .. }) => break,
            Err(e) => return Err(e.into()),
        };
        let mut solver = Solver {
            field: &field,
            vars: c.vars.clone(),
            calls: 0,
            max_calls: 200,
            rng: ChaCha8Rng::seed_from_u64(budget.seed ^ k as u64),
            gb: budget.gb,
        };
        let mut point = vec![0u64; m];
        if solver.solve(reduce(&field, &c.eqs), &mut point)? {
            let ctx = residue_ctx(&field, p, budget)?;
            let values = (0..gap.n()).flat_map(|_| point.iter().map(|&a| ctx.constant(a))).collect();
            return Ok(Verdict::Yes(Box::new(PrimeWitness::new(gap, ctx, values, conjunct))));
        }
    }
    Ok(Verdict::Inconclusive(BudgetReport {
        max_field_deg: budget.positive_max_k,
        max_ram: 0,
        precision: budget.precision,
        levels_tried: budget.positive_max_k as usize,
        reason: "equations are consistent but no common zero was found in the searched fields".into(),
    }))
}

fn residue_ctx(field: &GaloisField, p: u64, budget: &DecideBudget) -> Result<SeriesCtx, DecideError> {
    let cap = (p - 1).min(budget.precision.max(1) as u64);
    Ok(SeriesCtx::new(field, 0, Q64::from_integer(cap))?)
}

/// Inequations only: a vanishing inequation refutes; otherwise each block
/// gets a point where its inequation is nonzero.
pub fn decide_inequations(
    c: &Conjunct,
    gap: &GapSentence,
    p: u64,
    budget: &DecideBudget,
    conjunct: usize,
) -> Result<Verdict, DecideError> {
    let fp = GaloisField::prime(p)?;
    let residues = reduce(&fp, &c.neqs);
    if let Some(index) = residues.iter().position(Polynomial::is_zero) {
        return Ok(Verdict::No(vec![NoCertificate::PolyVanishes {
            conjunct,
            p,
            index,
            poly: c.neqs[index].clone(),
        }]));
    }
    let deg = c.neqs.iter().filter_map(|g| g.total_degree()).max().unwrap_or(0) as u64;
    let m = c.vars.len();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut k = 1u32;
    loop {
        // Over a field with more elements than the degree, a nonzero
        // polynomial has a nonroot; random points find one quickly.
        if p.checked_pow(k).is_some_and(|q| q > deg) {
            let field = make_ext_field(p, k)?;
            let ctx = residue_ctx(&field, p, budget)?;
            let polys = reduce(&field, &c.neqs);
            let mut points = Vec::with_capacity(polys.len());
            for g in &polys {
                let hit = (0..256).find_map(|i| {
                    let pt: Vec<u64> = if i == 0 {
                        vec![0; m]
                    } else {
                        (0..m).map(|_| field.random_elem(&mut rng)).collect()
                    };
                    (!field.is_zero(&g.eval_with(&field, &pt, |a| *a))).then_some(pt)
                });
                match hit {
                    Some(pt) => points.push(pt),
                    None => break,
                }
            }
            if points.len() == polys.len() {
                let values = points.iter().flatten().map(|&a| ctx.constant(a)).collect();
                return Ok(Verdict::Yes(Box::new(PrimeWitness::new(gap, ctx, values, conjunct))));
            }
        }
        k += 1;
        if k > budget.positive_max_k {
            return Err(AlgebraError::ResourceLimit("no nonvanishing point found".into()).into());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decider::witness::verify_witness;
    use crate::formula::{parse, to_dnf};
    use crate::reduction::{pad, replicate, to_gap};

    fn setup(src: &str) -> (Conjunct, GapSentence) {
        let c = to_dnf(&parse(src).unwrap(), 16).unwrap().remove(0);
        let g = to_gap(&replicate(&pad(&c)));
        (c, g)
    }

    fn yes(src: &str, p: u64) -> PrimeWitness {
        let (c, g) = setup(src);
        let b = DecideBudget::default();
        let v = if c.neqs.is_empty() {
            decide_positive(&c, &g, p, &b, 0)
        } else {
            decide_inequations(&c, &g, p, &b, 0)
        };
        match v.unwrap() {
            Verdict::Yes(w) => {
                assert!(verify_witness(&g, &w).unwrap(), "{src}");
                *w
            }
            other => panic!("{src} at {p}: {other:?}"),
        }
    }

    #[test]
    fn univariate_roots() {
        let w = yes("exists x: x^2 + x + 1 = 0", 5);
        assert_eq!(w.k(), 2);
        let w = yes("exists x: x^2 + x + 1 = 0", 3);
        assert_eq!((w.k(), w.assignment()["x"].as_str()), (1, "1"));
        let w = yes("exists x: x^3 + x + 1 = 0", 2);
        assert_eq!(w.k(), 3);
    }

    #[test]
    fn multivariate_points() {
        yes("exists x, y: x*y = 1 & x^2 + y^2 = 3", 7);
        yes("exists x, y, z: x + y + z = 0 & x*y*z = 1", 2);
        let w = yes("exists x, y: x^2 = y & y^2 = x & x*y = 1", 5);
        assert!(w.k() >= 1);
    }

    #[test]
    fn inequation_points() {
        let w = yes("exists x: x^2 + x != 0", 2);
        assert_eq!(w.k(), 2);
        assert_eq!(w.lower, crate::algebra::Valuation::Finite(Q64::from_integer(0)));
        yes("exists x, y: x*y != 0 & x + y != 0 & x - y != 0", 3);
        yes("exists x: 2*x + 1 != 0", 2);
    }

    #[test]
    fn refutations() {
        let b = DecideBudget::default();
        let (c, g) = setup("exists x: 2*x - 1 = 0");
        assert!(matches!(decide_positive(&c, &g, 2, &b, 0).unwrap(), Verdict::No(_)));
        let (c, g) = setup("exists x: 5*x^2 != 0");
        assert!(matches!(decide_inequations(&c, &g, 5, &b, 0).unwrap(), Verdict::No(_)));
    }
}
