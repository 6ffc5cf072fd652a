//! Complete decision for conjuncts in one variable.
//!
//! Over an algebraically closed residue field every root of a reduced
//! polynomial is a residue constant, so near a root `a` of an irreducible
//! factor `h` the valuation of a polynomial is its `h`-multiplicity times
//! `v(x - a)`. A block is satisfiable iff some `h` divides every nonzero
//! equation strictly more often than the block's inequation.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::algebra::factor::{factor_dense, poly_order, roots};
use crate::algebra::qfactor::{factor_q, zpoly_order, ZPoly};
use crate::algebra::{make_ext_field, upoly, AlgebraError, GaloisField, Ring, SeriesCtx, Q64};
use crate::reduction::{active_vars, GapSentence};

use super::certificate::NoCertificate;
use super::witness::{verify_witness, PrimeWitness};
use super::{dense_residues, DecideError, Verdict};

/// Shared irreducible basis and multiplicity table of a list of univariate polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrdProfile<P, U> {
    pub basis: Vec<P>,
    /// Leading unit of each input; `None` for the zero polynomial.
    pub units: Vec<Option<U>>,
    /// `mults[i][b]` is the multiplicity of `basis[b]` in input `i`;
    /// `None` stands for the zero polynomial (infinite order everywhere).
    pub mults: Vec<Option<Vec<u32>>>,
}

fn merge<P: Clone + PartialEq, U>(
    factored: Vec<Option<(U, Vec<(P, u32)>)>>,
    order: fn(&P, &P) -> Ordering,
) -> OrdProfile<P, U> {
    let mut basis: Vec<P> = factored.iter().flatten().flat_map(|(_, fs)| fs.iter().map(|(h, _)| h.clone())).collect();
    basis.sort_by(order);
    basis.dedup();
    let mut units = Vec::with_capacity(factored.len());
    let mut mults = Vec::with_capacity(factored.len());
    for entry in factored {
        match entry {
            None => {
                units.push(None);
                mults.push(None);
            }
            Some((u, fs)) => {
                let row = basis
                    .iter()
                    .map(|b| fs.iter().find(|(h, _)| h == b).map_or(0, |(_, m)| *m))
                    .collect();
                units.push(Some(u));
                mults.push(Some(row));
            }
        }
    }
    OrdProfile { basis, units, mults }
}

/// Profile over `F_p` (or any finite field) of dense polynomials.
pub fn ord_profile(field: &GaloisField, polys: &[Vec<u64>]) -> Result<OrdProfile<Vec<u64>, u64>, AlgebraError> {
    let factored = polys
        .iter()
        .map(|p| {
            let p = upoly::trimmed(field, p.clone());
            if p.is_empty() {
                Ok(None)
            } else {
                factor_dense(field, &p).map(Some)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(merge(factored, poly_order))
}

/// Profile over `Q` of dense integer polynomials; the basis is primitive
/// with positive leading coefficients.
pub fn ord_profile_q(polys: &[ZPoly]) -> Result<OrdProfile<ZPoly, BigInt>, AlgebraError> {
    let factored = polys
        .iter()
        .map(|p| {
            let p = upoly::trimmed(&crate::algebra::Integers, p.clone());
            if p.is_empty() {
                Ok(None)
            } else {
                factor_q(&p).map(Some)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(merge(factored, zpoly_order))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockChoice {
    /// Every equation reduces to zero; any point off the inequation's zeros works.
    Free,
    /// Approach a root of `basis[index]`; `upper` is the least multiplicity
    /// among nonzero equations, `lower` the inequation's.
    Factor { index: usize, upper: u32, lower: u32 },
}

/// Options for block `k` of a profile laid out as `n` equations followed by
/// `n` inequations. Empty means the block, and so the conjunct, fails.
pub fn block_choices<P, U>(profile: &OrdProfile<P, U>, n: usize, k: usize) -> Vec<BlockChoice> {
    let Some(g) = &profile.mults[n + k] else {
        return Vec::new();
    };
    let eqs: Vec<&Vec<u32>> = profile.mults[..n].iter().flatten().collect();
    if eqs.is_empty() {
        return vec![BlockChoice::Free];
    }
    (0..profile.basis.len())
        .filter_map(|index| {
            let upper = eqs.iter().map(|row| row[index]).min().expect("nonempty");
            (upper > g[index]).then_some(BlockChoice::Factor {
                index,
                upper,
                lower: g[index],
            })
        })
        .collect()
}

/// True iff every block has at least one option.
pub fn separated_rule<P, U>(profile: &OrdProfile<P, U>, n: usize) -> bool {
    (0..n).all(|k| !block_choices(profile, n, k).is_empty())
}

/// The single active variable of a one-variable conjunct.
pub fn separated_var(gap: &GapSentence) -> Result<Option<usize>, DecideError> {
    let active = active_vars(&gap.replicated.original);
    match active.as_slice() {
        [] => Ok(None),
        [v] => Ok(Some(*v)),
        _ => Err(DecideError::Unsupported("conjunct has more than one active variable".into())),
    }
}

/// Decides a padded one-variable conjunct modulo `p`. Yes carries a
/// synthesized and re-verified witness, No an order-profile certificate.
pub fn decide_separated(gap: &GapSentence, p: u64, precision: u32, conjunct: usize) -> Result<Verdict, DecideError> {
    let var = separated_var(gap)?;
    let fp = GaloisField::prime(p)?;
    let c = &gap.replicated.original;
    let n = gap.n();
    let eqs: Vec<Vec<u64>> = c.eqs.iter().map(|f| dense_residues(&fp, f, var)).collect();
    let neqs: Vec<Vec<u64>> = c.neqs.iter().map(|g| dense_residues(&fp, g, var)).collect();
    let all: Vec<Vec<u64>> = eqs.iter().chain(&neqs).cloned().collect();
    let profile = ord_profile(&fp, &all)?;
    let choices: Vec<Vec<BlockChoice>> = (0..n).map(|k| block_choices(&profile, n, k)).collect();
    if choices.iter().any(Vec::is_empty) {
        return Ok(Verdict::No(vec![NoCertificate::OrdProfile {
            conjunct,
            p,
            eqs,
            neqs,
            basis: profile.basis,
            units: profile.units,
            mults: profile.mults,
        }]));
    }
    let cap = (p - 1).min(precision.max(1) as u64);
    let w = synthesize(gap, &fp, &profile.basis, &neqs, &choices, var, cap, conjunct)?;
    if !verify_witness(gap, &w)? {
        return Err(DecideError::Internal(format!(
            "synthesized witness for conjunct {conjunct} at p = {p} fails verification"
        )));
    }
    Ok(Verdict::Yes(Box::new(w)))
}

/// Smallest `e` with `lower * ceil(p^e M / upper) < p^e M` for every block.
fn ramification(p: u64, cap: u64, picks: &[BlockChoice]) -> Result<u32, DecideError> {
    for e in 0..=40u32 {
        let Some(len) = p.checked_pow(e).and_then(|pe| pe.checked_mul(cap)).filter(|&l| l <= 1 << 16) else {
            break;
        };
        let ok = picks.iter().all(|c| match *c {
            BlockChoice::Factor { upper, lower, .. } if lower > 0 => {
                lower as u64 * len.div_ceil(upper as u64) < len
            }
            _ => true,
        });
        if ok {
            return Ok(e);
        }
    }
    Err(AlgebraError::ResourceLimit("witness needs more ramification than the series length limit".into()).into())
}

#[allow(clippy::too_many_arguments)]
fn synthesize(
    gap: &GapSentence,
    fp: &GaloisField,
    basis: &[Vec<u64>],
    neqs: &[Vec<u64>],
    choices: &[Vec<BlockChoice>],
    var: Option<usize>,
    cap: u64,
    conjunct: usize,
) -> Result<PrimeWitness, DecideError> {
    let p = fp.p();
    // Field degree each option needs on its own, then the cheapest option per block.
    let free_degree = |g: &[u64]| {
        let d = upoly::degree(&upoly::trimmed(fp, g.to_vec())).unwrap_or(0) as u64;
        (1u32..).find(|&k| p.checked_pow(k).is_none_or(|q| q > d)).unwrap()
    };
    let picks: Vec<BlockChoice> = choices
        .iter()
        .enumerate()
        .map(|(k, opts)| {
            *opts
                .iter()
                .enumerate()
                .min_by_key(|(i, c)| {
                    let (deg, alone) = match **c {
                        BlockChoice::Free => (free_degree(&neqs[k]), 0),
                        BlockChoice::Factor { index, .. } => {
                            (basis[index].len() as u32 - 1, ramification(p, cap, &[**c]).unwrap_or(u32::MAX))
                        }
                    };
                    (deg, alone, *i)
                })
                .map(|(_, c)| c)
                .expect("nonempty options")
        })
        .collect();
    let k = picks
        .iter()
        .enumerate()
        .map(|(j, c)| match *c {
            BlockChoice::Free => free_degree(&neqs[j]) as u64,
            BlockChoice::Factor { index, .. } => basis[index].len() as u64 - 1,
        })
        .fold(1u64, crate::algebra::arith::lcm_u64);
    let k = u32::try_from(k).map_err(|_| AlgebraError::ResourceLimit("witness field degree".into()))?;
    let field = make_ext_field(p, k)?;
    let e = ramification(p, cap, &picks)?;
    let len = p.pow(e) * cap;
    let ctx = SeriesCtx::with_len(&field, e, len as usize);
    let pe = p.pow(e);
    let m = gap.m();
    let mut values = vec![ctx.zero(); gap.n() * m];
    for (j, pick) in picks.iter().enumerate() {
        let x = match *pick {
            BlockChoice::Free => {
                let alpha = field
                    .elements()
                    .find(|a| !field.is_zero(&upoly::eval(&field, &neqs[j], a)))
                    .expect("field larger than the degree has a nonroot");
                ctx.constant(alpha)
            }
            BlockChoice::Factor { index, upper, lower } => {
                let alpha = roots(&field, &basis[index])[0];
                let base = ctx.constant(alpha);
                if lower == 0 {
                    base
                } else {
                    let step = len.div_ceil(upper as u64);
                    ctx.add(&base, &ctx.monomial(1, Q64::new(step, pe))?)
                }
            }
        };
        if let Some(v) = var {
            values[j * m + v] = x;
        }
    }
    Ok(PrimeWitness::new(gap, ctx, values, conjunct))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse, to_dnf};
    use crate::reduction::{pad, replicate, to_gap};

    fn gap(src: &str) -> GapSentence {
        let c = to_dnf(&parse(src).unwrap(), 16).unwrap().remove(0);
        to_gap(&replicate(&pad(&c)))
    }

    fn ints(v: &[i64]) -> ZPoly {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn profile_examples() {
        let f3 = GaloisField::prime(3).unwrap();
        let pr = ord_profile(&f3, &[vec![1, 1, 1], vec![2, 1]]).unwrap();
        assert_eq!(pr.basis, vec![vec![2, 1]]);
        assert_eq!(pr.mults, vec![Some(vec![2]), Some(vec![1])]);
        for p in [2u64, 3, 5, 7] {
            let fp = GaloisField::prime(p).unwrap();
            let mut xp = vec![0; p as usize + 1];
            xp[0] = p - 1;
            xp[p as usize] = 1;
            let pr = ord_profile(&fp, &[xp, vec![p - 1, 1]]).unwrap();
            assert_eq!(pr.basis, vec![vec![p - 1, 1]]);
            assert_eq!(pr.mults, vec![Some(vec![p as u32]), Some(vec![1])]);
        }
        let f2 = GaloisField::prime(2).unwrap();
        let pr = ord_profile(&f2, &[vec![], vec![0, 1]]).unwrap();
        assert_eq!(pr.mults, vec![None, Some(vec![1])]);
        assert_eq!(pr.units, vec![None, Some(1)]);
    }

    #[test]
    fn rational_profile() {
        let pr = ord_profile_q(&[ints(&[-1, 0, 1]), ints(&[-1, 1])]).unwrap();
        assert_eq!(pr.basis, vec![ints(&[-1, 1]), ints(&[1, 1])]);
        assert_eq!(pr.mults, vec![Some(vec![1, 1]), Some(vec![1, 0])]);
        assert_eq!(
            block_choices(&pr, 1, 0),
            vec![BlockChoice::Factor { index: 1, upper: 1, lower: 0 }]
        );
        let pr = ord_profile_q(&[ints(&[-1, 1]), ints(&[1, -2, 1])]).unwrap();
        assert!(!separated_rule(&pr, 1));
    }

    #[test]
    fn decisions_and_witnesses() {
        for p in [2u64, 3, 5, 7] {
            let g = gap("exists x: (x - 1)^2 = 0 & x - 1 != 0");
            let Verdict::Yes(w) = decide_separated(&g, p, 2, 0).unwrap() else {
                panic!("expected yes at {p}")
            };
            assert!(verify_witness(&g, &w).unwrap());
            let g = gap("exists x: x - 1 = 0 & (x - 1)^2 != 0");
            assert!(matches!(decide_separated(&g, p, 2, 0).unwrap(), Verdict::No(_)));
        }
        let g = gap("exists x: x^2 = 1 & x != 1");
        let Verdict::Yes(w) = decide_separated(&g, 2, 2, 0).unwrap() else { panic!() };
        assert_eq!((w.k(), w.e()), (1, 1));
        assert_eq!(w.assignment()["x"], "1 + t^(1/2)");
        let Verdict::Yes(w) = decide_separated(&g, 3, 2, 0).unwrap() else { panic!() };
        assert_eq!(w.assignment()["x"], "2");
        let g = gap("exists x: (x - 1)^2 = 0 & x - 1 != 0");
        let Verdict::Yes(w) = decide_separated(&g, 5, 2, 0).unwrap() else { panic!() };
        assert_eq!(w.assignment()["x"], "1 + t");
    }

    #[test]
    fn frobenius_family_is_yes_everywhere() {
        for p in [2u64, 3, 5, 7, 11, 13] {
            let g = gap(&format!("exists x: x^{p} = 1 & x != 1"));
            let Verdict::Yes(w) = decide_separated(&g, p, 2, 0).unwrap() else {
                panic!("p = {p}")
            };
            assert!(verify_witness(&g, &w).unwrap());
        }
    }

    #[test]
    fn extension_and_two_blocks() {
        // x^2 + x + 1 is irreducible mod 2 and mod 5
        let g = gap("exists x: x^2 + x + 1 = 0 & x^2 + x + 1 = 0 & x != 0 & x != 1");
        assert_eq!(g.n(), 2);
        for p in [2u64, 5] {
            let Verdict::Yes(w) = decide_separated(&g, p, 2, 0).unwrap() else { panic!() };
            assert_eq!(w.k(), 2);
            assert!(verify_witness(&g, &w).unwrap());
        }
        let g = gap("exists x: x^3 = 0 & x^4 = 0 & x != 0 & x^2 != 0");
        let Verdict::Yes(w) = decide_separated(&g, 3, 2, 0).unwrap() else { panic!() };
        assert!(verify_witness(&g, &w).unwrap());
    }

    #[test]
    fn free_and_dead_blocks() {
        let g = gap("exists x: 2 = 0 & x^2 + x != 0");
        let Verdict::Yes(w) = decide_separated(&g, 2, 2, 0).unwrap() else { panic!() };
        assert_eq!(w.k(), 2);
        assert!(matches!(decide_separated(&g, 3, 2, 0).unwrap(), Verdict::No(_)));
        let g = gap("exists x: x = 0 & 3*x != 0");
        assert!(matches!(decide_separated(&g, 3, 2, 0).unwrap(), Verdict::No(_)));
    }

    #[test]
    fn several_variables_are_rejected() {
        let g = gap("exists x, y: x = y & x != 0");
        assert!(decide_separated(&g, 2, 2, 0).is_err());
        // unused declared variables are fine and stay zero
        let g = gap("exists x, y: x^2 = 1 & x != 1");
        let Verdict::Yes(w) = decide_separated(&g, 2, 2, 0).unwrap() else { panic!() };
        assert_eq!(w.assignment()["y"], "0");
    }
}
