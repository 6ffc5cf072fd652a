//! Gap witnesses: assignments in a truncated ramified series ring, their
//! verification, and a budgeted search for them.

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::series::fmt_q;
use crate::algebra::{make_ext_field, IntPoly, Ring, SeriesCtx, Valuation, Vars, Q64};
use crate::oracle::FiniteRing;
use crate::reduction::GapSentence;

use super::{BudgetReport, DecideBudget, DecideError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeWitness {
    /// Index of the satisfied conjunct in the disjunctive normal form.
    pub conjunct: usize,
    pub ctx: SeriesCtx,
    /// Gap variables, block-major.
    pub vars: Vars,
    pub values: Vec<Vec<u64>>,
    /// Smallest valuation among the upper terms.
    pub upper: Valuation,
    /// Largest valuation among the lower terms.
    pub lower: Valuation,
}

/// `(min upper, max lower, every lower term finite)` at an assignment.
pub fn gap_margin(gap: &GapSentence, ctx: &SeriesCtx, values: &[Vec<u64>]) -> (Valuation, Valuation, bool) {
    let val = |p: &IntPoly| ctx.valuation(&p.eval_with(ctx, values, |c| ctx.from_int(c)));
    let upper = gap.upper.iter().map(|t| val(&t.poly)).min().expect("at least one upper term");
    let lowers: Vec<Valuation> = gap.lower.iter().map(|t| val(&t.poly)).collect();
    let finite = lowers.iter().all(Valuation::is_finite);
    let lower = lowers.into_iter().max().expect("at least one lower term");
    (upper, lower, finite)
}

impl PrimeWitness {
    pub fn new(gap: &GapSentence, ctx: SeriesCtx, values: Vec<Vec<u64>>, conjunct: usize) -> Self {
        let (upper, lower, _) = gap_margin(gap, &ctx, &values);
        PrimeWitness {
            conjunct,
            ctx,
            vars: gap.vars().clone(),
            values,
            upper,
            lower,
        }
    }

    pub fn p(&self) -> u64 {
        self.ctx.p()
    }
    pub fn k(&self) -> u32 {
        self.ctx.k()
    }
    pub fn e(&self) -> u32 {
        self.ctx.e()
    }
    pub fn cap(&self) -> Q64 {
        self.ctx.cap()
    }

    /// Image under `t -> t^q`; valuations scale by `q` and the gap survives.
    pub fn rescale(&self, gap: &GapSentence, q: Q64) -> Result<PrimeWitness, DecideError> {
        let mut ctx = None;
        let mut values = Vec::with_capacity(self.values.len());
        for v in &self.values {
            let (c, a) = self.ctx.rescale(v, q)?;
            ctx = Some(c);
            values.push(a);
        }
        Ok(PrimeWitness::new(gap, ctx.expect("nonempty assignment"), values, self.conjunct))
    }

    /// The assignment as printed series, keyed by gap variable.
    pub fn assignment(&self) -> BTreeMap<String, String> {
        self.vars
            .iter()
            .zip(&self.values)
            .map(|(name, v)| (name.clone(), self.ctx.format(v)))
            .collect()
    }

    /// Rebuilds a witness from printed series.
    pub fn parse(
        gap: &GapSentence,
        p: u64,
        k: u32,
        e: u32,
        cap: Q64,
        assignment: &BTreeMap<String, String>,
        conjunct: usize,
    ) -> Result<PrimeWitness, DecideError> {
        let ctx = SeriesCtx::new(&make_ext_field(p, k)?, e, cap)?;
        let values = gap
            .vars()
            .iter()
            .map(|name| {
                let text = assignment
                    .get(name)
                    .ok_or_else(|| DecideError::Unsupported(format!("witness misses variable {name}")))?;
                Ok(ctx.parse(text)?)
            })
            .collect::<Result<Vec<_>, DecideError>>()?;
        Ok(PrimeWitness::new(gap, ctx, values, conjunct))
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "p": self.p(),
            "k": self.k(),
            "e": self.e(),
            "cap": fmt_q(&self.cap()),
            "conjunct": self.conjunct,
            "assignment": self.assignment(),
            "margin": {"upper": self.upper.to_string(), "lower": self.lower.to_string()},
        });
        if self.k() > 1 {
            out["field_modulus"] = json!(crate::oracle::format_dense(
                &crate::algebra::GaloisField::prime(self.p()).expect("prime"),
                self.ctx.field().modulus(),
                "a"
            ));
        }
        out
    }
}

/// Re-evaluates every term: all lower valuations finite, and every upper
/// valuation strictly above every lower one.
pub fn verify_witness(gap: &GapSentence, w: &PrimeWitness) -> Result<bool, DecideError> {
    if w.vars != *gap.vars() || w.values.len() != gap.vars().len() {
        return Err(DecideError::Unsupported("witness variables do not match the gap sentence".into()));
    }
    if w.values.iter().any(|v| v.len() != w.ctx.len()) {
        return Err(crate::algebra::AlgebraError::ContextMismatch.into());
    }
    let order = w.ctx.field().order();
    if w.values.iter().flatten().any(|&c| c >= order) {
        return Err(crate::algebra::AlgebraError::ContextMismatch.into());
    }
    let (upper, lower, finite) = gap_margin(gap, &w.ctx, &w.values);
    Ok(finite && upper > lower)
}

/// One level of the search schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Level {
    pub k: u32,
    pub e: u32,
    pub cap: u32,
}

/// All levels within the budget, by total weight `k + e + cap`; ties go to
/// the smaller cap, then the smaller field.
pub fn schedule(budget: &DecideBudget) -> Vec<Level> {
    let mut out = Vec::new();
    for k in 1..=budget.max_field_deg {
        for e in 0..=budget.max_ram {
            for cap in 1..=budget.precision {
                out.push(Level { k, e, cap });
            }
        }
    }
    out.sort_by_key(|l| (l.k + l.e + l.cap, l.cap, l.k, l.e));
    out
}

/// Per-block `(min upper, lower)` valuation pairs, each with the first
/// block assignment attaining it.
type BlockPairs = BTreeMap<(Valuation, Valuation), Vec<Vec<u64>>>;

/// Searches the levels of the schedule for a gap witness. Exhaustive when
/// a block's assignment space fits `enum_cap`, seeded sampling otherwise.
/// Failure is never a refutation.
pub fn witness_search(
    gap: &GapSentence,
    p: u64,
    budget: &DecideBudget,
    conjunct: usize,
) -> Result<Result<PrimeWitness, BudgetReport>, DecideError> {
    let n = gap.n();
    let m = gap.m();
    let levels = schedule(budget);
    let mut tried = 0usize;
    let mut skipped = Vec::new();
    for level in &levels {
        let field = match make_ext_field(p, level.k) {
            Ok(f) => f,
            Err(_) => {
                skipped.push(*level);
                continue;
            }
        };
        let ctx = match p.checked_pow(level.e).and_then(|pe| pe.checked_mul(level.cap as u64)) {
            Some(len) if len <= 4096 => SeriesCtx::with_len(&field, level.e, len as usize),
            _ => {
                skipped.push(*level);
                continue;
            }
        };
        tried += 1;
        let per_var = ctx.size();
        let space = per_var.checked_pow(m as u32).unwrap_or(u64::MAX);
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ ((level.k as u64) << 40 | (level.e as u64) << 20 | level.cap as u64));
        let mut pairs: Vec<BlockPairs> = vec![BTreeMap::new(); n];
        let assignments: Box<dyn Iterator<Item = Vec<Vec<u64>>>> = if space <= budget.enum_cap {
            Box::new((0..space).map(|mut idx| {
                let mut a = vec![Vec::new(); m];
                for slot in a.iter_mut().rev() {
                    *slot = ctx.element(idx % per_var);
                    idx /= per_var;
                }
                a
            }))
        } else {
            let samples: Vec<Vec<Vec<u64>>> = (0..budget.samples)
                .map(|_| (0..m).map(|_| random_series(&ctx, &mut rng)).collect())
                .collect();
            Box::new(samples.into_iter())
        };
        let originals = &gap.replicated.original;
        for block_vals in assignments {
            let ups: Vec<Valuation> = originals
                .eqs
                .iter()
                .map(|f| ctx.valuation(&f.eval_with(&ctx, &block_vals, |c| ctx.from_int(c))))
                .collect();
            let upper = ups.into_iter().min().expect("balanced conjunct");
            for (j, g) in originals.neqs.iter().enumerate() {
                let lower = ctx.valuation(&g.eval_with(&ctx, &block_vals, |c| ctx.from_int(c)));
                if lower.is_finite() && upper > lower {
                    pairs[j].entry((upper, lower)).or_insert_with(|| block_vals.clone());
                }
            }
        }
        if let Some(values) = combine(&pairs, m) {
            let w = PrimeWitness::new(gap, ctx, values, conjunct);
            if verify_witness(gap, &w)? {
                return Ok(Ok(w));
            }
        }
    }
    let reason = if skipped.is_empty() {
        format!("no gap witness at {tried} levels")
    } else {
        format!("no gap witness at {tried} levels; {} levels exceed size limits", skipped.len())
    };
    Ok(Err(BudgetReport {
        max_field_deg: budget.max_field_deg,
        max_ram: budget.max_ram,
        precision: budget.precision,
        levels_tried: tried,
        reason,
    }))
}

/// Picks one pair per block with `lower <= T < upper` for a common threshold `T`.
fn combine(pairs: &[BlockPairs], m: usize) -> Option<Vec<Vec<u64>>> {
    let mut thresholds: Vec<Valuation> = pairs.iter().flat_map(|b| b.keys().map(|(_, l)| *l)).collect();
    thresholds.sort();
    thresholds.dedup();
    for t in thresholds {
        let mut values = Vec::with_capacity(pairs.len() * m);
        let ok = pairs.iter().all(|block| {
            match block.iter().find(|((u, l), _)| *l <= t && *u > t) {
                Some((_, vals)) => {
                    values.extend(vals.iter().cloned());
                    true
                }
                None => false,
            }
        });
        if ok {
            return Some(values);
        }
    }
    None
}

/// A random residue plus at most two random higher terms. Dense random
/// series almost always have valuation zero everywhere, which is useless
/// for finding gaps.
fn random_series(ctx: &SeriesCtx, rng: &mut ChaCha8Rng) -> Vec<u64> {
    use rand::Rng as _;
    let f = ctx.field();
    let mut out = ctx.constant(f.random_elem(rng));
    if ctx.len() > 1 {
        for _ in 0..rng.gen_range(0..=2) {
            let i = rng.gen_range(1..ctx.len());
            out[i] = f.random_elem(rng);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaloisField;
    use crate::formula::{parse, to_dnf};
    use crate::reduction::{pad, replicate, to_gap};

    fn gap(src: &str) -> GapSentence {
        let c = to_dnf(&parse(src).unwrap(), 16).unwrap().remove(0);
        to_gap(&replicate(&pad(&c)))
    }

    fn dual() -> SeriesCtx {
        SeriesCtx::new(&GaloisField::prime(2).unwrap(), 1, Q64::from_integer(1)).unwrap()
    }

    #[test]
    fn verify_examples() {
        let g = gap("exists x: x^2 = 1 & x != 1");
        let ctx = dual();
        let x = ctx.add(&ctx.one(), &ctx.uniformizer());
        let w = PrimeWitness::new(&g, ctx.clone(), vec![x], 0);
        assert!(verify_witness(&g, &w).unwrap());
        assert_eq!(w.upper, Valuation::AtLeastCap(Q64::from_integer(1)));
        assert_eq!(w.lower, Valuation::Finite(Q64::new(1, 2)));
        let w = PrimeWitness::new(&g, ctx.clone(), vec![ctx.one()], 0);
        assert!(!verify_witness(&g, &w).unwrap());
    }

    #[test]
    fn rescaled_witness_still_verifies() {
        let g = gap("exists x: x^2 = 1 & x != 1");
        let ctx = dual();
        let x = ctx.add(&ctx.one(), &ctx.uniformizer());
        let w = PrimeWitness::new(&g, ctx, vec![x], 0);
        for q in [Q64::from_integer(2), Q64::new(1, 2), Q64::new(3, 4), Q64::from_integer(5)] {
            let r = w.rescale(&g, q).unwrap();
            assert!(verify_witness(&g, &r).unwrap());
            assert_eq!(r.lower, Valuation::Finite(Q64::new(1, 2) * q));
        }
    }

    #[test]
    fn foreign_context_is_an_error() {
        let g = gap("exists x: x^2 = 1 & x != 1");
        let ctx = dual();
        let mut w = PrimeWitness::new(&g, ctx, vec![vec![1, 1]], 0);
        w.values = vec![vec![1, 1, 0]];
        assert!(verify_witness(&g, &w).is_err());
    }

    #[test]
    fn search_examples() {
        let b = DecideBudget::default();
        let g = gap("exists x: x^2 = 1 & x != 1");
        let w = witness_search(&g, 2, &b, 0).unwrap().unwrap();
        assert_eq!((w.k(), w.e()), (1, 1));
        assert_eq!(w.assignment()["x"], "1 + t^(1/2)");

        let g = gap("exists x: x^3 = 1 & x != 1");
        let w = witness_search(&g, 7, &b, 0).unwrap().unwrap();
        assert_eq!((w.k(), w.e()), (1, 0));
        assert_eq!(w.assignment()["x"], "2");

        let g = gap("exists x: x - 1 = 0 & (x - 1)^2 != 0");
        let report = witness_search(&g, 3, &b, 0).unwrap().unwrap_err();
        assert!(report.levels_tried > 0);
    }

    #[test]
    fn schedule_is_fair() {
        let b = DecideBudget {
            max_field_deg: 2,
            max_ram: 1,
            precision: 2,
            ..DecideBudget::default()
        };
        let s = schedule(&b);
        assert_eq!(s.len(), 8);
        assert_eq!(s[0], Level { k: 1, e: 0, cap: 1 });
        let weights: Vec<u32> = s.iter().map(|l| l.k + l.e + l.cap).collect();
        assert!(weights.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn printed_witness_reparses() {
        let g = gap("exists x: x^2 = 1 & x != 1");
        let b = DecideBudget::default();
        let w = witness_search(&g, 2, &b, 0).unwrap().unwrap();
        let back = PrimeWitness::parse(&g, 2, w.k(), w.e(), w.cap(), &w.assignment(), 0).unwrap();
        assert_eq!(back, w);
    }
}
