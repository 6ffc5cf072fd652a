//! All primes at once: decide the characteristic-zero analogue, find the
//! finitely many primes where that answer might not specialize, and check
//! those primes (and a floor of small ones) individually.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::arith::{is_prime, prime_divisors, primes_up_to};
use crate::algebra::groebner::{from_polynomial, GbConfig, MonoOrder};
use crate::algebra::qfactor::{content, squarefree_q, ZPoly};
use crate::algebra::resultant::{discriminant, resultant};
use crate::algebra::{upoly, IntPoly, Integers, Polynomial, Rationals};
use crate::decider::acf::unit_ideal;
use crate::decider::{decide_mod_p, ord_profile_q, separated_rule, DecideBudget, DecideError, NoCertificate, Verdict};
use crate::formula::{to_dnf, Conjunct, Sentence};
use crate::reduction::{active_vars, classify, pad, Fragment};

/// Primes at which characteristic-zero data may fail to specialize, each
/// with the quantities it divides.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BadPrimeSet {
    pub primes: BTreeMap<BigInt, Vec<String>>,
}

impl BadPrimeSet {
    /// Records every prime divisor of the nonzero integer `n`.
    pub fn add(&mut self, n: &BigInt, why: impl Fn() -> String) {
        assert!(!n.is_zero(), "bad-prime source must be nonzero");
        for q in prime_divisors(n) {
            let entry = self.primes.entry(q).or_default();
            let w = why();
            if !entry.contains(&w) {
                entry.push(w);
            }
        }
    }

    pub fn merge(&mut self, other: &BadPrimeSet) {
        for (q, ws) in &other.primes {
            let entry = self.primes.entry(q.clone()).or_default();
            for w in ws {
                if !entry.contains(w) {
                    entry.push(w.clone());
                }
            }
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        self.primes.contains_key(&BigInt::from(p))
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.primes
                .iter()
                .map(|(q, ws)| json!({"p": q.to_string(), "provenance": ws}))
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Char0Verdict {
    Yes,
    No,
    Inconclusive(String),
}

impl Char0Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Char0Verdict::Yes => "yes",
            Char0Verdict::No => "no",
            Char0Verdict::Inconclusive(_) => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Char0Conjunct {
    pub fragment: Fragment,
    pub verdict: Char0Verdict,
    pub bad: BadPrimeSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Char0Report {
    pub verdict: Char0Verdict,
    pub conjuncts: Vec<Char0Conjunct>,
    /// Union over the conjuncts that back the verdict.
    pub bad: BadPrimeSet,
}

impl Char0Report {
    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "verdict": self.verdict.label(),
            "conjuncts": self.conjuncts.iter().map(|c| json!({
                "fragment": c.fragment.to_string(),
                "verdict": c.verdict.label(),
            })).collect::<Vec<_>>(),
            "assumption": "outside the bad primes the per-prime verdict equals the characteristic-zero verdict; checked on corpora, not proved",
        });
        if let Char0Verdict::Inconclusive(why) = &self.verdict {
            out["reason"] = json!(why);
        }
        out
    }
}

fn int_poly_lc(q: &IntPoly) -> BigInt {
    let g = from_polynomial(&q.to_rational(), MonoOrder::Grevlex);
    g.lc().numer().clone()
}

fn dense_z(q: &IntPoly, var: Option<usize>) -> ZPoly {
    let d = match var {
        Some(v) => q.to_dense(v).expect("one variable"),
        None => vec![q.constant_term()],
    };
    upoly::trimmed(&Integers, d)
}

/// Leading coefficients and contents of the inputs.
fn add_input_data(bad: &mut BadPrimeSet, polys: &[IntPoly]) {
    for q in polys.iter().filter(|q| !q.is_zero()) {
        bad.add(&int_poly_lc(q), || format!("leading coefficient of {q}"));
        bad.add(&q.content(), || format!("content of {q}"));
    }
}

/// Discriminant of the squarefree part of a univariate input.
fn add_squarefree_disc(bad: &mut BadPrimeSet, q: &IntPoly) {
    let vars = active_vars(&Conjunct {
        vars: q.vars().clone(),
        eqs: vec![q.clone()],
        neqs: Vec::new(),
    });
    if vars.len() != 1 {
        return;
    }
    let f = dense_z(q, Some(vars[0]));
    let part = squarefree_q(&f)
        .into_iter()
        .fold(vec![BigInt::one()], |acc, (g, _)| upoly::mul(&Integers, &acc, &g));
    if part.len() >= 3 {
        bad.add(&discriminant(&part), || format!("discriminant of the squarefree part of {q}"));
    }
}

fn rational_gb(eqs: &[IntPoly], vars: &crate::algebra::Vars, cfg: GbConfig) -> Result<(bool, BadPrimeSet), DecideError> {
    let polys: Vec<Polynomial<Rationals>> = eqs.iter().map(IntPoly::to_rational).collect();
    let mut seen: Vec<BigRational> = Vec::new();
    let unit = unit_ideal(&Rationals, vars, &polys, cfg, &mut |c: &BigRational| seen.push(c.clone()))?;
    let mut bad = BadPrimeSet::default();
    seen.sort();
    seen.dedup();
    for c in &seen {
        bad.add(c.numer(), || "pivot or eliminated coefficient in the rational Groebner basis".into());
        bad.add(c.denom(), || "pivot or eliminated coefficient in the rational Groebner basis".into());
    }
    if let Some(cofs) = &unit {
        for q in cofs {
            for (_, c) in q.terms() {
                bad.add(c.denom(), || "denominator of an ideal-membership cofactor".into());
            }
        }
    }
    Ok((unit.is_none(), bad))
}

/// Characteristic-zero verdict of one conjunct with its bad primes.
pub fn char0_conjunct(c: &Conjunct, budget: &DecideBudget) -> Result<Char0Conjunct, DecideError> {
    let fragment = classify(c);
    let mut bad = BadPrimeSet::default();
    let verdict = match fragment {
        Fragment::Positive => {
            add_input_data(&mut bad, &c.eqs);
            for q in &c.eqs {
                add_squarefree_disc(&mut bad, q);
            }
            let (sat, gb_bad) = rational_gb(&c.eqs, &c.vars, budget.gb)?;
            bad.merge(&gb_bad);
            if sat {
                Char0Verdict::Yes
            } else {
                Char0Verdict::No
            }
        }
        Fragment::InequationsOnly => {
            add_input_data(&mut bad, &c.neqs);
            if c.neqs.iter().all(|g| !g.is_zero()) {
                Char0Verdict::Yes
            } else {
                Char0Verdict::No
            }
        }
        Fragment::Separated => {
            let padded = pad(c);
            let var = active_vars(&padded).first().copied();
            let polys: Vec<ZPoly> = padded.eqs.iter().chain(&padded.neqs).map(|q| dense_z(q, var)).collect();
            for f in polys.iter().filter(|f| !f.is_empty()) {
                let show = format_z(f);
                bad.add(&content(f), || format!("content of {show}"));
                bad.add(f.last().unwrap(), || format!("leading coefficient of {show}"));
            }
            let profile = ord_profile_q(&polys)?;
            for (i, h) in profile.basis.iter().enumerate() {
                let show = format_z(h);
                bad.add(h.last().unwrap(), || format!("leading coefficient of factor {show}"));
                if h.len() >= 3 {
                    bad.add(&discriminant(h), || format!("discriminant of factor {show}"));
                }
                for h2 in &profile.basis[..i] {
                    let other = format_z(h2);
                    bad.add(&resultant(h2, h), || format!("resultant of factors {other} and {show}"));
                }
            }
            if separated_rule(&profile, padded.eqs.len()) {
                Char0Verdict::Yes
            } else {
                Char0Verdict::No
            }
        }
        Fragment::General => Char0Verdict::Inconclusive("several variables on both sides: no complete procedure".into()),
    };
    Ok(Char0Conjunct { fragment, verdict, bad })
}

fn format_z(f: &ZPoly) -> String {
    let vars = crate::algebra::poly::vars(&["x"]);
    IntPoly::from_dense(&Integers, &vars, 0, f).to_string()
}

/// Bad primes of a conjunct, from its characteristic-zero computation.
pub fn bad_primes(c: &Conjunct, budget: &DecideBudget) -> Result<BadPrimeSet, DecideError> {
    Ok(char0_conjunct(c, budget)?.bad)
}

/// Characteristic-zero verdict: Yes if some conjunct holds, No only if
/// every conjunct is in a complete fragment and fails.
pub fn char0_decide(s: &Sentence, budget: &DecideBudget) -> Result<Char0Report, DecideError> {
    let conjuncts = to_dnf(s, budget.dnf_cap)?;
    let results = conjuncts
        .iter()
        .map(|c| char0_conjunct(c, budget))
        .collect::<Result<Vec<_>, _>>()?;
    let mut bad = BadPrimeSet::default();
    let verdict = if let Some(yes) = results.iter().find(|r| r.verdict == Char0Verdict::Yes) {
        bad.merge(&yes.bad);
        Char0Verdict::Yes
    } else if results.iter().all(|r| r.verdict == Char0Verdict::No) {
        results.iter().for_each(|r| bad.merge(&r.bad));
        Char0Verdict::No
    } else {
        Char0Verdict::Inconclusive("a conjunct outside the complete fragments".into())
    };
    Ok(Char0Report {
        verdict,
        conjuncts: results,
        bad,
    })
}

#[derive(Clone, Debug)]
pub struct AllPrimesConfig {
    /// Primes always checked individually.
    pub floor: Vec<u64>,
    /// Largest prime tried when refuting or when no complete procedure applies.
    pub prime_bound: u64,
    pub budget: DecideBudget,
}

impl Default for AllPrimesConfig {
    fn default() -> Self {
        AllPrimesConfig {
            floor: primes_up_to(13),
            prime_bound: 13,
            budget: DecideBudget::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AllPrimesVerdict {
    HoldsForAll,
    FailsAt { p: u64, certificate: Vec<NoCertificate> },
    /// `contradiction` flags a characteristic-zero No with no failing prime
    /// found, which breaks the transfer contract.
    Inconclusive { contradiction: bool },
}

#[derive(Clone, Debug)]
pub struct AllPrimesReport {
    pub verdict: AllPrimesVerdict,
    pub char0: Char0Report,
    /// Every individually checked prime, ascending.
    pub per_prime: Vec<(u64, Verdict)>,
    pub unresolved: Vec<String>,
}

impl AllPrimesReport {
    pub fn to_json(&self) -> Value {
        let (label, failing) = match &self.verdict {
            AllPrimesVerdict::HoldsForAll => ("holds_for_all", None),
            AllPrimesVerdict::FailsAt { p, .. } => ("fails_at", Some(*p)),
            AllPrimesVerdict::Inconclusive { .. } => ("inconclusive", None),
        };
        let mut out = json!({
            "verdict": label,
            "char0": self.char0.to_json(),
            "bad_primes": self.char0.bad.to_json(),
            "per_prime": self.per_prime.iter().map(|(p, v)| {
                let mut entry = v.to_json();
                entry["p"] = json!(p);
                entry
            }).collect::<Vec<_>>(),
            "unresolved": self.unresolved,
        });
        if let Some(p) = failing {
            out["failing_prime"] = json!(p);
        }
        if let AllPrimesVerdict::Inconclusive { contradiction: true } = self.verdict {
            out["contradiction"] = json!(true);
        }
        out
    }
}

/// Primes of the bad set that fit the per-prime machinery, plus the ones that do not.
fn small_bad_primes(bad: &BadPrimeSet) -> (Vec<u64>, Vec<String>) {
    let mut ok = Vec::new();
    let mut big = Vec::new();
    for q in bad.primes.keys() {
        match q.to_u64().filter(|&p| p < 1 << 62 && is_prime(p)) {
            Some(p) => ok.push(p),
            None => big.push(format!("bad prime {q} exceeds the field encoding")),
        }
    }
    (ok, big)
}

fn check_primes(s: &Sentence, primes: &[u64], budget: &DecideBudget) -> Result<Vec<(u64, Verdict)>, DecideError> {
    primes
        .par_iter()
        .map(|&p| decide_mod_p(s, p, budget).map(|v| (p, v)))
        .collect()
}

fn first_no(results: &[(u64, Verdict)]) -> Option<(u64, Vec<NoCertificate>)> {
    results.iter().find_map(|(p, v)| match v {
        Verdict::No(c) => Some((*p, c.clone())),
        _ => None,
    })
}

/// Decides the sentence for every prime at once.
pub fn decide_all_primes(s: &Sentence, cfg: &AllPrimesConfig) -> Result<AllPrimesReport, DecideError> {
    let char0 = char0_decide(s, &cfg.budget)?;
    let (bad, mut unresolved) = small_bad_primes(&char0.bad);
    let mut primes: Vec<u64> = bad.iter().chain(&cfg.floor).copied().collect();
    if !matches!(char0.verdict, Char0Verdict::Yes) {
        primes.extend(primes_up_to(cfg.prime_bound));
    }
    primes.sort_unstable();
    primes.dedup();
    let per_prime = check_primes(s, &primes, &cfg.budget)?;
    let open: Vec<String> = per_prime
        .iter()
        .filter(|(_, v)| matches!(v, Verdict::Inconclusive(_)))
        .map(|(p, _)| format!("p = {p}: per-prime search inconclusive"))
        .collect();
    let verdict = match (first_no(&per_prime), &char0.verdict) {
        (Some((p, certificate)), _) => AllPrimesVerdict::FailsAt { p, certificate },
        (None, Char0Verdict::Yes) if open.is_empty() && unresolved.is_empty() => AllPrimesVerdict::HoldsForAll,
        (None, Char0Verdict::No) => AllPrimesVerdict::Inconclusive { contradiction: open.is_empty() },
        _ => AllPrimesVerdict::Inconclusive { contradiction: false },
    };
    if matches!(char0.verdict, Char0Verdict::Inconclusive(_)) && !matches!(verdict, AllPrimesVerdict::FailsAt { .. }) {
        unresolved.push(format!("primes above {} (no complete procedure)", cfg.prime_bound.max(*primes.last().unwrap_or(&0))));
    }
    unresolved.extend(open);
    Ok(AllPrimesReport {
        verdict,
        char0,
        per_prime,
        unresolved,
    })
}
