use super::{Conjunct, Formula, FormulaError, Literal, Rel, Sentence};

pub const DEFAULT_DNF_CAP: usize = 4096;

/// Literal set of one disjunct, kept sorted and duplicate-free.
type Clause = Vec<(Rel, String, usize)>;

/// Disjunctive normal form of the matrix; fails rather than truncating when
/// more than `cap` conjuncts would be produced.
pub fn to_dnf(s: &Sentence, cap: usize) -> Result<Vec<Conjunct>, FormulaError> {
    let mut lits: Vec<Literal> = Vec::new();
    let clauses = expand(&s.matrix, cap, &mut lits)?;
    Ok(clauses
        .into_iter()
        .map(|clause| {
            let mut c = Conjunct {
                vars: s.vars.clone(),
                eqs: Vec::new(),
                neqs: Vec::new(),
            };
            for (rel, _, i) in clause {
                let p = lits[i].poly.clone();
                match rel {
                    Rel::Eq => c.eqs.push(p),
                    Rel::Neq => c.neqs.push(p),
                }
            }
            c
        })
        .collect())
}

fn intern(lits: &mut Vec<Literal>, l: &Literal) -> (Rel, String, usize) {
    let idx = match lits.iter().position(|x| x == l) {
        Some(i) => i,
        None => {
            lits.push(l.clone());
            lits.len() - 1
        }
    };
    (l.rel, l.poly.to_string(), idx)
}

fn expand(f: &Formula, cap: usize, lits: &mut Vec<Literal>) -> Result<Vec<Clause>, FormulaError> {
    match f {
        Formula::Lit(l) => Ok(vec![vec![intern(lits, l)]]),
        Formula::Or(xs) => {
            let mut out: Vec<Clause> = Vec::new();
            for x in xs {
                for c in expand(x, cap, lits)? {
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
                if out.len() > cap {
                    return Err(FormulaError::DnfLimit { cap });
                }
            }
            Ok(out)
        }
        Formula::And(xs) => {
            let mut acc: Vec<Clause> = vec![Vec::new()];
            for x in xs {
                let rhs = expand(x, cap, lits)?;
                if acc.len().saturating_mul(rhs.len()) > cap {
                    return Err(FormulaError::DnfLimit { cap });
                }
                let mut next = Vec::with_capacity(acc.len() * rhs.len());
                for a in &acc {
                    for b in &rhs {
                        let mut c = a.clone();
                        for l in b {
                            if !c.contains(l) {
                                c.push(l.clone());
                            }
                        }
                        c.sort();
                        if !next.contains(&c) {
                            next.push(c);
                        }
                    }
                }
                acc = next;
            }
            Ok(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gf::make_ext_field;
    use crate::algebra::series::{SeriesCtx, Q64};
    use crate::algebra::{GaloisField, Ring};
    use crate::formula::parse;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_literal_one_conjunct() {
        let s = parse("exists x: x = 0").unwrap();
        assert_eq!(to_dnf(&s, 10).unwrap().len(), 1);
    }

    #[test]
    fn distribution() {
        let s = parse("exists a, b, c: (a = 0 | b = 0) & c != 0").unwrap();
        let d = to_dnf(&s, 10).unwrap();
        assert_eq!(d.len(), 2);
        let shown: Vec<String> = d.iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, ["a = 0 & c != 0", "b = 0 & c != 0"]);
        // truth table over F_2
        let f2 = GaloisField::prime(2).unwrap();
        for bits in 0u64..8 {
            let v = [bits & 1, (bits >> 1) & 1, (bits >> 2) & 1];
            assert_eq!(s.matrix.eval(&f2, &v), d.iter().any(|c| c.holds(&f2, &v)));
        }
        let s = parse("exists a, b, c, e: (a = 0 | b = 0) & (c = 0 | e = 0)").unwrap();
        assert_eq!(to_dnf(&s, 10).unwrap().len(), 4);
    }

    #[test]
    fn duplicates_removed() {
        let s = parse("exists x: x = 0 & (x = 0 | x = 0)").unwrap();
        let d = to_dnf(&s, 10).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].eqs.len(), 1);
    }

    #[test]
    fn cap_is_a_distinct_error() {
        let s = parse("exists x: (x = 0 | x = 1) & (x = 2 | x = 3) & (x = 4 | x = 5)").unwrap();
        assert_eq!(to_dnf(&s, 7).unwrap_err(), FormulaError::DnfLimit { cap: 7 });
        assert_eq!(to_dnf(&s, 8).unwrap().len(), 8);
    }

    fn random_formula(rng: &mut ChaCha8Rng, depth: u32, budget: &mut u32) -> String {
        if depth == 0 || *budget <= 1 || rng.gen_bool(0.4) {
            *budget = budget.saturating_sub(1);
            let var = ["x", "y", "z"][rng.gen_range(0..3)];
            let var2 = ["x", "y", "z"][rng.gen_range(0..3)];
            let c = rng.gen_range(-1..=1);
            let poly = match rng.gen_range(0..3) {
                0 => format!("{var} + {c}"),
                1 => format!("{var}*{var2} + {c}"),
                _ => format!("{var}^2 - {var2}"),
            };
            let rel = if rng.gen_bool(0.5) { "=" } else { "!=" };
            return format!("{poly} {rel} 0");
        }
        let op = if rng.gen_bool(0.5) { "&" } else { "|" };
        let a = random_formula(rng, depth - 1, budget);
        let b = random_formula(rng, depth - 1, budget);
        format!("({a} {op} {b})")
    }

    fn check_equivalence<R: Ring>(r: &R, elems: &[R::Elem], rng: &mut ChaCha8Rng, s: &Sentence, d: &[Conjunct]) {
        for _ in 0..20 {
            let v: Vec<R::Elem> = (0..3).map(|_| elems[rng.gen_range(0..elems.len())].clone()).collect();
            assert_eq!(s.matrix.eval(r, &v), d.iter().any(|c| c.holds(r, &v)), "{s}");
        }
    }

    #[test]
    fn random_formulas_are_equivalent_to_their_dnf() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let f2 = GaloisField::prime(2).unwrap();
        let f3 = GaloisField::prime(3).unwrap();
        let dual = SeriesCtx::new(&f2, 1, Q64::from_integer(1)).unwrap();
        let dual_elems: Vec<Vec<u64>> = (0..4).map(|i| vec![i & 1, i >> 1]).collect();
        let four = make_ext_field(2, 2).unwrap();
        for _ in 0..150 {
            let mut budget = 4;
            let text = format!("exists x, y, z: {}", random_formula(&mut rng, 3, &mut budget));
            let s = parse(&text).unwrap();
            let d = to_dnf(&s, DEFAULT_DNF_CAP).unwrap();
            check_equivalence(&f2, &[0, 1], &mut rng, &s, &d);
            check_equivalence(&f3, &[0, 1, 2], &mut rng, &s, &d);
            check_equivalence(&dual, &dual_elems, &mut rng, &s, &d);
            check_equivalence(&four, &[0, 1, 2, 3], &mut rng, &s, &d);
        }
    }
}
