use num_bigint::BigInt;
use proptest::prelude::*;

use abmod_core::algebra::factor::factor_dense;
use abmod_core::algebra::poly::vars;
use abmod_core::algebra::{make_ext_field, upoly, GaloisField, IntPoly, Integers, Ring, Q64};
use abmod_core::decider::{
    acf_decide, decide_conjunct, gap_form, verify_witness, AcfOutcome, Characteristic, DecideBudget, Verdict,
};
use abmod_core::formula::{parse, to_dnf, Conjunct};
use abmod_core::oracle::{brute_sat, build_local_model, OracleBudget};
use abmod_core::reduction::{classify, pad, replicate, Fragment};

fn poly_in(names: &'static [&'static str], deg: u32) -> impl Strategy<Value = IntPoly> {
    let nv = names.len();
    prop::collection::vec((prop::collection::vec(0..=deg, nv), -2i64..=2), 0..4).prop_map(move |terms| {
        let terms = terms
            .into_iter()
            .filter(|(e, _)| e.iter().sum::<u32>() <= deg)
            .map(|(e, c)| (e, BigInt::from(c)));
        IntPoly::from_terms(&Integers, &vars(names), terms)
    })
}

fn univariate_conjunct(max_deg: u32) -> impl Strategy<Value = Conjunct> {
    (
        prop::collection::vec(poly_in(&["x"], max_deg), 1..=2),
        prop::collection::vec(poly_in(&["x"], max_deg), 1..=2),
    )
        .prop_map(|(eqs, neqs)| Conjunct {
            vars: vars(&["x"]),
            eqs,
            neqs,
        })
}

fn prime() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![2u64, 3, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Rescaling a witness by a positive exponent with p-power denominator
    /// keeps it a witness.
    #[test]
    fn rescaled_witnesses_verify(c in univariate_conjunct(3), p in prime(), a in 1u64..5, j in 0u32..3) {
        let budget = DecideBudget::default();
        if let Verdict::Yes(w) = decide_conjunct(&c, p, &budget, 0).unwrap() {
            let gap = gap_form(&c);
            let q = Q64::new(a, p.pow(j));
            let scaled = w.rescale(&gap, q).unwrap();
            prop_assert!(verify_witness(&gap, &scaled).unwrap(), "{} at {} scaled by {}", c, p, q);
        }
    }

    /// A Yes at a level the oracle can enumerate is reproduced by brute force
    /// in the local model at that level or one ramification step above.
    #[test]
    fn yes_reproduces_in_local_model(c in univariate_conjunct(2), p in prime()) {
        let budget = DecideBudget::default();
        let oracle = OracleBudget::default();
        if let Verdict::Yes(w) = decide_conjunct(&c, p, &budget, 0).unwrap() {
            let rep = replicate(&pad(&c)).as_conjunct();
            let mut fitted = false;
            let mut sat = false;
            for e in w.e()..=w.e() + 1 {
                if let Ok(model) = build_local_model(p, w.k(), e, &oracle) {
                    if let Ok(out) = brute_sat(&model.ring, &rep, &oracle) {
                        fitted = true;
                        sat |= out.sat;
                    }
                }
            }
            prop_assert!(!fitted || sat, "{} at {}: witness level k={} e={}", c, p, w.k(), w.e());
        }
    }

    /// Equations alone: the decider agrees with the algebraically closed
    /// field of characteristic p, and a Yes has a root in the named field.
    #[test]
    fn positive_fragment_agrees_with_acf(
        eqs in prop::collection::vec(poly_in(&["x", "y"], 2), 1..=2),
        p in prime(),
    ) {
        let c = Conjunct { vars: vars(&["x", "y"]), eqs, neqs: Vec::new() };
        prop_assume!(classify(&c) == Fragment::Positive);
        let v = decide_conjunct(&c, p, &DecideBudget::default(), 0).unwrap();
        let acf = acf_decide(&c, Characteristic::Prime(p)).unwrap();
        match &v {
            Verdict::Yes(w) => {
                prop_assert_eq!(acf, AcfOutcome::Sat);
                let field = make_ext_field(p, w.k()).unwrap();
                let out = brute_sat(&field, &c, &OracleBudget::default()).unwrap();
                prop_assert!(out.sat, "{} has no point in F_{}^{}", c, p, w.k());
            }
            Verdict::No(_) => prop_assert_eq!(acf, AcfOutcome::Unsat),
            Verdict::Inconclusive(_) => prop_assert_eq!(acf, AcfOutcome::Sat),
        }
    }

    /// Satisfiable at a level stays satisfiable at every refinement.
    #[test]
    fn oracle_yes_is_monotone(c in univariate_conjunct(2), p in prop::sample::select(vec![2u64, 3])) {
        let oracle = OracleBudget::default();
        let levels: Vec<(u32, u32)> = vec![(1, 0), (1, 1), (2, 0), (2, 1)];
        let sat: Vec<Option<bool>> = levels
            .iter()
            .map(|&(k, e)| {
                build_local_model(p, k, e, &oracle)
                    .ok()
                    .and_then(|m| brute_sat(&m.ring, &c, &oracle).ok())
                    .map(|o| o.sat)
            })
            .collect();
        for (i, &(k, e)) in levels.iter().enumerate() {
            for (j, &(k2, e2)) in levels.iter().enumerate() {
                if k2 % k == 0 && e <= e2 && sat[i] == Some(true) {
                    prop_assert_ne!(sat[j], Some(false), "{} at p={}: ({},{}) -> ({},{})", c, p, k, e, k2, e2);
                }
            }
        }
    }

    /// Padding with `0 = 0` and `1 != 0` changes nothing in a nonzero ring.
    #[test]
    fn padding_is_neutral(c in univariate_conjunct(2), p in prime()) {
        let oracle = OracleBudget::default();
        let f = GaloisField::prime(p).unwrap();
        let model = build_local_model(p, 1, 0, &oracle).unwrap();
        prop_assert_eq!(brute_sat(&f, &c, &oracle).unwrap().sat, brute_sat(&f, &pad(&c), &oracle).unwrap().sat);
        prop_assert_eq!(
            brute_sat(&model.ring, &c, &oracle).unwrap().sat,
            brute_sat(&model.ring, &pad(&c), &oracle).unwrap().sat
        );
    }

    /// The factorization multiplies back to the input.
    #[test]
    fn factorization_reconstructs(
        coeffs in prop::collection::vec(0u64..25, 1..9),
        pk in prop::sample::select(vec![(2u64, 1u32), (3, 1), (5, 1), (2, 2), (3, 2)]),
    ) {
        let f = make_ext_field(pk.0, pk.1).unwrap();
        let poly = upoly::trimmed(&f, coeffs.into_iter().map(|c| c % f.order()).collect());
        prop_assume!(poly.len() >= 2);
        let (unit, factors) = factor_dense(&f, &poly).unwrap();
        let mut prod = vec![unit];
        for (h, m) in &factors {
            prop_assert_eq!(h.last(), Some(&f.one()));
            prod = upoly::mul(&f, &prod, &upoly::pow(&f, h, *m as u64));
        }
        prop_assert_eq!(prod, poly);
    }

    /// Printing a parsed sentence and parsing it again is stable.
    #[test]
    fn printer_roundtrip(
        eqs in prop::collection::vec(poly_in(&["x", "y"], 3), 1..3),
        neqs in prop::collection::vec(poly_in(&["x", "y"], 3), 0..3),
        disjoin in any::<bool>(),
    ) {
        let lits: Vec<String> = eqs
            .iter()
            .map(|q| format!("{q} = 0"))
            .chain(neqs.iter().map(|q| format!("{q} != 0")))
            .collect();
        let sep = if disjoin { " | " } else { " & " };
        let s = parse(&format!("exists x, y: {}", lits.join(sep))).unwrap();
        let again = parse(&s.to_string()).unwrap();
        prop_assert_eq!(&again, &s);
        prop_assert_eq!(to_dnf(&again, 64).unwrap(), to_dnf(&s, 64).unwrap());
    }
}
