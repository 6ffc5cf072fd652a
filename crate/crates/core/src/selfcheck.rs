//! Invariant suites over the algebra kernel and the reductions. Cases run
//! smallest first, so the first failure reported is a minimal one.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::arith::{divisors, euler_phi, factor_u64};
use crate::algebra::crt::Crt;
use crate::algebra::cyclotomic::{cyclotomic, reduce_dense};
use crate::algebra::factor::factor_dense;
use crate::algebra::iso::power_quotient_iso;
use crate::algebra::{make_ext_field, upoly, GaloisField, Integers, Ring, SeriesCtx, Valuation, Q64};
use crate::formula::{parse, to_dnf};
use crate::oracle::{build_local_model, format_dense, product_transfer_check, OracleBudget};

pub const SUITES: &[&str] = &[
    "iso",
    "crt",
    "modulopfinite",
    "product_transfer",
    "dnf",
    "ultrametric",
    "frobenius",
    "cyclotomic_product",
    "rescale",
];

#[derive(Clone, Debug, Default)]
pub struct SelfcheckConfig {
    pub seed: u64,
    /// Suite whose computed data is deliberately corrupted before checking.
    pub inject_fault: Option<String>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failure: Option<Value>,
    pub millis: u128,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failure.is_none()
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({"suite": self.name, "passed": self.passed, "ok": self.ok()});
        if let Some(f) = &self.failure {
            out["counterexample"] = f.clone();
        }
        out
    }
}

struct Tally {
    passed: usize,
    failure: Option<Value>,
}

impl Tally {
    fn new() -> Self {
        Tally { passed: 0, failure: None }
    }

    /// Records one case; returns false once a failure has been seen.
    fn check(&mut self, ok: bool, case: impl FnOnce() -> Value) -> bool {
        if self.failure.is_some() {
            return false;
        }
        if ok {
            self.passed += 1;
        } else {
            self.failure = Some(case());
        }
        ok
    }
}

pub fn run_suite(name: &str, cfg: &SelfcheckConfig) -> Option<SuiteReport> {
    let name = *SUITES.iter().find(|s| **s == name)?;
    let fault = cfg.inject_fault.as_deref() == Some(name);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ fxhash(name));
    let mut t = Tally::new();
    let start = Instant::now();
    match name {
        "iso" => iso(&mut t, &mut rng, fault),
        "crt" => crt(&mut t, &mut rng, fault),
        "modulopfinite" => modulopfinite(&mut t, fault),
        "product_transfer" => product_transfer(&mut t, &mut rng, fault),
        "dnf" => dnf(&mut t, &mut rng, fault),
        "ultrametric" => ultrametric(&mut t, &mut rng, fault),
        "frobenius" => frobenius(&mut t, &mut rng, fault),
        "cyclotomic_product" => cyclotomic_product(&mut t, fault),
        "rescale" => rescale(&mut t, &mut rng, fault),
        _ => unreachable!(),
    }
    Some(SuiteReport {
        name,
        passed: t.passed,
        failure: t.failure,
        millis: start.elapsed().as_millis(),
    })
}

pub fn run_all(cfg: &SelfcheckConfig) -> Vec<SuiteReport> {
    SUITES.iter().map(|s| run_suite(s, cfg).expect("known suite")).collect()
}

fn fxhash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3))
}

fn small_fields() -> Vec<GaloisField> {
    [(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (7, 1)]
        .into_iter()
        .map(|(p, k)| make_ext_field(p, k).expect("small field"))
        .collect()
}

fn corrupt(f: &GaloisField, a: &mut [u64]) {
    if let Some(c) = a.first_mut() {
        *c = f.add(c, &1);
    }
}

/// Transpose maps are inverse ring isomorphisms.
fn iso(t: &mut Tally, rng: &mut ChaCha8Rng, fault: bool) {
    for f in small_fields() {
        for (m, n) in [(1, 1), (1, 2), (2, 1), (2, 2), (3, 2), (2, 3), (4, 3)] {
            let iso = power_quotient_iso(f.clone(), m, n);
            for _ in 0..8 {
                let rand_left = |rng: &mut ChaCha8Rng| -> Vec<Vec<u64>> {
                    (0..m).map(|_| (0..n).map(|_| f.random_elem(rng)).collect()).collect()
                };
                let (a, b) = (rand_left(rng), rand_left(rng));
                let mut fa = iso.forward(&a);
                if fault {
                    corrupt(&f, &mut fa[0]);
                }
                let round = iso.backward(&fa) == a;
                let add = iso.forward(&iso.left.add(&a, &b)) == iso.right.add(&fa, &iso.forward(&b));
                let mul = iso.forward(&iso.left.mul(&a, &b)) == iso.right.mul(&fa, &iso.forward(&b));
                let one = iso.forward(&iso.left.one()) == iso.right.one();
                if !t.check(round && add && mul && one, || {
                    json!({"field": f.order(), "m": m, "n": n, "a": a, "b": b})
                }) {
                    return;
                }
            }
        }
    }
}

/// Splitting along a factorization and joining back is the identity and
/// respects products.
fn crt(t: &mut Tally, rng: &mut ChaCha8Rng, fault: bool) {
    for p in [2u64, 3, 5, 7] {
        let f = GaloisField::prime(p).unwrap();
        for n in 2..=12u64 {
            let modulus = reduce_dense(&f, &xn_minus_one(n));
            let Ok(crt) = Crt::from_factorization(&f, &modulus) else {
                // repeated factors are coprime as prime powers, so this never fails
                t.check(false, || json!({"p": p, "modulus": format_dense(&f, &modulus, "x")}));
                return;
            };
            let d = crt.ring.degree();
            for _ in 0..6 {
                let a: Vec<u64> = (0..d).map(|_| f.random_elem(rng)).collect();
                let b: Vec<u64> = (0..d).map(|_| f.random_elem(rng)).collect();
                let mut parts = crt.split(&a);
                if fault {
                    corrupt(&f, &mut parts[0]);
                }
                let round = crt.join(&parts) == crt.ring.reduce(&a);
                let prod = crt.split(&crt.ring.mul(&a, &b));
                let mul = prod
                    .iter()
                    .zip(&crt.components)
                    .zip(parts.iter().zip(crt.split(&b)))
                    .all(|((ab, c), (x, y))| *ab == c.mul(x, &y));
                if !t.check(round && mul, || {
                    json!({"p": p, "modulus": format_dense(&f, &modulus, "x"), "a": a, "b": b})
                }) {
                    return;
                }
            }
        }
    }
}

fn xn_minus_one(n: u64) -> Vec<BigInt> {
    let mut v = vec![BigInt::zero(); n as usize + 1];
    v[0] = -BigInt::one();
    v[n as usize] = BigInt::one();
    v
}

/// `Phi_{q-1}` splits mod `p` into `phi(q-1)/m` distinct irreducibles of
/// degree `m`, for `q = p^m`.
fn modulopfinite(t: &mut Tally, fault: bool) {
    let mut cases: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5] {
        let mut m = 1;
        while p.pow(m) <= 32 {
            cases.push((p, m));
            m += 1;
        }
    }
    if !cases.contains(&(2, 4)) {
        cases.push((2, 4));
    }
    cases.sort_by_key(|&(p, m)| p.pow(m));
    for (p, m) in cases {
        let q = p.pow(m);
        let f = GaloisField::prime(p).unwrap();
        let phi = reduce_dense(&f, &cyclotomic(q - 1));
        let factors = match factor_dense(&f, &phi) {
            Ok((_, fs)) => fs,
            Err(_) => Vec::new(),
        };
        let mut count = factors.len() as u64;
        if fault {
            count += 1;
        }
        let expected = euler_phi(q - 1) / m as u64;
        let ok = count == expected && factors.iter().all(|(h, e)| *e == 1 && h.len() == m as usize + 1);
        if !t.check(ok, || json!({"p": p, "m": m, "factors": count, "expected": expected})) {
            return;
        }
    }
}

fn random_poly_text(rng: &mut ChaCha8Rng, var: &str) -> String {
    let c: Vec<i32> = (0..3).map(|_| rng.gen_range(-1..=1)).collect();
    format!("{}*{var}^2 + {}*{var} + {}", c[2], c[1], c[0])
}

/// `S^r` satisfies a conjunct exactly when `S` satisfies its replication.
fn product_transfer(t: &mut Tally, rng: &mut ChaCha8Rng, fault: bool) {
    let budget = OracleBudget::default();
    let f2 = GaloisField::prime(2).unwrap();
    let f3 = GaloisField::prime(3).unwrap();
    let dual = build_local_model(2, 1, 1, &budget).unwrap().ring;
    for blocks in 1..=2 {
        for _ in 0..24 {
            let eqs: Vec<String> = (0..blocks).map(|_| format!("{} = 0", random_poly_text(rng, "x"))).collect();
            let neqs: Vec<String> = (0..blocks).map(|_| format!("{} != 0", random_poly_text(rng, "x"))).collect();
            let src = format!("exists x: {} & {}", eqs.join(" & "), neqs.join(" & "));
            let c = to_dnf(&parse(&src).unwrap(), 16).unwrap().remove(0);
            for r in [blocks, blocks + 1] {
                let checks = [
                    product_transfer_check(&f2, r, &c, &budget),
                    product_transfer_check(&f3, r, &c, &budget),
                    product_transfer_check(&dual, r, &c, &budget),
                ];
                for (ring, chk) in ["F_2", "F_3", "F_2[v]/v^2"].iter().zip(checks) {
                    let ok = match chk {
                        Ok(mut c) => {
                            if fault {
                                c.product = !c.product;
                            }
                            c.agrees()
                        }
                        // fewer padded blocks than r is the only input error
                        Err(_) => false,
                    };
                    if !t.check(ok, || json!({"ring": ring, "r": r, "conjunct": src})) {
                        return;
                    }
                }
            }
        }
    }
}

enum Tree {
    Lit(String, bool),
    And(Box<Tree>, Box<Tree>),
    Or(Box<Tree>, Box<Tree>),
    Not(Box<Tree>),
}

impl Tree {
    fn random(rng: &mut ChaCha8Rng, depth: u32) -> Tree {
        if depth == 0 || rng.gen_bool(0.3) {
            let var = if rng.gen_bool(0.5) { "x" } else { "y" };
            let poly = format!("{var} + {}", rng.gen_range(-1..=1));
            let poly = if rng.gen_bool(0.3) { format!("x*y - {}", rng.gen_range(0..=1)) } else { poly };
            return Tree::Lit(poly, rng.gen_bool(0.5));
        }
        let a = Box::new(Tree::random(rng, depth - 1));
        match rng.gen_range(0..3) {
            0 => Tree::And(a, Box::new(Tree::random(rng, depth - 1))),
            1 => Tree::Or(a, Box::new(Tree::random(rng, depth - 1))),
            _ => Tree::Not(a),
        }
    }

    fn text(&self) -> String {
        match self {
            Tree::Lit(p, eq) => format!("{p} {} 0", if *eq { "=" } else { "!=" }),
            Tree::And(a, b) => format!("({} & {})", a.text(), b.text()),
            Tree::Or(a, b) => format!("({} | {})", a.text(), b.text()),
            Tree::Not(a) => format!("!({})", a.text()),
        }
    }

    fn eval(&self, f: &GaloisField, x: u64, y: u64) -> bool {
        match self {
            Tree::Lit(p, eq) => {
                let poly = parse(&format!("exists x, y: {p} = 0")).unwrap().matrix;
                let zero = poly.eval(f, &[x, y]);
                zero == *eq
            }
            Tree::And(a, b) => a.eval(f, x, y) && b.eval(f, x, y),
            Tree::Or(a, b) => a.eval(f, x, y) || b.eval(f, x, y),
            Tree::Not(a) => !a.eval(f, x, y),
        }
    }
}

/// The disjunctive normal form agrees with the original formula, negations
/// included, at every point of a small field.
fn dnf(t: &mut Tally, rng: &mut ChaCha8Rng, fault: bool) {
    let f = GaloisField::prime(3).unwrap();
    for depth in 1..=4 {
        for _ in 0..20 {
            let tree = Tree::random(rng, depth);
            let src = format!("exists x, y: {}", tree.text());
            let s = parse(&src).unwrap();
            let Ok(mut dnf) = to_dnf(&s, 1 << 12) else {
                continue;
            };
            if fault && !dnf.is_empty() {
                dnf.remove(0);
            }
            let ok = f.elements().all(|x| {
                f.elements()
                    .all(|y| tree.eval(&f, x, y) == dnf.iter().any(|c| c.holds(&f, &[x, y])))
            });
            if !t.check(ok, || json!({"field": 3, "sentence": src})) {
                return;
            }
        }
    }
}

fn series_ctxs() -> Vec<SeriesCtx> {
    [(2, 1, 0, 2), (2, 1, 1, 1), (3, 1, 1, 2), (2, 2, 1, 1), (5, 1, 0, 4), (3, 2, 2, 1)]
        .into_iter()
        .map(|(p, k, e, cap)| SeriesCtx::new(&make_ext_field(p, k).unwrap(), e, Q64::from_integer(cap)).unwrap())
        .collect()
}

fn random_series(ctx: &SeriesCtx, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let f = ctx.field();
    let lead = rng.gen_range(0..=ctx.len());
    (0..ctx.len()).map(|i| if i < lead { 0 } else { f.random_elem(rng) }).collect()
}

fn val_add(a: Valuation, b: Valuation, cap: Q64) -> Valuation {
    match (a, b) {
        (Valuation::Finite(x), Valuation::Finite(y)) if x + y < cap => Valuation::Finite(x + y),
        _ => Valuation::AtLeastCap(cap),
    }
}

/// Valuation laws in the truncated local rings.
fn ultrametric(t: &mut Tally, rng: &mut ChaCha8Rng, fault: bool) {
    for ctx in series_ctxs() {
        for _ in 0..60 {
            let (a, b) = (random_series(&ctx, rng), random_series(&ctx, rng));
            let (va, vb) = (ctx.valuation(&a), ctx.valuation(&b));
            let mut sum = ctx.add(&a, &b);
            if fault {
                sum = ctx.add(&sum, &ctx.one());
                sum = ctx.add(&sum, &ctx.uniformizer());
            }
            let vs = ctx.valuation(&sum);
            let strict = va == vb || vs == va.min(vb);
            let prod = ctx.valuation(&ctx.mul(&a, &b)) == val_add(va, vb, ctx.cap());
            let neg = ctx.valuation(&ctx.neg(&a)) == va;
            let ok = vs >= va.min(vb) && strict && prod && neg;
            if !t.check(ok, || {
                json!({"ring": ctx_label(&ctx), "a": ctx.format(&a), "b": ctx.format(&b)})
            }) {
                return;
            }
        }
    }
}

fn ctx_label(ctx: &SeriesCtx) -> Value {
    json!({"p": ctx.p(), "k": ctx.k(), "e": ctx.e(), "length": ctx.len()})
}

/// `(a + b)^p = a^p + b^p` in every ring of characteristic `p`, and the
/// field Frobenius is the `p`-th power map with inverse the `p`-th root.
fn frobenius(t: &mut Tally, rng: &mut ChaCha8Rng, fault: bool) {
    for f in small_fields() {
        for a in f.elements() {
            let mut fr = f.frobenius(a);
            if fault {
                fr = f.add(&fr, &1);
            }
            let ok = fr == f.pow(&a, f.p()) && f.pth_root(fr) == a && f.pow(&a, f.order()) == a;
            if !t.check(ok, || json!({"field": f.order(), "a": f.format_elem(a)})) {
                return;
            }
        }
    }
    for ctx in series_ctxs() {
        let p = ctx.p();
        for _ in 0..40 {
            let (a, b) = (random_series(&ctx, rng), random_series(&ctx, rng));
            let lhs = ctx.pow(&ctx.add(&a, &b), p);
            let rhs = ctx.add(&ctx.pow(&a, p), &ctx.pow(&b, p));
            if !t.check(lhs == rhs, || json!({"ring": ctx_label(&ctx), "a": ctx.format(&a), "b": ctx.format(&b)})) {
                return;
            }
        }
    }
}

fn mobius(n: u64) -> i32 {
    let fs = factor_u64(n);
    if fs.iter().any(|&(_, e)| e > 1) {
        0
    } else if fs.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `prod_{d | n} Phi_d = x^n - 1`, `deg Phi_n = phi(n)`, and `Phi_n`
/// agrees with the Moebius product `prod (x^d - 1)^mu(n/d)`.
fn cyclotomic_product(t: &mut Tally, fault: bool) {
    let z = Integers;
    for n in 1..=30u64 {
        let mut prod = vec![BigInt::one()];
        for d in divisors(n) {
            prod = upoly::mul(&z, &prod, &cyclotomic(d));
        }
        if fault {
            prod[0] += 1;
        }
        let phi = cyclotomic(n);
        let (mut num, mut den) = (vec![BigInt::one()], vec![BigInt::one()]);
        for d in divisors(n) {
            match mobius(n / d) {
                1 => num = upoly::mul(&z, &num, &xn_minus_one(d)),
                -1 => den = upoly::mul(&z, &den, &xn_minus_one(d)),
                _ => {}
            }
        }
        let moebius = upoly::mul(&z, &phi, &den) == num;
        let ok = prod == xn_minus_one(n) && phi.len() as u64 == euler_phi(n) + 1 && moebius;
        if !t.check(ok, || json!({"n": n})) {
            return;
        }
    }
}

/// `t -> t^q` multiplies valuations by `q` and is a ring map.
fn rescale(t: &mut Tally, rng: &mut ChaCha8Rng, fault: bool) {
    for ctx in series_ctxs() {
        let p = ctx.p();
        let scales = [Q64::from_integer(1), Q64::from_integer(2), Q64::new(1, p), Q64::new(3, p), Q64::from_integer(p)];
        for q in scales {
            for _ in 0..12 {
                let (a, b) = (random_series(&ctx, rng), random_series(&ctx, rng));
                let (target, ra) = ctx.rescale(&a, q).expect("p-power denominator");
                let (_, rb) = ctx.rescale(&b, q).unwrap();
                let (_, rab) = ctx.rescale(&ctx.mul(&a, &b), q).unwrap();
                let mut va = ctx.valuation(&a).value() * q;
                if fault {
                    va += Q64::from_integer(1);
                }
                let similar = match ctx.valuation(&a) {
                    Valuation::Finite(_) => target.valuation(&ra) == Valuation::Finite(va),
                    Valuation::AtLeastCap(_) => !target.valuation(&ra).is_finite() && target.cap() == va,
                };
                let hom = target.mul(&ra, &rb) == rab;
                if !t.check(similar && hom, || {
                    json!({"ring": ctx_label(&ctx), "scale": crate::algebra::series::fmt_q(&q), "a": ctx.format(&a)})
                }) {
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes() {
        for r in run_all(&SelfcheckConfig::default()) {
            assert!(r.ok(), "{}: {:?}", r.name, r.failure);
            assert!(r.passed > 0, "{}", r.name);
        }
    }

    #[test]
    fn injected_faults_are_caught() {
        for s in SUITES {
            let cfg = SelfcheckConfig {
                seed: 7,
                inject_fault: Some(s.to_string()),
            };
            let r = run_suite(s, &cfg).unwrap();
            assert!(!r.ok(), "{s}");
        }
    }

    #[test]
    fn modulopfinite_counts() {
        let r = run_suite("modulopfinite", &SelfcheckConfig::default()).unwrap();
        // q in {2,4,8,16,32,3,9,27,5,25}
        assert_eq!(r.passed, 10);
        assert!(run_suite("nope", &SelfcheckConfig::default()).is_none());
    }
}
