//! `abmod`: decide existential sentences modulo primes, inspect reductions,
//! run the finite-ring oracle, and run the invariant suites.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use abmod_core::algebra::arith::{is_prime, primes_up_to};
use abmod_core::decider::{decide_mod_p, DecideBudget, DecideError, DEFAULT_SEED};
use abmod_core::formula::{parse, to_dnf, Conjunct, Sentence, DEFAULT_DNF_CAP};
use abmod_core::oracle::{brute_sat, build_cyclotomic_model, build_local_model, FiniteRing, OracleBudget, OracleError};
use abmod_core::reduction::{classify, pad, replicate, to_gap};
use abmod_core::selfcheck::{run_all, run_suite, SelfcheckConfig, SUITES};
use abmod_core::transfer::{decide_all_primes, AllPrimesConfig, AllPrimesVerdict};

/// Version tag carried by every JSON document; see `docs/json-schema.md`.
const SCHEMA: &str = "abmod/1";

#[derive(Parser)]
#[command(name = "abmod", version, about = "Existential sentences modulo p over the abelian closure")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a sentence at one prime or at all primes.
    Decide(DecideArgs),
    /// Print the normal form, padding, replication and gap form.
    Reduce(ReduceArgs),
    /// Exhaustive satisfiability in the truncated local ring at one level.
    Oracle(OracleArgs),
    /// Run the invariant suites.
    Selfcheck(SelfcheckArgs),
}

#[derive(Args)]
struct Common {
    /// Sentence text, or `-` to read standard input.
    sentence: String,
    #[arg(long, default_value_t = DEFAULT_DNF_CAP)]
    dnf_cap: usize,
    /// Write the JSON document here instead of standard output.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, conflicts_with = "all_primes", required_unless_present = "all_primes")]
    prime: Option<u64>,
    #[arg(long)]
    all_primes: bool,
    #[arg(long, default_value_t = 3)]
    max_field_deg: u32,
    #[arg(long, default_value_t = 2)]
    max_ram: u32,
    #[arg(long, default_value_t = 2)]
    precision: u32,
    /// Largest prime tried when no complete procedure covers the sentence.
    #[arg(long, default_value_t = 13)]
    prime_bound: u64,
    #[arg(long, default_value_t = 1 << 14)]
    enum_cap: u64,
    #[arg(long, env = "ABMOD_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Add wall-clock time to the output (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    prime: u64,
    /// Residue field degree of the model.
    #[arg(long, visible_alias = "k", default_value_t = 1)]
    max_field_deg: u32,
    /// Ramification exponent of the model.
    #[arg(long, visible_alias = "e", default_value_t = 0)]
    max_ram: u32,
    /// Search `F_p[x]/(Phi_N)` instead of the local model.
    #[arg(long, value_name = "N", conflicts_with_all = ["max_field_deg", "max_ram"])]
    cyclotomic: Option<u64>,
    #[arg(long, default_value_t = 1 << 24)]
    enum_cap: u64,
}

#[derive(Args)]
struct SelfcheckArgs {
    /// Run only this suite.
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    suite: Option<String>,
    /// Corrupt the named suite's data to exercise the failure path.
    #[arg(long, hide = true, value_parser = clap::builder::PossibleValuesParser::new(SUITES))]
    inject_fault: Option<String>,
    #[arg(long, env = "ABMOD_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

enum Failure {
    Input(String),
    Resource(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Internal(_) => 1,
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, msg) = match self {
            Failure::Input(m) => ("input", m),
            Failure::Resource(m) => ("resource", m),
            Failure::Internal(m) => ("internal", m),
        };
        json!({"schema": SCHEMA, "error": {"kind": kind, "message": msg}})
    }
}

impl From<DecideError> for Failure {
    fn from(e: DecideError) -> Self {
        if e.is_resource() {
            Failure::Resource(e.to_string())
        } else if matches!(e, DecideError::Internal(_)) {
            Failure::Internal(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Budget { .. } => Failure::Resource(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read_sentence(text: &str) -> Result<Sentence, Failure> {
    let text = if text == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| Failure::Input(format!("reading standard input: {e}")))?;
        buf
    } else {
        text.to_string()
    };
    parse(&text).map_err(|e| Failure::Input(e.to_string()))
}

fn emit(doc: &Value, out: Option<&PathBuf>) -> Result<(), Failure> {
    let text = format!("{doc}\n");
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn decide(args: &DecideArgs) -> Result<(Value, u8), Failure> {
    let s = read_sentence(&args.common.sentence)?;
    if [args.max_field_deg, args.max_ram.max(1), args.precision].contains(&0) || args.enum_cap == 0 {
        return Err(Failure::Input("budgets must be positive".into()));
    }
    let budget = DecideBudget {
        max_field_deg: args.max_field_deg,
        max_ram: args.max_ram,
        precision: args.precision,
        enum_cap: args.enum_cap,
        seed: args.seed,
        dnf_cap: args.common.dnf_cap,
        ..DecideBudget::default()
    };
    let start = Instant::now();
    let (mut doc, code) = if args.all_primes {
        let cfg = AllPrimesConfig {
            floor: primes_up_to(13),
            prime_bound: args.prime_bound,
            budget,
        };
        let report = decide_all_primes(&s, &cfg)?;
        let contradiction = matches!(report.verdict, AllPrimesVerdict::Inconclusive { contradiction: true });
        (report.to_json(), if contradiction { 1 } else { 0 })
    } else {
        let p = args.prime.expect("clap enforces --prime or --all-primes");
        if !is_prime(p) {
            return Err(Failure::Input(format!("{p} is not prime")));
        }
        (decide_mod_p(&s, p, &budget)?.to_json(), 0)
    };
    doc["schema"] = json!(SCHEMA);
    doc["sentence"] = json!(s.to_string());
    if let Some(p) = args.prime {
        doc["p"] = json!(p);
    }
    if args.timing {
        doc["elapsed_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    Ok((doc, code))
}

fn reduce(args: &ReduceArgs) -> Result<Value, Failure> {
    let s = read_sentence(&args.common.sentence)?;
    let dnf = to_dnf(&s, args.common.dnf_cap).map_err(|e| Failure::from(DecideError::from(e)))?;
    let show = |v: &[abmod_core::algebra::IntPoly]| v.iter().map(ToString::to_string).collect::<Vec<_>>();
    let conjuncts: Vec<Value> = dnf
        .iter()
        .map(|c| {
            let padded = pad(c);
            let rep = replicate(&padded);
            let gap = to_gap(&rep);
            let flat = rep.as_conjunct();
            json!({
                "conjunct": c.to_string(),
                "fragment": classify(c).to_string(),
                "padded": {"equations": show(&padded.eqs), "inequations": show(&padded.neqs)},
                "replicated": {
                    "n": rep.n,
                    "vars": rep.vars.as_slice(),
                    "equations": show(&flat.eqs),
                    "inequations": show(&flat.neqs),
                },
                "gap": {"upper": gap.upper, "lower": gap.lower},
            })
        })
        .collect();
    Ok(json!({"schema": SCHEMA, "sentence": s.to_string(), "dnf": conjuncts}))
}

fn oracle(args: &OracleArgs) -> Result<Value, Failure> {
    let s = read_sentence(&args.common.sentence)?;
    if !is_prime(args.prime) {
        return Err(Failure::Input(format!("{} is not prime", args.prime)));
    }
    let budget = OracleBudget {
        max_assignments: args.enum_cap,
        ..OracleBudget::default()
    };
    let dnf = to_dnf(&s, args.common.dnf_cap).map_err(|e| Failure::from(DecideError::from(e)))?;
    let mut doc = match args.cyclotomic {
        Some(0) => return Err(Failure::Input("cyclotomic index must be positive".into())),
        Some(n) => {
            let model = build_cyclotomic_model(n, args.prime, &budget)?;
            let mut doc = search(&model.ring, &dnf, &budget)?;
            doc["cyclotomic"] = json!(n);
            doc["components"] = json!(model.factors.len());
            doc
        }
        None => {
            let model = build_local_model(args.prime, args.max_field_deg, args.max_ram, &budget)?;
            let mut doc = search(&model.ring, &dnf, &budget)?;
            doc["k"] = json!(model.k);
            doc["e"] = json!(model.e);
            doc
        }
    };
    doc["schema"] = json!(SCHEMA);
    doc["sentence"] = json!(s.to_string());
    doc["p"] = json!(args.prime);
    Ok(doc)
}

fn search<R: FiniteRing>(ring: &R, dnf: &[Conjunct], budget: &OracleBudget) -> Result<Value, Failure> {
    let mut rows = Vec::new();
    let mut sat = false;
    for c in dnf {
        let out = brute_sat(ring, c, budget)?;
        sat |= out.sat;
        let mut row = json!({"conjunct": c.to_string(), "sat": out.sat, "assignments": out.assignments});
        if let Some(w) = out.witness {
            let assignment: serde_json::Map<String, Value> = c
                .vars
                .iter()
                .zip(&w)
                .map(|(v, a)| (v.clone(), json!(ring.format_elem(a))))
                .collect();
            row["witness"] = Value::Object(assignment);
        }
        rows.push(row);
    }
    Ok(json!({"model": ring.describe(), "sat": sat, "conjuncts": rows}))
}

fn selfcheck(args: &SelfcheckArgs) -> (Value, u8) {
    let cfg = SelfcheckConfig {
        seed: args.seed,
        inject_fault: args.inject_fault.clone(),
    };
    let reports = match &args.suite {
        Some(name) => vec![run_suite(name, &cfg).expect("clap restricts suite names")],
        None => run_all(&cfg),
    };
    for r in &reports {
        eprintln!("{:<20} {:>6} passed  {}", r.name, r.passed, if r.ok() { "ok" } else { "FAILED" });
    }
    let ok = reports.iter().all(|r| r.ok());
    let doc = json!({
        "schema": SCHEMA,
        "ok": ok,
        "suites": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>(),
    });
    (doc, if ok { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, out) = match &cli.command {
        Command::Decide(a) => (decide(a), a.common.json_out.as_ref()),
        Command::Reduce(a) => (reduce(a).map(|d| (d, 0)), a.common.json_out.as_ref()),
        Command::Oracle(a) => (oracle(a).map(|d| (d, 0)), a.common.json_out.as_ref()),
        Command::Selfcheck(a) => (Ok(selfcheck(a)), a.json_out.as_ref()),
    };
    let (doc, code) = match result {
        Ok(r) => r,
        Err(f) => {
            let msg = match &f {
                Failure::Input(m) | Failure::Resource(m) | Failure::Internal(m) => m.clone(),
            };
            eprintln!("abmod: {msg}");
            (f.to_json(), f.code())
        }
    };
    match emit(&doc, out) {
        Ok(()) => ExitCode::from(code),
        Err(f) => {
            eprintln!("abmod: cannot write output");
            ExitCode::from(f.code())
        }
    }
}
