//! Thin command-line front end over the eisenstein library: classification,
//! density enclosures, Monte Carlo simulation, and the oracle verification
//! suites, with machine-readable output.
//!
//! Results go to stdout (JSON by default), diagnostics to stderr. Exit codes:
//! 0 success, 1 verification failure / incomplete classification under
//! `--strict` / computational refusal, 2 usage error.

use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::json;

use eisenstein::factor::DEFAULT_TRIAL_BOUND;
use eisenstein::oracle::{
    brute_force_classify, enumerate_local_classes, verify_affine_lemmas,
    verify_coset_disjointness, DEFAULT_ENUMERATION_CAP,
};
use eisenstein::sim::{sample_poly, trial_stream};
use eisenstein::{
    classify, density, expected_count, local_measure, render_table, run_experiment,
    Classification, Error, FactorBudget, IntPoly, Kind, SimConfig, TableFormat, DEFAULT_SEED,
};

#[derive(Parser)]
#[command(
    name = "eisenstein",
    version,
    about = "Eisenstein / shifted / affine classification, exact densities, and seeded simulations",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one polynomial with explicit witnesses
    Classify(ClassifyArgs),
    /// Certified density enclosure for one class and degree
    Density(DensityArgs),
    /// Seeded Monte Carlo experiment against the exact expectations
    Simulate(SimulateArgs),
    /// Exhaustive / randomized oracle suites re-verifying the core lemmas
    Verify(VerifyArgs),
}

#[derive(Args)]
struct BudgetArgs {
    /// Trial division bound for witness-prime extraction
    #[arg(long, env = "EISENSTEIN_TRIAL_BOUND", default_value_t = DEFAULT_TRIAL_BOUND)]
    trial_bound: u64,
    /// Pollard rho iterations per restart (0 disables rho)
    #[arg(long, env = "EISENSTEIN_RHO_ITERATION_CAP", default_value_t = 4_000_000)]
    rho_iteration_cap: u64,
    /// Pollard rho restarts before giving up
    #[arg(long, env = "EISENSTEIN_RHO_RESTARTS", default_value_t = 6)]
    rho_restarts: u32,
}

impl BudgetArgs {
    fn budget(&self) -> FactorBudget {
        FactorBudget {
            trial_bound: self.trial_bound,
            rho_iteration_cap: self.rho_iteration_cap,
            rho_restarts: self.rho_restarts,
        }
    }
}

#[derive(Args)]
struct ClassifyArgs {
    /// Ascending coefficient list a_0,a_1,...,a_n (constant term first)
    #[arg(long, allow_hyphen_values = true)]
    coeffs: String,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Exit 1 when the classification is budget-limited (complete = false)
    #[arg(long)]
    strict: bool,
    /// Output format: json or text
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct DensityArgs {
    /// Class: plain, shifted, or affine
    #[arg(long, value_parser = parse_kind)]
    kind: Kind,
    /// Degree (n >= 2)
    #[arg(long)]
    n: usize,
    /// Guaranteed enclosure width
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Args)]
struct SimulateArgs {
    /// Degree of every sampled polynomial
    #[arg(long, default_value_t = 3)]
    n: usize,
    /// Height bound B; coefficients are uniform on [-B, B-1]
    #[arg(long, default_value_t = 1_000_000)]
    height: u64,
    /// Number of polynomials to sample
    #[arg(long, default_value_t = 20_000)]
    trials: u64,
    /// Root seed for the per-trial substreams
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Worker threads (0 = default pool)
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[command(flatten)]
    budget: BudgetArgs,
    /// Output format: json, csv, or text
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite: local, disjoint, affine, detector, or all
    #[arg(long, default_value = "all")]
    suite: String,
    /// Largest prime in the verification grid
    #[arg(long, default_value_t = 3)]
    pmax: u64,
    /// Largest degree in the verification grid
    #[arg(long, default_value_t = 4)]
    nmax: usize,
    /// Sampled pairs for the affine lemma suite when exhaustion is too big
    #[arg(long)]
    samples: Option<u64>,
    /// Enumeration cap for the census suites
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
    /// Random polynomials per degree for the detector suite
    #[arg(long, default_value_t = 200)]
    trials: u64,
}

fn parse_kind(s: &str) -> Result<Kind, Error> {
    Kind::from_str(s)
}

/// Comma-separated ascending coefficients -> canonical polynomial.
fn parse_poly_arg(text: &str) -> Result<IntPoly, Error> {
    let coeffs: Result<Vec<BigInt>, Error> = text
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            BigInt::from_str(tok)
                .map_err(|_| Error::InvalidPolyArg(format!("'{}' is not an integer", tok)))
        })
        .collect();
    let coeffs = coeffs?;
    if coeffs.is_empty() {
        return Err(Error::InvalidPolyArg("empty coefficient list".into()));
    }
    let f = IntPoly::new(coeffs);
    if f.is_zero() {
        return Err(Error::InvalidPolyArg("zero polynomial".into()));
    }
    Ok(f)
}

fn classification_json(c: &Classification) -> serde_json::Value {
    json!({
        "degree": c.degree,
        "discriminant": c.discriminant.to_string(),
        "eisenstein_primes": c.eisenstein_primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "shifted_witnesses": c.shifted_witnesses.iter()
            .map(|(p, i)| (p.to_string(), json!(i.to_string())))
            .collect::<serde_json::Map<_, _>>(),
        "affine_witnesses": c.affine_witnesses.iter()
            .map(|(p, rep)| (p.to_string(), json!(rep.to_string())))
            .collect::<serde_json::Map<_, _>>(),
        "complete": c.complete,
    })
}

fn classification_text(f: &IntPoly, c: &Classification) -> String {
    let mut out = String::new();
    out.push_str(&format!("f = {}\n", f));
    out.push_str(&format!("degree        {}\n", c.degree));
    out.push_str(&format!("discriminant  {}\n", c.discriminant));
    if c.discriminant.is_zero() {
        out.push_str("repeated factor: reducible, no witnesses at any prime\n");
        return out;
    }
    let eis: Vec<String> = c.eisenstein_primes.iter().map(|p| p.to_string()).collect();
    out.push_str(&format!(
        "eisenstein    {}\n",
        if eis.is_empty() { "-".into() } else { eis.join(", ") }
    ));
    for (p, i) in &c.shifted_witnesses {
        out.push_str(&format!("shifted       p = {}: shift {}\n", p, i));
    }
    for (p, rep) in &c.affine_witnesses {
        out.push_str(&format!("affine        p = {}: {}\n", p, rep));
    }
    out.push_str(&format!("complete      {}\n", c.complete));
    out
}

fn run_classify(args: &ClassifyArgs) -> Result<ExitCode, Error> {
    let f = parse_poly_arg(&args.coeffs)?;
    let c = classify(&f, &args.budget.budget())?;
    match args.format.as_str() {
        "json" => println!(
            "{}",
            serde_json::to_string_pretty(&classification_json(&c)).expect("static shape")
        ),
        "text" => print!("{}", classification_text(&f, &c)),
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown format '{}' (expected json or text)",
                other
            )))
        }
    }
    if args.strict && !c.complete {
        eprintln!("classification incomplete: factoring budget exhausted");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn run_density(args: &DensityArgs) -> Result<ExitCode, Error> {
    let enclosure = density(args.kind, args.n, args.tol)?;
    let expected = expected_count(args.kind, args.n, 20_000)?;
    let value = json!({
        "kind": args.kind.as_str(),
        "n": args.n,
        "lo": enclosure.lo_f64(),
        "hi": enclosure.hi_f64(),
        "expected_count_20000": expected,
    });
    println!("{}", serde_json::to_string_pretty(&value).expect("static shape"));
    Ok(ExitCode::SUCCESS)
}

fn run_simulate(args: &SimulateArgs) -> Result<ExitCode, Error> {
    let format = TableFormat::from_str(&args.format)?;
    let config = SimConfig {
        n: args.n,
        bound: args.height,
        trials: args.trials,
        seed: args.seed,
        budget: args.budget.budget(),
        workers: args.workers,
    };
    let result = run_experiment(&config)?;
    print!("{}", render_table(&result, format));
    if result.unknowns > 0 {
        eprintln!(
            "{} budget-limited classification(s); counts are lower bounds",
            result.unknowns
        );
    }
    Ok(ExitCode::SUCCESS)
}

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

fn grid(pmax: u64, nmax: usize) -> Vec<(u64, usize)> {
    let mut out = Vec::new();
    for p in eisenstein::factor::primes_up_to(pmax) {
        for n in 2..=nmax {
            out.push((p, n));
        }
    }
    out
}

fn census_checks(pmax: u64, nmax: usize, cap: u64, checks: &mut Vec<Check>) -> Result<(), Error> {
    for (p, n) in grid(pmax, nmax) {
        let census = enumerate_local_classes(p, n, cap)?;
        let mut passed = true;
        let mut detail = format!(
            "windows {}, plain {}, shifted {}, affine {}",
            census.total, census.plain_count, census.shifted_count, census.affine_count
        );
        for kind in Kind::ALL {
            if census.measure(kind) != local_measure(kind, p, n)? {
                passed = false;
                detail = format!("census {} ratio != closed-form local measure", kind);
            }
        }
        checks.push(Check {
            name: format!("local census vs measure (p={}, n={})", p, n),
            passed,
            detail,
        });
    }
    Ok(())
}

fn disjoint_checks(pmax: u64, nmax: usize, cap: u64, checks: &mut Vec<Check>) -> Result<(), Error> {
    for (p, n) in grid(pmax, nmax) {
        let ok = verify_coset_disjointness(p, n, cap)?;
        checks.push(Check {
            name: format!("coset disjointness (p={}, n={})", p, n),
            passed: ok,
            detail: if ok {
                "shift and reciprocal windows never overlap".into()
            } else {
                "overlapping coset memberships found".into()
            },
        });
    }
    Ok(())
}

fn affine_checks(
    pmax: u64,
    nmax: usize,
    samples: Option<u64>,
    checks: &mut Vec<Check>,
) -> Result<(), Error> {
    for (p, n) in grid(pmax.min(5), nmax.min(5)) {
        let report = verify_affine_lemmas(p, n, samples)?;
        checks.push(Check {
            name: format!("affine coset lemmas (p={}, n={})", p, n),
            passed: report.passed,
            detail: match &report.counterexample {
                None => format!("{} (window, matrix) pairs checked", report.pairs_checked),
                Some(cx) => format!("counterexample: {:?}", cx),
            },
        });
    }
    Ok(())
}

fn detector_checks(nmax: usize, trials: u64, checks: &mut Vec<Check>) -> Result<(), Error> {
    let budget = FactorBudget::default();
    for n in 2..=nmax.min(4) {
        let mut mismatches = 0u64;
        let mut first = String::new();
        for trial in 0..trials {
            let mut rng = trial_stream(DEFAULT_SEED ^ 0xD1FF, trial);
            let f = sample_poly(&mut rng, n, 10);
            let fast = classify(&f, &budget)?;
            let slow = brute_force_classify(&f)?;
            if fast != slow {
                mismatches += 1;
                if first.is_empty() {
                    first = format!("first mismatch at f = {}", f);
                }
            }
        }
        checks.push(Check {
            name: format!("detector vs brute force (n={}, {} samples)", n, trials),
            passed: mismatches == 0,
            detail: if mismatches == 0 {
                "classifications agree exactly".into()
            } else {
                format!("{} mismatches; {}", mismatches, first)
            },
        });
    }
    Ok(())
}

fn run_verify(args: &VerifyArgs) -> Result<ExitCode, Error> {
    let mut checks = Vec::new();
    match args.suite.as_str() {
        "local" => census_checks(args.pmax, args.nmax, args.cap, &mut checks)?,
        "disjoint" => disjoint_checks(args.pmax, args.nmax, args.cap, &mut checks)?,
        "affine" => affine_checks(args.pmax, args.nmax, args.samples, &mut checks)?,
        "detector" => detector_checks(args.nmax, args.trials, &mut checks)?,
        "all" => {
            census_checks(args.pmax, args.nmax, args.cap, &mut checks)?;
            disjoint_checks(args.pmax, args.nmax, args.cap, &mut checks)?;
            affine_checks(args.pmax, args.nmax, args.samples, &mut checks)?;
            detector_checks(args.nmax, args.trials, &mut checks)?;
        }
        other => {
            return Err(Error::InvalidConfig(format!(
                "unknown suite '{}' (expected local, disjoint, affine, detector, or all)",
                other
            )))
        }
    }
    let all_passed = checks.iter().all(|c| c.passed);
    let value = json!({
        "suite": args.suite,
        "passed": all_passed,
        "checks": checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
    });
    println!("{}", serde_json::to_string_pretty(&value).expect("static shape"));
    if all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verification failure: see the checks array");
        Ok(ExitCode::from(1))
    }
}

/// Usage-shaped errors exit 2, computational refusals exit 1.
fn exit_code_for(err: &Error) -> ExitCode {
    match err {
        Error::InvalidPolyArg(_)
        | Error::InvalidConfig(_)
        | Error::InvalidTolerance(_)
        | Error::NotPrime(_)
        | Error::DegreeTooSmall { .. }
        | Error::ZeroPolynomial
        | Error::ZeroInput => ExitCode::from(2),
        _ => ExitCode::from(1),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Classify(args) => run_classify(args),
        Command::Density(args) => run_density(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Verify(args) => run_verify(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err);
            exit_code_for(&err)
        }
    }
}
