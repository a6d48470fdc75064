//! `wieferich`: Wieferich places, cyclotomic decompositions and censuses from
//! the command line.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a verification check
//! reported violations, 3 a factorization ran out of budget while
//! `--require-complete` was set.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use output::{Format, Output};
use wieferich_core::arith::primes_up_to;
use wieferich_core::ideals::primes_above;
use wieferich_core::residue::ensure_unit_mod;
use wieferich_core::verify::{self, BoundCheckReport};
use wieferich_core::wieferich::{
    census, order_consistency_check, CensusConfig, CensusStrategy, CyclotomicFactors, PlaceReport, WieferichError,
};
use wieferich_core::{BaseClass, FactorBudget, FieldSpec, QuadInt};

const CENSUS_COLUMNS: &[&str] = &["p", "kind", "t", "norm", "level", "residue_class"];
const PLACE_COLUMNS: &[&str] = &["p", "kind", "t", "norm", "order", "wieferich"];
const ELEMENT_COLUMNS: &[&str] = &["d", "x", "y", "norm"];

#[derive(Parser)]
#[command(name = "wieferich", version, about = "Wieferich places in imaginary quadratic rings of integers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe Q(√−d) (or Q for d = 0) and its integral basis
    Field {
        #[arg(short, long)]
        d: u64,
    },
    /// Classify the primes above p ≤ --p-max as Wieferich or not for base a
    Classify {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 100)]
        p_max: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Split (a^n − 1) into squarefree and powerful parts
    Decompose {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(short, long)]
        n: u64,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        require_complete: bool,
    },
    /// Non-Wieferich places with Nm ≡ 1 (mod k) from the C′ levels
    Census {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(short, long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 40)]
        n_max: u64,
        /// Drop places of norm above this bound
        #[arg(long)]
        x_max: Option<BigInt>,
        #[arg(long, value_enum, default_value_t = Strategy::CprimeLevels)]
        strategy: Strategy,
        #[command(flatten)]
        budget: BudgetArgs,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long)]
        require_complete: bool,
    },
    /// Run the exact bound, coprimality and order checks for base a
    Verify {
        #[command(flatten)]
        base: BaseArgs,
        #[arg(long, default_value_t = 40)]
        n_max: u64,
        /// Rational b ≥ 2 for the sandwich check (repeatable), e.g. 7/2
        #[arg(long = "b")]
        b: Vec<BigRational>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        require_complete: bool,
    },
    /// Elements of norm at most 3 in Q(√−d) for squarefree d ≤ --d-max
    Exceptions {
        #[arg(long, default_value_t = 12)]
        d_max: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// abc quality of α + β = ζ, ζ a root of unity
    Quality {
        #[arg(short, long, default_value_t = 1)]
        d: u64,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[command(flatten)]
        budget: BudgetArgs,
    },
}

#[derive(Args)]
struct BaseArgs {
    /// Squarefree d ≥ 1 for Q(√−d); 0 for rational mode
    #[arg(short, long, default_value_t = 1)]
    d: u64,
    /// Base as integral-basis coordinates "x,y"
    #[arg(short, long, allow_hyphen_values = true)]
    a: String,
}

impl BaseArgs {
    fn parse(&self) -> Result<QuadInt> {
        let field = FieldSpec::new(self.d)?;
        QuadInt::parse(field, &self.a).with_context(|| format!("bad base {:?}", self.a))
    }
}

#[derive(Args)]
struct BudgetArgs {
    #[arg(long, env = "WIEFERICH_TRIAL_LIMIT", default_value_t = 1_000_000)]
    trial_limit: u64,
    #[arg(long, env = "WIEFERICH_RHO_ITERATIONS", default_value_t = 1_000_000)]
    rho_iterations: u64,
}

impl BudgetArgs {
    fn budget(&self) -> Result<FactorBudget> {
        FactorBudget::new(self.trial_limit, self.rho_iterations)
            .ok_or_else(|| anyhow!("factoring budget must be positive"))
    }
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    CprimeLevels,
    PrimeLevels,
}

/// Failure classes that map onto distinct exit codes.
#[derive(Debug)]
enum Outcome {
    Ok,
    Violations,
    Incomplete,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Violations) => ExitCode::from(2),
        Ok(Outcome::Incomplete) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Field { d } => {
            let field = FieldSpec::new(d)?;
            println!("{}", serde_json::to_string(&field.describe())?);
            Ok(Outcome::Ok)
        }
        Command::Classify { base, p_max, budget, out } => classify(&base.parse()?, p_max, budget.budget()?, &out),
        Command::Decompose { base, n, budget, output, require_complete } => {
            let a = base.parse()?;
            let mut cache = CyclotomicFactors::new(&a, budget.budget()?)?;
            let cd = cache.decompose(n)?;
            let mut w = Output::open(Format::Json, output.as_deref(), &[])?;
            w.record(&cd)?;
            w.finish()?;
            Ok(if require_complete && !cd.complete { Outcome::Incomplete } else { Outcome::Ok })
        }
        Command::Census { base, k, n_max, x_max, strategy, budget, out, require_complete } => {
            if n_max == 0 {
                bail!("--n-max must be at least 1");
            }
            let a = base.parse()?;
            let mut cfg = CensusConfig::new(a, k, n_max, budget.budget()?);
            cfg.x_max = x_max;
            cfg.strategy = match strategy {
                Strategy::CprimeLevels => CensusStrategy::CprimeLevels,
                Strategy::PrimeLevels => CensusStrategy::PrimeLevels,
            };
            let result = census(&cfg).map_err(census_error)?;
            let mut w = Output::open(out.format, out.output.as_deref(), CENSUS_COLUMNS)?;
            for r in &result.records {
                w.record(r)?;
            }
            w.summary(&result.summary)?;
            w.finish()?;
            let skipped = !result.summary.skipped_levels.is_empty();
            Ok(if require_complete && skipped { Outcome::Incomplete } else { Outcome::Ok })
        }
        Command::Verify { base, n_max, b, budget, output, require_complete } => {
            verify_all(&base.parse()?, n_max, &b, budget.budget()?, output, require_complete)
        }
        Command::Exceptions { d_max, out } => {
            let set = verify::exception_set(&verify::squarefree_up_to(d_max))?;
            let mut w = Output::open(out.format, out.output.as_deref(), ELEMENT_COLUMNS)?;
            for a in &set.union {
                w.record(&ElementRow::from(a))?;
            }
            #[derive(Serialize)]
            struct Summary {
                d_max: u64,
                count: usize,
                per_field: Vec<(u64, usize)>,
            }
            let per_field = set.fields.iter().map(|f| (f.d, f.elements.len())).collect();
            w.summary(&Summary { d_max, count: set.len(), per_field })?;
            w.finish()?;
            Ok(Outcome::Ok)
        }
        Command::Quality { d, alpha, beta, budget } => {
            let field = FieldSpec::new(d)?;
            let alpha = QuadInt::parse(field, &alpha).context("bad --alpha")?;
            let beta = QuadInt::parse(field, &beta).context("bad --beta")?;
            let q = verify::abc_quality(&alpha, &beta, budget.budget()?)?;
            println!("{}", serde_json::to_string(&q)?);
            Ok(Outcome::Ok)
        }
    }
}

fn census_error(e: WieferichError) -> anyhow::Error {
    match &e {
        WieferichError::IneligibleBase { base, .. } => {
            anyhow!("{e}\nrun `wieferich exceptions` to list the exception set; {base} is in it")
        }
        _ => e.into(),
    }
}

#[derive(Serialize)]
struct ElementRow {
    #[serde(flatten)]
    element: QuadInt,
    #[serde(with = "wieferich_core::json::bigint")]
    norm: BigInt,
}

impl From<&QuadInt> for ElementRow {
    fn from(a: &QuadInt) -> Self {
        ElementRow { element: a.clone(), norm: a.norm() }
    }
}

fn classify(a: &QuadInt, p_max: u64, budget: FactorBudget, out: &OutputArgs) -> Result<Outcome> {
    let mut w = Output::open(out.format, out.output.as_deref(), PLACE_COLUMNS)?;
    let mut wieferich = Vec::new();
    let mut skipped = Vec::new();
    for p in primes_up_to(p_max) {
        for prime in primes_above(&BigInt::from(p), a.field())? {
            if ensure_unit_mod(a, &prime).is_err() {
                skipped.push(prime.record(1));
                continue;
            }
            let report = PlaceReport::classify(&prime, a, budget)?;
            if report.wieferich {
                wieferich.push(prime.record(1));
            }
            w.record(&report)?;
        }
    }
    #[derive(Serialize)]
    struct Summary {
        base: QuadInt,
        class: BaseClass,
        p_max: u64,
        wieferich: Vec<wieferich_core::ideals::PrimeRecord>,
        containing_base: Vec<wieferich_core::ideals::PrimeRecord>,
    }
    w.summary(&Summary { base: a.clone(), class: a.classify_base(), p_max, wieferich, containing_base: skipped })?;
    w.finish()?;
    Ok(Outcome::Ok)
}

fn verify_all(
    a: &QuadInt,
    n_max: u64,
    bs: &[BigRational],
    budget: FactorBudget,
    output: Option<PathBuf>,
    require_complete: bool,
) -> Result<Outcome> {
    let mut w = Output::open(Format::Json, output.as_deref(), &[])?;
    let mut violations = 0usize;
    let mut incomplete = false;
    let mut emit = |w: &mut Output, r: BoundCheckReport| -> Result<()> {
        violations += r.violations.len();
        incomplete |= !r.skipped.is_empty() && r.check == "chen-pairwise";
        w.record(&r)
    };
    emit(&mut w, verify::check_upper_norm_bound(a, n_max)?)?;
    if a.classify_base() == BaseClass::Eligible {
        emit(&mut w, verify::check_lower_phi_bound(a, n_max)?)?;
    } else {
        log::warn!("base {a} is not eligible; lower cyclotomic bound not checked");
    }
    for b in bs {
        emit(&mut w, verify::check_sandwich(b, n_max)?)?;
    }
    emit(&mut w, verify::check_chen_pairwise(a, n_max, budget)?)?;

    let mut order_violations = 0;
    for n in 1..=n_max {
        let r = order_consistency_check(n, a, budget)?;
        order_violations += r.violations.len();
        incomplete |= !r.complete || !r.order_unavailable.is_empty();
        w.record(&r)?;
    }
    let trend = verify::bound_trend_report(a, n_max, budget)?;
    incomplete |= !trend.skipped.is_empty();
    let trend_violations = trend.violations.len();
    w.record(&trend)?;
    let total = violations + order_violations + trend_violations;

    #[derive(Serialize)]
    struct Summary {
        violations: usize,
        incomplete: bool,
    }
    w.summary(&Summary { violations: total, incomplete })?;
    w.finish()?;
    Ok(if total > 0 {
        Outcome::Violations
    } else if require_complete && incomplete {
        Outcome::Incomplete
    } else {
        Outcome::Ok
    })
}
