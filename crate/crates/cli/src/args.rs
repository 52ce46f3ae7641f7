use clap::{Args, Parser, Subcommand, ValueEnum};
use liouville_core::arith::parse_natural;
use liouville_core::genliouville::PrimeSet;
use liouville_core::report::{parse_rational, ser_biguint, ser_rational};
use num_bigint::BigUint;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

/// Completely multiplicative ±1 functions attached to sets of primes.
#[derive(Debug, Parser)]
#[command(name = "liouville", version)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain, global = true)]
    pub output: OutputFormat,
    /// Seed for the randomized property checks in `verify`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for sieve windows (defaults to all cores).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub workers: Option<u64>,
    /// Largest x accepted by sieve-backed operations.
    #[arg(long, global = true, env = "LAMBDA_SIEVE_BUDGET")]
    pub sieve_budget: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Json,
    Csv,
    Plain,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Ω_A(n) and λ_A(n).
    Eval(EvalArgs),
    /// L_A(x) with running extrema.
    Sum(SumArgs),
    /// The full path L_A(1), ..., L_A(x).
    Trace(SumArgs),
    /// The Dirichlet series of λ_A at real s > 1.
    Dirichlet(DirichletArgs),
    /// The mean value R_A, exact or bracketed.
    Mean(MeanArgs),
    /// Greedy primes whose product (p-1)/(p+1) decreases to alpha.
    Greedy(GreedyArgs),
    /// Density parameter κ, harmonic sums and Wirsing constants.
    Kappa(KappaArgs),
    /// L_p(n) for the character-like λ_p.
    CharlikeSum(CharlikeSumArgs),
    /// Primes p <= limit with L_p(n) >= 0 for all n.
    Classify(ClassifyArgs),
    /// max |L_p(n)| over n < p^i with attaining points.
    Lmax(LmaxArgs),
    /// Running max |L_p| at powers of ten, against log t.
    Scan(ScanArgs),
    /// Square-free z with φ(z)/σ(z) = q, or the limit sequence toward q.
    Phisigma(PhisigmaArgs),
    /// Time the digit formula against the sieve.
    Bench(BenchArgs),
    /// Run the invariant suite.
    Verify(VerifyArgs),
}

fn parse_set(s: &str) -> Result<PrimeSet, String> {
    s.parse().map_err(|e: liouville_core::Error| e.to_string())
}

fn parse_q(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_big(s: &str) -> Result<BigUint, String> {
    parse_natural(s).map_err(|e| e.to_string())
}

fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn ser_opt_rational<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(r) => ser_rational(r, s),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Args, Serialize)]
pub struct EvalArgs {
    /// Prime set, e.g. `all`, `finite:2,3`, `nonres:7`, `complement:(tail:100)`.
    #[arg(long, value_parser = parse_set)]
    #[serde(serialize_with = "ser_display")]
    pub set: PrimeSet,
    #[arg(long)]
    pub n: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct SumArgs {
    #[arg(long, value_parser = parse_set)]
    #[serde(serialize_with = "ser_display")]
    pub set: PrimeSet,
    #[arg(long)]
    pub x: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct DirichletArgs {
    #[arg(long, value_parser = parse_set)]
    #[serde(serialize_with = "ser_display")]
    pub set: PrimeSet,
    /// Real s > 1.
    #[arg(long)]
    pub s: f64,
    /// Largest prime in the Euler product (infinite sets).
    #[arg(long, default_value_t = 1_000_000)]
    pub truncation: u64,
    /// Also check the complement identity with this many series terms.
    #[arg(long)]
    pub identity_terms: Option<u64>,
}

#[derive(Debug, Args, Serialize)]
pub struct MeanArgs {
    #[arg(long, value_parser = parse_set)]
    #[serde(serialize_with = "ser_display")]
    pub set: PrimeSet,
    /// Enumerated members for bracketed (infinite, convergent) sets.
    #[arg(long, default_value_t = 50)]
    pub truncation: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct GreedyArgs {
    /// Target in (0, 1) as `a/b` or a decimal.
    #[arg(long, value_parser = parse_q)]
    #[serde(serialize_with = "ser_rational")]
    pub alpha: BigRational,
    /// Stop after this many primes.
    #[arg(long)]
    pub primes: Option<usize>,
    /// Stop once partial - alpha <= width.
    #[arg(long, value_parser = parse_q)]
    #[serde(serialize_with = "ser_opt_rational")]
    pub width: Option<BigRational>,
}

#[derive(Debug, Args, Serialize)]
pub struct KappaArgs {
    #[arg(long, value_parser = parse_set)]
    #[serde(serialize_with = "ser_display")]
    pub set: PrimeSet,
    #[arg(long, default_value_t = 10_000_000)]
    pub x: u64,
    /// Also report Σ λ_A(n)/n at powers of ten up to x.
    #[arg(long)]
    pub harmonic: bool,
    /// Also report the Wirsing constant for this κ in (0, 1].
    #[arg(long)]
    pub wirsing: Option<f64>,
    /// Prime truncation for the Wirsing product.
    #[arg(long, default_value_t = 1_000_000)]
    pub truncation: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SumMethod {
    Digit,
    Sieve,
    Both,
}

#[derive(Debug, Args, Serialize)]
pub struct CharlikeSumArgs {
    /// Odd prime.
    #[arg(long)]
    pub p: u64,
    /// n >= 0 as a decimal string of any length.
    #[arg(long, value_parser = parse_big)]
    #[serde(serialize_with = "ser_biguint")]
    pub n: BigUint,
    #[arg(long, value_enum, default_value_t = SumMethod::Digit)]
    pub method: SumMethod,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub limit: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct LmaxArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub i: u32,
    /// Confirm by direct accumulation over n < p^i.
    #[arg(long)]
    pub exhaustive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanModeArg {
    Digit,
    Sieve,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub x: u64,
    #[arg(long, value_enum, default_value_t = ScanModeArg::Digit)]
    pub mode: ScanModeArg,
}

#[derive(Debug, Args, Serialize)]
pub struct PhisigmaArgs {
    /// Target ratio in (0, 1).
    #[arg(long, value_parser = parse_q)]
    #[serde(serialize_with = "ser_rational")]
    pub q: BigRational,
    /// Largest z searched.
    #[arg(long, default_value_t = 1_000_000)]
    pub bound: u64,
    /// Instead of searching, list the first k terms of the limit sequence.
    #[arg(long)]
    pub sequence: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    /// Odd prime for L_p.
    #[arg(long, default_value_t = 7)]
    pub p: u64,
    /// Repetitions per cell (at least 5).
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    /// Comma-separated values of n.
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = [1_000u64, 1_000_000, 1_000_000_000, 1_000_000_000_000, 1_000_000_000_000_000_000]
    )]
    pub sizes: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scale {
    Small,
    Default,
    Large,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Scale::Default)]
    pub scale: Scale,
}
