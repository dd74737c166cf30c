use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

const NEGATIVE_HELP: &str = "Negative numbers: write `--x=-1,-0.5` or quote with a leading space, `--x \" -1,-0.5\"`.";

#[derive(Debug, Parser)]
#[command(
    name = "records",
    version,
    about = "Laws of record values at prescribed indices: evaluation, simulation and verification",
    after_help = NEGATIVE_HELP
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a distribution function, density or helper
    Eval(EvalArgs),
    /// Draw samples and compare their empirical cdf with the closed form
    Simulate(SimulateArgs),
    /// Kullback-Leibler divergences between record densities
    Kl(KlArgs),
    /// Run the verification experiments
    Verify(VerifyArgs),
    /// Deviation of the normalised finite law from its limit as n grows
    Converge(ConvergeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalOp {
    /// Joint cdf in any dimension
    Cdf,
    SingleCdf,
    SinglePdf,
    PairCdf,
    /// Density of the earlier record of a pair
    PairPdf,
    TripleCdf,
    /// Marginal cdfs of a pair at --x
    Marginals,
    /// Probability that every index is a record, and the block ordering probability
    EventProbability,
    /// Limiting pair moments
    Moments,
    /// Limiting triple covariance matrix
    TripleCov,
    /// P(late <= y | early > u) in the limit
    Exceedance,
    /// Joint cdf of the increments between consecutive limiting records
    IncrementsCdf,
    /// P(early <= x, late - early <= y) in the limit
    IncrementJoint,
    /// Closed-form divergences for --indices j,k
    Kl,
    Quantile,
    Norming,
    Digamma,
    /// Limiting Kolmogorov distribution function
    Kolmogorov,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Finite indices (--indices)
    Finite,
    /// Limit laws (--lambdas)
    Limit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
#[command(after_help = NEGATIVE_HELP)]
pub struct EvalArgs {
    #[arg(value_enum)]
    pub op: EvalOp,
    #[arg(long, value_enum, default_value_t = Family::Finite)]
    pub law_family: Family,
    /// negexp, stdexp, uniform or gev:<alpha>
    #[arg(long, default_value = "negexp")]
    pub law: String,
    /// Strictly increasing positive indices, e.g. 2,5
    #[arg(long)]
    pub indices: Option<String>,
    /// Strictly increasing positive intensities, e.g. 1,2
    #[arg(long)]
    pub lambdas: Option<String>,
    /// Evaluation point(s), comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Second argument(s), comma separated
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    /// Exceedance threshold
    #[arg(long, allow_hyphen_values = true)]
    pub u: Option<f64>,
    /// Probability level
    #[arg(long)]
    pub q: Option<f64>,
    /// Sample size for norming constants
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long, value_enum, default_value_t = EvalFormat::Text)]
    pub format: EvalFormat,
}

#[derive(Debug, Args)]
#[command(after_help = NEGATIVE_HELP)]
pub struct SimulateArgs {
    /// bruteforce, exact, chain, or any verification experiment name
    #[arg(long, default_value = "exact")]
    pub experiment: String,
    #[arg(long)]
    pub law: Option<String>,
    #[arg(long)]
    pub indices: Option<String>,
    #[arg(long)]
    pub lambdas: Option<String>,
    /// Accepted draws
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub workers: Option<usize>,
    /// Points separated by `;`, coordinates by `,`; at most 25 points
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Proposal budget for rejection samplers
    #[arg(long)]
    pub budget: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct KlArgs {
    #[arg(long)]
    pub j: Option<u32>,
    #[arg(long)]
    pub k: Option<u32>,
    /// Alternative to --j/--k
    #[arg(long)]
    pub indices: Option<String>,
    /// Law used for the quadrature cross-check
    #[arg(long, default_value = "negexp")]
    pub law: String,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "fast")]
    pub suite: String,
    /// Run only these experiments (repeatable); overrides --suite
    #[arg(long)]
    pub experiment: Vec<String>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
#[command(after_help = NEGATIVE_HELP)]
pub struct ConvergeArgs {
    #[arg(long, default_value = "stdexp")]
    pub law: String,
    #[arg(long, default_value = "0.2,0.6")]
    pub lambdas: String,
    #[arg(long, default_value = "25,50,100,200")]
    pub n_list: String,
    /// Points `y1,y2` separated by `;`; defaults to a 5x5 grid
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}
