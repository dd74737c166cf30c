use thiserror::Error;

/// Errors raised by the record-law evaluators, samplers and verification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {what} (got {value})")]
    Domain { what: &'static str, value: f64 },

    #[error("invalid record indices: {0}")]
    Index(String),

    #[error("invalid intensities: {0}")]
    LambdaOrder(String),

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("law `{0}` has no density")]
    NoDensity(String),

    #[error("law `{0}` is not supported here")]
    UnsupportedLaw(String),

    #[error("unknown law identifier `{0}`")]
    UnknownLaw(String),

    #[error("degenerate conditioning event: {0}")]
    Degenerate(String),

    #[error("proposal budget of {budget} exhausted with {accepted} of {target} draws accepted")]
    BudgetExceeded {
        budget: u64,
        accepted: usize,
        target: usize,
    },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("sample too small: need at least {min}, got {got}")]
    SmallSample { min: usize, got: usize },

    #[error("grid has {0} points; at most 25 are allowed")]
    GridTooLarge(usize),

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("quadrature did not converge: estimate {value}, error {error}")]
    Quadrature { value: f64, error: f64 },

    #[error("non-finite integrand at x = {0}")]
    NonFiniteIntegrand(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
