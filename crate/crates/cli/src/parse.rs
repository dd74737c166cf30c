use std::fmt;

use records_core::{BuiltinLaw, Error, LambdaVector, RecordIndexSet};

/// Failure of a subcommand, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad arguments; exit 2.
    Usage(String),
    /// Computation or I/O failed; exit 1.
    Runtime(String),
    /// Ran to completion but some check failed; exit 1.
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) | CliError::ChecksFailed(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
            CliError::ChecksFailed(n) => write!(f, "{n} report(s) failed"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Domain { .. }
            | Error::Index(_)
            | Error::LambdaOrder(_)
            | Error::Dimension(_)
            | Error::NoDensity(_)
            | Error::UnsupportedLaw(_)
            | Error::UnknownLaw(_)
            | Error::Empty(_)
            | Error::SmallSample { .. }
            | Error::GridTooLarge(_)
            | Error::UnknownExperiment(_)
            | Error::Config(_) => CliError::Usage(e.to_string()),
            Error::Degenerate(_)
            | Error::BudgetExceeded { .. }
            | Error::Quadrature { .. }
            | Error::NonFiniteIntegrand(_) => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn numbers(flag: &str, raw: &str) -> CliResult<Vec<f64>> {
    let out: Vec<f64> = raw
        .split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--{flag}: `{t}` is not a number")))
        })
        .collect::<CliResult<_>>()?;
    if out.iter().any(|x| x.is_nan()) {
        return Err(CliError::Usage(format!("--{flag}: NaN is not allowed")));
    }
    Ok(out)
}

pub fn required<'a>(flag: &str, v: &'a Option<String>) -> CliResult<&'a str> {
    v.as_deref()
        .ok_or_else(|| CliError::Usage(format!("--{flag} is required here")))
}

pub fn law(raw: &str) -> CliResult<BuiltinLaw> {
    Ok(raw.trim().parse::<BuiltinLaw>()?)
}

pub fn index_list(raw: &str) -> CliResult<Vec<u32>> {
    raw.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u32>()
                .map_err(|_| CliError::Usage(format!("--indices: `{t}` is not a positive integer")))
        })
        .collect()
}

pub fn indices(raw: &str) -> CliResult<RecordIndexSet> {
    Ok(RecordIndexSet::new(index_list(raw)?)?)
}

pub fn lambdas(raw: &str) -> CliResult<LambdaVector> {
    Ok(LambdaVector::new(numbers("lambdas", raw)?)?)
}

pub fn counts(flag: &str, raw: &str) -> CliResult<Vec<u64>> {
    raw.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u64>()
                .map_err(|_| CliError::Usage(format!("--{flag}: `{t}` is not a count")))
        })
        .collect()
}

/// `a,b;c,d` into points, all of dimension `dim`.
pub fn grid(raw: &str, dim: usize) -> CliResult<Vec<Vec<f64>>> {
    let points: Vec<Vec<f64>> = raw
        .split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| numbers("grid", p))
        .collect::<CliResult<_>>()?;
    if points.is_empty() {
        return Err(CliError::Usage("--grid has no points".into()));
    }
    if let Some(p) = points.iter().find(|p| p.len() != dim) {
        return Err(CliError::Usage(format!(
            "--grid point {p:?} has {} coordinates, expected {dim}",
            p.len()
        )));
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_space_and_negatives() {
        assert_eq!(numbers("x", " -1,-0.5").unwrap(), vec![-1.0, -0.5]);
        assert!(numbers("x", "1,,2").is_err());
        assert!(numbers("x", "nan").is_err());
    }

    #[test]
    fn grids() {
        let g = grid("-1,-0.5; -0.2,0;", 2).unwrap();
        assert_eq!(g, vec![vec![-1.0, -0.5], vec![-0.2, 0.0]]);
        assert!(grid("1,2;3", 2).is_err());
        assert!(grid(" ; ", 2).is_err());
    }

    #[test]
    fn ordering_violations_are_usage_errors() {
        assert_eq!(indices("2,1").unwrap_err().exit_code(), 2);
        assert_eq!(lambdas("2,1").unwrap_err().exit_code(), 2);
        assert_eq!(indices("2,x").unwrap_err().exit_code(), 2);
        assert_eq!(law("cauchy").unwrap_err().exit_code(), 2);
        assert_eq!(indices("2,5").unwrap().indices(), &[2, 5]);
    }

    #[test]
    fn budget_is_a_runtime_error() {
        let e: CliError = Error::BudgetExceeded { budget: 1, accepted: 0, target: 1 }.into();
        assert_eq!(e.exit_code(), 1);
    }
}
