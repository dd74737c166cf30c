use serde::{Deserialize, Serialize};

use super::SampleBatch;
use crate::error::{Error, Result};
use crate::report::{z_score, Check, ExperimentReport, GridRow, Z_LIMIT};
use crate::specfun::kolmogorov_limit_cdf;

/// Largest grid accepted by [`grid_compare`].
pub const GRID_MAX_POINTS: usize = 25;

/// |z| threshold of [`grid_compare`].
pub const GRID_Z_THRESHOLD: f64 = Z_LIMIT;

/// Minimum sample size for the Kolmogorov–Smirnov tests.
const KS_MIN: usize = 10;

/// Fraction of draws lying coordinatewise at or below `point`, and its
/// binomial standard error √(p̂(1−p̂)/N).
pub fn empirical_cdf(batch: &SampleBatch, point: &[f64]) -> Result<(f64, f64)> {
    if batch.is_empty() {
        return Err(Error::Empty("empirical cdf of an empty batch"));
    }
    if point.len() != batch.dim {
        return Err(Error::Dimension(format!(
            "point has {} coordinates, batch has {}",
            point.len(),
            batch.dim
        )));
    }
    let hits = batch
        .rows()
        .filter(|r| r.iter().zip(point).all(|(x, p)| x <= p))
        .count();
    let n = batch.len() as f64;
    let p = hits as f64 / n;
    Ok((p, (p * (1.0 - p) / n).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

fn sorted(xs: &[f64]) -> Result<Vec<f64>> {
    if xs.iter().any(|x| x.is_nan()) {
        return Err(Error::Domain {
            what: "sample contains NaN",
            value: f64::NAN,
        });
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn ks_p(effective_n: f64, d: f64) -> Result<f64> {
    Ok((1.0 - kolmogorov_limit_cdf(effective_n.sqrt() * d)?).clamp(0.0, 1.0))
}

/// One-sample KS test against a continuous cdf, using the asymptotic
/// Kolmogorov distribution for the p-value.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &[f64], cdf: F) -> Result<KsResult> {
    if sample.len() < KS_MIN {
        return Err(Error::SmallSample {
            min: KS_MIN,
            got: sample.len(),
        });
    }
    let xs = sorted(sample)?;
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Ok(KsResult {
        statistic: d,
        p_value: ks_p(n, d)?,
        n: xs.len(),
    })
}

/// Two-sample KS test; ties across samples are stepped together.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    let small = a.len().min(b.len());
    if small < KS_MIN {
        return Err(Error::SmallSample { min: KS_MIN, got: small });
    }
    let (xa, xb) = (sorted(a)?, sorted(b)?);
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let t = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= t {
            i += 1;
        }
        while j < xb.len() && xb[j] <= t {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(KsResult {
        statistic: d,
        p_value: ks_p(na * nb / (na + nb), d)?,
        n: xa.len() + xb.len(),
    })
}

/// Pointwise comparison of the empirical cdf with `theory` on at most 25
/// grid points. Each z uses the null standard error √(θ(1−θ)/N), falling
/// back to the empirical one when θ is 0 or 1. Passes iff max |z| ≤ 3.
pub fn grid_compare<F>(batch: &SampleBatch, theory: F, grid: &[Vec<f64>]) -> Result<ExperimentReport>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if grid.is_empty() {
        return Err(Error::Empty("comparison grid"));
    }
    if grid.len() > GRID_MAX_POINTS {
        return Err(Error::GridTooLarge(grid.len()));
    }
    let n = batch.len() as f64;
    let mut rows = Vec::with_capacity(grid.len());
    for point in grid {
        let (est, emp_se) = empirical_cdf(batch, point)?;
        let th = theory(point)?;
        let null_se = (th * (1.0 - th) / n).max(0.0).sqrt();
        let se = if null_se > 0.0 { null_se } else { emp_se };
        rows.push(GridRow {
            point: point.clone(),
            theory: th,
            estimate: est,
            stderr: se,
            z: z_score(th, est, se),
        });
    }
    let worst = rows
        .iter()
        .max_by(|a, b| a.z.abs().total_cmp(&b.z.abs()))
        .expect("grid is nonempty");
    let mut head = Check::statistical("max_abs_z", worst.theory, worst.estimate, worst.stderr);
    head.z = worst.z;
    head.pass = worst.z.abs() <= GRID_Z_THRESHOLD;
    let mut report = ExperimentReport::from_checks("grid_compare", vec![head])
        .with_param("grid_points", grid.len())
        .with_param("n", batch.len())
        .with_rng(batch.rng.clone())
        .with_seed(batch.rng.seed);
    report.grid = rows;
    Ok(report)
}
