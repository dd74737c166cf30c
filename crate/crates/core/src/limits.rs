//! Limiting joint laws of records at indices j_i(n) with j_i(n)/n → λ_i.
//!
//! All functions take arguments in x-space (the η-space scaled by n). A law
//! G from an extreme value family enters through x = log G(y).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{eta_arg, ordered_block_maxima_cdf, suffix_min, triple_ordered_closed_form};
use crate::law::Law;

/// Positive, strictly increasing limit intensities λ₁ < … < λ_d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct LambdaVector(Vec<f64>);

impl LambdaVector {
    pub fn new(lambdas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::LambdaOrder("at least one intensity is required".into()));
        }
        if lambdas.iter().any(|l| !l.is_finite() || *l <= 0.0) {
            return Err(Error::LambdaOrder(format!(
                "intensities must be finite and positive, got {lambdas:?}"
            )));
        }
        if lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::LambdaOrder(format!(
                "intensities must be strictly increasing, got {lambdas:?}"
            )));
        }
        Ok(LambdaVector(lambdas))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    fn expect_dim(&self, d: usize) -> Result<()> {
        if self.dim() != d {
            return Err(Error::Dimension(format!(
                "expected {d} intensities, got {}",
                self.dim()
            )));
        }
        Ok(())
    }

    fn pair(&self) -> Result<(f64, f64)> {
        self.expect_dim(2)?;
        Ok((self.0[0], self.0[1]))
    }

    fn triple(&self) -> Result<(f64, f64, f64)> {
        self.expect_dim(3)?;
        Ok((self.0[0], self.0[1], self.0[2]))
    }

    /// (β₁, β₂) with β_i = λ_i / (λ₂ − λ₁).
    pub fn pair_betas(&self) -> Result<(f64, f64)> {
        let (l1, l2) = self.pair()?;
        Ok((l1 / (l2 - l1), l2 / (l2 - l1)))
    }

    /// β₁…β₆ of the three-record law:
    /// β₁ = λ₁/(λ₂−λ₁), β₂ = λ₂/(λ₂−λ₁), β₃ = λ₁/(λ₃−λ₁),
    /// β₄ = λ₂/(λ₃−λ₂), β₅ = λ₃/(λ₃−λ₁), β₆ = λ₃/(λ₃−λ₂).
    pub fn triple_betas(&self) -> Result<[f64; 6]> {
        let (l1, l2, l3) = self.triple()?;
        Ok([
            l1 / (l2 - l1),
            l2 / (l2 - l1),
            l1 / (l3 - l1),
            l2 / (l3 - l2),
            l3 / (l3 - l1),
            l3 / (l3 - l2),
        ])
    }
}

impl TryFrom<Vec<f64>> for LambdaVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        LambdaVector::new(v)
    }
}

impl From<LambdaVector> for Vec<f64> {
    fn from(lv: LambdaVector) -> Self {
        lv.0
    }
}

/// Moments of the limiting pair (X, Y) = (early, late).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitPairMoments {
    pub mean_early: f64,
    pub mean_late: f64,
    pub var_early: f64,
    pub var_late: f64,
    pub covariance: f64,
    pub correlation: f64,
    /// E[(X − Y)²]. The gap Y − X is Exp(λ₁), so this is 2/λ₁².
    pub expected_sq_gap: f64,
}

/// H_{λ₁,λ₂}(x₁, x₂).
pub fn limit_pair_cdf(lv: &LambdaVector, x1: f64, x2: f64) -> Result<f64> {
    let (l1, l2) = lv.pair()?;
    let (b1, b2) = lv.pair_betas()?;
    let (x1, x2) = (eta_arg(x1)?, eta_arg(x2)?);
    if x1 < x2 {
        Ok((l1 * x1).exp() * (b2 * ((l2 - l1) * x2).exp() - b1 * ((l2 - l1) * x1).exp()))
    } else {
        Ok((l2 * x2).exp())
    }
}

/// Marginals (H₁(x), H₂(x)) of the limiting pair.
pub fn limit_pair_marginals(lv: &LambdaVector, x: f64) -> Result<(f64, f64)> {
    let (l1, l2) = lv.pair()?;
    let (b1, b2) = lv.pair_betas()?;
    let x = eta_arg(x)?;
    Ok((b2 * (l1 * x).exp() - b1 * (l2 * x).exp(), (l2 * x).exp()))
}

pub fn limit_pair_moments(lv: &LambdaVector) -> Result<LimitPairMoments> {
    let (l1, l2) = lv.pair()?;
    Ok(LimitPairMoments {
        mean_early: -1.0 / l1 - 1.0 / l2,
        mean_late: -1.0 / l2,
        var_early: 1.0 / (l1 * l1) + 1.0 / (l2 * l2),
        var_late: 1.0 / (l2 * l2),
        covariance: 1.0 / (l2 * l2),
        correlation: l1 / (l1 * l1 + l2 * l2).sqrt(),
        expected_sq_gap: 2.0 / (l1 * l1),
    })
}

/// The published statement of E[(X − Y)²], 1/λ₁². It is the variance of the
/// gap, not its second moment; kept for discrepancy reporting only.
pub fn expected_sq_gap_as_published(lv: &LambdaVector) -> Result<f64> {
    let (l1, _) = lv.pair()?;
    Ok(1.0 / (l1 * l1))
}

fn log_g(g: &dyn Law, y: f64) -> Result<f64> {
    if y.is_nan() {
        return Err(Error::Domain {
            what: "argument is NaN",
            value: y,
        });
    }
    Ok(g.log_cdf(y).min(0.0))
}

/// G_{λ₁,λ₂}(y₁, y₂) = H_{λ₁,λ₂}(log G(y₁), log G(y₂)).
pub fn limit_pair_cdf_general(g: &dyn Law, lv: &LambdaVector, y1: f64, y2: f64) -> Result<f64> {
    limit_pair_cdf(lv, log_g(g, y1)?, log_g(g, y2)?)
}

/// Limit of P(late ≤ y | early > u, both records), y > u.
pub fn conditional_exceedance_limit(g: &dyn Law, lv: &LambdaVector, u: f64, y: f64) -> Result<f64> {
    let (l1, l2) = lv.pair()?;
    let (b1, b2) = lv.pair_betas()?;
    if u.is_nan() || y.is_nan() || y <= u {
        return Err(Error::Domain {
            what: "exceedance requires y > u",
            value: y,
        });
    }
    let (gu, gy) = (log_g(g, u)?, log_g(g, y)?);
    let denom = b2 * -(l1 * gu).exp_m1() - b1 * -(l2 * gu).exp_m1();
    if denom <= 0.0 {
        return Err(Error::Degenerate(format!(
            "threshold u = {u} has zero exceedance probability"
        )));
    }
    let joint = (l1 * gu).exp() * (b2 * ((l2 - l1) * gy).exp() - b1 * ((l2 - l1) * gu).exp());
    Ok(((l2 * gy).exp() - joint) / denom)
}

/// Limiting three-record cdf in x-space.
///
/// Uses the λ-substituted finite-index closed form. For x₁ ≤ x₂ ≤ x₃ this is
/// e^{λ₁x₁}e^{(λ₂−λ₁)x₂}(β₂β₆e^{(λ₃−λ₂)x₃} − β₄β₅e^{(λ₃−λ₂)x₂})
/// − e^{λ₂x₁}(β₁β₆e^{(λ₃−λ₂)x₃} − β₃β₄e^{(λ₃−λ₂)x₁});
/// other orderings substitute the smaller later arguments.
pub fn limit_triple_cdf(lv: &LambdaVector, x1: f64, x2: f64, x3: f64) -> Result<f64> {
    let (l1, l2, l3) = lv.triple()?;
    let xs = suffix_min(&[eta_arg(x1)?, eta_arg(x2)?, eta_arg(x3)?]);
    Ok(triple_ordered_closed_form(l1, l2, l3, xs[0], xs[1], xs[2]))
}

/// The first ordering branch exactly as it is commonly printed, with λ₃−λ₁
/// in place of λ₃−λ₂ inside the bracket. It does not define a distribution
/// function (it fails total mass and marginal checks) and exists only so
/// reports can show both evaluations side by side.
pub fn limit_triple_cdf_printed_branch(lv: &LambdaVector, x1: f64, x2: f64, x3: f64) -> Result<f64> {
    let (l1, l2, l3) = lv.triple()?;
    let [b1, b2, b3, b4, b5, b6] = lv.triple_betas()?;
    let (x1, x2, x3) = (eta_arg(x1)?, eta_arg(x2)?, eta_arg(x3)?);
    if !(x1 <= x2 && x2 <= x3) {
        return limit_triple_cdf(lv, x1, x2, x3);
    }
    Ok((l1 * x1).exp()
        * ((l2 - l1) * x2).exp()
        * (b2 * b6 * ((l3 - l1) * x3).exp() - b4 * b5 * ((l3 - l1) * x2).exp())
        - (l2 * x1).exp() * (b1 * b6 * ((l3 - l2) * x3).exp() - b3 * b4 * ((l3 - l2) * x1).exp()))
}

/// Covariance matrix of the limiting three-record vector.
pub fn limit_triple_cov(lv: &LambdaVector) -> Result<[[f64; 3]; 3]> {
    let (l1, l2, l3) = lv.triple()?;
    let (a, b, c) = (1.0 / (l1 * l1), 1.0 / (l2 * l2), 1.0 / (l3 * l3));
    Ok([
        [a + b + c, b + c, c],
        [b + c, b + c, c],
        [c, c, c],
    ])
}

/// Limiting d-record cdf for any d by nested quadrature (d ≤ 5).
pub fn limit_d_cdf(lv: &LambdaVector, xs: &[f64]) -> Result<f64> {
    if xs.len() != lv.dim() {
        return Err(Error::Dimension(format!(
            "{} arguments for {} intensities",
            xs.len(),
            lv.dim()
        )));
    }
    if lv.dim() > crate::exact::MAX_QUADRATURE_DIM {
        return Err(Error::Dimension(format!(
            "at most {} records are supported",
            crate::exact::MAX_QUADRATURE_DIM
        )));
    }
    let mut prev = 0.0;
    let rates: Vec<f64> = lv
        .as_slice()
        .iter()
        .map(|&l| {
            let r = l - prev;
            prev = l;
            r
        })
        .collect();
    ordered_block_maxima_cdf(&rates, xs)
}

/// Limiting cdf in any dimension: closed forms up to three records,
/// quadrature beyond.
pub fn limit_cdf(lv: &LambdaVector, xs: &[f64]) -> Result<f64> {
    if xs.len() != lv.dim() {
        return Err(Error::Dimension(format!(
            "{} arguments for {} intensities",
            xs.len(),
            lv.dim()
        )));
    }
    match xs.len() {
        1 => Ok((lv.as_slice()[0] * eta_arg(xs[0])?).exp()),
        2 => limit_pair_cdf(lv, xs[0], xs[1]),
        3 => limit_triple_cdf(lv, xs[0], xs[1], xs[2]),
        _ => limit_d_cdf(lv, xs),
    }
}

/// Joint cdf of the d−1 increments between consecutive records:
/// ∏ (1 − e^{−λ_i y_i}).
pub fn limit_increments_cdf(lv: &LambdaVector, ys: &[f64]) -> Result<f64> {
    if ys.len() + 1 != lv.dim() {
        return Err(Error::Dimension(format!(
            "{} intensities need {} increments, got {}",
            lv.dim(),
            lv.dim().saturating_sub(1),
            ys.len()
        )));
    }
    let mut p = 1.0;
    for (&l, &y) in lv.as_slice().iter().zip(ys) {
        if y.is_nan() || y <= 0.0 {
            return Err(Error::Domain {
                what: "increments must be positive",
                value: y,
            });
        }
        p *= -(-l * y).exp_m1();
    }
    Ok(p)
}

/// Q_{λ₁,λ₂}(x, y): joint cdf of the early record and the increment to the
/// late one.
pub fn limit_record_increment_joint(lv: &LambdaVector, x: f64, y: f64) -> Result<f64> {
    let (l1, l2) = lv.pair()?;
    let (b1, b2) = lv.pair_betas()?;
    if x.is_nan() || x > 0.0 {
        return Err(Error::Domain {
            what: "record argument must be nonpositive",
            value: x,
        });
    }
    if y.is_nan() || y <= 0.0 {
        return Err(Error::Domain {
            what: "increment argument must be positive",
            value: y,
        });
    }
    if x.abs() >= y {
        Ok(b1 * ((l2 - l1) * y).exp_m1() * (l2 * x).exp())
    } else {
        Ok(b2 * (l1 * x).exp() - b1 * (l2 * x).exp() - (-l1 * y).exp())
    }
}
