//! Finite-n conditional laws of records observed at fixed indices.
//!
//! Given that X_{j₁}, …, X_{j_d} are all records, the vector has the law of
//! (M₁, …, M_d) conditioned on M₁ < … < M_d, where M_m is the maximum of a
//! block of j_m − j_{m−1} iid draws. In η-space the block maxima have cdf
//! e^{(j_m − j_{m−1})x}, which makes every closed form below a sum of
//! exponentials.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::law::Law;
use crate::quad::Integrator;

/// Largest dimension accepted by [`d_record_cdf_negexp`].
pub const MAX_QUADRATURE_DIM: usize = 5;

/// Strictly increasing positive record indices j₁ < … < j_d.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct RecordIndexSet(Vec<u32>);

impl RecordIndexSet {
    pub fn new(indices: Vec<u32>) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::Index("at least one index is required".into()));
        }
        if indices[0] == 0 {
            return Err(Error::Index("indices start at 1".into()));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Index(format!(
                "indices must be strictly increasing, got {indices:?}"
            )));
        }
        Ok(RecordIndexSet(indices))
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn last(&self) -> u32 {
        *self.0.last().expect("nonempty by construction")
    }

    /// Block sizes j_m − j_{m−1} with j₀ = 0.
    pub fn block_sizes(&self) -> Vec<u32> {
        let mut prev = 0;
        self.0
            .iter()
            .map(|&j| {
                let b = j - prev;
                prev = j;
                b
            })
            .collect()
    }

    /// Probability that the block maxima arrive in increasing order,
    /// ∏_{m≥2} (j_m − j_{m−1}) / j_m.
    pub fn ordering_probability(&self) -> f64 {
        self.0
            .windows(2)
            .map(|w| f64::from(w[1] - w[0]) / f64::from(w[1]))
            .product()
    }
}

impl TryFrom<Vec<u32>> for RecordIndexSet {
    type Error = Error;

    fn try_from(v: Vec<u32>) -> Result<Self> {
        RecordIndexSet::new(v)
    }
}

impl From<RecordIndexSet> for Vec<u32> {
    fn from(idx: RecordIndexSet) -> Self {
        idx.0
    }
}

fn check_pair(j: u32, k: u32) -> Result<()> {
    if j == 0 || j >= k {
        return Err(Error::Index(format!("need 1 <= j < k, got j={j}, k={k}")));
    }
    Ok(())
}

fn check_positive_index(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::Index("record index must be at least 1".into()));
    }
    Ok(())
}

/// Clamps an η-space argument to the support (−∞, 0].
pub(crate) fn eta_arg(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain {
            what: "argument is NaN",
            value: x,
        });
    }
    Ok(x.min(0.0))
}

/// F^n evaluated from log F, exact for n = 0.
fn pow_from_log(log_f: f64, n: u32) -> f64 {
    if n == 0 {
        1.0
    } else {
        (f64::from(n) * log_f).exp()
    }
}

/// P(all of X_{j₁}, …, X_{j_d} are records) = ∏ 1/j_m.
pub fn record_event_probability(idx: &RecordIndexSet) -> f64 {
    idx.indices().iter().map(|&j| 1.0 / f64::from(j)).product()
}

/// P(X_n ≤ x | X_n is a record) = Fⁿ(x).
pub fn single_record_cdf(law: &dyn Law, n: u32, x: f64) -> Result<f64> {
    check_positive_index(n)?;
    Ok(law.cdf(x).powi(n as i32))
}

/// Density j·f(x)·F^{j−1}(x) of a record at index j.
pub fn single_record_pdf(law: &dyn Law, j: u32, x: f64) -> Result<f64> {
    check_positive_index(j)?;
    let f = law.density(x).ok_or_else(|| Error::NoDensity(law.label()))?;
    if f == 0.0 {
        return Ok(0.0);
    }
    Ok(f64::from(j) * f * pow_from_log(law.log_cdf(x), j - 1))
}

/// Joint cdf of (η_j, η_k) given both are records, negative exponential margins.
pub fn pair_record_cdf_negexp(j: u32, k: u32, x1: f64, x2: f64) -> Result<f64> {
    check_pair(j, k)?;
    let (x1, x2) = (eta_arg(x1)?, eta_arg(x2)?);
    let (jf, kf) = (f64::from(j), f64::from(k));
    if x1 < x2 {
        Ok((kf * (jf * x1 + (kf - jf) * x2).exp() - jf * (kf * x1).exp()) / (kf - jf))
    } else {
        Ok((kf * x2).exp())
    }
}

/// Joint cdf of (X_j, X_k) given both are records, for a continuous law F.
///
/// Ties F(y₁) = F(y₂) fall to the second branch, F^k(y₂).
pub fn pair_record_cdf(law: &dyn Law, j: u32, k: u32, y1: f64, y2: f64) -> Result<f64> {
    check_pair(j, k)?;
    if y1.is_nan() || y2.is_nan() {
        return Err(Error::Domain {
            what: "argument is NaN",
            value: f64::NAN,
        });
    }
    let (f1, f2) = (law.cdf(y1), law.cdf(y2));
    let gap = (k - j) as i32;
    if f1 < f2 {
        Ok(f1.powi(j as i32) / f64::from(k - j)
            * (f64::from(k) * f2.powi(gap) - f64::from(j) * f1.powi(gap)))
    } else {
        Ok(f2.powi(k as i32))
    }
}

/// Marginal cdf of the earlier record, (k e^{jx} − j e^{kx}) / (k − j).
pub fn pair_marginal_early(j: u32, k: u32, x: f64) -> Result<f64> {
    check_pair(j, k)?;
    let x = eta_arg(x)?;
    let (jf, kf) = (f64::from(j), f64::from(k));
    Ok((kf * (jf * x).exp() - jf * (kf * x).exp()) / (kf - jf))
}

/// Marginal cdf of the later record, e^{kx}; it does not depend on j.
pub fn pair_marginal_late(j: u32, k: u32, x: f64) -> Result<f64> {
    check_pair(j, k)?;
    let x = eta_arg(x)?;
    Ok((f64::from(k) * x).exp())
}

/// Density of X_j given that X_j and X_k are records:
/// jk/(k−j) · f(x) · (F^{j−1}(x) − F^{k−1}(x)).
pub fn pair_record_pdf(law: &dyn Law, j: u32, k: u32, x: f64) -> Result<f64> {
    check_pair(j, k)?;
    let f = law.density(x).ok_or_else(|| Error::NoDensity(law.label()))?;
    if f == 0.0 {
        return Ok(0.0);
    }
    let log_f = law.log_cdf(x);
    let (jf, kf) = (f64::from(j), f64::from(k));
    // F^{j−1}(1 − F^{k−j}) without cancellation near F = 1
    let tail = -(f64::from(k - j) * log_f).exp_m1();
    Ok(jf * kf / (kf - jf) * f * pow_from_log(log_f, j - 1) * tail)
}

/// Closed form of P(M₁ ≤ x₁, M₂ ≤ x₂, M₃ ≤ x₃ | M₁ < M₂ < M₃) for block
/// maxima with cumulative rates a < b < c, valid for x₁ ≤ x₂ ≤ x₃ ≤ 0.
/// Shared by the finite-index law (integer rates) and its limit (real rates).
pub(crate) fn triple_ordered_closed_form(a: f64, b: f64, c: f64, x1: f64, x2: f64, x3: f64) -> f64 {
    let pre = b * c / ((b - a) * (c - b));
    let first = (a * x1).exp()
        * (((c - b) * x3 + (b - a) * x2).exp() - (b - a) / (c - a) * ((c - a) * x2).exp());
    let second = a / b * (b * x1 + (c - b) * x3).exp();
    let third = a * (b - a) / (c * (c - a)) * (c * x1).exp();
    pre * (first - second + third)
}

/// Replaces each coordinate by the minimum of itself and all later ones.
/// Under the ordering constraint M₁ < … < M_d the event {M_m ≤ x_m ∀m}
/// equals {M_m ≤ x'_m ∀m} with these nondecreasing x'.
pub(crate) fn suffix_min(xs: &[f64]) -> Vec<f64> {
    let mut out = xs.to_vec();
    for m in (0..out.len().saturating_sub(1)).rev() {
        out[m] = out[m].min(out[m + 1]);
    }
    out
}

/// Joint cdf of (η_j, η_k, η_r) given all three are records.
///
/// Argument orderings other than x₁ ≤ x₂ ≤ x₃ reduce to that case by
/// substituting the smaller later argument into the earlier ones.
pub fn triple_record_cdf_negexp(j: u32, k: u32, r: u32, x1: f64, x2: f64, x3: f64) -> Result<f64> {
    if j == 0 || j >= k || k >= r {
        return Err(Error::Index(format!(
            "need 1 <= j < k < r, got ({j}, {k}, {r})"
        )));
    }
    let xs = suffix_min(&[eta_arg(x1)?, eta_arg(x2)?, eta_arg(x3)?]);
    Ok(triple_ordered_closed_form(
        f64::from(j),
        f64::from(k),
        f64::from(r),
        xs[0],
        xs[1],
        xs[2],
    ))
}

/// Joint cdf of the records at `idx` under `law`, in any dimension: closed
/// forms up to three records, nested quadrature beyond.
pub fn record_cdf(law: &dyn Law, idx: &RecordIndexSet, ys: &[f64]) -> Result<f64> {
    if ys.len() != idx.dim() {
        return Err(Error::Dimension(format!(
            "{} arguments for {} indices",
            ys.len(),
            idx.dim()
        )));
    }
    let xs = ys
        .iter()
        .map(|&y| {
            if y.is_nan() {
                return Err(Error::Domain {
                    what: "argument is NaN",
                    value: y,
                });
            }
            // far below any representable F^j; keeps ∞ − ∞ out of the closed forms
            Ok(law.log_cdf(y).clamp(-1e6, 0.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    match *idx.indices() {
        [j] => Ok(pow_from_log(xs[0], j)),
        [j, k] => pair_record_cdf_negexp(j, k, xs[0], xs[1]),
        [j, k, r] => triple_record_cdf_negexp(j, k, r, xs[0], xs[1], xs[2]),
        _ => d_record_cdf_negexp(idx, &xs),
    }
}

/// Joint cdf of d records (d ≤ 5) in η-space by nested adaptive quadrature.
///
/// The ordered block-maxima probability is integrated innermost-first with
/// u = eˣ on each axis, splitting at the kinks e^{x'_m}; the result is
/// multiplied by ∏ j_m / ∏ (j_m − j_{m−1}).
pub fn d_record_cdf_negexp(idx: &RecordIndexSet, xs: &[f64]) -> Result<f64> {
    if idx.dim() > MAX_QUADRATURE_DIM {
        return Err(Error::Dimension(format!(
            "at most {MAX_QUADRATURE_DIM} records are supported, got {}",
            idx.dim()
        )));
    }
    if xs.len() != idx.dim() {
        return Err(Error::Dimension(format!(
            "{} arguments for {} indices",
            xs.len(),
            idx.dim()
        )));
    }
    let rates: Vec<f64> = idx.block_sizes().into_iter().map(f64::from).collect();
    ordered_block_maxima_cdf(&rates, xs)
}

/// Conditional cdf of ordered block maxima with (possibly non-integer) block
/// rates, normalised by the ordering probability.
pub(crate) fn ordered_block_maxima_cdf(rates: &[f64], xs: &[f64]) -> Result<f64> {
    let clamped = xs.iter().map(|&x| eta_arg(x)).collect::<Result<Vec<_>>>()?;
    let xp = suffix_min(&clamped);
    let integrator = Integrator {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        max_intervals: 500,
    };
    let joint = nested_block_integral(rates.len() - 1, 0.0, rates, &xp, &integrator)?;
    let mut cumulative = rates[0];
    let mut order_prob = 1.0;
    for &b in &rates[1..] {
        cumulative += b;
        order_prob *= b / cumulative;
    }
    Ok((joint / order_prob).clamp(0.0, 1.0))
}

/// φ_m(s) = P(M₁ < … < M_m, M_i ≤ x'_i ∀i ≤ m, M_m ≤ s).
fn nested_block_integral(
    level: usize,
    s: f64,
    rates: &[f64],
    xp: &[f64],
    integrator: &Integrator,
) -> Result<f64> {
    let upper = xp[level].min(s);
    if level == 0 {
        return Ok((rates[0] * upper).exp());
    }
    if upper == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let rate = rates[level];
    let breaks: Vec<f64> = xp[..level].iter().map(|x| x.exp()).collect();
    let est = integrator.try_integrate_with_breaks(
        |u: f64| {
            let inner = nested_block_integral(level - 1, u.ln(), rates, xp, integrator)?;
            Ok(rate * u.powf(rate - 1.0) * inner)
        },
        0.0,
        upper.exp(),
        &breaks,
    )?;
    Ok(est.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::BuiltinLaw;
    use std::f64::consts::E;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn index_set_validation() {
        assert!(RecordIndexSet::new(vec![]).is_err());
        assert!(RecordIndexSet::new(vec![0, 2]).is_err());
        assert!(RecordIndexSet::new(vec![3, 3]).is_err());
        assert!(RecordIndexSet::new(vec![5, 2]).is_err());
        let idx = RecordIndexSet::new(vec![2, 5, 9]).unwrap();
        assert_eq!(idx.block_sizes(), vec![2, 3, 4]);
        assert!(close(idx.ordering_probability(), 0.6 * 4.0 / 9.0, 1e-15));
    }

    #[test]
    fn index_set_serde_validates() {
        let ok: RecordIndexSet = serde_json::from_str("[1,4]").unwrap();
        assert_eq!(ok.indices(), &[1, 4]);
        assert!(serde_json::from_str::<RecordIndexSet>("[4,1]").is_err());
    }

    #[test]
    fn event_probability_examples() {
        let p = |v: Vec<u32>| record_event_probability(&RecordIndexSet::new(v).unwrap());
        assert_eq!(p(vec![1]), 1.0);
        assert!(close(p(vec![2, 5]), 0.1, 1e-16));
        assert!(close(p(vec![2, 3, 4]), 1.0 / 24.0, 1e-16));
    }

    #[test]
    fn single_record_examples() {
        let neg = BuiltinLaw::NegExp;
        let uni = BuiltinLaw::Uniform;
        assert_eq!(single_record_cdf(&neg, 1, 0.0).unwrap(), 1.0);
        assert!(close(single_record_cdf(&neg, 3, -1.0).unwrap(), (-3f64).exp(), 1e-16));
        assert_eq!(single_record_cdf(&uni, 2, 0.5).unwrap(), 0.25);
        assert!(single_record_cdf(&uni, 0, 0.5).is_err());

        assert!(close(single_record_pdf(&uni, 3, 0.5).unwrap(), 0.75, 1e-15));
        assert!(close(single_record_pdf(&neg, 2, -1.0).unwrap(), 2.0 * (-2f64).exp(), 1e-15));
        assert!(close(single_record_pdf(&neg, 1, -1.0).unwrap(), (-1f64).exp(), 1e-15));
    }

    #[test]
    fn missing_density_is_an_error() {
        let law = crate::law::CdfLaw::new("c", crate::quad::Interval::new(0.0, 1.0), |x| x);
        assert!(matches!(single_record_pdf(&law, 2, 0.5), Err(Error::NoDensity(_))));
        assert!(matches!(pair_record_pdf(&law, 1, 2, 0.5), Err(Error::NoDensity(_))));
    }

    #[test]
    fn pair_negexp_examples() {
        let v = pair_record_cdf_negexp(1, 2, -1.0, -0.5).unwrap();
        assert!(close(v, 2.0 * (-1.5f64).exp() - (-2f64).exp(), 1e-15));
        assert!(close(v, 0.31092, 1e-5));
        assert!(close(pair_record_cdf_negexp(1, 2, -0.2, -0.5).unwrap(), 1.0 / E, 1e-15));
        assert_eq!(pair_record_cdf_negexp(1, 2, 0.0, 0.0).unwrap(), 1.0);
        assert!(pair_record_cdf_negexp(2, 2, -1.0, -1.0).is_err());
        assert!(pair_record_cdf_negexp(3, 2, -1.0, -1.0).is_err());
        assert!(pair_record_cdf_negexp(1, 2, f64::NAN, -1.0).is_err());
    }

    #[test]
    fn pair_general_examples() {
        let uni = BuiltinLaw::Uniform;
        assert!(close(pair_record_cdf(&uni, 1, 2, 0.4, 0.8).unwrap(), 0.48, 1e-15));
        assert_eq!(pair_record_cdf(&uni, 1, 2, 1.0, 1.0).unwrap(), 1.0);
        assert!(close(pair_record_cdf(&uni, 2, 5, 0.9, 0.3).unwrap(), 0.00243, 1e-15));
    }

    #[test]
    fn pair_branch_continuity() {
        for &(j, k) in &[(1, 2), (2, 5), (3, 7), (10, 11)] {
            for i in 0..40 {
                let x = -(i as f64) * 0.1;
                let below = pair_record_cdf_negexp(j, k, x - 1e-15, x).unwrap();
                let at = pair_record_cdf_negexp(j, k, x, x).unwrap();
                assert!(close(below, at, 1e-12), "(j,k)=({j},{k}) x={x}");
                assert!(close(at, (f64::from(k) * x).exp(), 1e-15));
            }
        }
    }

    #[test]
    fn pair_marginal_examples() {
        let target = 2.0 / E - (-2f64).exp();
        assert!(close(pair_marginal_early(1, 2, -1.0).unwrap(), target, 1e-15));
        assert!(close(pair_marginal_early(1, 2, -1.0).unwrap(), 0.600_423_6, 1e-7));
        assert_eq!(pair_marginal_early(1, 2, 0.0).unwrap(), 1.0);
        assert!(close(pair_marginal_early(2, 4, -0.5).unwrap(), target, 1e-15));
        assert!(close(pair_marginal_late(1, 3, -1.0).unwrap(), (-3f64).exp(), 1e-16));
        assert_eq!(
            pair_marginal_late(2, 3, -1.0).unwrap(),
            pair_marginal_late(1, 3, -1.0).unwrap()
        );
        assert_eq!(pair_marginal_late(1, 2, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn marginals_are_joint_edges() {
        for &(j, k) in &[(1, 2), (2, 5), (7, 9)] {
            for i in 0..30 {
                let x = -(i as f64) * 0.13;
                let early = pair_record_cdf_negexp(j, k, x, 0.0).unwrap();
                assert!(close(early, pair_marginal_early(j, k, x).unwrap(), 1e-14));
                let late = pair_record_cdf_negexp(j, k, 0.0, x).unwrap();
                assert!(close(late, pair_marginal_late(j, k, x).unwrap(), 1e-15));
            }
        }
    }

    #[test]
    fn pair_pdf_examples() {
        let neg = BuiltinLaw::NegExp;
        let expected = 2.0 / E * (1.0 - 1.0 / E);
        assert!(close(pair_record_pdf(&neg, 1, 2, -1.0).unwrap(), expected, 1e-15));
        assert_eq!(pair_record_pdf(&neg, 1, 2, 0.0).unwrap(), 0.0);
        assert!(close(pair_record_pdf(&BuiltinLaw::Uniform, 2, 3, 0.5).unwrap(), 1.5, 1e-14));
    }

    #[test]
    fn pair_pdf_is_derivative_of_early_marginal() {
        // central differences of the closed-form marginal
        let h = 1e-5;
        for &(j, k) in &[(1, 2), (2, 5), (3, 7)] {
            for i in 1..20 {
                let x = -(i as f64) * 0.2;
                let fd = (pair_marginal_early(j, k, x + h).unwrap()
                    - pair_marginal_early(j, k, x - h).unwrap())
                    / (2.0 * h);
                let pdf = pair_record_pdf(&BuiltinLaw::NegExp, j, k, x).unwrap();
                assert!(close(fd, pdf, 1e-8), "({j},{k}) x={x}: {fd} vs {pdf}");
            }
        }
    }

    #[test]
    fn pair_pdf_integrates_to_one() {
        let q = Integrator::default();
        let laws = [
            BuiltinLaw::NegExp,
            BuiltinLaw::StdExp,
            BuiltinLaw::Uniform,
            BuiltinLaw::Gev { alpha: 0.0 },
        ];
        for law in laws {
            for &(j, k) in &[(1, 2), (2, 5), (3, 7)] {
                let mass = q
                    .integrate_interval(|x| pair_record_pdf(&law, j, k, x), law.support())
                    .unwrap();
                assert!(close(mass.value, 1.0, 1e-8), "{law} ({j},{k}): {}", mass.value);
            }
        }
    }

    #[test]
    fn triple_examples() {
        let v = triple_record_cdf_negexp(1, 2, 3, -1.5, -1.0, -0.5).unwrap();
        assert!(close(v, 0.12865, 1e-5), "{v}");
        assert!(close(triple_record_cdf_negexp(1, 2, 3, 0.0, 0.0, 0.0).unwrap(), 1.0, 1e-14));
        let v = triple_record_cdf_negexp(1, 2, 3, 0.0, 0.0, -1.0).unwrap();
        assert!(close(v, (-3f64).exp(), 1e-15));
        assert!(triple_record_cdf_negexp(1, 3, 3, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn triple_is_continuous_across_orderings() {
        let (j, k, r) = (2, 5, 9);
        let t = |a: f64, b: f64, c: f64| triple_record_cdf_negexp(j, k, r, a, b, c).unwrap();
        for &(a, b) in &[(-1.0, -0.5), (-0.7, -0.2), (-2.0, -0.1)] {
            let eps = 1e-13;
            assert!(close(t(a, b - eps, -0.05), t(a, b + eps, -0.05), 1e-11));
            assert!(close(t(b - eps, a, -0.05), t(b + eps, a, -0.05), 1e-11));
            assert!(close(t(-0.05, a, b - eps), t(-0.05, a, b + eps), 1e-11));
        }
    }

    #[test]
    fn triple_last_argument_zero_drops_nothing_else() {
        // The marginal of the last two coordinates is the pair law at (k, r).
        for &(x2, x3) in &[(-1.0, -0.5), (-0.3, -0.8), (-2.0, -0.01)] {
            let tri = triple_record_cdf_negexp(2, 5, 9, 0.0, x2, x3).unwrap();
            let pair = pair_record_cdf_negexp(5, 9, x2, x3).unwrap();
            assert!(close(tri, pair, 1e-13), "{tri} vs {pair}");
        }
    }

    #[test]
    fn d_record_reduces_to_closed_forms() {
        let one = RecordIndexSet::new(vec![5]).unwrap();
        assert!(close(d_record_cdf_negexp(&one, &[-0.4]).unwrap(), (-2f64).exp(), 1e-15));

        let pair = RecordIndexSet::new(vec![1, 2]).unwrap();
        let v = d_record_cdf_negexp(&pair, &[-1.0, -0.5]).unwrap();
        assert!(close(v, pair_record_cdf_negexp(1, 2, -1.0, -0.5).unwrap(), 1e-9));

        let tri = RecordIndexSet::new(vec![1, 2, 3]).unwrap();
        let v = d_record_cdf_negexp(&tri, &[-1.5, -1.0, -0.5]).unwrap();
        assert!(close(v, triple_record_cdf_negexp(1, 2, 3, -1.5, -1.0, -0.5).unwrap(), 1e-9));

        let tri = RecordIndexSet::new(vec![2, 5, 9]).unwrap();
        for &xs in &[[-0.3, -0.9, -0.1], [-0.2, -0.1, -0.6], [-1.0, -0.4, -0.2]] {
            let v = d_record_cdf_negexp(&tri, &xs).unwrap();
            let c = triple_record_cdf_negexp(2, 5, 9, xs[0], xs[1], xs[2]).unwrap();
            assert!(close(v, c, 1e-9), "{xs:?}: {v} vs {c}");
        }
    }

    #[test]
    fn d_record_higher_dims() {
        let idx = RecordIndexSet::new(vec![1, 2, 3, 4, 5]).unwrap();
        assert!(close(d_record_cdf_negexp(&idx, &[0.0; 5]).unwrap(), 1.0, 1e-9));
        // dropping the constraint on the first record: a 4-record law at 2..5
        let four = RecordIndexSet::new(vec![2, 3, 4, 5]).unwrap();
        let xs = [-1.2, -0.8, -0.5, -0.2];
        let full = d_record_cdf_negexp(&idx, &[0.0, xs[0], xs[1], xs[2], xs[3]]).unwrap();
        let drop = d_record_cdf_negexp(&four, &xs).unwrap();
        assert!(close(full, drop, 1e-9), "{full} vs {drop}");
        let six = RecordIndexSet::new(vec![1, 2, 3, 4, 5, 6]).unwrap();
        assert!(matches!(
            d_record_cdf_negexp(&six, &[0.0; 6]),
            Err(Error::Dimension(_))
        ));
        assert!(d_record_cdf_negexp(&four, &[0.0; 3]).is_err());
    }

    #[test]
    fn record_cdf_dispatches_by_dimension() {
        let law = BuiltinLaw::StdExp;
        let one = RecordIndexSet::new(vec![3]).unwrap();
        let v = record_cdf(&law, &one, &[1.0]).unwrap();
        assert!(close(v, (1.0 - (-1f64).exp()).powi(3), 1e-14));
        let pair = RecordIndexSet::new(vec![2, 5]).unwrap();
        let v = record_cdf(&law, &pair, &[0.5, 1.5]).unwrap();
        assert!(close(v, pair_record_cdf(&law, 2, 5, 0.5, 1.5).unwrap(), 1e-14));
        let tri = RecordIndexSet::new(vec![1, 2, 3]).unwrap();
        let neg = BuiltinLaw::NegExp;
        let v = record_cdf(&neg, &tri, &[-1.5, -1.0, -0.5]).unwrap();
        assert!(close(v, triple_record_cdf_negexp(1, 2, 3, -1.5, -1.0, -0.5).unwrap(), 1e-14));
        let four = RecordIndexSet::new(vec![1, 2, 3, 4]).unwrap();
        let v = record_cdf(&neg, &four, &[0.0, -1.5, -1.0, -0.5]).unwrap();
        let w = record_cdf(&neg, &RecordIndexSet::new(vec![2, 3, 4]).unwrap(), &[-1.5, -1.0, -0.5]).unwrap();
        assert!(close(v, w, 1e-9), "{v} vs {w}");
        // below the support
        assert_eq!(record_cdf(&law, &pair, &[-1.0, 2.0]).unwrap(), 0.0);
        assert!(record_cdf(&law, &pair, &[1.0]).is_err());
        assert!(record_cdf(&law, &pair, &[f64::NAN, 1.0]).is_err());
    }
}
