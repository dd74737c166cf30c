//! Univariate laws, the GEV family, generalized inverses and the
//! negative-exponential push-forward.
//!
//! Every closed form in this crate is written for the standard negative
//! exponential law F(x) = eˣ, x ≤ 0 ("η-space"). A general continuous law F
//! is reached through X = F⁻¹(e^η), and back through η = log F(X).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::Interval;

/// Bracket width at which the bisection quantile stops.
const BISECTION_TOL: f64 = 1e-12;

/// A continuous univariate distribution.
pub trait Law: fmt::Debug + Send + Sync {
    /// Identifier, e.g. `negexp` or `gev:0.5`.
    fn label(&self) -> String;

    fn cdf(&self, x: f64) -> f64;

    /// log F(x); implementors override this when `cdf(x).ln()` loses precision.
    fn log_cdf(&self, x: f64) -> f64 {
        self.cdf(x).ln()
    }

    /// Density at `x`, or `None` when the law has no density.
    fn density(&self, _x: f64) -> Option<f64> {
        None
    }

    fn support(&self) -> Interval;

    /// Closed-form generalized inverse, when one is known. `q` is in (0, 1).
    fn quantile_closed(&self, _q: f64) -> Option<f64> {
        None
    }

    /// Closed-form F⁻¹(e^η) for η ≤ 0, when one is known.
    fn eta_quantile_closed(&self, _eta: f64) -> Option<f64> {
        None
    }

    /// Norming constants for the max-domain of attraction, when known.
    fn norming(&self, _n: u64) -> Option<Norming> {
        None
    }
}

/// The built-in laws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BuiltinLaw {
    /// F(x) = eˣ on x ≤ 0.
    NegExp,
    /// F(x) = 1 − e⁻ˣ on x ≥ 0.
    StdExp,
    /// F(x) = x on [0, 1].
    Uniform,
    /// G_α(x) = exp(−(1+αx)^(−1/α)), with the Gumbel case at α = 0.
    Gev { alpha: f64 },
}

/// Norming constants (a_n, b_n) with F^n(a_n x + b_n) → `limit`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Norming {
    pub scale: f64,
    pub shift: f64,
    /// Shape of the attracting extreme value family member.
    pub alpha: f64,
    /// The limit law itself. For α = −1 attractions this is the negative
    /// exponential law, i.e. G₋₁ shifted by −1.
    pub limit: BuiltinLaw,
}

/// G_α(x). Outside the support the appropriate limit (0 or 1) is returned.
pub fn gev_cdf(alpha: f64, x: f64) -> f64 {
    gev_log_cdf(alpha, x).exp()
}

fn gev_log_cdf(alpha: f64, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if alpha == 0.0 {
        return -(-x).exp();
    }
    let s = 1.0 + alpha * x;
    if s <= 0.0 {
        return if alpha > 0.0 { f64::NEG_INFINITY } else { 0.0 };
    }
    -s.powf(-1.0 / alpha)
}

fn gev_density(alpha: f64, x: f64) -> f64 {
    if alpha == 0.0 {
        let t = (-x).exp();
        return t * (-t).exp();
    }
    let s = 1.0 + alpha * x;
    if s <= 0.0 {
        return 0.0;
    }
    let t = s.powf(-1.0 / alpha);
    t * (-t).exp() / s
}

impl Law for BuiltinLaw {
    fn label(&self) -> String {
        match self {
            BuiltinLaw::NegExp => "negexp".into(),
            BuiltinLaw::StdExp => "stdexp".into(),
            BuiltinLaw::Uniform => "uniform".into(),
            BuiltinLaw::Gev { alpha } => format!("gev:{alpha}"),
        }
    }

    fn cdf(&self, x: f64) -> f64 {
        match *self {
            BuiltinLaw::NegExp => x.min(0.0).exp(),
            BuiltinLaw::StdExp => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-x).exp_m1()
                }
            }
            BuiltinLaw::Uniform => x.clamp(0.0, 1.0),
            BuiltinLaw::Gev { alpha } => gev_cdf(alpha, x),
        }
    }

    fn log_cdf(&self, x: f64) -> f64 {
        match *self {
            BuiltinLaw::NegExp => x.min(0.0),
            BuiltinLaw::StdExp => {
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else if x > std::f64::consts::LN_2 {
                    (-(-x).exp()).ln_1p()
                } else {
                    (-(-x).exp_m1()).ln()
                }
            }
            BuiltinLaw::Uniform => {
                if x <= 0.0 {
                    f64::NEG_INFINITY
                } else {
                    x.min(1.0).ln()
                }
            }
            BuiltinLaw::Gev { alpha } => gev_log_cdf(alpha, x),
        }
    }

    fn density(&self, x: f64) -> Option<f64> {
        Some(match *self {
            BuiltinLaw::NegExp => {
                if x <= 0.0 {
                    x.exp()
                } else {
                    0.0
                }
            }
            BuiltinLaw::StdExp => {
                if x >= 0.0 {
                    (-x).exp()
                } else {
                    0.0
                }
            }
            BuiltinLaw::Uniform => {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            BuiltinLaw::Gev { alpha } => gev_density(alpha, x),
        })
    }

    fn support(&self) -> Interval {
        match *self {
            BuiltinLaw::NegExp => Interval::new(f64::NEG_INFINITY, 0.0),
            BuiltinLaw::StdExp => Interval::new(0.0, f64::INFINITY),
            BuiltinLaw::Uniform => Interval::new(0.0, 1.0),
            BuiltinLaw::Gev { alpha } if alpha > 0.0 => Interval::new(-1.0 / alpha, f64::INFINITY),
            BuiltinLaw::Gev { alpha } if alpha < 0.0 => {
                Interval::new(f64::NEG_INFINITY, -1.0 / alpha)
            }
            BuiltinLaw::Gev { .. } => Interval::new(f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    fn quantile_closed(&self, q: f64) -> Option<f64> {
        Some(match *self {
            BuiltinLaw::NegExp => q.ln(),
            BuiltinLaw::StdExp => -(-q).ln_1p(),
            BuiltinLaw::Uniform => q,
            BuiltinLaw::Gev { alpha } => gev_from_negexp(alpha, q.ln()),
        })
    }

    fn eta_quantile_closed(&self, eta: f64) -> Option<f64> {
        Some(match *self {
            BuiltinLaw::NegExp => eta,
            BuiltinLaw::StdExp => -(-eta.exp_m1()).ln(),
            BuiltinLaw::Uniform => eta.exp(),
            BuiltinLaw::Gev { alpha } => gev_from_negexp(alpha, eta),
        })
    }

    fn norming(&self, n: u64) -> Option<Norming> {
        let nf = n as f64;
        Some(match *self {
            BuiltinLaw::StdExp => Norming {
                scale: 1.0,
                shift: nf.ln(),
                alpha: 0.0,
                limit: BuiltinLaw::Gev { alpha: 0.0 },
            },
            BuiltinLaw::NegExp => Norming {
                scale: 1.0 / nf,
                shift: 0.0,
                alpha: -1.0,
                limit: BuiltinLaw::NegExp,
            },
            BuiltinLaw::Uniform => Norming {
                scale: 1.0 / nf,
                shift: 1.0,
                alpha: -1.0,
                limit: BuiltinLaw::NegExp,
            },
            // Max-stability: G_α^n(a_n x + b_n) = G_α(x).
            BuiltinLaw::Gev { alpha } if alpha == 0.0 => Norming {
                scale: 1.0,
                shift: nf.ln(),
                alpha,
                limit: *self,
            },
            BuiltinLaw::Gev { alpha } => {
                let scale = nf.powf(alpha);
                Norming {
                    scale,
                    shift: (scale - 1.0) / alpha,
                    alpha,
                    limit: *self,
                }
            }
        })
    }
}

/// G_α⁻¹(e^η), written in terms of −η = −log q.
fn gev_from_negexp(alpha: f64, eta: f64) -> f64 {
    let t = -eta;
    if alpha == 0.0 {
        -t.ln()
    } else {
        (t.powf(-alpha) - 1.0) / alpha
    }
}

impl fmt::Display for BuiltinLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for BuiltinLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "negexp" => Ok(BuiltinLaw::NegExp),
            "stdexp" => Ok(BuiltinLaw::StdExp),
            "uniform" => Ok(BuiltinLaw::Uniform),
            _ => {
                let alpha = s
                    .strip_prefix("gev:")
                    .and_then(|a| a.trim().parse::<f64>().ok())
                    .filter(|a| a.is_finite())
                    .ok_or_else(|| Error::UnknownLaw(s.to_string()))?;
                Ok(BuiltinLaw::Gev { alpha })
            }
        }
    }
}

type RealMap = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A law given only by its distribution function (and optionally a density).
/// Quantiles fall back to bisection.
#[derive(Clone)]
pub struct CdfLaw {
    label: String,
    cdf: RealMap,
    density: Option<RealMap>,
    support: Interval,
}

impl CdfLaw {
    pub fn new(
        label: impl Into<String>,
        support: Interval,
        cdf: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        CdfLaw {
            label: label.into(),
            cdf: Arc::new(cdf),
            density: None,
            support,
        }
    }

    pub fn with_density(mut self, density: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        self.density = Some(Arc::new(density));
        self
    }
}

impl fmt::Debug for CdfLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CdfLaw")
            .field("label", &self.label)
            .field("support", &self.support)
            .field("has_density", &self.density.is_some())
            .finish()
    }
}

impl Law for CdfLaw {
    fn label(&self) -> String {
        self.label.clone()
    }

    fn cdf(&self, x: f64) -> f64 {
        if x < self.support.lo {
            0.0
        } else if x >= self.support.hi {
            1.0
        } else {
            (self.cdf)(x)
        }
    }

    fn density(&self, x: f64) -> Option<f64> {
        self.density.as_ref().map(|d| {
            if self.support.contains(x) {
                d(x)
            } else {
                0.0
            }
        })
    }

    fn support(&self) -> Interval {
        self.support
    }
}

/// Generalized inverse F⁻¹(q) = inf{t : F(t) ≥ q} for q in (0, 1).
pub fn quantile(law: &dyn Law, q: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::Domain {
            what: "quantile level must lie in (0, 1)",
            value: q,
        });
    }
    if let Some(x) = law.quantile_closed(q) {
        return Ok(x);
    }
    Ok(bisect_quantile(law, q))
}

fn bisect_quantile(law: &dyn Law, q: f64) -> f64 {
    let support = law.support();
    let mut lo = if support.lo.is_finite() {
        support.lo
    } else {
        let mut t = support.hi.min(0.0) - 1.0;
        while law.cdf(t) >= q {
            t = 2.0 * t - 1.0;
        }
        t
    };
    let mut hi = if support.hi.is_finite() {
        support.hi
    } else {
        let mut t = support.lo.max(0.0) + 1.0;
        while law.cdf(t) < q {
            t = 2.0 * t + 1.0;
        }
        t
    };
    // Invariant: F(lo) < q <= F(hi), except possibly at a finite lower endpoint.
    while hi - lo > BISECTION_TOL * hi.abs().max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if law.cdf(mid) >= q {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// F⁻¹(e^η) for η ≤ 0: pushes a standard negative exponential draw to `law`.
/// η = 0 maps to the upper support endpoint.
pub fn from_negexp(law: &dyn Law, eta: f64) -> Result<f64> {
    if eta.is_nan() || eta > 0.0 {
        return Err(Error::Domain {
            what: "negative-exponential variate must be nonpositive",
            value: eta,
        });
    }
    if let Some(x) = law.eta_quantile_closed(eta) {
        return Ok(x);
    }
    let q = eta.exp();
    if q >= 1.0 {
        Ok(law.support().hi)
    } else if q <= 0.0 {
        Ok(law.support().lo)
    } else {
        Ok(bisect_quantile(law, q))
    }
}

/// Norming constants (a_n, b_n) and the attracting shape α for a built-in law.
pub fn norming_constants(law: &dyn Law, n: u64) -> Result<Norming> {
    if n == 0 {
        return Err(Error::Domain {
            what: "norming index must be positive",
            value: 0.0,
        });
    }
    law.norming(n)
        .ok_or_else(|| Error::UnsupportedLaw(law.label()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, LN_2};

    const LAWS: [BuiltinLaw; 5] = [
        BuiltinLaw::NegExp,
        BuiltinLaw::StdExp,
        BuiltinLaw::Uniform,
        BuiltinLaw::Gev { alpha: 0.0 },
        BuiltinLaw::Gev { alpha: -0.5 },
    ];

    #[test]
    fn gev_values() {
        assert!((gev_cdf(0.0, 0.0) - (-1f64).exp()).abs() < 1e-15);
        assert!((gev_cdf(1.0, 0.0) - (-1f64).exp()).abs() < 1e-15);
        assert!((gev_cdf(-1.0, -1.0) - (-2f64).exp()).abs() < 1e-15);
        // outside the support
        assert_eq!(gev_cdf(1.0, -2.0), 0.0);
        assert_eq!(gev_cdf(-1.0, 2.0), 1.0);
    }

    #[test]
    fn gev_small_alpha_approaches_gumbel() {
        for &x in &[-1.0, 0.0, 2.0] {
            assert!((gev_cdf(1e-9, x) - gev_cdf(0.0, x)).abs() < 1e-7);
        }
    }

    #[test]
    fn quantile_examples() {
        let q = quantile(&BuiltinLaw::NegExp, (-1f64).exp()).unwrap();
        assert!((q + 1.0).abs() < 1e-15);
        assert_eq!(quantile(&BuiltinLaw::Uniform, 0.3).unwrap(), 0.3);
        assert!((quantile(&BuiltinLaw::StdExp, 0.5).unwrap() - LN_2).abs() < 1e-15);
        assert!(quantile(&BuiltinLaw::Uniform, 0.0).is_err());
        assert!(quantile(&BuiltinLaw::Uniform, 1.0).is_err());
        assert!(quantile(&BuiltinLaw::Uniform, f64::NAN).is_err());
    }

    #[test]
    fn quantile_cdf_round_trip() {
        for law in LAWS {
            for i in 1..=99 {
                let q = i as f64 / 100.0;
                let x = quantile(&law, q).unwrap();
                assert!((law.cdf(x) - q).abs() < 1e-10, "{law} q={q}");
            }
        }
    }

    #[test]
    fn bisection_matches_closed_form() {
        let custom = CdfLaw::new("stdexp-by-cdf", Interval::new(0.0, f64::INFINITY), |x| {
            1.0 - (-x).exp()
        });
        for i in 1..20 {
            let q = i as f64 / 20.0;
            let exact = quantile(&BuiltinLaw::StdExp, q).unwrap();
            let approx = quantile(&custom, q).unwrap();
            assert!((exact - approx).abs() < 1e-11, "q={q}");
        }
        let left = CdfLaw::new("negexp-by-cdf", Interval::new(f64::NEG_INFINITY, 0.0), f64::exp);
        assert!((quantile(&left, 1e-6).unwrap() - 1e-6f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn from_negexp_examples() {
        assert!((from_negexp(&BuiltinLaw::Uniform, 0.5f64.ln()).unwrap() - 0.5).abs() < 1e-15);
        assert!((from_negexp(&BuiltinLaw::StdExp, 0.5f64.ln()).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(from_negexp(&BuiltinLaw::NegExp, -2.0).unwrap(), -2.0);
        assert!(from_negexp(&BuiltinLaw::NegExp, 0.1).is_err());
        assert_eq!(from_negexp(&BuiltinLaw::Uniform, 0.0).unwrap(), 1.0);
        assert_eq!(from_negexp(&BuiltinLaw::StdExp, 0.0).unwrap(), f64::INFINITY);
        let custom = CdfLaw::new("u", Interval::new(0.0, 1.0), |x| x);
        assert_eq!(from_negexp(&custom, 0.0).unwrap(), 1.0);
        assert!((from_negexp(&custom, -1.0).unwrap() - 1.0 / E).abs() < 1e-11);
    }

    #[test]
    fn from_negexp_inverts_log_cdf() {
        for law in LAWS {
            for i in 1..50 {
                let eta = -(i as f64) / 10.0;
                let x = from_negexp(&law, eta).unwrap();
                assert!((law.log_cdf(x) - eta).abs() < 1e-10 * eta.abs().max(1.0), "{law}");
            }
        }
    }

    #[test]
    fn norming_examples() {
        let n = norming_constants(&BuiltinLaw::StdExp, 100).unwrap();
        assert_eq!((n.scale, n.alpha), (1.0, 0.0));
        assert!((n.shift - 4.605_170_2).abs() < 1e-7);
        let n = norming_constants(&BuiltinLaw::NegExp, 50).unwrap();
        assert_eq!((n.scale, n.shift, n.alpha), (0.02, 0.0, -1.0));
        let n = norming_constants(&BuiltinLaw::Uniform, 10).unwrap();
        assert_eq!((n.scale, n.shift, n.alpha), (0.1, 1.0, -1.0));
        let custom = CdfLaw::new("c", Interval::new(0.0, 1.0), |x| x);
        assert!(matches!(
            norming_constants(&custom, 10),
            Err(Error::UnsupportedLaw(_))
        ));
    }

    #[test]
    fn uniform_norming_oracle() {
        // (1 + x/n)^n → eˣ on x ≤ 0, evaluated directly on a grid.
        let grid: Vec<f64> = (0..50).map(|i| -5.0 + 0.1 * i as f64).collect();
        let dev = |n: u64| {
            grid.iter()
                .map(|&x| ((1.0 + x / n as f64).powi(n as i32) - x.exp()).abs())
                .fold(0.0, f64::max)
        };
        let norm = norming_constants(&BuiltinLaw::Uniform, 10).unwrap();
        let ours = grid
            .iter()
            .map(|&x| {
                let y = norm.scale * x + norm.shift;
                (BuiltinLaw::Uniform.cdf(y).powi(10) - norm.limit.cdf(x)).abs()
            })
            .fold(0.0, f64::max);
        assert!((ours - dev(10)).abs() < 1e-14);
    }

    #[test]
    fn norming_deviation_nonincreasing() {
        let grid: Vec<f64> = (0..50).map(|i| -3.0 + 0.1 * i as f64).collect();
        for law in LAWS {
            let dev = |n: u64| {
                let norm = norming_constants(&law, n).unwrap();
                grid.iter()
                    .map(|&x| {
                        let y = norm.scale * x + norm.shift;
                        let fin = (n as f64 * law.log_cdf(y)).exp();
                        (fin - norm.limit.cdf(x)).abs()
                    })
                    .fold(0.0, f64::max)
            };
            let (d10, d100, d1000) = (dev(10), dev(100), dev(1000));
            assert!(d100 <= d10 + 1e-12 && d1000 <= d100 + 1e-12, "{law}: {d10} {d100} {d1000}");
            if matches!(law, BuiltinLaw::StdExp | BuiltinLaw::Uniform) {
                assert!(d100 < d10 && d1000 < d100, "{law}");
            }
        }
    }

    #[test]
    fn parse_identifiers() {
        assert_eq!("negexp".parse::<BuiltinLaw>().unwrap(), BuiltinLaw::NegExp);
        assert_eq!(
            "gev:-0.25".parse::<BuiltinLaw>().unwrap(),
            BuiltinLaw::Gev { alpha: -0.25 }
        );
        assert!("gev:abc".parse::<BuiltinLaw>().is_err());
        assert!("normal".parse::<BuiltinLaw>().is_err());
        for law in LAWS {
            assert_eq!(law.label().parse::<BuiltinLaw>().unwrap(), law);
        }
    }

    #[test]
    fn densities_integrate_to_cdf_differences() {
        let q = crate::quad::Integrator::default();
        for law in LAWS {
            let (a, b) = (quantile(&law, 0.1).unwrap(), quantile(&law, 0.8).unwrap());
            let mass = q.integrate(|x| law.density(x).unwrap(), a, b).unwrap();
            assert!((mass.value - 0.7).abs() < 1e-9, "{law}");
        }
    }
}
