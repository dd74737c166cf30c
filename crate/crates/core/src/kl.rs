//! Kullback–Leibler divergences between the density of a record at index j
//! and the density of the same record when a later index k is also known to
//! be a record.
//!
//! The closed forms go through the digamma function; [`kl_quadrature`] is
//! the independent numerical route used to check them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{pair_record_pdf, single_record_pdf};
use crate::law::{BuiltinLaw, Law};
use crate::quad::{Integrator, Interval};
use crate::specfun::digamma;

/// Floor applied inside logarithms so integrable endpoint singularities
/// never evaluate to −∞.
const LOG_FLOOR: f64 = 1e-300;

/// Both directed divergences and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KlResult {
    /// D(g_{j,k} ‖ g_j)
    pub forward: f64,
    /// D(g_j ‖ g_{j,k})
    pub reverse: f64,
    pub distance: f64,
}

fn check(j: u32, k: u32) -> Result<(f64, f64)> {
    if j == 0 || j >= k {
        return Err(Error::Index(format!("need 1 <= j < k, got j={j}, k={k}")));
    }
    Ok((f64::from(j), f64::from(k)))
}

/// D(g_{j,k} ‖ g_j) in closed form:
/// log(k/(k−j)) + ψ(1) + (j/(k−j))ψ(1 + k/(k−j)) − (k/(k−j))ψ(1 + j/(k−j)).
pub fn kl_forward_negexp(j: u32, k: u32) -> Result<f64> {
    let (jf, kf) = check(j, k)?;
    let a = jf / (kf - jf);
    let b = kf / (kf - jf);
    Ok(b.ln() + digamma(1.0)? + a * digamma(1.0 + b)? - b * digamma(1.0 + a)?)
}

/// D(g_j ‖ g_{j,k}) = −log(k/(k−j)) − ψ(1) + ψ(1 + j/(k−j)).
pub fn kl_reverse_negexp(j: u32, k: u32) -> Result<f64> {
    let (jf, kf) = check(j, k)?;
    let a = jf / (kf - jf);
    Ok(-(kf / (kf - jf)).ln() - digamma(1.0)? + digamma(1.0 + a)?)
}

/// Symmetrised divergence; it equals j/k whatever the underlying law.
pub fn kl_distance(j: u32, k: u32) -> Result<f64> {
    let (jf, kf) = check(j, k)?;
    Ok(jf / kf)
}

/// Closed-form [`KlResult`].
pub fn kl_closed_form(j: u32, k: u32) -> Result<KlResult> {
    let forward = kl_forward_negexp(j, k)?;
    let reverse = kl_reverse_negexp(j, k)?;
    Ok(KlResult {
        forward,
        reverse,
        distance: forward + reverse,
    })
}

/// D(p ‖ q) = ∫ p log(p/q) over `support` by adaptive quadrature.
///
/// The integrand is 0 where p = 0. A point with p > 0 and q = 0 is an error.
pub fn kl_quadrature<P, Q>(p: P, q: Q, support: Interval) -> Result<f64>
where
    P: Fn(f64) -> Result<f64>,
    Q: Fn(f64) -> Result<f64>,
{
    let integrator = Integrator {
        abs_tol: 1e-11,
        rel_tol: 1e-13,
        max_intervals: 4000,
    };
    let est = integrator.integrate_interval(
        |x| {
            let pv = p(x)?;
            if pv <= 0.0 {
                return Ok(0.0);
            }
            let qv = q(x)?;
            if qv <= 0.0 {
                return Err(Error::NonFiniteIntegrand(x));
            }
            Ok(pv * (pv.max(LOG_FLOOR).ln() - qv.max(LOG_FLOOR).ln()))
        },
        support,
    )?;
    Ok(est.value)
}

/// Both directed divergences between g_{j,k} and g_j under `law`, by quadrature.
pub fn kl_record_quadrature(law: &dyn Law, j: u32, k: u32) -> Result<KlResult> {
    check(j, k)?;
    let g_jk = |x: f64| pair_record_pdf(law, j, k, x);
    let g_j = |x: f64| single_record_pdf(law, j, x);
    let forward = kl_quadrature(g_jk, g_j, law.support())?;
    let reverse = kl_quadrature(g_j, g_jk, law.support())?;
    Ok(KlResult {
        forward,
        reverse,
        distance: forward + reverse,
    })
}

/// Quadrature on the canonical negative exponential law.
pub fn kl_negexp_quadrature(j: u32, k: u32) -> Result<KlResult> {
    kl_record_quadrature(&BuiltinLaw::NegExp, j, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    #[test]
    fn closed_form_examples() {
        let fwd = LN_2 - 0.5;
        assert!((kl_forward_negexp(1, 2).unwrap() - fwd).abs() < 1e-14);
        assert!((kl_forward_negexp(2, 4).unwrap() - fwd).abs() < 1e-14);
        assert!((kl_reverse_negexp(1, 2).unwrap() - (1.0 - LN_2)).abs() < 1e-14);
        assert!((kl_reverse_negexp(3, 6).unwrap() - (1.0 - LN_2)).abs() < 1e-14);
        assert_eq!(kl_distance(1, 2).unwrap(), 0.5);
        assert_eq!(kl_distance(3, 4).unwrap(), 0.75);
        assert_eq!(kl_distance(1, 1000).unwrap(), 0.001);
        assert!(kl_forward_negexp(2, 2).is_err());
        assert!(kl_reverse_negexp(0, 2).is_err());
    }

    #[test]
    fn closed_forms_sum_to_ratio() {
        for k in 2..=10 {
            for j in 1..k {
                let r = kl_closed_form(j, k).unwrap();
                assert!((r.distance - f64::from(j) / f64::from(k)).abs() < 1e-12);
                assert!(r.forward >= 0.0 && r.reverse >= 0.0);
            }
        }
    }

    #[test]
    fn scale_structure() {
        for &(j, k) in &[(1, 2), (2, 3), (3, 7)] {
            let base = kl_forward_negexp(j, k).unwrap();
            for c in 2..6 {
                let scaled = kl_forward_negexp(c * j, c * k).unwrap();
                assert!((base - scaled).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn self_divergence_is_zero() {
        let f1 = |x: f64| Ok(x.exp());
        let v = kl_quadrature(f1, f1, Interval::new(f64::NEG_INFINITY, 0.0)).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let expected = LN_2 - 0.5;
        let neg = kl_negexp_quadrature(1, 2).unwrap();
        assert!((neg.forward - expected).abs() < 1e-8, "{neg:?}");
        let uni = kl_record_quadrature(&BuiltinLaw::Uniform, 1, 2).unwrap();
        assert!((uni.forward - expected).abs() < 1e-8, "{uni:?}");
    }

    #[test]
    fn vanishing_reference_density_is_rejected() {
        let p = |_: f64| Ok(1.0);
        let q = |x: f64| Ok(if x < 0.5 { 2.0 } else { 0.0 });
        let err = kl_quadrature(p, q, Interval::new(0.0, 1.0)).unwrap_err();
        assert!(matches!(err, Error::NonFiniteIntegrand(_)));
    }
}
