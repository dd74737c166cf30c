//! Deterministic convergence of the normalised finite-index pair law to its
//! limit along j = ⌈λ₁n⌉, k = ⌈λ₂n⌉.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::exact::pair_record_cdf;
use crate::law::{norming_constants, Law};
use crate::limits::{limit_pair_cdf_general, LambdaVector};
use crate::report::{Check, ExperimentReport};

/// Slack subtracted before rounding λn up, so exact products such as
/// 0.2 · 25 are not pushed to the next integer by representation error.
const CEIL_SLACK: f64 = 1e-9;

/// The default 5×5 grid {−1, 0, 1, 2, 3}².
pub fn default_grid() -> Vec<[f64; 2]> {
    let v = [-1.0, 0.0, 1.0, 2.0, 3.0];
    v.iter().flat_map(|&a| v.iter().map(move |&b| [a, b])).collect()
}

/// (j, k) = (⌈λ₁n⌉, ⌈λ₂n⌉).
pub fn indices_for(lv: &LambdaVector, n: u64) -> Result<(u32, u32)> {
    let l = lv.as_slice();
    if l.len() != 2 {
        return Err(Error::Dimension(format!("need two intensities, got {}", l.len())));
    }
    let idx = |lam: f64| -> Result<u32> {
        let v = (lam * n as f64 - CEIL_SLACK).ceil().max(1.0);
        if v > f64::from(u32::MAX) {
            return Err(Error::Index(format!("index {v} out of range")));
        }
        Ok(v as u32)
    };
    let (j, k) = (idx(l[0])?, idx(l[1])?);
    if j >= k {
        return Err(Error::Index(format!(
            "n = {n} gives j = {j}, k = {k}; increase n so that j < k"
        )));
    }
    Ok((j, k))
}

/// sup over `grid` of |P(a_n y + b_n) − G_{λ₁,λ₂}(y)| at a single n.
pub fn sup_deviation(law: &dyn Law, lv: &LambdaVector, n: u64, grid: &[[f64; 2]]) -> Result<f64> {
    let norm = norming_constants(law, n)?;
    let (j, k) = indices_for(lv, n)?;
    let mut sup: f64 = 0.0;
    for &[y1, y2] in grid {
        let finite = pair_record_cdf(
            law,
            j,
            k,
            norm.scale * y1 + norm.shift,
            norm.scale * y2 + norm.shift,
        )?;
        let limit = limit_pair_cdf_general(&norm.limit, lv, y1, y2)?;
        sup = sup.max((finite - limit).abs());
    }
    Ok(sup)
}

/// One report per n. Each carries the sup deviation and, after the first,
/// a check that it is strictly below the previous one.
pub fn converge_study(
    law: &dyn Law,
    lv: &LambdaVector,
    n_list: &[u64],
    grid: &[[f64; 2]],
) -> Result<Vec<ExperimentReport>> {
    if n_list.is_empty() {
        return Err(Error::Empty("list of n values"));
    }
    if grid.is_empty() {
        return Err(Error::Empty("convergence grid"));
    }
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("n values must be strictly increasing".into()));
    }
    let mut prev: Option<f64> = None;
    let mut out = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let start = Instant::now();
        let (j, k) = indices_for(lv, n)?;
        let norm = norming_constants(law, n)?;
        let dev = sup_deviation(law, lv, n, grid)?;
        let mut checks = vec![Check::at_most("sup_deviation", 1.0, dev)];
        if let Some(p) = prev {
            let mut c = Check::at_most("strictly_below_previous", p, dev);
            c.pass = dev < p;
            checks.push(c);
        }
        prev = Some(dev);
        out.push(
            ExperimentReport::from_checks("converge", checks)
                .with_param("law", law.label())
                .with_param("lambda", lv.as_slice().to_vec())
                .with_param("n", n)
                .with_param("j", j)
                .with_param("k", k)
                .with_param("a_n", norm.scale)
                .with_param("b_n", norm.shift)
                .with_param("grid_points", grid.len())
                .with_runtime_ms(start.elapsed().as_millis() as u64),
        );
    }
    Ok(out)
}
