use rand_chacha::ChaCha8Rng;

use super::{open_unit, McConfig, SampleBatch};
use crate::error::{Error, Result};
use crate::exact::RecordIndexSet;
use crate::law::{from_negexp, Law};
use crate::limits::LambdaVector;

fn law_draw(law: &dyn Law, rng: &mut ChaCha8Rng, scale: f64) -> f64 {
    // the maximum of b iid draws has log-cdf log U / b
    let eta = open_unit(rng).ln() / scale;
    from_negexp(law, eta).expect("η ≤ 0 is always in range")
}

/// Rejection oracle: simulates whole iid sequences of length max(idx) and
/// keeps the values at `idx` when every one of those positions is a record.
pub fn simulate_conditional_records_bruteforce(
    law: &dyn Law,
    idx: &RecordIndexSet,
    n_target: usize,
    cfg: &McConfig,
) -> Result<SampleBatch> {
    let wanted: Vec<usize> = idx.indices().iter().map(|&j| j as usize).collect();
    let len = idx.last() as usize;
    cfg.run_rejection(wanted.len(), n_target, |rng, out| {
        let mut max = f64::NEG_INFINITY;
        let mut slot = 0;
        for m in 1..=len {
            let x = law_draw(law, rng, 1.0);
            let is_record = x > max;
            if is_record {
                max = x;
            }
            if m == wanted[slot] {
                if !is_record {
                    return false;
                }
                out[slot] = x;
                slot += 1;
            }
        }
        true
    })
}

/// Exact sampler: block maxima with block sizes j_m − j_{m−1}, drawn by the
/// quantile transform and accepted when strictly increasing.
pub fn sample_conditional_records_exact(
    law: &dyn Law,
    idx: &RecordIndexSet,
    n_target: usize,
    cfg: &McConfig,
) -> Result<SampleBatch> {
    let blocks: Vec<f64> = idx.block_sizes().into_iter().map(f64::from).collect();
    cfg.run_rejection(blocks.len(), n_target, |rng, out| {
        let mut prev = f64::NEG_INFINITY;
        for (slot, &b) in blocks.iter().enumerate() {
            let x = law_draw(law, rng, b);
            if x <= prev {
                return false;
            }
            out[slot] = x;
            prev = x;
        }
        true
    })
}

/// Draws from the limiting d-record law by the exponential chain
/// Y_d = −E_d/λ_d, Y_i = Y_{i+1} − E_i/λ_i.
pub fn sample_limit_chain(lv: &LambdaVector, n_target: usize, cfg: &McConfig) -> Result<SampleBatch> {
    let lambdas = lv.as_slice().to_vec();
    cfg.run_fixed(lambdas.len(), n_target, |rng, out| {
        let mut y = 0.0;
        for i in (0..lambdas.len()).rev() {
            y -= -open_unit(rng).ln() / lambdas[i];
            out[i] = y;
        }
    })
}

/// Sums of n iid standard exponentials: the n-th record value under
/// standard exponential observations.
pub fn sample_numbered_record(n: u32, n_target: usize, cfg: &McConfig) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::Index("record number must be at least 1".into()));
    }
    cfg.run_fixed(1, n_target, |rng, out| {
        out[0] = (0..n).map(|_| -open_unit(rng).ln()).sum();
    })
}

/// Record-indicator tallies over simulated sequences.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorCounts {
    pub sequences: u64,
    pub length: usize,
    /// `single[m−1]` counts sequences where position m is a record.
    pub single: Vec<u64>,
    /// Counts of joint records for each requested pair.
    pub joint: Vec<((usize, usize), u64)>,
}

impl IndicatorCounts {
    pub fn rate(&self, m: usize) -> f64 {
        self.single[m - 1] as f64 / self.sequences as f64
    }
}

/// Simulates `sequences` iid sequences of length `length` from `law` and
/// counts record indicators, singly and for the given index pairs.
pub fn record_indicator_counts(
    law: &dyn Law,
    length: usize,
    sequences: u64,
    pairs: &[(usize, usize)],
    cfg: &McConfig,
) -> Result<IndicatorCounts> {
    if length == 0 || sequences == 0 {
        return Err(Error::Config("need a positive length and sequence count".into()));
    }
    if let Some(&(j, k)) = pairs.iter().find(|&&(j, k)| j == 0 || j >= k || k > length) {
        return Err(Error::Index(format!("bad pair ({j}, {k}) for length {length}")));
    }
    let parts = cfg.map_chunks(sequences, |rng, _, count| {
        let mut single = vec![0u64; length];
        let mut joint = vec![0u64; pairs.len()];
        let mut flags = vec![false; length];
        for _ in 0..count {
            let mut max = f64::NEG_INFINITY;
            for (m, flag) in flags.iter_mut().enumerate() {
                let x = law_draw(law, rng, 1.0);
                *flag = x > max;
                if *flag {
                    max = x;
                    single[m] += 1;
                }
            }
            for (c, &(j, k)) in joint.iter_mut().zip(pairs) {
                if flags[j - 1] && flags[k - 1] {
                    *c += 1;
                }
            }
        }
        (single, joint)
    })?;
    let mut single = vec![0u64; length];
    let mut joint = vec![0u64; pairs.len()];
    for (s, jn) in parts {
        single.iter_mut().zip(s).for_each(|(a, b)| *a += b);
        joint.iter_mut().zip(jn).for_each(|(a, b)| *a += b);
    }
    Ok(IndicatorCounts {
        sequences,
        length,
        single,
        joint: pairs.iter().copied().zip(joint).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::BuiltinLaw;
    use crate::mc::mean_with_stderr;

    fn cfg(seed: u64) -> McConfig {
        McConfig::new(seed).with_workers(2)
    }

    #[test]
    fn first_index_always_accepts() {
        let idx = RecordIndexSet::new(vec![1]).unwrap();
        for law in [BuiltinLaw::NegExp, BuiltinLaw::Uniform] {
            let b = simulate_conditional_records_bruteforce(&law, &idx, 500, &cfg(1)).unwrap();
            assert_eq!(b.n_proposed, 500);
            let e = sample_conditional_records_exact(&law, &idx, 500, &cfg(2)).unwrap();
            assert_eq!(e.acceptance_rate(), 1.0);
        }
    }

    #[test]
    fn accepted_tuples_are_increasing() {
        let idx = RecordIndexSet::new(vec![2, 5, 6]).unwrap();
        let law = BuiltinLaw::StdExp;
        for batch in [
            simulate_conditional_records_bruteforce(&law, &idx, 2000, &cfg(3)).unwrap(),
            sample_conditional_records_exact(&law, &idx, 2000, &cfg(4)).unwrap(),
        ] {
            assert_eq!(batch.values.len(), 6000);
            assert!(batch.n_accepted as u64 <= batch.n_proposed);
            assert!(batch.rows().all(|r| r[0] < r[1] && r[1] < r[2]));
        }
    }

    #[test]
    fn acceptance_rates() {
        let idx = RecordIndexSet::new(vec![1, 2]).unwrap();
        let b = sample_conditional_records_exact(&BuiltinLaw::NegExp, &idx, 20_000, &cfg(5)).unwrap();
        let z = (b.acceptance_rate() - 0.5) / b.acceptance_stderr();
        assert!(z.abs() < 4.0, "z = {z}");
    }

    #[test]
    fn chain_mean_and_increments() {
        let lv = LambdaVector::new(vec![1.0, 2.0]).unwrap();
        let b = sample_limit_chain(&lv, 200_000, &cfg(6)).unwrap();
        let (m, se) = mean_with_stderr(&b.column(0));
        assert!((m + 1.5).abs() < 4.0 * se);
        assert!(b.rows().all(|r| r[0] < r[1] && r[1] < 0.0));
    }

    #[test]
    fn numbered_record_rejects_zero() {
        assert!(sample_numbered_record(0, 10, &cfg(7)).is_err());
        let b = sample_numbered_record(1, 1000, &cfg(7)).unwrap();
        assert!(b.values.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn indicator_validation_and_first_index() {
        let law = BuiltinLaw::Uniform;
        assert!(record_indicator_counts(&law, 5, 10, &[(3, 2)], &cfg(8)).is_err());
        assert!(record_indicator_counts(&law, 5, 10, &[(2, 6)], &cfg(8)).is_err());
        let c = record_indicator_counts(&law, 5, 1000, &[(1, 2)], &cfg(8)).unwrap();
        assert_eq!(c.single[0], 1000);
        assert_eq!(c.joint[0].1, c.single[1]);
    }
}
