//! Shared fixtures for the benchmarks.

use records_core::{BuiltinLaw, LambdaVector, McConfig, RecordIndexSet};

pub const LAWS: [BuiltinLaw; 4] = [
    BuiltinLaw::NegExp,
    BuiltinLaw::StdExp,
    BuiltinLaw::Uniform,
    BuiltinLaw::Gev { alpha: 0.0 },
];

pub fn indices(v: &[u32]) -> RecordIndexSet {
    RecordIndexSet::new(v.to_vec()).expect("fixture indices are valid")
}

pub fn lambdas(v: &[f64]) -> LambdaVector {
    LambdaVector::new(v.to_vec()).expect("fixture intensities are valid")
}

/// Single worker so timings do not depend on the host's core count.
pub fn mc_config() -> McConfig {
    McConfig::new(1).with_workers(1)
}

/// `n` points of a square grid on [lo, 0]², row-major.
pub fn square_grid(lo: f64, n: usize) -> Vec<(f64, f64)> {
    let step = -lo / (n - 1) as f64;
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (lo + a as f64 * step, lo + b as f64 * step)))
        .collect()
}
