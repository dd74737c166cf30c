//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Runs without the libtest harness so the lines are always printed.
//! `ACCEPTANCE_SEED` overrides the default seed.

use std::process::ExitCode;
use std::time::Instant;

use records_core::verify::{run_experiment, VerifyConfig, EXPERIMENTS};

struct Criterion {
    number: usize,
    title: &'static str,
    experiment: &'static str,
    /// Wall-time limit in seconds, where one is stated.
    limit_s: Option<f64>,
}

const CRITERIA: [Criterion; 12] = [
    Criterion { number: 1, title: "KL divergences sum to j/k under three laws", experiment: "kl_identity", limit_s: Some(30.0) },
    Criterion { number: 2, title: "KL closed forms match quadrature", experiment: "kl_closed_form", limit_s: None },
    Criterion { number: 3, title: "brute-force pair law on a 5x5 grid", experiment: "bivariate_exact_law", limit_s: Some(60.0) },
    Criterion { number: 4, title: "exact sampler matches brute force", experiment: "exact_sampler_equivalence", limit_s: None },
    Criterion { number: 5, title: "finite law equals limit law at integer intensities", experiment: "finite_equals_limit", limit_s: None },
    Criterion { number: 6, title: "limiting pair moments", experiment: "pair_moments", limit_s: None },
    Criterion { number: 7, title: "limiting triple law", experiment: "triple_law", limit_s: None },
    Criterion { number: 8, title: "independent exponential increments", experiment: "increment_law", limit_s: None },
    Criterion { number: 9, title: "record indicator rates", experiment: "record_indicators", limit_s: None },
    Criterion { number: 10, title: "late-record marginal is F^k", experiment: "marginal_invariance", limit_s: None },
    Criterion { number: 11, title: "convergence to the limit law", experiment: "convergence_study", limit_s: Some(5.0) },
    Criterion { number: 12, title: "numbered record is asymptotically normal", experiment: "numbered_records", limit_s: None },
];

fn main() -> ExitCode {
    // `cargo test -- <filter>` passes a filter; honour it loosely
    let filter: Option<String> = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let seed = std::env::var("ACCEPTANCE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    let cfg = VerifyConfig::new(seed);
    assert_eq!(CRITERIA.len(), EXPERIMENTS.len());

    println!("acceptance suite (seed {seed}, {} workers)", cfg.workers);
    let mut failures = 0;
    for c in &CRITERIA {
        if filter.as_deref().is_some_and(|f| !c.experiment.contains(f)) {
            continue;
        }
        let start = Instant::now();
        let result = run_experiment(c.experiment, &cfg);
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match result {
            Ok(report) => {
                let within = c.limit_s.is_none_or(|l| secs < l);
                let mut detail = report.summary_line();
                if let Some(l) = c.limit_s {
                    detail.push_str(&format!(" (limit {l:.0} s)"));
                }
                (report.pass && within, detail)
            }
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {:>2} [{}] {} ({:.2} s): {}",
            c.number,
            if ok { "pass" } else { "FAIL" },
            c.title,
            secs,
            detail
        );
    }
    if failures == 0 {
        println!("all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
