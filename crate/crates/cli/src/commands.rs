use std::path::Path;

use serde_json::json;

use records_core::converge::{converge_study, default_grid};
use records_core::exact::{record_cdf, record_event_probability};
use records_core::kl::{kl_closed_form, kl_record_quadrature};
use records_core::law::from_negexp;
use records_core::limits::limit_cdf;
use records_core::mc::{
    grid_compare, sample_conditional_records_exact, sample_limit_chain,
    simulate_conditional_records_bruteforce,
};
use records_core::verify::{run_experiment, suite};
use records_core::{BuiltinLaw, Check, ExperimentReport, McConfig, VerifyConfig};

use crate::args::{ConvergeArgs, Format, KlArgs, SimulateArgs, VerifyArgs};
use crate::parse::{self, CliError, CliResult};

const EARLY_LEVELS: [f64; 5] = [2.4, 1.6, 1.0, 0.6, 0.3];
const LATE_LEVELS: [f64; 5] = [2.5, 1.5, 1.0, 0.5, 0.25];

fn workers(w: Option<usize>) -> usize {
    w.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .max(1)
}

fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn verdict(reports: &[ExperimentReport]) -> CliResult<()> {
    let failed = reports.iter().filter(|r| !r.pass).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::ChecksFailed(failed))
    }
}

/// Default comparison points on the η scale, coordinate m divided by
/// `scales[m]` so every coordinate sits in the bulk of its law.
fn default_points(scales: &[f64]) -> Vec<Vec<f64>> {
    match scales {
        [s] => LATE_LEVELS.iter().map(|l| vec![-l / s]).collect(),
        [s1, s2] => EARLY_LEVELS
            .iter()
            .flat_map(|a| LATE_LEVELS.iter().map(move |b| vec![-a / s1, -b / s2]))
            .collect(),
        _ => (0..5)
            .flat_map(|a| (0..5).map(move |b| (a, b)))
            .map(|(a, b)| {
                scales
                    .iter()
                    .enumerate()
                    .map(|(m, s)| -LATE_LEVELS[(a + b * m) % 5] / s)
                    .collect()
            })
            .collect(),
    }
}

fn sampler_report(a: &SimulateArgs) -> CliResult<ExperimentReport> {
    let trials = a.trials.unwrap_or(10_000);
    if trials == 0 {
        return Err(CliError::Usage("--trials must be positive".into()));
    }
    let n = trials as usize;
    let mut cfg = McConfig::new(a.seed).with_workers(workers(a.workers));
    if let Some(b) = a.budget {
        cfg = cfg.with_budget(b);
    }
    let mut report = if a.experiment == "chain" {
        if a.law.is_some() || a.indices.is_some() {
            return Err(CliError::Usage(
                "the chain sampler takes --lambdas only; its draws are on the log G scale".into(),
            ));
        }
        let lv = parse::lambdas(a.lambdas.as_deref().unwrap_or("1,2"))?;
        let grid = match &a.grid {
            Some(g) => parse::grid(g, lv.dim())?,
            None => default_points(lv.as_slice()),
        };
        let batch = sample_limit_chain(&lv, n, &cfg)?;
        grid_compare(&batch, |p| limit_cdf(&lv, p), &grid)?
            .with_param("lambdas", lv.as_slice().to_vec())
    } else {
        if a.lambdas.is_some() {
            return Err(CliError::Usage(format!("`{}` takes --indices, not --lambdas", a.experiment)));
        }
        let law = parse::law(a.law.as_deref().unwrap_or("negexp"))?;
        let idx = parse::indices(a.indices.as_deref().unwrap_or("2,5"))?;
        let grid = match &a.grid {
            Some(g) => parse::grid(g, idx.dim())?,
            None => {
                let scales: Vec<f64> = idx.indices().iter().map(|&j| f64::from(j)).collect();
                default_points(&scales)
                    .into_iter()
                    .map(|p| p.into_iter().map(|e| from_negexp(&law, e)).collect())
                    .collect::<records_core::Result<_>>()?
            }
        };
        let (batch, rate) = if a.experiment == "bruteforce" {
            (
                simulate_conditional_records_bruteforce(&law, &idx, n, &cfg)?,
                record_event_probability(&idx),
            )
        } else {
            (
                sample_conditional_records_exact(&law, &idx, n, &cfg)?,
                idx.ordering_probability(),
            )
        };
        let mut r = grid_compare(&batch, |p| record_cdf(&law, &idx, p), &grid)?
            .with_param("law", law.to_string())
            .with_param("indices", idx.indices().to_vec());
        r.push(Check::statistical(
            "acceptance_rate",
            rate,
            batch.acceptance_rate(),
            batch.acceptance_stderr(),
        ));
        r.params.insert("n_proposed".into(), json!(batch.n_proposed));
        r
    };
    report.experiment = format!("simulate/{}", a.experiment);
    report.params.insert("trials".into(), json!(trials));
    report.params.insert("workers".into(), json!(cfg.workers));
    Ok(report)
}

pub fn simulate(a: &SimulateArgs) -> CliResult<()> {
    let start = std::time::Instant::now();
    let report = match a.experiment.as_str() {
        "bruteforce" | "exact" | "chain" => sampler_report(a)?,
        name => {
            if a.grid.is_some() || a.budget.is_some() {
                return Err(CliError::Usage(format!(
                    "--grid and --budget apply to the bruteforce, exact and chain samplers, not `{name}`"
                )));
            }
            let mut cfg = VerifyConfig::new(a.seed).with_workers(workers(a.workers));
            if let Some(l) = &a.law {
                cfg = cfg.with_param("law", l.as_str());
            }
            if let Some(i) = &a.indices {
                parse::indices(i)?;
                cfg = cfg.with_param("indices", i.as_str());
            }
            if let Some(l) = &a.lambdas {
                parse::lambdas(l)?;
                cfg = cfg.with_param("lambda", l.as_str());
            }
            if let Some(t) = a.trials {
                cfg = cfg.with_param("trials", t);
            }
            run_experiment(name, &cfg)?
        }
    };
    let report = report.with_runtime_ms(start.elapsed().as_millis() as u64);
    eprintln!("{}", report.summary_line());
    let text = match a.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv if report.grid.is_empty() => report.checks_csv(),
        Format::Csv => report.grid_csv(),
    };
    emit(a.out.as_deref(), &text)?;
    verdict(std::slice::from_ref(&report))
}

pub fn kl(a: &KlArgs) -> CliResult<()> {
    let (j, k) = match (a.j, a.k, &a.indices) {
        (Some(j), Some(k), None) => (j, k),
        (None, None, Some(raw)) => match parse::index_list(raw)?[..] {
            [j, k] => (j, k),
            _ => return Err(CliError::Usage("--indices takes exactly two values".into())),
        },
        _ => return Err(CliError::Usage("give either --j and --k, or --indices j,k".into())),
    };
    let law = parse::law(&a.law)?;
    let exact = kl_closed_form(j, k)?;
    let quad = kl_record_quadrature(&law, j, k)?;
    let gap = (exact.forward - quad.forward)
        .abs()
        .max((exact.reverse - quad.reverse).abs());
    let out = json!({
        "j": j,
        "k": k,
        "law": law.to_string(),
        "forward": exact.forward,
        "reverse": exact.reverse,
        "distance": exact.distance,
        "quadrature_check": {
            "forward": quad.forward,
            "reverse": quad.reverse,
            "distance": quad.distance,
            "max_abs_difference": gap,
        },
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("finite values"));
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> CliResult<()> {
    let names: Vec<String> = if a.experiment.is_empty() {
        suite(&a.suite)?.iter().map(|s| s.to_string()).collect()
    } else {
        a.experiment.clone()
    };
    let cfg = VerifyConfig::new(a.seed).with_workers(workers(a.workers));
    let mut reports = Vec::with_capacity(names.len());
    for name in &names {
        let r = run_experiment(name, &cfg)?;
        eprintln!("{}", r.summary_line());
        reports.push(r);
    }
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&reports).expect("finite values") + "\n",
        Format::Csv => {
            let mut out = String::new();
            for (i, r) in reports.iter().enumerate() {
                let csv = r.checks_csv();
                let body = if i == 0 { &csv[..] } else { csv.split_once('\n').map_or("", |(_, b)| b) };
                out.push_str(body);
            }
            out
        }
    };
    emit(a.out.as_deref(), &text)?;
    verdict(&reports)
}

pub fn converge(a: &ConvergeArgs) -> CliResult<()> {
    let law: BuiltinLaw = parse::law(&a.law)?;
    let lv = parse::lambdas(&a.lambdas)?;
    if lv.dim() != 2 {
        return Err(CliError::Usage(format!("--lambdas takes two values, got {}", lv.dim())));
    }
    let n_list = parse::counts("n-list", &a.n_list)?;
    let grid: Vec<[f64; 2]> = match &a.grid {
        Some(g) => parse::grid(g, 2)?.into_iter().map(|p| [p[0], p[1]]).collect(),
        None => default_grid(),
    };
    let reports = converge_study(&law, &lv, &n_list, &grid)?;
    for r in &reports {
        eprintln!("n={} {}", r.params["n"], r.summary_line());
    }
    let text = match a.format {
        Format::Json => serde_json::to_string_pretty(&reports).expect("finite values") + "\n",
        Format::Csv => {
            let mut out = String::from("n,j,k,a_n,b_n,sup_deviation,pass\n");
            for r in &reports {
                let p = &r.params;
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    p["n"], p["j"], p["k"], p["a_n"], p["b_n"], r.checks[0].estimate, r.pass
                ));
            }
            out
        }
    };
    emit(a.out.as_deref(), &text)?;
    verdict(&reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_points_shapes() {
        assert_eq!(default_points(&[2.0]).len(), 5);
        let pair = default_points(&[2.0, 5.0]);
        assert_eq!(pair.len(), 25);
        assert_eq!(pair[0], vec![-1.2, -0.5]);
        let tri = default_points(&[1.0, 2.0, 3.0]);
        assert_eq!(tri.len(), 25);
        assert!(tri.iter().all(|p| p.len() == 3 && p.iter().all(|&x| x < 0.0)));
    }
}
