use clap::ValueEnum;
use serde_json::{json, Map, Value};

use records_core::exact::{
    pair_marginal_early, pair_marginal_late, pair_record_cdf, pair_record_pdf, record_cdf,
    record_event_probability, single_record_cdf, single_record_pdf,
};
use records_core::kl::kl_closed_form;
use records_core::law::{norming_constants, quantile};
use records_core::limits::{
    conditional_exceedance_limit, expected_sq_gap_as_published, limit_cdf, limit_increments_cdf,
    limit_pair_cdf_general, limit_pair_marginals, limit_pair_moments, limit_record_increment_joint,
    limit_triple_cdf, limit_triple_cdf_printed_branch, limit_triple_cov,
};
use records_core::specfun::{digamma, kolmogorov_limit_cdf};
use records_core::{BuiltinLaw, LambdaVector, Law, RecordIndexSet};

use crate::args::{EvalArgs, EvalFormat, EvalOp, Family};
use crate::parse::{self, CliError, CliResult};

struct Ctx<'a> {
    args: &'a EvalArgs,
    law: BuiltinLaw,
    extra: Map<String, Value>,
}

impl Ctx<'_> {
    fn xs(&self) -> CliResult<Vec<f64>> {
        parse::numbers("x", parse::required("x", &self.args.x)?)
    }

    fn ys(&self) -> CliResult<Vec<f64>> {
        parse::numbers("y", parse::required("y", &self.args.y)?)
    }

    fn scalar(flag: &str, v: Vec<f64>) -> CliResult<f64> {
        match v[..] {
            [x] => Ok(x),
            _ => Err(CliError::Usage(format!("--{flag} takes one number, got {}", v.len()))),
        }
    }

    fn x(&self) -> CliResult<f64> {
        Self::scalar("x", self.xs()?)
    }

    fn y(&self) -> CliResult<f64> {
        Self::scalar("y", self.ys()?)
    }

    fn indices(&self, dim: Option<usize>) -> CliResult<RecordIndexSet> {
        let idx = parse::indices(parse::required("indices", &self.args.indices)?)?;
        match dim {
            Some(d) if idx.dim() != d => Err(CliError::Usage(format!(
                "this operation takes {d} indices, got {}",
                idx.dim()
            ))),
            _ => Ok(idx),
        }
    }

    fn pair(&self) -> CliResult<(u32, u32)> {
        let idx = self.indices(Some(2))?;
        Ok((idx.indices()[0], idx.indices()[1]))
    }

    fn lambdas(&self, dim: Option<usize>) -> CliResult<LambdaVector> {
        let lv = parse::lambdas(parse::required("lambdas", &self.args.lambdas)?)?;
        match dim {
            Some(d) if lv.dim() != d => Err(CliError::Usage(format!(
                "this operation takes {d} intensities, got {}",
                lv.dim()
            ))),
            _ => Ok(lv),
        }
    }

    /// Limit-law arguments on the scale of the chosen law, moved to log G.
    fn log_g(&self, ys: &[f64]) -> Vec<f64> {
        ys.iter().map(|&y| self.law.log_cdf(y).max(-1e6)).collect()
    }

    fn limit_only(&self) -> CliResult<()> {
        if self.args.law_family != Family::Limit {
            return Err(CliError::Usage(format!(
                "`{}` needs --law-family limit",
                op_name(self.args.op)
            )));
        }
        Ok(())
    }

    fn finite_only(&self) -> CliResult<()> {
        if self.args.law_family != Family::Finite {
            return Err(CliError::Usage(format!(
                "`{}` has no limit version",
                op_name(self.args.op)
            )));
        }
        Ok(())
    }

    fn evaluate(&mut self) -> CliResult<Value> {
        let law = self.law;
        let limit = self.args.law_family == Family::Limit;
        let v = match self.args.op {
            EvalOp::Cdf => {
                let xs = self.xs()?;
                if limit {
                    json!(limit_cdf(&self.lambdas(None)?, &self.log_g(&xs))?)
                } else {
                    json!(record_cdf(&law, &self.indices(None)?, &xs)?)
                }
            }
            EvalOp::SingleCdf => {
                self.finite_only()?;
                let n = self.indices(Some(1))?.indices()[0];
                json!(single_record_cdf(&law, n, self.x()?)?)
            }
            EvalOp::SinglePdf => {
                self.finite_only()?;
                let n = self.indices(Some(1))?.indices()[0];
                json!(single_record_pdf(&law, n, self.x()?)?)
            }
            EvalOp::PairCdf => {
                let xs = self.xs()?;
                if xs.len() != 2 {
                    return Err(CliError::Usage(format!("--x takes 2 numbers, got {}", xs.len())));
                }
                if limit {
                    json!(limit_pair_cdf_general(&law, &self.lambdas(Some(2))?, xs[0], xs[1])?)
                } else {
                    let (j, k) = self.pair()?;
                    json!(pair_record_cdf(&law, j, k, xs[0], xs[1])?)
                }
            }
            EvalOp::PairPdf => {
                self.finite_only()?;
                let (j, k) = self.pair()?;
                json!(pair_record_pdf(&law, j, k, self.x()?)?)
            }
            EvalOp::TripleCdf => {
                let xs = self.xs()?;
                if xs.len() != 3 {
                    return Err(CliError::Usage(format!("--x takes 3 numbers, got {}", xs.len())));
                }
                if limit {
                    let lv = self.lambdas(Some(3))?;
                    let x = self.log_g(&xs);
                    let printed = limit_triple_cdf_printed_branch(&lv, x[0], x[1], x[2])?;
                    self.extra.insert("printed_branch".into(), json!(printed));
                    json!(limit_triple_cdf(&lv, x[0], x[1], x[2])?)
                } else {
                    json!(record_cdf(&law, &self.indices(Some(3))?, &xs)?)
                }
            }
            EvalOp::Marginals => {
                let x = self.x()?;
                let (early, late) = if limit {
                    limit_pair_marginals(&self.lambdas(Some(2))?, self.log_g(&[x])[0])?
                } else {
                    let (j, k) = self.pair()?;
                    let e = self.log_g(&[x])[0];
                    (pair_marginal_early(j, k, e)?, pair_marginal_late(j, k, e)?)
                };
                json!({ "early": early, "late": late })
            }
            EvalOp::EventProbability => {
                self.finite_only()?;
                let idx = self.indices(None)?;
                self.extra
                    .insert("ordering_probability".into(), json!(idx.ordering_probability()));
                json!(record_event_probability(&idx))
            }
            EvalOp::Moments => {
                self.limit_only()?;
                let lv = self.lambdas(Some(2))?;
                let m = limit_pair_moments(&lv)?;
                self.extra.insert(
                    "expected_sq_gap_as_published".into(),
                    json!(expected_sq_gap_as_published(&lv)?),
                );
                json!({
                    "mean_early": m.mean_early,
                    "mean_late": m.mean_late,
                    "var_early": m.var_early,
                    "var_late": m.var_late,
                    "covariance": m.covariance,
                    "correlation": m.correlation,
                    "expected_sq_gap": m.expected_sq_gap,
                })
            }
            EvalOp::TripleCov => {
                self.limit_only()?;
                json!(limit_triple_cov(&self.lambdas(Some(3))?)?)
            }
            EvalOp::Exceedance => {
                self.limit_only()?;
                let u = self
                    .args
                    .u
                    .ok_or_else(|| CliError::Usage("--u is required here".into()))?;
                json!(conditional_exceedance_limit(&law, &self.lambdas(Some(2))?, u, self.y()?)?)
            }
            EvalOp::IncrementsCdf => {
                self.limit_only()?;
                json!(limit_increments_cdf(&self.lambdas(None)?, &self.ys()?)?)
            }
            EvalOp::IncrementJoint => {
                self.limit_only()?;
                let x = self.log_g(&[self.x()?])[0];
                json!(limit_record_increment_joint(&self.lambdas(Some(2))?, x, self.y()?)?)
            }
            EvalOp::Kl => {
                self.finite_only()?;
                let (j, k) = self.pair()?;
                let r = kl_closed_form(j, k)?;
                json!({ "forward": r.forward, "reverse": r.reverse, "distance": r.distance })
            }
            EvalOp::Quantile => {
                let q = self
                    .args
                    .q
                    .ok_or_else(|| CliError::Usage("--q is required here".into()))?;
                json!(quantile(&law, q)?)
            }
            EvalOp::Norming => {
                let n = self
                    .args
                    .n
                    .ok_or_else(|| CliError::Usage("--n is required here".into()))?;
                let c = norming_constants(&law, n)?;
                json!({
                    "scale": c.scale,
                    "shift": c.shift,
                    "alpha": c.alpha,
                    "limit": c.limit.to_string(),
                })
            }
            EvalOp::Digamma => json!(digamma(self.x()?)?),
            EvalOp::Kolmogorov => json!(kolmogorov_limit_cdf(self.x()?)?),
        };
        Ok(v)
    }
}

fn op_name(op: EvalOp) -> String {
    op.to_possible_value()
        .map(|p| p.get_name().to_string())
        .unwrap_or_default()
}

pub fn run(args: &EvalArgs) -> CliResult<()> {
    let mut ctx = Ctx {
        args,
        law: parse::law(&args.law)?,
        extra: Map::new(),
    };
    let value = ctx.evaluate()?;
    match args.format {
        EvalFormat::Text => match &value {
            Value::Number(n) => println!("{n}"),
            other => println!("{other}"),
        },
        EvalFormat::Json => {
            let mut out = Map::new();
            out.insert("op".into(), json!(op_name(args.op)));
            out.insert(
                "family".into(),
                json!(match args.law_family {
                    Family::Finite => "finite",
                    Family::Limit => "limit",
                }),
            );
            out.insert("law".into(), json!(ctx.law.to_string()));
            for (key, raw) in [
                ("indices", &args.indices),
                ("lambdas", &args.lambdas),
                ("x", &args.x),
                ("y", &args.y),
            ] {
                if let Some(r) = raw {
                    out.insert(key.into(), json!(parse::numbers(key, r)?));
                }
            }
            if let Some(u) = args.u {
                out.insert("u".into(), json!(u));
            }
            if let Some(q) = args.q {
                out.insert("q".into(), json!(q));
            }
            if let Some(n) = args.n {
                out.insert("n".into(), json!(n));
            }
            out.insert("value".into(), value);
            out.extend(ctx.extra);
            println!("{}", serde_json::to_string_pretty(&Value::Object(out)).expect("finite values"));
        }
    }
    Ok(())
}
