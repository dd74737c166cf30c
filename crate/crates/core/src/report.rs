//! Versioned experiment reports shared by the verification registry, the
//! convergence study and the command-line front end.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::mc::StreamUsage;

pub const REPORT_SCHEMA: u32 = 1;

/// |z| threshold for statistical checks.
pub const Z_LIMIT: f64 = 3.0;

/// Stand-in for an infinite z so every report stays valid JSON.
const Z_CAP: f64 = 1e300;

/// Library version stamped into reports.
pub fn library_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    /// Passes iff |z| ≤ 3.
    Statistical,
    /// Passes iff |theory − estimate| ≤ tolerance.
    Deterministic,
    /// Passes iff estimate > theory (p-value style lower bounds).
    LowerBound,
    /// Passes iff estimate ≤ theory.
    UpperBound,
}

/// One verified quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub kind: CheckKind,
    pub theory: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub z: f64,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

pub(crate) fn z_score(theory: f64, estimate: f64, stderr: f64) -> f64 {
    let dev = estimate - theory;
    if stderr > 0.0 {
        (dev / stderr).clamp(-Z_CAP, Z_CAP)
    } else if dev == 0.0 {
        0.0
    } else {
        Z_CAP.copysign(dev)
    }
}

impl Check {
    pub fn statistical(name: impl Into<String>, theory: f64, estimate: f64, stderr: f64) -> Self {
        let z = z_score(theory, estimate, stderr);
        Check {
            name: name.into(),
            kind: CheckKind::Statistical,
            theory,
            estimate,
            stderr,
            z,
            tolerance: None,
            pass: z.abs() <= Z_LIMIT,
        }
    }

    pub fn deterministic(name: impl Into<String>, theory: f64, estimate: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            kind: CheckKind::Deterministic,
            theory,
            estimate,
            stderr: 0.0,
            z: 0.0,
            tolerance: Some(tolerance),
            pass: (theory - estimate).abs() <= tolerance,
        }
    }

    /// `estimate` must strictly exceed `bound` (e.g. a KS p-value over 0.01).
    pub fn at_least(name: impl Into<String>, bound: f64, estimate: f64) -> Self {
        Check {
            name: name.into(),
            kind: CheckKind::LowerBound,
            theory: bound,
            estimate,
            stderr: 0.0,
            z: 0.0,
            tolerance: None,
            pass: estimate > bound,
        }
    }

    /// `estimate` must not exceed `bound` (runtimes, final deviations).
    pub fn at_most(name: impl Into<String>, bound: f64, estimate: f64) -> Self {
        Check {
            name: name.into(),
            kind: CheckKind::UpperBound,
            theory: bound,
            estimate,
            stderr: 0.0,
            z: 0.0,
            tolerance: None,
            pass: estimate <= bound,
        }
    }

    /// A boolean property, recorded as 1 = holds.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Check::deterministic(name, 1.0, if ok { 1.0 } else { 0.0 }, 0.0)
    }
}

/// A pointwise comparison between an empirical and a theoretical cdf.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridRow {
    pub point: Vec<f64>,
    pub theory: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub z: f64,
}

/// A reference value that disagrees with the implemented one. The verdict
/// always uses the implemented value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub quantity: String,
    pub reference_value: f64,
    pub implemented_value: f64,
    /// Simulation or quadrature estimate of the same quantity, when available.
    pub estimate: Option<f64>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub experiment: String,
    pub params: BTreeMap<String, Value>,
    /// Headline quantity: the first failing check, or the first check.
    pub theory: f64,
    pub estimate: f64,
    pub stderr: f64,
    pub z: f64,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub runtime_ms: u64,
    pub seed: u64,
    pub rng: Vec<StreamUsage>,
    pub version: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<GridRow>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<Discrepancy>,
}

impl ExperimentReport {
    /// Builds a report from its checks; `pass` is the conjunction.
    pub fn from_checks(experiment: impl Into<String>, checks: Vec<Check>) -> Self {
        let head = checks
            .iter()
            .find(|c| !c.pass)
            .or_else(|| checks.first())
            .cloned();
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        let (theory, estimate, stderr, z, tolerance) = head.map_or((0.0, 0.0, 0.0, 0.0, None), |c| {
            (c.theory, c.estimate, c.stderr, c.z, c.tolerance)
        });
        ExperimentReport {
            schema: REPORT_SCHEMA,
            experiment: experiment.into(),
            params: BTreeMap::new(),
            theory,
            estimate,
            stderr,
            z,
            tolerance,
            pass,
            runtime_ms: 0,
            seed: 0,
            rng: Vec::new(),
            version: library_version().to_string(),
            checks,
            grid: Vec::new(),
            discrepancy: None,
        }
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_rng(mut self, usage: StreamUsage) -> Self {
        self.rng.push(usage);
        self
    }

    pub fn with_discrepancy(mut self, d: Discrepancy) -> Self {
        self.discrepancy = Some(d);
        self
    }

    pub fn with_runtime_ms(mut self, ms: u64) -> Self {
        self.runtime_ms = ms;
        self
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
        self.refresh();
    }

    /// Appends another report's checks (prefixed) and rows.
    pub fn absorb(&mut self, prefix: &str, other: ExperimentReport) {
        for mut c in other.checks {
            c.name = format!("{prefix}/{}", c.name);
            self.checks.push(c);
        }
        self.grid.extend(other.grid);
        self.rng.extend(other.rng);
        self.refresh();
    }

    fn refresh(&mut self) {
        let refreshed = ExperimentReport::from_checks(self.experiment.clone(), self.checks.clone());
        self.theory = refreshed.theory;
        self.estimate = refreshed.estimate;
        self.stderr = refreshed.stderr;
        self.z = refreshed.z;
        self.tolerance = refreshed.tolerance;
        self.pass = refreshed.pass;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports hold only finite numbers")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// One CSV row per grid point: x1..xd, theory, estimate, stderr, z.
    pub fn grid_csv(&self) -> String {
        let dim = self.grid.first().map_or(0, |r| r.point.len());
        let mut out = String::new();
        let header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
        out.push_str(&header.join(","));
        if dim > 0 {
            out.push(',');
        }
        out.push_str("theory,estimate,stderr,z\n");
        for r in &self.grid {
            for p in &r.point {
                out.push_str(&format!("{p},"));
            }
            out.push_str(&format!("{},{},{},{}\n", r.theory, r.estimate, r.stderr, r.z));
        }
        out
    }

    /// One CSV row per check.
    pub fn checks_csv(&self) -> String {
        let mut out = String::from("experiment,check,kind,theory,estimate,stderr,z,tolerance,pass\n");
        for c in &self.checks {
            let kind = serde_json::to_value(c.kind).ok();
            let kind = kind.as_ref().and_then(Value::as_str).unwrap_or("");
            let tol = c.tolerance.map(|t| t.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                self.experiment, c.name, kind, c.theory, c.estimate, c.stderr, c.z, tol, c.pass
            ));
        }
        out
    }

    /// `PASS name: detail` summary line.
    pub fn summary_line(&self) -> String {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        let failing: Vec<&str> = self.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        let mut line = format!(
            "{verdict} {}: {} checks, headline theory={:.6} estimate={:.6}",
            self.experiment,
            self.checks.len(),
            self.theory,
            self.estimate
        );
        if !failing.is_empty() {
            line.push_str(&format!(", failing: {}", failing.join(" ")));
        }
        if let Some(d) = &self.discrepancy {
            line.push_str(&format!(
                " [known discrepancy in {}: reference {} vs implemented {}]",
                d.quantity, d.reference_value, d.implemented_value
            ));
        }
        line
    }
}
