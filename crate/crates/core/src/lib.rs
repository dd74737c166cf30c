//! Exact finite-index and limiting laws of record values observed at
//! prescribed indices, Kullback–Leibler divergences between record
//! densities, and Monte Carlo oracles that check every closed form.
//!
//! All closed forms are written for the standard negative exponential law
//! F(x) = eˣ on x ≤ 0; other continuous laws are reached through the
//! probability integral transform (see [`law`]).

pub mod converge;
pub mod error;
pub mod exact;
pub mod kl;
pub mod law;
pub mod limits;
pub mod mc;
pub mod quad;
pub mod report;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use exact::RecordIndexSet;
pub use kl::KlResult;
pub use law::{BuiltinLaw, CdfLaw, Law, Norming};
pub use limits::LambdaVector;
pub use mc::{McConfig, RngStreamSpec, SampleBatch};
pub use report::{Check, ExperimentReport};
pub use verify::VerifyConfig;
