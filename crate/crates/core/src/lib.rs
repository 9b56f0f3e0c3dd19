//! Patent renewal value model.
//!
//! Patentees renew while the discounted one-year return covers the fee, so
//! observed expiry ages reveal bounds on each patent's (lognormal) initial
//! return. This crate fits that model to renewal records by genetic-algorithm
//! maximum likelihood, then simulates per-patent initial returns, lifetime
//! values and parameter-uncertainty bands, and renders summary tables.
//!
//! Module map:
//!
//! - [`fee_schedule`]: age-indexed renewal fees, built-in India/China/US tables
//! - [`model`]: depreciation, the one-year discount factor, thresholds, β·X
//! - [`likelihood`]: expiry-age probabilities and the sample log-likelihood
//! - [`estimator`]: real-coded GA with multi-start pooling and elite aggregation
//! - [`simulate`]: truncated-normal Monte Carlo, NPV and ensemble bands
//! - [`data`]: record ingestion, synthetic cohorts, descriptive statistics
//! - [`report`]: expiry-share, value-by-group and quantile tables
//! - [`pipeline`]: the `estimate`, `value` and `synth` commands behind the CLI

pub mod data;
pub mod error;
pub mod estimator;
pub mod fee_schedule;
pub mod likelihood;
pub mod model;
pub mod normal;
pub mod pipeline;
pub mod report;
pub mod seeding;
pub mod simulate;
pub mod stats;

pub use data::{parse_records, CovariateSpec, PatentRecord};
pub use error::{Error, Result};
pub use fee_schedule::{builtin_schedule, load_schedule, FeeSchedule};
pub use likelihood::{expiry_pmf, log_likelihood, ThresholdTable};
pub use model::{Beta, CovariateVector, ModelConfig, ModelParams, Ownership, TechField};
pub use estimator::{estimate, EstimationResult, GaConfig, ParamBounds};
pub use simulate::{ValueConfig, ValueEstimate};
