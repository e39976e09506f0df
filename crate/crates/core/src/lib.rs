//! Metrics and baselines for evaluating deidentified tabular data.
//!
//! The crate compares a deidentified dataset against the target (ground
//! truth) data it was derived from, and reports fidelity, utility, and
//! privacy metrics:
//!
//! - **Fidelity**: univariate distributions, pairwise correlation
//!   differences, the k-marginal similarity score (0–1000), and its
//!   equivalent-subsample calibration.
//! - **Utility tasks**: propensity distinguishability and subgroup
//!   linear-regression comparison with deviation heatmaps.
//! - **Structure**: pairwise PCA comparison and configurable record
//!   consistency rules.
//! - **Privacy**: the unique exact match leak metric.
//! - **Dispersal analysis**: empirical entropy, uncertainty coefficient,
//!   dispersal ratios with information-theoretic bounds, and subgroup
//!   dispersal profiles.
//!
//! Baseline deidentifiers (identity, subsampling, record swapping, DP
//! histogram) make every metric exercisable end to end from synthetic
//! inputs. All randomized computations take explicit seeds and produce
//! identical results regardless of worker count.

pub mod data;
pub mod deid;
pub mod dispersal;
pub mod error;
pub mod fidelity;
pub mod partition;
pub mod privacy;
pub mod report;
pub mod seed;
pub mod structure;
pub mod synth;
pub mod tasks;

pub use data::{DataDictionary, Dataset, FeatureKind, FeatureSpec, SubgroupSelector};
pub use error::{DataError, MetricError};
pub use partition::{BinKey, Density, Histogram};
// pub use report::{EvaluationOutput, EvaluationReport, RunConfig};
