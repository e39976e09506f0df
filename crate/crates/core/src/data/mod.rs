//! Tabular datasets and their data dictionaries.
//!
//! A [`DataDictionary`] declares every feature's kind and value domain; a
//! [`Dataset`] is an immutable columnar table validated against its
//! dictionary. Datasets are cheap to share and to restrict to feature
//! subsets, which is what every metric in the crate consumes.

mod dataset;
mod dictionary;

pub use dataset::{Column, Dataset, Fingerprint, SubgroupSelector};
pub use dictionary::{DataDictionary, Domain, FeatureKind, FeatureSpec};
