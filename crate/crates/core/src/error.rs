//! Error types shared across the crate.
//!
//! [`DataError`] covers loading and validation of dictionaries, datasets,
//! selectors, and rule files. [`MetricError`] covers metric preconditions
//! and degenerate inputs discovered while computing. The CLI maps the two
//! onto distinct exit codes.

use thiserror::Error;

/// Load/validation failures for dictionaries, datasets, and selectors.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("duplicate feature `{0}`")]
    DuplicateFeature(String),

    #[error("feature `{feature}`: duplicate domain value `{value}`")]
    DuplicateValue { feature: String, value: String },

    #[error("feature `{feature}`: domain is empty")]
    EmptyDomain { feature: String },

    #[error("feature `{feature}`: numeric range has min {min} > max {max}")]
    InvalidRange { feature: String, min: f64, max: f64 },

    #[error("feature `{feature}`: ordinal_rank is not a total order over the domain ({detail})")]
    InvalidOrdinalRank { feature: String, detail: String },

    #[error("subset `{subset}` references unknown feature `{feature}`")]
    SubsetUnknownFeature { subset: String, feature: String },

    #[error("unknown feature `{0}`")]
    UnknownFeature(String),

    #[error("unknown column `{0}`")]
    UnknownColumn(String),

    #[error("row {row}, column `{column}`: value `{value}` is out of domain")]
    OutOfDomain {
        row: usize,
        column: String,
        value: String,
    },

    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("empty file")]
    EmptyFile,

    #[error("empty feature selection")]
    EmptySelection,

    #[error("feature `{0}` selected more than once")]
    DuplicateSelection(String),

    #[error("selector value `{value}` is not in the domain of feature `{feature}`")]
    SelectorValue { feature: String, value: String },

    #[error("csv: {0}")]
    Csv(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

/// Metric precondition and degeneracy failures.
#[derive(Debug, Error)]
pub enum MetricError {
    #[error("dataset is empty")]
    EmptyDataset,

    #[error("empty schema")]
    EmptySchema,

    #[error("schema mismatch: `{left}` vs `{right}`")]
    SchemaMismatch { left: String, right: String },

    #[error("target and deidentified datasets have different dictionaries")]
    DictionaryMismatch,

    #[error("numeric feature `{0}` has no declared cut points")]
    MissingDiscretization(String),

    #[error("histogram has zero total")]
    ZeroTotal,

    #[error("feature `{0}` is degenerate (zero entropy)")]
    DegenerateFeature(String),

    #[error("entropy mismatch: H={left:.6} vs H={right:.6} exceeds relative tolerance {tolerance}")]
    EntropyMismatch {
        left: f64,
        right: f64,
        tolerance: f64,
    },

    #[error("k={k} exceeds usable feature count {available}")]
    KTooLarge { k: usize, available: usize },

    #[error("feature `{0}` appears in both the group features and always_include")]
    DuplicateMarginalFeature(String),

    #[error("calibration is flat: every subsample fraction scored {0}")]
    FlatCalibration(u32),

    #[error("fractions must be strictly increasing within (0,1)")]
    InvalidFractions,

    #[error("fraction {0} is outside (0,1]")]
    InvalidFraction(f64),

    #[error("subsample would contain 0 rows")]
    EmptySubsample,

    #[error("swap rate {0} is outside [0,1]")]
    InvalidRate(f64),

    #[error("feature list is empty")]
    EmptyFeatureList,

    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),

    #[error("contingency table would need {cells} cells, cap is {cap}")]
    TooManyCells { cells: u128, cap: u64 },

    #[error("feature `{0}` is already part of the schema")]
    FeatureInSchema(String),

    #[error("feature `{0}` must be categorical or ordinal here")]
    NotCoded(String),

    #[error("feature `{0}` must be ordinal or numeric here")]
    NotOrdered(String),

    #[error("x and y must be different features")]
    SameFeature,

    #[error("subgroup selects no rows")]
    EmptySubgroup,

    #[error("need at least {needed} features, got {got}")]
    TooFewFeatures { needed: usize, got: usize },

    #[error("comparator `{op}` is not valid for categorical feature `{feature}`")]
    InvalidComparator { feature: String, op: String },

    #[error("need at least {needed} rows, got {got}")]
    TooFewRows { needed: usize, got: usize },

    #[error(transparent)]
    Data(#[from] DataError),
}
