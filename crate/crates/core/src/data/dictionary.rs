//! Data dictionary: feature declarations and named feature subsets.
//!
//! The on-disk format is a JSON object with two top-level keys:
//!
//! ```json
//! {
//!   "features": [
//!     {"name": "SEX",  "kind": "categorical", "values": [1, 2]},
//!     {"name": "MSP",  "kind": "ordinal",     "values": ["N", 1, 2, 3, 4, 5, 6]},
//!     {"name": "AGEP", "kind": "numeric",     "range": {"min": 0, "max": 99},
//!      "cuts": [15, 25, 35, 45, 55, 65, 75, 85]},
//!     {"name": "PWGTP","kind": "numeric",     "range": {"min": 1, "max": 9999},
//!      "is_weight": true}
//!   ],
//!   "subsets": {"demographic": ["SEX", "MSP", "AGEP"]}
//! }
//! ```
//!
//! Categorical/ordinal codes may be written as JSON integers or strings;
//! both renderings resolve to the same canonical code, so `"01"` and `1`
//! land in the same domain slot. Ordinal features order their domain by
//! declaration order unless `ordinal_rank` lists the values from lowest to
//! highest. Numeric features may declare explicit `cuts` used whenever a
//! histogram metric needs the feature discretized.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde_json::Value;

use crate::error::DataError;

/// Feature kind as declared in the dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Categorical,
    Ordinal,
    Numeric,
}

/// Value domain of a feature.
#[derive(Debug, Clone, PartialEq)]
pub enum Domain {
    /// Explicit code list (categorical/ordinal). Codes are stored in their
    /// canonical string form.
    Coded(Vec<String>),
    /// Closed numeric range with optional declared cut points for
    /// discretization (cuts strictly inside the range, ascending).
    Numeric {
        min: f64,
        max: f64,
        cuts: Option<Vec<f64>>,
    },
}

/// One feature declaration.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSpec {
    pub name: String,
    pub kind: FeatureKind,
    pub domain: Domain,
    /// For ordinal features: rank of each domain slot (0 = lowest).
    /// Defaults to declaration order.
    pub ordinal_rank: Option<Vec<u32>>,
    /// Sampling-weight features are excluded from metric feature sets.
    pub is_weight: bool,
}

impl FeatureSpec {
    /// Number of domain slots for coded features; `None` for numeric.
    pub fn cardinality(&self) -> Option<usize> {
        match &self.domain {
            Domain::Coded(values) => Some(values.len()),
            Domain::Numeric { .. } => None,
        }
    }

    pub fn is_coded(&self) -> bool {
        matches!(self.domain, Domain::Coded(_))
    }

    /// Rank of a domain slot for ordinal comparison. Declaration order
    /// when no explicit rank was given.
    pub fn rank_of(&self, code: u32) -> u32 {
        match &self.ordinal_rank {
            Some(ranks) => ranks[code as usize],
            None => code,
        }
    }

    /// Resolve a raw cell string to a domain slot.
    ///
    /// Tries an exact match first, then an integer-normalized match so that
    /// `"01"` resolves to a domain value declared as `1` (and vice versa).
    pub fn resolve(&self, raw: &str) -> Option<u32> {
        match &self.domain {
            Domain::Coded(values) => {
                if let Some(ix) = values.iter().position(|v| v == raw) {
                    return Some(ix as u32);
                }
                let as_int: i64 = raw.trim().parse().ok()?;
                values
                    .iter()
                    .position(|v| v.parse::<i64>() == Ok(as_int))
                    .map(|ix| ix as u32)
            }
            Domain::Numeric { .. } => None,
        }
    }
}

/// Validated data dictionary: ordered feature list plus named subsets.
#[derive(Debug, Clone, PartialEq)]
pub struct DataDictionary {
    features: Vec<FeatureSpec>,
    subsets: BTreeMap<String, Vec<String>>,
    by_name: HashMap<String, usize>,
}

impl DataDictionary {
    /// Build a dictionary from parts, checking every invariant.
    pub fn new(
        features: Vec<FeatureSpec>,
        subsets: BTreeMap<String, Vec<String>>,
    ) -> Result<Self, DataError> {
        let mut by_name = HashMap::new();
        for (ix, spec) in features.iter().enumerate() {
            if by_name.insert(spec.name.clone(), ix).is_some() {
                return Err(DataError::DuplicateFeature(spec.name.clone()));
            }
            validate_spec(spec)?;
        }
        for (subset, names) in &subsets {
            for name in names {
                if !by_name.contains_key(name) {
                    return Err(DataError::SubsetUnknownFeature {
                        subset: subset.clone(),
                        feature: name.clone(),
                    });
                }
            }
        }
        Ok(Self {
            features,
            subsets,
            by_name,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self, DataError> {
        let root: Value =
            serde_json::from_str(text).map_err(|e| DataError::Parse(e.to_string()))?;
        parse_dictionary(&root)
    }

    pub fn from_json_path(path: &Path) -> Result<Self, DataError> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn features(&self) -> &[FeatureSpec] {
        &self.features
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn subsets(&self) -> &BTreeMap<String, Vec<String>> {
        &self.subsets
    }

    pub fn feature(&self, name: &str) -> Option<&FeatureSpec> {
        self.by_name.get(name).map(|&ix| &self.features[ix])
    }

    pub fn feature_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn require_index(&self, name: &str) -> Result<usize, DataError> {
        self.feature_index(name)
            .ok_or_else(|| DataError::UnknownFeature(name.to_string()))
    }

    /// Feature names in declaration order.
    pub fn feature_names(&self) -> Vec<&str> {
        self.features.iter().map(|f| f.name.as_str()).collect()
    }

    /// Feature names eligible for metrics: everything not flagged as a
    /// sampling weight, in declaration order.
    pub fn metric_feature_names(&self) -> Vec<&str> {
        self.features
            .iter()
            .filter(|f| !f.is_weight)
            .map(|f| f.name.as_str())
            .collect()
    }

    /// Restrict the dictionary to `names`, in the given order. Subsets that
    /// are no longer fully covered are dropped.
    pub fn restrict(&self, names: &[&str]) -> Result<Self, DataError> {
        if names.is_empty() {
            return Err(DataError::EmptySelection);
        }
        let mut features = Vec::with_capacity(names.len());
        let mut seen = HashMap::new();
        for &name in names {
            if seen.insert(name, ()).is_some() {
                return Err(DataError::DuplicateSelection(name.to_string()));
            }
            let ix = self.require_index(name)?;
            features.push(self.features[ix].clone());
        }
        let subsets = self
            .subsets
            .iter()
            .filter(|(_, members)| members.iter().all(|m| seen.contains_key(m.as_str())))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        Self::new(features, subsets)
    }
}

fn validate_spec(spec: &FeatureSpec) -> Result<(), DataError> {
    match &spec.domain {
        Domain::Coded(values) => {
            if values.is_empty() {
                return Err(DataError::EmptyDomain {
                    feature: spec.name.clone(),
                });
            }
            // Two domain values that normalize to the same integer would
            // make cell resolution ambiguous, so both exact and integer
            // renderings must be unique.
            let mut exact = HashMap::new();
            let mut ints = HashMap::new();
            for value in values {
                if exact.insert(value.as_str(), ()).is_some() {
                    return Err(DataError::DuplicateValue {
                        feature: spec.name.clone(),
                        value: value.clone(),
                    });
                }
                if let Ok(n) = value.parse::<i64>() {
                    if ints.insert(n, ()).is_some() {
                        return Err(DataError::DuplicateValue {
                            feature: spec.name.clone(),
                            value: value.clone(),
                        });
                    }
                }
            }
            if let Some(ranks) = &spec.ordinal_rank {
                if ranks.len() != values.len() {
                    return Err(DataError::InvalidOrdinalRank {
                        feature: spec.name.clone(),
                        detail: format!("{} ranks for {} values", ranks.len(), values.len()),
                    });
                }
                let mut sorted: Vec<u32> = ranks.clone();
                sorted.sort_unstable();
                if sorted.iter().enumerate().any(|(i, &r)| r != i as u32) {
                    return Err(DataError::InvalidOrdinalRank {
                        feature: spec.name.clone(),
                        detail: "ranks are not a permutation of 0..n".to_string(),
                    });
                }
            }
        }
        Domain::Numeric { min, max, cuts } => {
            if !(min <= max) {
                return Err(DataError::InvalidRange {
                    feature: spec.name.clone(),
                    min: *min,
                    max: *max,
                });
            }
            if let Some(cuts) = cuts {
                if cuts.windows(2).any(|w| !(w[0] < w[1])) {
                    return Err(DataError::Parse(format!(
                        "feature `{}`: cuts must be strictly ascending",
                        spec.name
                    )));
                }
            }
            if spec.ordinal_rank.is_some() {
                return Err(DataError::InvalidOrdinalRank {
                    feature: spec.name.clone(),
                    detail: "numeric features cannot carry ordinal_rank".to_string(),
                });
            }
        }
    }
    Ok(())
}

// --- JSON parsing ----------------------------------------------------------

/// Canonical string form of a domain code written as a JSON string or int.
fn canon_code(v: &Value) -> Result<String, DataError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(n.to_string()),
        other => Err(DataError::Parse(format!(
            "domain value must be a string or integer, got {other}"
        ))),
    }
}

fn as_f64(v: &Value, what: &str) -> Result<f64, DataError> {
    v.as_f64()
        .ok_or_else(|| DataError::Parse(format!("{what} must be a number, got {v}")))
}

fn parse_dictionary(root: &Value) -> Result<DataDictionary, DataError> {
    let obj = root
        .as_object()
        .ok_or_else(|| DataError::Parse("dictionary root must be an object".to_string()))?;
    let features_val = obj
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| DataError::Parse("missing `features` array".to_string()))?;

    let mut features = Vec::with_capacity(features_val.len());
    for fv in features_val {
        features.push(parse_feature(fv)?);
    }

    let mut subsets = BTreeMap::new();
    if let Some(subsets_val) = obj.get("subsets") {
        let map = subsets_val
            .as_object()
            .ok_or_else(|| DataError::Parse("`subsets` must be an object".to_string()))?;
        for (name, members) in map {
            let arr = members.as_array().ok_or_else(|| {
                DataError::Parse(format!("subset `{name}` must be an array of feature names"))
            })?;
            let names = arr
                .iter()
                .map(|m| {
                    m.as_str().map(str::to_string).ok_or_else(|| {
                        DataError::Parse(format!("subset `{name}` entries must be strings"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            subsets.insert(name.clone(), names);
        }
    }

    DataDictionary::new(features, subsets)
}

fn parse_feature(fv: &Value) -> Result<FeatureSpec, DataError> {
    let obj = fv
        .as_object()
        .ok_or_else(|| DataError::Parse("feature entry must be an object".to_string()))?;
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| DataError::Parse("feature missing `name`".to_string()))?
        .to_string();
    let kind = match obj.get("kind").and_then(Value::as_str) {
        Some("categorical") => FeatureKind::Categorical,
        Some("ordinal") => FeatureKind::Ordinal,
        Some("numeric") => FeatureKind::Numeric,
        other => {
            return Err(DataError::Parse(format!(
                "feature `{name}`: kind must be categorical|ordinal|numeric, got {other:?}"
            )))
        }
    };
    let is_weight = obj
        .get("is_weight")
        .and_then(Value::as_bool)
        .unwrap_or(false);

    let domain = match kind {
        FeatureKind::Categorical | FeatureKind::Ordinal => {
            let values = obj.get("values").and_then(Value::as_array).ok_or_else(|| {
                DataError::Parse(format!("feature `{name}`: missing `values` array"))
            })?;
            Domain::Coded(
                values
                    .iter()
                    .map(canon_code)
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
        FeatureKind::Numeric => {
            let range = obj.get("range").and_then(Value::as_object).ok_or_else(|| {
                DataError::Parse(format!("feature `{name}`: missing `range` object"))
            })?;
            let min = as_f64(
                range
                    .get("min")
                    .ok_or_else(|| DataError::Parse(format!("feature `{name}`: missing min")))?,
                "range.min",
            )?;
            let max = as_f64(
                range
                    .get("max")
                    .ok_or_else(|| DataError::Parse(format!("feature `{name}`: missing max")))?,
                "range.max",
            )?;
            let cuts = match obj.get("cuts") {
                None | Some(Value::Null) => None,
                Some(Value::Array(arr)) => Some(
                    arr.iter()
                        .map(|c| as_f64(c, "cut"))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
                Some(other) => {
                    return Err(DataError::Parse(format!(
                        "feature `{name}`: `cuts` must be an array, got {other}"
                    )))
                }
            };
            Domain::Numeric { min, max, cuts }
        }
    };

    // ordinal_rank lists the domain values from lowest to highest.
    let ordinal_rank = match obj.get("ordinal_rank") {
        None | Some(Value::Null) => None,
        Some(Value::Array(arr)) => {
            let ordered = arr
                .iter()
                .map(canon_code)
                .collect::<Result<Vec<_>, _>>()?;
            let Domain::Coded(values) = &domain else {
                return Err(DataError::InvalidOrdinalRank {
                    feature: name,
                    detail: "numeric features cannot carry ordinal_rank".to_string(),
                });
            };
            let mut ranks = vec![u32::MAX; values.len()];
            for (rank, value) in ordered.iter().enumerate() {
                let slot = values.iter().position(|v| v == value).ok_or_else(|| {
                    DataError::InvalidOrdinalRank {
                        feature: name.clone(),
                        detail: format!("`{value}` is not a domain value"),
                    }
                })?;
                if ranks[slot] != u32::MAX {
                    return Err(DataError::InvalidOrdinalRank {
                        feature: name.clone(),
                        detail: format!("`{value}` listed twice"),
                    });
                }
                ranks[slot] = rank as u32;
            }
            if ranks.contains(&u32::MAX) {
                return Err(DataError::InvalidOrdinalRank {
                    feature: name,
                    detail: "ordinal_rank does not cover the whole domain".to_string(),
                });
            }
            Some(ranks)
        }
        Some(other) => {
            return Err(DataError::Parse(format!(
                "feature `{name}`: `ordinal_rank` must be an array, got {other}"
            )))
        }
    };

    Ok(FeatureSpec {
        name,
        kind,
        domain,
        ordinal_rank,
        is_weight,
    })
}
