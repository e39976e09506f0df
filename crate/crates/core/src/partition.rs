//! Table-based partitioning: histograms over feature schemas, marginal
//! densities, and the total-variation distance between them.
//!
//! Every record is assigned a [`BinKey`] — the tuple of its values over a
//! schema (ordered feature list). Coded features contribute their domain
//! slot; numeric features must be discretized, either through cut points
//! declared in the dictionary or through the default equal-width rule of
//! [`BinningPlan::with_default_cuts`]. Only occupied bins are stored, and
//! all iteration is in sorted key order so results do not depend on hash
//! order or worker count.

use std::collections::BTreeMap;

use crate::data::{Column, DataDictionary, Dataset, Domain};
use crate::error::MetricError;

/// Ordered tuple of per-feature bin indices over a schema.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BinKey(pub Vec<u32>);

/// Occupied-bin counts over a schema. `total` equals the binned row count.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub schema: Vec<String>,
    pub counts: BTreeMap<BinKey, u64>,
    pub total: u64,
}

/// Normalized histogram; probabilities sum to 1 over the occupied support.
#[derive(Debug, Clone, PartialEq)]
pub struct Density {
    pub schema: Vec<String>,
    pub probabilities: BTreeMap<BinKey, f64>,
    pub support_size: usize,
}

/// How each schema feature maps a row to a bin index.
#[derive(Debug, Clone)]
enum FeatureBinning {
    /// Domain slot of a coded feature.
    Coded { col: usize },
    /// Numeric feature with ascending cut points; bin = number of cuts
    /// strictly below the value.
    Cut { col: usize, cuts: Vec<f64> },
}

/// Pre-resolved binning for a schema against a dictionary.
#[derive(Debug, Clone)]
pub struct BinningPlan {
    schema: Vec<String>,
    features: Vec<FeatureBinning>,
}

impl BinningPlan {
    /// Strict plan: numeric features must carry declared cut points.
    pub fn strict(dict: &DataDictionary, schema: &[&str]) -> Result<Self, MetricError> {
        Self::build(dict, schema, |name, _| {
            Err(MetricError::MissingDiscretization(name.to_string()))
        })
    }

    /// Plan that falls back to equal-width cuts over the declared range for
    /// numeric features without declared cuts. The bin count is
    /// `min(10, distinct)` where `distinct` counts the feature's observed
    /// values across `datasets`, so paired datasets share one discretizer.
    pub fn with_default_cuts(
        dict: &DataDictionary,
        schema: &[&str],
        datasets: &[&Dataset],
    ) -> Result<Self, MetricError> {
        Self::build(dict, schema, |name, (min, max)| {
            let mut distinct: Vec<u64> = Vec::new();
            for ds in datasets {
                if let Ok(Column::Numeric(vals)) = ds.column_by_name(name) {
                    distinct.extend(vals.iter().map(|v| v.to_bits()));
                }
            }
            distinct.sort_unstable();
            distinct.dedup();
            let nbins = distinct.len().clamp(1, 10);
            let width = (max - min) / nbins as f64;
            Ok((1..nbins).map(|i| min + width * i as f64).collect())
        })
    }

    fn build(
        dict: &DataDictionary,
        schema: &[&str],
        mut default_cuts: impl FnMut(&str, (f64, f64)) -> Result<Vec<f64>, MetricError>,
    ) -> Result<Self, MetricError> {
        if schema.is_empty() {
            return Err(MetricError::EmptySchema);
        }
        let mut features = Vec::with_capacity(schema.len());
        for &name in schema {
            let col = dict.require_index(name)?;
            match &dict.features()[col].domain {
                Domain::Coded(_) => features.push(FeatureBinning::Coded { col }),
                Domain::Numeric { min, max, cuts } => {
                    let cuts = match cuts {
                        Some(c) => c.clone(),
                        None => default_cuts(name, (*min, *max))?,
                    };
                    features.push(FeatureBinning::Cut { col, cuts });
                }
            }
        }
        Ok(Self {
            schema: schema.iter().map(|s| s.to_string()).collect(),
            features,
        })
    }

    pub fn schema(&self) -> &[String] {
        &self.schema
    }

    /// Bin key of one row.
    pub fn key(&self, ds: &Dataset, row: usize) -> BinKey {
        BinKey(
            self.features
                .iter()
                .map(|f| match f {
                    FeatureBinning::Coded { col } => match ds.column(*col) {
                        Column::Coded(vals) => vals[row],
                        Column::Numeric(_) => unreachable!("plan checked column kinds"),
                    },
                    FeatureBinning::Cut { col, cuts } => match ds.column(*col) {
                        Column::Numeric(vals) => {
                            let v = vals[row];
                            cuts.partition_point(|c| *c < v) as u32
                        }
                        Column::Coded(_) => unreachable!("plan checked column kinds"),
                    },
                })
                .collect(),
        )
    }

    /// Bin every row of `ds`.
    pub fn bin(&self, ds: &Dataset) -> Result<Histogram, MetricError> {
        if ds.row_count() == 0 {
            return Err(MetricError::EmptyDataset);
        }
        let mut counts: BTreeMap<BinKey, u64> = BTreeMap::new();
        for row in 0..ds.row_count() {
            *counts.entry(self.key(ds, row)).or_insert(0) += 1;
        }
        Ok(Histogram {
            schema: self.schema.clone(),
            counts,
            total: ds.row_count() as u64,
        })
    }
}

/// Bin records over a schema of coded features (numeric features need
/// dictionary-declared cuts; see [`BinningPlan::with_default_cuts`] for the
/// defaulted variant used by histogram metrics).
pub fn bin_records(ds: &Dataset, schema: &[&str]) -> Result<Histogram, MetricError> {
    BinningPlan::strict(ds.dictionary(), schema)?.bin(ds)
}

/// Normalize a histogram into a density.
pub fn density(h: &Histogram) -> Result<Density, MetricError> {
    if h.total == 0 {
        return Err(MetricError::ZeroTotal);
    }
    let total = h.total as f64;
    Ok(Density {
        schema: h.schema.clone(),
        probabilities: h
            .counts
            .iter()
            .map(|(k, &c)| (k.clone(), c as f64 / total))
            .collect(),
        support_size: h.counts.len(),
    })
}

/// Number of occupied bins of `ds` under `schema`.
pub fn count_distinct_bins(ds: &Dataset, schema: &[&str]) -> Result<usize, MetricError> {
    Ok(bin_records(ds, schema)?.counts.len())
}

/// Total variation distance `Σ |p_a − p_b|` over the union of supports.
/// Ranges over [0, 2]: 0 iff the densities are equal, 2 iff their supports
/// are disjoint. Iteration is in sorted key order.
pub fn total_variation(a: &Density, b: &Density) -> Result<f64, MetricError> {
    if a.schema != b.schema {
        return Err(MetricError::SchemaMismatch {
            left: a.schema.join("+"),
            right: b.schema.join("+"),
        });
    }
    let mut sum = 0.0;
    let mut ia = a.probabilities.iter().peekable();
    let mut ib = b.probabilities.iter().peekable();
    loop {
        match (ia.peek(), ib.peek()) {
            (Some((ka, pa)), Some((kb, pb))) => match ka.cmp(kb) {
                std::cmp::Ordering::Less => {
                    sum += **pa;
                    ia.next();
                }
                std::cmp::Ordering::Greater => {
                    sum += **pb;
                    ib.next();
                }
                std::cmp::Ordering::Equal => {
                    sum += (**pa - **pb).abs();
                    ia.next();
                    ib.next();
                }
            },
            (Some((_, pa)), None) => {
                sum += **pa;
                ia.next();
            }
            (None, Some((_, pb))) => {
                sum += **pb;
                ib.next();
            }
            (None, None) => break,
        }
    }
    Ok(sum)
}
