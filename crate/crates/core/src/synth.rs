//! Synthetic dataset generators.
//!
//! Deterministic, seed-driven builders for exercising the metrics end to
//! end without real survey data: uniform and skewed categorical tables,
//! exactly-independent and exactly-functional feature constructions, and
//! hand-specified contingency layouts. Used by the test suites and the
//! benchmarks; handy for demos.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;

use crate::data::{Column, DataDictionary, Dataset, FeatureKind, FeatureSpec, Domain};
use crate::seed;

/// Dictionary of coded features with explicit domains (all categorical).
pub fn dict_of(features: &[(&str, &[&str])]) -> Arc<DataDictionary> {
    let specs = features
        .iter()
        .map(|(name, values)| FeatureSpec {
            name: name.to_string(),
            kind: FeatureKind::Categorical,
            domain: Domain::Coded(values.iter().map(|v| v.to_string()).collect()),
            ordinal_rank: None,
            is_weight: false,
        })
        .collect();
    Arc::new(DataDictionary::new(specs, BTreeMap::new()).unwrap())
}

/// Dataset from explicit per-row code tuples (one `u32` slot per feature).
pub fn coded_dataset(features: &[(&str, &[&str])], rows: &[&[u32]]) -> Dataset {
    let dict = dict_of(features);
    let mut columns: Vec<Vec<u32>> = vec![Vec::with_capacity(rows.len()); features.len()];
    for row in rows {
        assert_eq!(row.len(), features.len());
        for (c, &code) in row.iter().enumerate() {
            columns[c].push(code);
        }
    }
    Dataset::from_columns(dict, columns.into_iter().map(Column::Coded).collect())
}

/// Feature description for the random generators.
#[derive(Debug, Clone)]
pub struct SynthFeature {
    pub name: String,
    pub cardinality: usize,
    pub kind: FeatureKind,
}

impl SynthFeature {
    pub fn categorical(name: &str, cardinality: usize) -> Self {
        Self {
            name: name.to_string(),
            cardinality,
            kind: FeatureKind::Categorical,
        }
    }

    pub fn ordinal(name: &str, cardinality: usize) -> Self {
        Self {
            name: name.to_string(),
            cardinality,
            kind: FeatureKind::Ordinal,
        }
    }
}

/// Dictionary for a list of synthetic features. Domain values are the
/// decimal codes `0..cardinality`; ordinal rank follows code order.
pub fn synth_dictionary(features: &[SynthFeature]) -> Arc<DataDictionary> {
    let specs = features
        .iter()
        .map(|f| FeatureSpec {
            name: f.name.clone(),
            kind: f.kind,
            domain: Domain::Coded((0..f.cardinality).map(|v| v.to_string()).collect()),
            ordinal_rank: None,
            is_weight: false,
        })
        .collect();
    Arc::new(DataDictionary::new(specs, BTreeMap::new()).unwrap())
}

/// Uniform iid categorical table: every cell drawn uniformly from its
/// feature's domain.
pub fn random_categorical(master_seed: u64, rows: usize, features: &[(&str, usize)]) -> Dataset {
    let synth: Vec<SynthFeature> = features
        .iter()
        .map(|(n, c)| SynthFeature::categorical(n, *c))
        .collect();
    random_table(master_seed, rows, &synth, 0.0)
}

/// Random table with per-feature value weights.
///
/// `skew` controls how uneven each feature's marginal is: 0.0 is uniform,
/// larger values approach a geometric profile (weight of slot `i`
/// proportional to `(1+skew)^(card-i)`). Each feature draws from its own
/// derived stream, independent of the others.
pub fn random_table(
    master_seed: u64,
    rows: usize,
    features: &[SynthFeature],
    skew: f64,
) -> Dataset {
    let dict = synth_dictionary(features);
    let columns = features
        .iter()
        .map(|f| {
            let mut rng = seed::rng(master_seed, &format!("synth/{}", f.name));
            let weights: Vec<f64> = (0..f.cardinality)
                .map(|i| (1.0 + skew).powi((f.cardinality - i) as i32))
                .collect();
            let dist = WeightedIndex::new(&weights).unwrap();
            Column::Coded((0..rows).map(|_| dist.sample(&mut rng) as u32).collect())
        })
        .collect();
    Dataset::from_columns(dict, columns)
}

/// Exactly independent, full-support coded table: counts factor as the
/// product of per-feature weights, so the empirical joint is precisely the
/// product of its marginals and every value combination is occupied.
///
/// `per_feature_weights[f][v]` is the relative weight of value `v`; the
/// table contains `Π_f Σ_v weight` rows in lexicographic order.
pub fn product_table(names: &[&str], per_feature_weights: &[Vec<u64>]) -> Dataset {
    assert_eq!(names.len(), per_feature_weights.len());
    let features: Vec<SynthFeature> = names
        .iter()
        .zip(per_feature_weights)
        .map(|(n, w)| SynthFeature::categorical(n, w.len()))
        .collect();
    let dict = synth_dictionary(&features);

    let mut combos: Vec<(Vec<u32>, u64)> = vec![(Vec::new(), 1)];
    for weights in per_feature_weights {
        let mut next = Vec::with_capacity(combos.len() * weights.len());
        for (prefix, count) in &combos {
            for (v, w) in weights.iter().enumerate() {
                let mut key = prefix.clone();
                key.push(v as u32);
                next.push((key, count * w));
            }
        }
        combos = next;
    }

    let mut columns: Vec<Vec<u32>> = vec![Vec::new(); names.len()];
    for (key, count) in combos {
        for _ in 0..count {
            for (c, &code) in key.iter().enumerate() {
                columns[c].push(code);
            }
        }
    }
    Dataset::from_columns(dict, columns.into_iter().map(Column::Coded).collect())
}

/// Chain of exactly functional features: feature 0 is random over
/// `base_cardinality` values, and every later feature is a fixed bijection
/// of it, so each is fully determined by any other.
pub fn functional_chain(
    master_seed: u64,
    rows: usize,
    n_features: usize,
    base_cardinality: usize,
) -> Dataset {
    let features: Vec<SynthFeature> = (0..n_features)
        .map(|i| SynthFeature::categorical(&format!("F{i}"), base_cardinality))
        .collect();
    let dict = synth_dictionary(&features);
    let mut rng = seed::rng(master_seed, "synth/functional");
    let base: Vec<u32> = (0..rows)
        .map(|_| rng.gen_range(0..base_cardinality) as u32)
        .collect();
    let columns = (0..n_features)
        .map(|i| {
            // bijection: rotate codes by the feature index
            Column::Coded(
                base.iter()
                    .map(|&v| (v + i as u32) % base_cardinality as u32)
                    .collect(),
            )
        })
        .collect();
    Dataset::from_columns(dict, columns)
}

/// Dataset with explicit counts per value tuple (tuples over coded
/// features). Rows are emitted in the order given.
pub fn dataset_from_counts(features: &[(&str, &[&str])], cells: &[(&[u32], u64)]) -> Dataset {
    let dict = dict_of(features);
    let mut columns: Vec<Vec<u32>> = vec![Vec::new(); features.len()];
    for (key, count) in cells {
        assert_eq!(key.len(), features.len());
        for _ in 0..*count {
            for (c, &code) in key.iter().enumerate() {
                columns[c].push(code);
            }
        }
    }
    Dataset::from_columns(dict, columns.into_iter().map(Column::Coded).collect())
}
