//! Dispersal analysis: empirical entropy, the uncertainty coefficient, the
//! dispersal ratio with its information-theoretic bounds, average bin
//! sizes, and per-subgroup dispersal profiles.
//!
//! The dispersal ratio measures how much adding a feature `X` to a schema
//! `F` fragments a population's histogram: occupied bins after the addition
//! divided by occupied bins before. It is 1 exactly when `X` is a function
//! of `F`, and reaches `|Range(X)|` when `X` is independent of `F` with
//! full joint support. In between, writing `u = U(X|F)` for the
//! uncertainty coefficient and `f(u) = (1-u)·H(X) + H(F)` (which equals
//! the joint entropy `H(X,F)`), the ratio is bounded by
//!
//! ```text
//!   2^f(u) / bins_before  ≤  ratio  ≤  |P|·f(u) / (log2|P|·bins_before)
//! ```
//!
//! The lower bound is exact for empirical entropies. The upper bound drops
//! a nonnegative term and is reliable only when the population is much
//! larger than the occupied joint support (operationally
//! `|P| ≥ 50 × bins_after`). All logarithms are base 2, including the
//! `log2|P|` in the upper bound; mixing bases would break the inequality.

use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Domain, SubgroupSelector};
use crate::error::MetricError;
use crate::partition::{density, BinKey, BinningPlan, Density};

/// Entropy of a density, in bits.
///
/// Zero for a point mass, at most `log2(support_size)`.
pub fn entropy(d: &Density) -> f64 {
    -d.probabilities
        .values()
        .map(|&p| if p > 0.0 { p * p.log2() } else { 0.0 })
        .sum::<f64>()
}

/// Entropy terms of an (X, F) pair, all in bits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyStats {
    pub h_x: f64,
    pub h_f: f64,
    pub h_joint: f64,
    pub h_x_given_f: f64,
    /// Uncertainty coefficient `(H(X) − H(X|F)) / H(X)`, clamped to [0,1]
    /// against floating-point excursions.
    pub u: f64,
}

/// Uncertainty coefficient of feature `x` given the schema `f_schema`,
/// computed from the empirical joint histogram.
///
/// `u = 1` means `x` is completely predicted by the schema; `u = 0` means
/// it is independent of it. A constant `x` has `H(X) = 0` and the
/// coefficient is undefined; that returns [`MetricError::DegenerateFeature`]
/// rather than a conventional value.
pub fn uncertainty_coefficient(
    ds: &Dataset,
    x: &str,
    f_schema: &[&str],
) -> Result<EntropyStats, MetricError> {
    if f_schema.iter().any(|&f| f == x) {
        return Err(MetricError::FeatureInSchema(x.to_string()));
    }
    let dict = ds.dictionary();
    let x_density = density(&BinningPlan::with_default_cuts(dict, &[x], &[ds])?.bin(ds)?)?;
    if x_density.support_size == 1 {
        return Err(MetricError::DegenerateFeature(x.to_string()));
    }
    let f_density = density(&BinningPlan::with_default_cuts(dict, f_schema, &[ds])?.bin(ds)?)?;
    let mut joint_schema: Vec<&str> = f_schema.to_vec();
    joint_schema.push(x);
    let joint_density =
        density(&BinningPlan::with_default_cuts(dict, &joint_schema, &[ds])?.bin(ds)?)?;

    let h_x = entropy(&x_density);
    let h_f = entropy(&f_density);
    let h_joint = entropy(&joint_density);
    let h_x_given_f = (h_joint - h_f).max(0.0);
    let u = ((h_x - h_x_given_f) / h_x).clamp(0.0, 1.0);
    Ok(EntropyStats {
        h_x,
        h_f,
        h_joint,
        h_x_given_f,
        u,
    })
}

/// Which value count plays the role of `|Range(X)|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeMode {
    /// Distinct observed bins of X (matches the empirical-histogram view).
    #[default]
    Observed,
    /// Declared domain size from the dictionary.
    Declared,
}

/// Dispersal ratio of adding one feature, with entropy terms and bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersalResult {
    /// `bins_after / bins_before`; always in `[1, range_x]`.
    pub ratio: f64,
    pub bins_before: usize,
    pub bins_after: usize,
    pub range_x: usize,
    pub population: usize,
    pub stats: EntropyStats,
    /// `f(u) = (1-u)·H(X) + H(F)` in bits.
    pub f_u: f64,
    /// `max(2^f(u) / bins_before, 1)`. Holds unconditionally (up to
    /// entropy round-off).
    pub lower_bound: f64,
    /// `min(|P|·f(u) / (log2|P|·bins_before), range_x)`. Reliable in the
    /// large-population regime `|P| ≥ 50 × bins_after`.
    pub upper_bound: f64,
}

/// Unclamped lower bound `2^f(u) / bins_before`.
pub fn raw_lower_bound(u: f64, h_x: f64, h_f: f64, bins_before: usize) -> f64 {
    ((1.0 - u) * h_x + h_f).exp2() / bins_before as f64
}

/// Unclamped upper bound `|P|·f(u) / (log2|P|·bins_before)`.
pub fn raw_upper_bound(u: f64, h_x: f64, h_f: f64, population: usize, bins_before: usize) -> f64 {
    let f_u = (1.0 - u) * h_x + h_f;
    population as f64 * f_u / ((population as f64).log2() * bins_before as f64)
}

/// Dispersal ratio of adding feature `x` to `f_schema`, from occupied-bin
/// counts, with the theorem bounds evaluated on the empirical entropies.
pub fn dispersal_ratio(
    ds: &Dataset,
    f_schema: &[&str],
    x: &str,
    range_mode: RangeMode,
) -> Result<DispersalResult, MetricError> {
    let stats = uncertainty_coefficient(ds, x, f_schema)?;
    let dict = ds.dictionary();
    let before = BinningPlan::with_default_cuts(dict, f_schema, &[ds])?
        .bin(ds)?
        .counts
        .len();
    let mut joint_schema: Vec<&str> = f_schema.to_vec();
    joint_schema.push(x);
    let after = BinningPlan::with_default_cuts(dict, &joint_schema, &[ds])?
        .bin(ds)?
        .counts
        .len();

    let range_x = match range_mode {
        RangeMode::Observed => BinningPlan::with_default_cuts(dict, &[x], &[ds])?
            .bin(ds)?
            .counts
            .len(),
        RangeMode::Declared => {
            let ix = dict.require_index(x)?;
            match &dict.features()[ix].domain {
                Domain::Coded(values) => values.len(),
                Domain::Numeric { cuts, .. } => cuts.as_ref().map_or(10, |c| c.len() + 1),
            }
        }
    };

    let population = ds.row_count();
    let f_u = (1.0 - stats.u) * stats.h_x + stats.h_f;
    let lower_bound = raw_lower_bound(stats.u, stats.h_x, stats.h_f, before).max(1.0);
    let upper_bound =
        raw_upper_bound(stats.u, stats.h_x, stats.h_f, population, before).min(range_x as f64);

    Ok(DispersalResult {
        ratio: after as f64 / before as f64,
        bins_before: before,
        bins_after: after,
        range_x,
        population,
        stats,
        f_u,
        lower_bound,
        upper_bound,
    })
}

/// Bounds of one candidate feature inside a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureBounds {
    pub feature: String,
    pub u: f64,
    pub h_x: f64,
    /// Unclamped `2^f(u) / bins_before`.
    pub lower_bound: f64,
    /// Unclamped `|P|·f(u) / (log2|P|·bins_before)`.
    pub upper_bound: f64,
}

/// Outcome of comparing two equal-entropy candidate features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersalComparison {
    pub first: FeatureBounds,
    pub second: FeatureBounds,
    /// The feature with the smaller uncertainty coefficient, i.e. the one
    /// the bounds predict will disperse the population more. `None` when
    /// the coefficients tie.
    pub more_dispersive: Option<String>,
}

/// Compare the dispersal bounds of two candidate features over the same
/// schema. The comparison requires the candidates to carry (approximately)
/// the same entropy; `tolerance` is the allowed relative difference.
///
/// The reported bounds are the unclamped forms, for which the ordering
/// `u1 ≤ u2 ⟺ LB1 ≥ LB2 ⟺ UB1 ≥ UB2` is exact.
pub fn compare_feature_dispersal(
    ds: &Dataset,
    f_schema: &[&str],
    x1: &str,
    x2: &str,
    tolerance: f64,
) -> Result<DispersalComparison, MetricError> {
    let s1 = uncertainty_coefficient(ds, x1, f_schema)?;
    let s2 = uncertainty_coefficient(ds, x2, f_schema)?;
    let scale = s1.h_x.max(s2.h_x);
    if (s1.h_x - s2.h_x).abs() > tolerance * scale {
        return Err(MetricError::EntropyMismatch {
            left: s1.h_x,
            right: s2.h_x,
            tolerance,
        });
    }
    let before = BinningPlan::with_default_cuts(ds.dictionary(), f_schema, &[ds])?
        .bin(ds)?
        .counts
        .len();
    let population = ds.row_count();
    let bounds = |name: &str, s: &EntropyStats| FeatureBounds {
        feature: name.to_string(),
        u: s.u,
        h_x: s.h_x,
        lower_bound: raw_lower_bound(s.u, s.h_x, s.h_f, before),
        upper_bound: raw_upper_bound(s.u, s.h_x, s.h_f, population, before),
    };
    let first = bounds(x1, &s1);
    let second = bounds(x2, &s2);
    let more_dispersive = if s1.u < s2.u {
        Some(first.feature.clone())
    } else if s2.u < s1.u {
        Some(second.feature.clone())
    } else {
        None
    };
    Ok(DispersalComparison {
        first,
        second,
        more_dispersive,
    })
}

/// Average size of the full-population bins that contain at least one
/// subgroup member: the numerator sums each such bin's size in the *whole*
/// dataset's partition, the denominator counts those bins.
pub fn average_bin_size(
    ds: &Dataset,
    schema: &[&str],
    subgroup: &SubgroupSelector,
) -> Result<f64, MetricError> {
    let plan = BinningPlan::with_default_cuts(ds.dictionary(), schema, &[ds])?;
    let full = plan.bin(ds)?;
    let members = ds.filter_subgroup(subgroup)?;
    if members.row_count() == 0 {
        return Err(MetricError::EmptySubgroup);
    }
    let mut occupied: Vec<BinKey> = (0..members.row_count())
        .map(|r| plan.key(&members, r))
        .collect();
    occupied.sort_unstable();
    occupied.dedup();
    let total: u64 = occupied.iter().map(|k| full.counts[k]).sum();
    Ok(total as f64 / occupied.len() as f64)
}

/// One step of a subgroup's dispersal profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    /// Number of schema features in effect at this step (2..).
    pub feature_count: usize,
    /// Cumulative dispersal: occupied bins at this step over occupied bins
    /// under the first feature alone.
    pub dispersal: f64,
    /// Average full-population bin size for the subgroup at this step.
    pub avg_bin_size: f64,
}

/// Per-subgroup profile entry. Empty subgroups are kept but marked.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub subgroup: String,
    pub points: Vec<ProfilePoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// Effect of sequential feature addition on each subgroup's dispersal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DispersalProfile {
    pub feature_order: Vec<String>,
    pub entries: Vec<ProfileEntry>,
}

/// Add `feature_order`'s features one at a time and record each subgroup's
/// cumulative dispersal ratio and average bin size after every addition.
/// Profiles are relative to the single-feature partition so curves are
/// comparable across subgroups of different sizes.
pub fn dispersal_profile(
    ds: &Dataset,
    feature_order: &[&str],
    subgroups: &[SubgroupSelector],
) -> Result<DispersalProfile, MetricError> {
    if feature_order.len() < 2 {
        return Err(MetricError::TooFewFeatures {
            needed: 2,
            got: feature_order.len(),
        });
    }
    let mut entries = Vec::with_capacity(subgroups.len());
    for sel in subgroups {
        let members = ds.filter_subgroup(sel)?;
        if members.row_count() == 0 {
            log::warn!("dispersal profile: subgroup `{}` is empty", sel.label());
            entries.push(ProfileEntry {
                subgroup: sel.label(),
                points: Vec::new(),
                skipped: Some("empty subgroup".to_string()),
            });
            continue;
        }
        let base_bins =
            BinningPlan::with_default_cuts(ds.dictionary(), &feature_order[..1], &[ds])?
                .bin(&members)?
                .counts
                .len();
        let mut points = Vec::with_capacity(feature_order.len() - 1);
        for k in 2..=feature_order.len() {
            let schema = &feature_order[..k];
            let bins_k = BinningPlan::with_default_cuts(ds.dictionary(), schema, &[ds])?
                .bin(&members)?
                .counts
                .len();
            points.push(ProfilePoint {
                feature_count: k,
                dispersal: bins_k as f64 / base_bins as f64,
                avg_bin_size: average_bin_size(ds, schema, sel)?,
            });
        }
        entries.push(ProfileEntry {
            subgroup: sel.label(),
            points,
            skipped: None,
        });
    }
    Ok(DispersalProfile {
        feature_order: feature_order.iter().map(|s| s.to_string()).collect(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth;
    use std::collections::HashSet;

    const ENTROPY_SLACK: f64 = 1e-9;

    #[test]
    fn entropy_examples() {
        // uniform over 4 values -> 2 bits, exactly (powers of two)
        let uniform =
            synth::coded_dataset(&[("S", &["a", "b", "c", "d"])], &[&[0], &[1], &[2], &[3]]);
        let d = density(&crate::partition::bin_records(&uniform, &["S"]).unwrap()).unwrap();
        assert_eq!(entropy(&d), 2.0);

        let point = synth::coded_dataset(&[("S", &["a", "b"])], &[&[0], &[0]]);
        let d = density(&crate::partition::bin_records(&point, &["S"]).unwrap()).unwrap();
        assert_eq!(entropy(&d), 0.0);

        // {0.5, 0.25, 0.25} -> 1.5 bits, exactly
        let skew = synth::coded_dataset(&[("S", &["a", "b", "c"])], &[&[0], &[0], &[1], &[2]]);
        let d = density(&crate::partition::bin_records(&skew, &["S"]).unwrap()).unwrap();
        assert_eq!(entropy(&d), 1.5);
    }

    #[test]
    fn copy_of_schema_feature_has_u_one() {
        // X = exact copy of the F feature
        let ds = synth::coded_dataset(
            &[("F", &["0", "1", "2"]), ("X", &["0", "1", "2"])],
            &[&[0, 0], &[1, 1], &[2, 2], &[0, 0], &[1, 1]],
        );
        let stats = uncertainty_coefficient(&ds, "X", &["F"]).unwrap();
        assert!((stats.u - 1.0).abs() <= ENTROPY_SLACK);
        assert!(stats.h_x_given_f.abs() <= ENTROPY_SLACK);
    }

    #[test]
    fn exact_product_distribution_has_u_zero() {
        let ds = synth::product_table(&["F", "X"], &[vec![1, 2], vec![3, 1]]);
        let stats = uncertainty_coefficient(&ds, "X", &["F"]).unwrap();
        assert!(stats.u.abs() <= ENTROPY_SLACK);
    }

    #[test]
    fn handcrafted_joint_matches_brute_force() {
        // counts: (F=0,X=a):3 (F=0,X=b):1 (F=1,X=a):1 (F=1,X=b):3
        let ds = synth::dataset_from_counts(
            &[("F", &["0", "1"]), ("X", &["a", "b"])],
            &[(&[0, 0], 3), (&[0, 1], 1), (&[1, 0], 1), (&[1, 1], 3)],
        );
        let stats = uncertainty_coefficient(&ds, "X", &["F"]).unwrap();

        // independent oracle: direct summation over the joint counts
        let counts = [3.0f64, 1.0, 1.0, 3.0];
        let total = 8.0;
        let h_joint_oracle: f64 = -counts
            .iter()
            .map(|c| (c / total) * (c / total).log2())
            .sum::<f64>();
        assert!((stats.h_joint - h_joint_oracle).abs() <= ENTROPY_SLACK);
        assert!((stats.h_joint - 1.811278124459133).abs() <= ENTROPY_SLACK);
        assert!((stats.h_x - 1.0).abs() <= ENTROPY_SLACK);
        assert!((stats.h_f - 1.0).abs() <= ENTROPY_SLACK);
        assert!((stats.u - 0.18872187554086706).abs() <= ENTROPY_SLACK);
    }

    #[test]
    fn degenerate_feature_is_an_error() {
        let ds = synth::coded_dataset(
            &[("F", &["0", "1"]), ("X", &["a", "b"])],
            &[&[0, 0], &[1, 0], &[0, 0]],
        );
        assert!(matches!(
            uncertainty_coefficient(&ds, "X", &["F"]).unwrap_err(),
            MetricError::DegenerateFeature(f) if f == "X"
        ));
    }

    #[test]
    fn x_in_schema_is_an_error() {
        let ds = synth::coded_dataset(&[("F", &["0", "1"])], &[&[0], &[1]]);
        assert!(matches!(
            uncertainty_coefficient(&ds, "F", &["F"]).unwrap_err(),
            MetricError::FeatureInSchema(_)
        ));
    }

    #[test]
    fn functional_feature_has_ratio_one() {
        let ds = synth::functional_chain(11, 60, 3, 4);
        let r = dispersal_ratio(&ds, &["F0", "F1"], "F2", RangeMode::Observed).unwrap();
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.bins_before, r.bins_after);
        assert!((r.stats.u - 1.0).abs() <= ENTROPY_SLACK);
        assert!(r.lower_bound <= r.ratio * (1.0 + ENTROPY_SLACK));
    }

    #[test]
    fn independent_binary_reaches_maximum_ratio() {
        // exact product, full support: ratio = |Range(X)| = 2
        let ds = synth::product_table(&["F", "X"], &[vec![5, 3, 2], vec![4, 4]]);
        let r = dispersal_ratio(&ds, &["F"], "X", RangeMode::Observed).unwrap();
        assert_eq!(r.ratio, 2.0);
        assert_eq!(r.range_x, 2);
        assert!(r.stats.u.abs() <= ENTROPY_SLACK);
    }

    #[test]
    fn random_data_matches_brute_force_and_lower_bound_holds() {
        for seed in 0..8u64 {
            let ds = synth::random_categorical(seed, 200, &[("A", 4), ("B", 3), ("C", 5)]);
            let r = dispersal_ratio(&ds, &["A", "B"], "C", RangeMode::Observed).unwrap();

            let distinct = |cols: &[usize]| -> usize {
                let set: HashSet<Vec<String>> = (0..ds.row_count())
                    .map(|row| cols.iter().map(|&c| ds.cell_string(row, c)).collect())
                    .collect();
                set.len()
            };
            let before = distinct(&[0, 1]);
            let after = distinct(&[0, 1, 2]);
            assert_eq!(r.bins_before, before);
            assert_eq!(r.bins_after, after);
            assert_eq!(r.ratio, after as f64 / before as f64);
            assert!(r.lower_bound <= r.ratio * (1.0 + ENTROPY_SLACK));
            assert!(r.ratio >= 1.0 && r.ratio <= r.range_x as f64);
        }
    }

    #[test]
    fn declared_range_mode_uses_dictionary_cardinality() {
        let ds = synth::coded_dataset(
            &[("F", &["0", "1"]), ("X", &["a", "b", "c"])],
            &[&[0, 0], &[1, 1], &[0, 1], &[1, 0]],
        );
        let obs = dispersal_ratio(&ds, &["F"], "X", RangeMode::Observed).unwrap();
        let dec = dispersal_ratio(&ds, &["F"], "X", RangeMode::Declared).unwrap();
        assert_eq!(obs.range_x, 2); // "c" never observed
        assert_eq!(dec.range_x, 3);
    }

    #[test]
    fn comparison_endpoints() {
        // F binary balanced; X1 independent of F; X2 a copy of F. Both
        // candidates are uniform binary, so their entropies agree exactly.
        let ds = synth::dataset_from_counts(
            &[("F", &["0", "1"]), ("X1", &["0", "1"]), ("X2", &["0", "1"])],
            &[
                (&[0, 0, 0], 5),
                (&[0, 1, 0], 5),
                (&[1, 0, 1], 5),
                (&[1, 1, 1], 5),
            ],
        );
        let cmp = compare_feature_dispersal(&ds, &["F"], "X1", "X2", 0.01).unwrap();
        assert!(cmp.first.u.abs() <= ENTROPY_SLACK);
        assert!((cmp.second.u - 1.0).abs() <= ENTROPY_SLACK);
        assert!(cmp.first.lower_bound > cmp.second.lower_bound);
        assert!(cmp.first.upper_bound > cmp.second.upper_bound);
        assert_eq!(cmp.more_dispersive.as_deref(), Some("X1"));

        let same = compare_feature_dispersal(&ds, &["F"], "X1", "X1", 0.01).unwrap();
        assert_eq!(same.first.lower_bound, same.second.lower_bound);
        assert_eq!(same.first.upper_bound, same.second.upper_bound);
        assert!(same.more_dispersive.is_none());
    }

    #[test]
    fn comparison_of_intermediate_dependence_levels() {
        // Within each F cell, X1 and X2 are drawn as an independent product
        // with X1 matching F at 13/16 and X2 at 15/16, so the pairwise
        // joints (F,X1) and (F,X2) are exact and both X marginals are
        // balanced: H(X1) = H(X2) = 1.
        let mut cells: Vec<(Vec<u32>, u64)> = Vec::new();
        for f in 0..2u32 {
            for x1 in 0..2u32 {
                for x2 in 0..2u32 {
                    let c1 = if x1 == f { 13 } else { 3 };
                    let c2 = if x2 == f { 15 } else { 1 };
                    cells.push((vec![f, x1, x2], c1 * c2));
                }
            }
        }
        let cells_ref: Vec<(&[u32], u64)> =
            cells.iter().map(|(k, c)| (k.as_slice(), *c)).collect();
        let ds = synth::dataset_from_counts(
            &[("F", &["0", "1"]), ("X1", &["0", "1"]), ("X2", &["0", "1"])],
            &cells_ref,
        );

        let s1 = uncertainty_coefficient(&ds, "X1", &["F"]).unwrap();
        let s2 = uncertainty_coefficient(&ds, "X2", &["F"]).unwrap();
        assert!((s1.u - 0.3037877398748542).abs() <= ENTROPY_SLACK);
        assert!((s2.u - 0.6627099333829861).abs() <= ENTROPY_SLACK);

        let cmp = compare_feature_dispersal(&ds, &["F"], "X1", "X2", 0.01).unwrap();
        assert!(cmp.first.u < cmp.second.u);
        assert!(cmp.first.lower_bound > cmp.second.lower_bound);
        assert!(cmp.first.upper_bound > cmp.second.upper_bound);
    }

    #[test]
    fn entropy_mismatch_is_rejected() {
        // X1 uniform binary (H=1); X2 heavily skewed (H far below 1)
        let ds = synth::dataset_from_counts(
            &[("F", &["0", "1"]), ("X1", &["0", "1"]), ("X2", &["0", "1"])],
            &[
                (&[0, 0, 0], 4),
                (&[0, 1, 0], 3),
                (&[0, 1, 1], 1),
                (&[1, 0, 0], 3),
                (&[1, 1, 0], 4),
                (&[1, 0, 1], 1),
            ],
        );
        assert!(matches!(
            compare_feature_dispersal(&ds, &["F"], "X1", "X2", 0.01).unwrap_err(),
            MetricError::EntropyMismatch { .. }
        ));
    }

    #[test]
    fn average_bin_size_examples() {
        // whole population, one constant feature -> row_count
        let constant = synth::coded_dataset(&[("S", &["x", "y"])], &[&[0], &[0], &[0]]);
        let all = SubgroupSelector::new(vec![]);
        assert_eq!(average_bin_size(&constant, &["S"], &all).unwrap(), 3.0);

        // every record unique under the schema -> 1.0
        let unique =
            synth::coded_dataset(&[("S", &["a", "b", "c", "d"])], &[&[0], &[1], &[2], &[3]]);
        assert_eq!(average_bin_size(&unique, &["S"], &all).unwrap(), 1.0);
    }

    #[test]
    fn average_bin_size_hand_enumeration() {
        // 10 rows over (A,B), subgroup G=0 is rows 0..5.
        // Bins over (A,B): (0,0):2 (0,1):2 (1,0):3 (1,1):1 (2,0):1 (2,1):1.
        // Subgroup occupies (0,0), (0,1), (1,0); full sizes 2+2+3 = 7 over 3 bins.
        let ds = synth::coded_dataset(
            &[("A", &["0", "1", "2"]), ("B", &["0", "1"]), ("G", &["0", "1"])],
            &[
                &[0, 0, 0],
                &[0, 0, 0],
                &[0, 1, 0],
                &[0, 1, 0],
                &[1, 0, 0],
                &[1, 0, 1],
                &[1, 0, 1],
                &[1, 1, 1],
                &[2, 0, 1],
                &[2, 1, 1],
            ],
        );
        let sel = SubgroupSelector::new(vec![("G".into(), "0".into())]);
        let avg = average_bin_size(&ds, &["A", "B"], &sel).unwrap();
        assert!((avg - 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn empty_subgroup_is_an_error() {
        let ds = synth::coded_dataset(&[("S", &["x", "y"])], &[&[0]]);
        let sel = SubgroupSelector::new(vec![("S".into(), "y".into())]);
        assert!(matches!(
            average_bin_size(&ds, &["S"], &sel).unwrap_err(),
            MetricError::EmptySubgroup
        ));
    }

    #[test]
    fn average_bin_size_never_increases_with_features() {
        for seed in 0..6u64 {
            let ds =
                synth::random_categorical(seed, 80, &[("A", 3), ("B", 2), ("C", 4), ("G", 2)]);
            let sel = SubgroupSelector::new(vec![("G".into(), "0".into())]);
            if ds.filter_subgroup(&sel).unwrap().row_count() == 0 {
                continue;
            }
            let a1 = average_bin_size(&ds, &["A"], &sel).unwrap();
            let a2 = average_bin_size(&ds, &["A", "B"], &sel).unwrap();
            let a3 = average_bin_size(&ds, &["A", "B", "C"], &sel).unwrap();
            assert!(a1 >= a2 && a2 >= a3);
        }
    }

    #[test]
    fn flat_profile_for_functional_features() {
        let ds = synth::functional_chain(5, 50, 4, 3);
        let profile = dispersal_profile(
            &ds,
            &["F0", "F1", "F2", "F3"],
            &[SubgroupSelector::new(vec![])],
        )
        .unwrap();
        let entry = &profile.entries[0];
        assert_eq!(entry.points.len(), 3);
        for p in &entry.points {
            assert_eq!(p.dispersal, 1.0);
        }
    }

    #[test]
    fn independent_binaries_double_each_step() {
        // k independent full-support binary features: profile 2, 4, 8
        let ds = synth::product_table(
            &["F0", "F1", "F2", "F3"],
            &[vec![2, 2], vec![1, 1], vec![1, 1], vec![1, 1]],
        );
        let profile = dispersal_profile(
            &ds,
            &["F0", "F1", "F2", "F3"],
            &[SubgroupSelector::new(vec![])],
        )
        .unwrap();
        let d: Vec<f64> = profile.entries[0]
            .points
            .iter()
            .map(|p| p.dispersal)
            .collect();
        assert_eq!(d, vec![2.0, 4.0, 8.0]);
    }

    #[test]
    fn empty_subgroup_is_marked_in_profile() {
        let ds = synth::coded_dataset(
            &[("A", &["0", "1"]), ("B", &["0", "1"]), ("G", &["0", "1"])],
            &[&[0, 0, 0], &[1, 1, 0]],
        );
        let profile = dispersal_profile(
            &ds,
            &["A", "B"],
            &[SubgroupSelector::new(vec![("G".into(), "1".into())])],
        )
        .unwrap();
        assert!(profile.entries[0].skipped.is_some());
        assert!(profile.entries[0].points.is_empty());
    }

    #[test]
    fn metrics_are_invariant_under_row_permutation() {
        let ds = synth::random_categorical(21, 120, &[("A", 4), ("B", 3), ("C", 3)]);
        let mut rows: Vec<usize> = (0..ds.row_count()).collect();
        rows.reverse();
        rows.swap(3, 77);
        let permuted = ds.take_rows(&rows);

        let a = dispersal_ratio(&ds, &["A", "B"], "C", RangeMode::Observed).unwrap();
        let b = dispersal_ratio(&permuted, &["A", "B"], "C", RangeMode::Observed).unwrap();
        assert_eq!(a, b);
    }

    // Theorem-level ordering of the closed-form bounds for random (u, H).
    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn bound_ordering_matches_u_ordering(
                u1 in 0.0f64..1.0,
                u2 in 0.0f64..1.0,
                h_x in 0.05f64..4.0,
                h_f in 0.0f64..6.0,
                population in 10usize..100_000,
                bins_before in 1usize..500,
            ) {
                let lb1 = raw_lower_bound(u1, h_x, h_f, bins_before);
                let lb2 = raw_lower_bound(u2, h_x, h_f, bins_before);
                let ub1 = raw_upper_bound(u1, h_x, h_f, population, bins_before);
                let ub2 = raw_upper_bound(u2, h_x, h_f, population, bins_before);
                prop_assert_eq!(u1 <= u2, lb1 >= lb2);
                prop_assert_eq!(u1 <= u2, ub1 >= ub2);
            }
        }
    }
}
