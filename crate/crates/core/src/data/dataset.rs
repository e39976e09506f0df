//! Columnar dataset storage, CSV I/O, and subgroup filtering.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use crate::data::dictionary::{DataDictionary, Domain, FeatureSpec};
use crate::error::DataError;

/// One feature's values across all rows.
///
/// Coded columns store the domain slot index; numeric columns store raw
/// values. Columns are shared between dataset views via `Arc`, so feature
/// selection never copies cell data.
#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Coded(Vec<u32>),
    Numeric(Vec<f64>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Coded(v) => v.len(),
            Column::Numeric(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Immutable columnar table bound to a validated dictionary.
///
/// All cells are validated at construction: coded cells resolve to a domain
/// slot, numeric cells lie within the declared range, and there are no
/// missing values. Every operation on a dataset is pure.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    dictionary: Arc<DataDictionary>,
    columns: Vec<Arc<Column>>,
    row_count: usize,
}

/// Conjunction of (feature, value) equality terms selecting a subgroup.
/// An empty conjunction selects every row.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct SubgroupSelector {
    pub terms: Vec<(String, String)>,
}

/// Cheap dataset identity summary used in report metadata.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Fingerprint {
    pub rows: usize,
    /// Observed distinct value count per feature.
    pub cardinalities: BTreeMap<String, usize>,
}

impl SubgroupSelector {
    pub fn new(terms: Vec<(String, String)>) -> Self {
        Self { terms }
    }

    /// Render as `F1=v1,F2=v2`; the empty conjunction renders as `all`.
    pub fn label(&self) -> String {
        if self.terms.is_empty() {
            return "all".to_string();
        }
        self.terms
            .iter()
            .map(|(f, v)| format!("{f}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Resolve the selector against a dictionary, producing per-term
    /// matchers. Fails on unknown features or out-of-domain values.
    pub fn compile(&self, dict: &DataDictionary) -> Result<CompiledSelector, DataError> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (feature, value) in &self.terms {
            let ix = dict.require_index(feature)?;
            let spec = &dict.features()[ix];
            let matcher = match &spec.domain {
                Domain::Coded(_) => {
                    let code = spec
                        .resolve(value)
                        .ok_or_else(|| DataError::SelectorValue {
                            feature: feature.clone(),
                            value: value.clone(),
                        })?;
                    TermMatcher::Code(code)
                }
                Domain::Numeric { min, max, .. } => {
                    let v: f64 = value.parse().map_err(|_| DataError::SelectorValue {
                        feature: feature.clone(),
                        value: value.clone(),
                    })?;
                    if v < *min || v > *max {
                        return Err(DataError::SelectorValue {
                            feature: feature.clone(),
                            value: value.clone(),
                        });
                    }
                    TermMatcher::Number(v)
                }
            };
            terms.push((ix, matcher));
        }
        Ok(CompiledSelector { terms })
    }
}

/// Selector resolved against a specific dictionary.
pub struct CompiledSelector {
    terms: Vec<(usize, TermMatcher)>,
}

enum TermMatcher {
    Code(u32),
    Number(f64),
}

impl CompiledSelector {
    fn matches(&self, ds: &Dataset, row: usize) -> bool {
        self.terms.iter().all(|(ix, m)| match (m, &*ds.columns[*ix]) {
            (TermMatcher::Code(code), Column::Coded(vals)) => vals[row] == *code,
            (TermMatcher::Number(n), Column::Numeric(vals)) => vals[row] == *n,
            _ => false,
        })
    }
}

impl Dataset {
    /// Wrap pre-validated columns. Exposed for generators; panics if the
    /// shape is inconsistent (call sites construct both together).
    pub fn from_columns(dictionary: Arc<DataDictionary>, columns: Vec<Column>) -> Self {
        assert_eq!(columns.len(), dictionary.len(), "column/feature mismatch");
        let row_count = columns.first().map_or(0, Column::len);
        for c in &columns {
            assert_eq!(c.len(), row_count, "ragged columns");
        }
        Self {
            dictionary,
            columns: columns.into_iter().map(Arc::new).collect(),
            row_count,
        }
    }

    /// Parse an RFC-4180 CSV document against `dict`.
    ///
    /// The header must name a subset of the dictionary's features; column
    /// order is normalized to dictionary order. Every cell is validated.
    pub fn from_csv_str(text: &str, dict: &Arc<DataDictionary>) -> Result<Self, DataError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut records = reader.records();

        let header = match records.next() {
            Some(rec) => rec.map_err(|e| DataError::Csv(e.to_string()))?,
            None => return Err(DataError::EmptyFile),
        };
        // Map header position -> dictionary index, then rearrange to
        // dictionary order.
        let mut header_dict_ix = Vec::with_capacity(header.len());
        for col in header.iter() {
            let ix = dict
                .feature_index(col)
                .ok_or_else(|| DataError::UnknownColumn(col.to_string()))?;
            if header_dict_ix.contains(&ix) {
                return Err(DataError::DuplicateSelection(col.to_string()));
            }
            header_dict_ix.push(ix);
        }
        let mut present: Vec<usize> = header_dict_ix.clone();
        present.sort_unstable();
        let names: Vec<&str> = present
            .iter()
            .map(|&ix| dict.features()[ix].name.as_str())
            .collect();
        let restricted = Arc::new(dict.restrict(&names)?);

        // Position of each header column within the normalized order.
        let dest_of_header: Vec<usize> = header_dict_ix
            .iter()
            .map(|ix| present.iter().position(|p| p == ix).unwrap())
            .collect();

        let specs: Vec<&FeatureSpec> = present.iter().map(|&ix| &dict.features()[ix]).collect();
        let mut columns: Vec<Column> = specs
            .iter()
            .map(|s| match s.domain {
                Domain::Coded(_) => Column::Coded(Vec::new()),
                Domain::Numeric { .. } => Column::Numeric(Vec::new()),
            })
            .collect();

        let mut row = 0usize;
        for rec in records {
            let rec = rec.map_err(|e| DataError::Csv(e.to_string()))?;
            row += 1;
            if rec.len() != header.len() {
                return Err(DataError::RaggedRow {
                    row,
                    expected: header.len(),
                    found: rec.len(),
                });
            }
            for (h, raw) in rec.iter().enumerate() {
                let dest = dest_of_header[h];
                let spec = specs[dest];
                match (&mut columns[dest], &spec.domain) {
                    (Column::Coded(vals), Domain::Coded(_)) => {
                        let code = spec.resolve(raw).ok_or_else(|| DataError::OutOfDomain {
                            row,
                            column: spec.name.clone(),
                            value: raw.to_string(),
                        })?;
                        vals.push(code);
                    }
                    (Column::Numeric(vals), Domain::Numeric { min, max, .. }) => {
                        let v: f64 = raw.trim().parse().map_err(|_| DataError::OutOfDomain {
                            row,
                            column: spec.name.clone(),
                            value: raw.to_string(),
                        })?;
                        if !v.is_finite() || v < *min || v > *max {
                            return Err(DataError::OutOfDomain {
                                row,
                                column: spec.name.clone(),
                                value: raw.to_string(),
                            });
                        }
                        vals.push(v);
                    }
                    _ => unreachable!("column kind matches domain by construction"),
                }
            }
        }

        Ok(Self::from_columns(restricted, columns))
    }

    pub fn from_csv_path(path: &Path, dict: &Arc<DataDictionary>) -> Result<Self, DataError> {
        Self::from_csv_str(&std::fs::read_to_string(path)?, dict)
    }

    /// Serialize to CSV with a header row, cells in canonical form.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let names: Vec<&str> = self.dictionary.feature_names();
        out.push_str(&names.join(","));
        out.push('\n');
        for row in 0..self.row_count {
            for (ix, col) in self.columns.iter().enumerate() {
                if ix > 0 {
                    out.push(',');
                }
                match &**col {
                    Column::Coded(vals) => {
                        let Domain::Coded(domain) = &self.dictionary.features()[ix].domain else {
                            unreachable!()
                        };
                        out.push_str(&domain[vals[row] as usize]);
                    }
                    Column::Numeric(vals) => {
                        out.push_str(&format!("{}", vals[row]));
                    }
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn write_csv_path(&self, path: &Path) -> Result<(), DataError> {
        std::fs::write(path, self.to_csv_string())?;
        Ok(())
    }

    pub fn dictionary(&self) -> &DataDictionary {
        &self.dictionary
    }

    pub fn dictionary_arc(&self) -> Arc<DataDictionary> {
        Arc::clone(&self.dictionary)
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn column(&self, ix: usize) -> &Column {
        &self.columns[ix]
    }

    pub fn column_by_name(&self, name: &str) -> Result<&Column, DataError> {
        Ok(&self.columns[self.dictionary.require_index(name)?])
    }

    /// Canonical string form of one cell.
    pub fn cell_string(&self, row: usize, col: usize) -> String {
        match &*self.columns[col] {
            Column::Coded(vals) => {
                let Domain::Coded(domain) = &self.dictionary.features()[col].domain else {
                    unreachable!()
                };
                domain[vals[row] as usize].clone()
            }
            Column::Numeric(vals) => format!("{}", vals[row]),
        }
    }

    /// Restrict to the named features, in the given order. Row order and
    /// count are preserved; cell data is shared, not copied.
    pub fn select_features(&self, names: &[&str]) -> Result<Dataset, DataError> {
        let restricted = Arc::new(self.dictionary.restrict(names)?);
        let columns = names
            .iter()
            .map(|&n| {
                self.dictionary
                    .require_index(n)
                    .map(|ix| Arc::clone(&self.columns[ix]))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Dataset {
            dictionary: restricted,
            columns,
            row_count: self.row_count,
        })
    }

    /// Keep rows matched by the selector. The dictionary is unchanged; an
    /// empty result is valid.
    pub fn filter_subgroup(&self, sel: &SubgroupSelector) -> Result<Dataset, DataError> {
        let compiled = sel.compile(&self.dictionary)?;
        let keep: Vec<usize> = (0..self.row_count)
            .filter(|&r| compiled.matches(self, r))
            .collect();
        Ok(self.take_rows(&keep))
    }

    /// Materialize the given rows (in the given order) into a new dataset.
    pub fn take_rows(&self, rows: &[usize]) -> Dataset {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                Arc::new(match &**col {
                    Column::Coded(vals) => Column::Coded(rows.iter().map(|&r| vals[r]).collect()),
                    Column::Numeric(vals) => {
                        Column::Numeric(rows.iter().map(|&r| vals[r]).collect())
                    }
                })
            })
            .collect();
        Dataset {
            dictionary: Arc::clone(&self.dictionary),
            columns,
            row_count: rows.len(),
        }
    }

    /// Exact per-row identity over the named features: coded cells as slot
    /// indices, numeric cells as bit patterns.
    pub fn row_keys(&self, feature_ixs: &[usize]) -> Vec<Vec<u64>> {
        (0..self.row_count)
            .map(|r| {
                feature_ixs
                    .iter()
                    .map(|&ix| match &*self.columns[ix] {
                        Column::Coded(vals) => u64::from(vals[r]),
                        Column::Numeric(vals) => vals[r].to_bits(),
                    })
                    .collect()
            })
            .collect()
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let mut cardinalities = BTreeMap::new();
        for (ix, spec) in self.dictionary.features().iter().enumerate() {
            let distinct = match &*self.columns[ix] {
                Column::Coded(vals) => {
                    let mut seen: Vec<u32> = vals.clone();
                    seen.sort_unstable();
                    seen.dedup();
                    seen.len()
                }
                Column::Numeric(vals) => {
                    let mut seen: Vec<u64> = vals.iter().map(|v| v.to_bits()).collect();
                    seen.sort_unstable();
                    seen.dedup();
                    seen.len()
                }
            };
            cardinalities.insert(spec.name.clone(), distinct);
        }
        Fingerprint {
            rows: self.row_count,
            cardinalities,
        }
    }

    /// Observed distinct values of one feature.
    pub fn distinct_count(&self, feature: &str) -> Result<usize, DataError> {
        let ix = self.dictionary.require_index(feature)?;
        Ok(self.fingerprint().cardinalities[&self.dictionary.features()[ix].name])
    }
}
