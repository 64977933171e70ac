//! Feature vectors and the feature-matrix CSV format.
//!
//! One CSV per feature family, one row per document. The first line is a
//! `# config=<hash>` comment carrying the run's configuration hash; then a
//! mandatory header `id,label,<columns...>`. Missing values are written as
//! empty fields. Column names carry the family prefix (`net_`, `int_`,
//! `stop_`, `bg_`) and, for network features, the summary/metric grammar
//! (e.g. `net_mean_accessibility_h3_norm`); `_norm_err` columns hold the
//! propagated normalization errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::{metric_ids, network_summary};
use crate::net::{ensemble_summaries, normalize, WordNetwork};
use crate::text::Document;

/// Named real-valued attributes of one document. Absent keys are missing
/// values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FeatureVector {
    values: BTreeMap<String, f64>,
}

impl FeatureVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, value: f64) {
        self.values.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.values.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.values.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

/// A feature matrix: per-document rows over the union of observed columns.
#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    pub columns: Vec<String>,
    pub rows: Vec<FeatureRow>,
}

#[derive(Debug, Clone)]
pub struct FeatureRow {
    pub id: String,
    pub label: String,
    pub features: FeatureVector,
}

impl FeatureMatrix {
    /// Assemble from per-document vectors; columns are the sorted union of
    /// all attribute names.
    pub fn from_rows(rows: Vec<FeatureRow>) -> Self {
        let mut columns: std::collections::BTreeSet<String> = std::collections::BTreeSet::new();
        for row in &rows {
            for name in row.features.names() {
                columns.insert(name.to_string());
            }
        }
        FeatureMatrix {
            columns: columns.into_iter().collect(),
            rows,
        }
    }

    /// Write the CSV form described in the module docs.
    pub fn write_csv(&self, path: &Path, config_hash: &str) -> Result<()> {
        let mut out = String::new();
        out.push_str(&format!("# config={config_hash}\n"));
        out.push_str("id,label");
        for col in &self.columns {
            out.push(',');
            out.push_str(col);
        }
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.id);
            out.push(',');
            out.push_str(&row.label);
            for col in &self.columns {
                out.push(',');
                if let Some(v) = row.features.get(col) {
                    out.push_str(&format!("{v}"));
                }
            }
            out.push('\n');
        }
        let mut file = std::fs::File::create(path).map_err(|source| Error::WriteOutput {
            path: path.to_path_buf(),
            source,
        })?;
        file.write_all(out.as_bytes()).map_err(|source| Error::WriteOutput {
            path: path.to_path_buf(),
            source,
        })
    }

    /// The config hash recorded in a feature CSV's leading comment line.
    pub fn read_config_hash(path: &Path) -> Result<Option<String>> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::ReadInput {
            path: path.to_path_buf(),
            source,
        })?;
        Ok(text
            .lines()
            .next()
            .and_then(|line| line.strip_prefix("# config="))
            .map(str::to_string))
    }

    /// Read a feature CSV written by [`FeatureMatrix::write_csv`].
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .from_path(path)
            .map_err(|source| Error::Csv {
                path: path.to_path_buf(),
                source,
            })?;
        let headers = reader
            .headers()
            .map_err(|source| Error::Csv {
                path: path.to_path_buf(),
                source,
            })?
            .clone();
        let fields: Vec<String> = headers.iter().map(str::to_string).collect();
        if fields.len() < 2 || fields[0] != "id" || fields[1] != "label" {
            return Err(Error::Validation(format!(
                "{}: feature CSV must start with id,label columns",
                path.display()
            )));
        }
        let columns: Vec<String> = fields[2..].to_vec();
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|source| Error::Csv {
                path: path.to_path_buf(),
                source,
            })?;
            let mut features = FeatureVector::new();
            for (i, col) in columns.iter().enumerate() {
                let cell = record.get(i + 2).unwrap_or("");
                if cell.is_empty() {
                    continue;
                }
                let v: f64 = cell.parse().map_err(|_| {
                    Error::Validation(format!(
                        "{}: column {col:?} holds non-numeric value {cell:?}",
                        path.display()
                    ))
                })?;
                features.insert(col.clone(), v);
            }
            rows.push(FeatureRow {
                id: record.get(0).unwrap_or("").to_string(),
                label: record.get(1).unwrap_or("").to_string(),
                features,
            });
        }
        Ok(FeatureMatrix { columns, rows })
    }
}

/// Settings for network-feature extraction.
#[derive(Debug, Clone)]
pub struct NetFeatureConfig {
    pub h_levels: Vec<u8>,
    pub eta: usize,
    pub shuffles: usize,
    pub seed: u64,
}

/// Extraction notes for one document's network features.
#[derive(Debug, Clone, Default, serde::Serialize)]
pub struct NetProvenance {
    /// Metrics whose raw value was undefined on the real network.
    pub undefined_raw: Vec<String>,
    /// Metrics left unnormalized (degenerate ensemble or zero mean).
    pub unnormalized: Vec<String>,
    /// Shuffled realizations skipped per metric.
    pub ensemble_skips: std::collections::BTreeMap<String, usize>,
}

/// The `net_` feature family for one preprocessed document: every summary
/// metric raw, normalized against the document's shuffled ensemble, and
/// the propagated error of the normalized value.
pub fn network_features(
    doc: &Document,
    cfg: &NetFeatureConfig,
) -> Result<(FeatureVector, NetProvenance)> {
    let net = WordNetwork::from_document(doc)?;
    let raw = network_summary(&net, &cfg.h_levels, cfg.eta);
    let baselines = ensemble_summaries(doc, cfg.shuffles, cfg.seed, &cfg.h_levels, cfg.eta)?;

    let mut features = FeatureVector::new();
    let mut provenance = NetProvenance::default();
    for (id, count) in &baselines.skipped {
        provenance.ensemble_skips.insert(id.name(), *count);
    }
    for id in metric_ids(&cfg.h_levels) {
        let name = id.name();
        let Some(&value) = raw.get(&id) else {
            provenance.undefined_raw.push(name);
            continue;
        };
        features.insert(format!("net_{name}"), value);
        let normalized = baselines
            .stats
            .get(&id)
            .and_then(|stats| normalize(value, stats, &name).ok());
        match normalized {
            Some(n) => {
                features.insert(format!("net_{name}_norm"), n.value);
                features.insert(format!("net_{name}_norm_err"), n.error);
            }
            None => provenance.unnormalized.push(name),
        }
    }
    Ok((features, provenance))
}
