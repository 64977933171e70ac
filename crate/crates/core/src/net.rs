//! Word-adjacency networks and the shuffled-baseline normalization.
//!
//! A network joins the distinct lemmas of a document with an undirected,
//! unweighted edge for every pair of consecutive tokens. Metric values are
//! made frequency-independent by dividing by the mean obtained over an
//! ensemble of frequency-preserving shuffles of the same document.

use std::collections::BTreeMap;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::metrics::{network_summary, MetricId};
use crate::text::{shuffle_tokens, Document};
use crate::util::derive_seed;

/// Undirected simple graph over the distinct lemmas of a document.
///
/// Immutable after construction; adjacency lists are sorted, nodes are
/// indexed in first-occurrence order.
#[derive(Debug, Clone)]
pub struct WordNetwork {
    lemmas: Vec<String>,
    counts: Vec<u32>,
    adjacency: Vec<Vec<u32>>,
    edge_count: usize,
}

impl WordNetwork {
    /// Build the adjacency network of a preprocessed document. Consecutive
    /// tokens are linked, repeated adjacencies collapse to a single edge,
    /// and adjacent identical lemmas produce no edge.
    pub fn from_document(doc: &Document) -> Result<Self> {
        if doc.token_count() < 2 {
            return Err(Error::DegenerateDocument {
                id: doc.id.clone(),
                tokens: doc.token_count(),
            });
        }
        let mut index: HashMap<&str, u32> = HashMap::new();
        let mut lemmas: Vec<String> = Vec::new();
        let mut counts: Vec<u32> = Vec::new();
        let mut stream: Vec<u32> = Vec::with_capacity(doc.token_count());
        for token in &doc.tokens {
            let id = *index.entry(token.lemma.as_str()).or_insert_with(|| {
                lemmas.push(token.lemma.clone());
                counts.push(0);
                (lemmas.len() - 1) as u32
            });
            counts[id as usize] += 1;
            stream.push(id);
        }
        let mut edges: std::collections::BTreeSet<(u32, u32)> = std::collections::BTreeSet::new();
        for pair in stream.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if a != b {
                edges.insert((a.min(b), a.max(b)));
            }
        }
        let mut adjacency = vec![Vec::new(); lemmas.len()];
        for &(a, b) in &edges {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(WordNetwork {
            lemmas,
            counts,
            adjacency,
            edge_count: edges.len(),
        })
    }

    /// Number of nodes N.
    pub fn node_count(&self) -> usize {
        self.lemmas.len()
    }

    /// Number of edges e.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn lemma(&self, node: usize) -> &str {
        &self.lemmas[node]
    }

    /// Occurrence count N_i of the node's lemma in the source document.
    pub fn occurrences(&self, node: usize) -> u32 {
        self.counts[node]
    }

    pub fn occurrence_counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn neighbors(&self, node: usize) -> &[u32] {
        &self.adjacency[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].len()
    }

    pub fn are_adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&(b as u32)).is_ok()
    }

    /// Unique edges as (low, high) node-index pairs, sorted.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for (a, list) in self.adjacency.iter().enumerate() {
            for &b in list {
                if (a as u32) < b {
                    out.push((a as u32, b));
                }
            }
        }
        out
    }

    /// Build a network directly from node count and an edge list; used by
    /// tests and the synthetic-graph tooling. Counts default to 1.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut set: std::collections::BTreeSet<(u32, u32)> = std::collections::BTreeSet::new();
        for &(a, b) in edges {
            assert!(a < n && b < n, "edge endpoint out of range");
            if a != b {
                set.insert((a.min(b) as u32, a.max(b) as u32));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &set {
            adjacency[a as usize].push(b);
            adjacency[b as usize].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        WordNetwork {
            lemmas: (0..n).map(|i| format!("n{i}")).collect(),
            counts: vec![1; n],
            adjacency,
            edge_count: set.len(),
        }
    }
}

/// Mean and deviation of one metric over a shuffled ensemble.
#[derive(Debug, Clone, Copy)]
pub struct BaselineStats {
    /// Sample mean over the kept realizations.
    pub mean: f64,
    /// Sample standard deviation over the kept realizations.
    pub std_dev: f64,
    /// Realizations that produced a defined value.
    pub kept: usize,
    /// Realizations skipped because the metric was undefined.
    pub skipped: usize,
}

/// A dimensionless normalized measurement with its propagated error.
#[derive(Debug, Clone, Copy)]
pub struct NormalizedValue {
    pub value: f64,
    pub error: f64,
}

/// Divide a raw value by the ensemble mean; the propagated error is
/// (sigma/mu) times the normalized value.
pub fn normalize(raw: f64, stats: &BaselineStats, metric: &str) -> Result<NormalizedValue> {
    if stats.mean == 0.0 {
        return Err(Error::ZeroBaseline {
            metric: metric.to_string(),
        });
    }
    let value = raw / stats.mean;
    let error = (stats.std_dev / stats.mean).abs() * value.abs();
    Ok(NormalizedValue { value, error })
}

fn sample_stats(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.max(0.0).sqrt())
}

/// Baselines for every metric over one shuffled ensemble.
#[derive(Debug, Clone, Default)]
pub struct EnsembleSummaries {
    /// Metrics with a usable baseline (at most half the realizations
    /// skipped, at least two kept).
    pub stats: BTreeMap<MetricId, BaselineStats>,
    /// Skip counts for every metric that was undefined on at least one
    /// realization, including metrics too degenerate to keep.
    pub skipped: BTreeMap<MetricId, usize>,
}

/// Summaries of every metric over `shuffles` shuffled realizations of a
/// document. Realization r uses the child seed derived from (seed, r), so
/// results do not depend on evaluation order.
pub fn ensemble_summaries(
    doc: &Document,
    shuffles: usize,
    seed: u64,
    h_levels: &[u8],
    eta: usize,
) -> Result<EnsembleSummaries> {
    if shuffles < 2 {
        return Err(Error::Validation(format!(
            "ensemble size must be at least 2, got {shuffles}"
        )));
    }
    let mut samples: BTreeMap<MetricId, Vec<f64>> = BTreeMap::new();
    for r in 0..shuffles {
        let shuffled = shuffle_tokens(doc, derive_seed(seed, r as u64));
        let net = WordNetwork::from_document(&shuffled)?;
        for (id, value) in network_summary(&net, h_levels, eta) {
            samples.entry(id).or_default().push(value);
        }
    }
    let mut out = EnsembleSummaries::default();
    for id in crate::metrics::metric_ids(h_levels) {
        let values = samples.remove(&id).unwrap_or_default();
        let kept = values.len();
        let skipped = shuffles - kept;
        if skipped > 0 {
            out.skipped.insert(id, skipped);
        }
        if skipped > shuffles / 2 || kept < 2 {
            continue;
        }
        let (mean, std_dev) = sample_stats(&values);
        out.stats.insert(
            id,
            BaselineStats {
                mean,
                std_dev,
                kept,
                skipped,
            },
        );
    }
    Ok(out)
}

/// Baseline statistics for a single metric. Realizations on which the
/// metric is undefined are skipped; more than half skipped is an error.
pub fn baseline_ensemble(
    doc: &Document,
    shuffles: usize,
    seed: u64,
    metric: MetricId,
    eta: usize,
) -> Result<BaselineStats> {
    if shuffles < 2 {
        return Err(Error::Validation(format!(
            "ensemble size must be at least 2, got {shuffles}"
        )));
    }
    let h_levels = metric.h_level().map(|h| vec![h]).unwrap_or_default();
    let mut values = Vec::with_capacity(shuffles);
    for r in 0..shuffles {
        let shuffled = shuffle_tokens(doc, derive_seed(seed, r as u64));
        let net = WordNetwork::from_document(&shuffled)?;
        if let Some(v) = network_summary(&net, &h_levels, eta).remove(&metric) {
            values.push(v);
        }
    }
    let kept = values.len();
    let skipped = shuffles - kept;
    if skipped > shuffles / 2 || kept < 2 {
        return Err(Error::EnsembleDegenerate {
            metric: metric.name(),
            kept,
            total: shuffles,
        });
    }
    let (mean, std_dev) = sample_stats(&values);
    Ok(BaselineStats {
        mean,
        std_dev,
        kept,
        skipped,
    })
}
