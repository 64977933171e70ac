//! Topological measurements of word networks and their per-document
//! summaries.
//!
//! Per-node measurements: degree, mean neighbor degree and its deviation,
//! self-avoiding-walk accessibility and diversity, betweenness, local
//! clustering, and mean shortest-path distance. Network-global values:
//! degree assortativity, global clustering (transitivity), and the average
//! shortest path length. Each per-node measurement is summarized four ways:
//! mean over all nodes, mean over the most frequent lemmas, standard
//! deviation, and skewness.

use std::collections::BTreeMap;
use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::WordNetwork;

/// Per-node measurement identifiers. The `u8` on accessibility and
/// diversity is the walk length h.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeMetric {
    Degree,
    NeighborDegree,
    NeighborDegreeStd,
    Accessibility(u8),
    Diversity(u8),
    Betweenness,
    Clustering,
    PathLength,
}

impl NodeMetric {
    pub fn name(self) -> String {
        match self {
            NodeMetric::Degree => "degree".into(),
            NodeMetric::NeighborDegree => "neighbor_degree".into(),
            NodeMetric::NeighborDegreeStd => "neighbor_degree_std".into(),
            NodeMetric::Accessibility(h) => format!("accessibility_h{h}"),
            NodeMetric::Diversity(h) => format!("diversity_h{h}"),
            NodeMetric::Betweenness => "betweenness".into(),
            NodeMetric::Clustering => "clustering".into(),
            NodeMetric::PathLength => "path_length".into(),
        }
    }
}

/// How a per-node measurement is collapsed to a document feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SummaryStat {
    Mean,
    /// Mean over the eta most frequent lemmas.
    TopMean,
    StdDev,
    Skewness,
}

impl SummaryStat {
    pub fn name(self) -> &'static str {
        match self {
            SummaryStat::Mean => "mean",
            SummaryStat::TopMean => "meantop",
            SummaryStat::StdDev => "std",
            SummaryStat::Skewness => "skew",
        }
    }
}

/// Whole-network measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GlobalMetric {
    Assortativity,
    GlobalClustering,
    AvgPathLength,
}

impl GlobalMetric {
    pub fn name(self) -> &'static str {
        match self {
            GlobalMetric::Assortativity => "assortativity",
            GlobalMetric::GlobalClustering => "global_clustering",
            GlobalMetric::AvgPathLength => "avg_path_length",
        }
    }
}

/// Identifier of one document-level metric value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MetricId {
    Node(NodeMetric, SummaryStat),
    Global(GlobalMetric),
}

impl MetricId {
    /// Column-name form, e.g. `mean_accessibility_h3` or `assortativity`.
    pub fn name(self) -> String {
        match self {
            MetricId::Node(metric, stat) => format!("{}_{}", stat.name(), metric.name()),
            MetricId::Global(global) => global.name().to_string(),
        }
    }

    /// Walk length for accessibility/diversity metrics, if any.
    pub fn h_level(self) -> Option<u8> {
        match self {
            MetricId::Node(NodeMetric::Accessibility(h), _)
            | MetricId::Node(NodeMetric::Diversity(h), _) => Some(h),
            _ => None,
        }
    }
}

/// Every per-node metric for the configured walk lengths.
pub fn node_metrics(h_levels: &[u8]) -> Vec<NodeMetric> {
    let mut out = vec![
        NodeMetric::Degree,
        NodeMetric::NeighborDegree,
        NodeMetric::NeighborDegreeStd,
    ];
    for &h in h_levels {
        out.push(NodeMetric::Accessibility(h));
        out.push(NodeMetric::Diversity(h));
    }
    out.push(NodeMetric::Betweenness);
    out.push(NodeMetric::Clustering);
    out.push(NodeMetric::PathLength);
    out
}

/// Every document-level metric id for the configured walk lengths.
pub fn metric_ids(h_levels: &[u8]) -> Vec<MetricId> {
    let mut out = Vec::new();
    for metric in node_metrics(h_levels) {
        for stat in [
            SummaryStat::Mean,
            SummaryStat::TopMean,
            SummaryStat::StdDev,
            SummaryStat::Skewness,
        ] {
            out.push(MetricId::Node(metric, stat));
        }
    }
    out.push(MetricId::Global(GlobalMetric::Assortativity));
    out.push(MetricId::Global(GlobalMetric::GlobalClustering));
    out.push(MetricId::Global(GlobalMetric::AvgPathLength));
    out
}

/// Degree, mean neighbor degree, and the population deviation of the
/// neighbor degrees. The neighbor statistics are undefined for isolated
/// nodes.
#[derive(Debug, Clone)]
pub struct DegreeStats {
    pub degree: Vec<usize>,
    pub neighbor_mean: Vec<Option<f64>>,
    pub neighbor_std: Vec<Option<f64>>,
}

pub fn degree_stats(net: &WordNetwork) -> DegreeStats {
    let n = net.node_count();
    let degree: Vec<usize> = (0..n).map(|i| net.degree(i)).collect();
    let mut neighbor_mean = vec![None; n];
    let mut neighbor_std = vec![None; n];
    for i in 0..n {
        let k = degree[i];
        if k == 0 {
            continue;
        }
        let mean = net
            .neighbors(i)
            .iter()
            .map(|&j| degree[j as usize] as f64)
            .sum::<f64>()
            / k as f64;
        let var = net
            .neighbors(i)
            .iter()
            .map(|&j| {
                let d = degree[j as usize] as f64 - mean;
                d * d
            })
            .sum::<f64>()
            / k as f64;
        neighbor_mean[i] = Some(mean);
        neighbor_std[i] = Some(var.max(0.0).sqrt());
    }
    DegreeStats {
        degree,
        neighbor_mean,
        neighbor_std,
    }
}

/// BFS distances from `start`; `None` for unreachable nodes.
pub fn bfs_distances(net: &WordNetwork, start: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; net.node_count()];
    dist[start] = Some(0);
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v].unwrap();
        for &u in net.neighbors(v) {
            if dist[u as usize].is_none() {
                dist[u as usize] = Some(d + 1);
                queue.push_back(u as usize);
            }
        }
    }
    dist
}

fn saw_masses(net: &WordNetwork, start: usize, h: usize) -> Vec<f64> {
    // Exhaustive enumeration of self-avoiding walks of length h. At each
    // step the walker picks uniformly among not-yet-visited neighbors;
    // walks with no remaining choice die and contribute no mass.
    let n = net.node_count();
    let mut mass = vec![0.0; n];
    let mut visited = vec![false; n];
    visited[start] = true;
    fn recurse(
        net: &WordNetwork,
        v: usize,
        depth: usize,
        h: usize,
        prob: f64,
        visited: &mut [bool],
        mass: &mut [f64],
    ) {
        if depth == h {
            mass[v] += prob;
            return;
        }
        let choices = net
            .neighbors(v)
            .iter()
            .filter(|&&u| !visited[u as usize])
            .count();
        if choices == 0 {
            return;
        }
        let step = prob / choices as f64;
        for &u in net.neighbors(v) {
            let u = u as usize;
            if !visited[u] {
                visited[u] = true;
                recurse(net, u, depth + 1, h, step, visited, mass);
                visited[u] = false;
            }
        }
    }
    recurse(net, start, 0, h, 1.0, &mut visited, &mut mass);
    mass
}

/// Destination distribution of length-`h` self-avoiding walks from node
/// `i`, restricted to the h-th concentric level (nodes at shortest-path
/// distance exactly h) and renormalized over the surviving mass. Walks
/// that die early or end closer to the origin contribute nothing. Returns
/// (node, probability) pairs sorted by node; empty when no walk survives.
pub fn saw_distribution(net: &WordNetwork, i: usize, h: usize) -> Vec<(usize, f64)> {
    assert!(h >= 1, "walk length must be at least 1");
    let mass = saw_masses(net, i, h);
    let dist = bfs_distances(net, i);
    let mut kept: Vec<(usize, f64)> = mass
        .iter()
        .enumerate()
        .filter(|&(j, &m)| m > 0.0 && dist[j] == Some(h))
        .map(|(j, &m)| (j, m))
        .collect();
    let total: f64 = kept.iter().map(|&(_, m)| m).sum();
    if total <= 0.0 {
        return Vec::new();
    }
    for entry in &mut kept {
        entry.1 /= total;
    }
    kept
}

/// Diversity: the entropy (natural log) of the surviving walk
/// distribution; `None` when no walk reaches the h-th level.
pub fn diversity(net: &WordNetwork, i: usize, h: usize) -> Option<f64> {
    let dist = saw_distribution(net, i, h);
    if dist.is_empty() {
        return None;
    }
    let entropy = -dist
        .iter()
        .map(|&(_, p)| if p > 0.0 { p * p.ln() } else { 0.0 })
        .sum::<f64>();
    Some(entropy.max(0.0))
}

/// Accessibility: exp of the diversity, the effective number of nodes
/// reached at the h-th level; 0 when no walk survives.
pub fn accessibility(net: &WordNetwork, i: usize, h: usize) -> f64 {
    diversity(net, i, h).map_or(0.0, f64::exp)
}

/// Betweenness of every node: the fraction of geodesics passing through
/// the node as an interior point, summed over ordered source/target pairs
/// and divided by N^2. Brandes' accumulation over BFS shortest-path DAGs.
pub fn betweenness(net: &WordNetwork) -> Vec<f64> {
    let n = net.node_count();
    let mut score = vec![0.0; n];
    let mut sigma = vec![0.0f64; n];
    let mut dist = vec![usize::MAX; n];
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut order: Vec<u32> = Vec::with_capacity(n);
    let mut delta = vec![0.0f64; n];
    for s in 0..n {
        sigma.fill(0.0);
        dist.fill(usize::MAX);
        for p in &mut preds {
            p.clear();
        }
        order.clear();
        delta.fill(0.0);
        sigma[s] = 1.0;
        dist[s] = 0;
        let mut queue = VecDeque::from([s as u32]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let v = v as usize;
            for &u in net.neighbors(v) {
                let ui = u as usize;
                if dist[ui] == usize::MAX {
                    dist[ui] = dist[v] + 1;
                    queue.push_back(u);
                }
                if dist[ui] == dist[v] + 1 {
                    sigma[ui] += sigma[v];
                    preds[ui].push(v as u32);
                }
            }
        }
        for &w in order.iter().rev() {
            let wi = w as usize;
            let share = (1.0 + delta[wi]) / sigma[wi];
            for &v in &preds[wi] {
                delta[v as usize] += sigma[v as usize] * share;
            }
            if wi != s {
                score[wi] += delta[wi];
            }
        }
    }
    let norm = (n * n) as f64;
    for v in &mut score {
        *v /= norm;
    }
    score
}

/// Degree assortativity: the Pearson correlation of degrees across edge
/// endpoints. Undefined when every edge endpoint has the same degree
/// (e.g. cycles), signalled as a metric-undefined error.
pub fn assortativity(net: &WordNetwork) -> Result<f64> {
    let edges = net.edges();
    if edges.is_empty() {
        return Err(Error::MetricUndefined {
            metric: "assortativity".into(),
            reason: "network has no edges".into(),
        });
    }
    let degrees: Vec<f64> = (0..net.node_count()).map(|i| net.degree(i) as f64).collect();
    let first = degrees[edges[0].0 as usize];
    let all_equal = edges.iter().all(|&(a, b)| {
        degrees[a as usize] == first && degrees[b as usize] == first
    });
    if all_equal {
        return Err(Error::MetricUndefined {
            metric: "assortativity".into(),
            reason: "all edge endpoints have equal degree".into(),
        });
    }
    let m = edges.len() as f64;
    let mut s_prod = 0.0;
    let mut s_sum = 0.0;
    let mut s_sq = 0.0;
    for &(a, b) in &edges {
        let ka = degrees[a as usize];
        let kb = degrees[b as usize];
        s_prod += ka * kb;
        s_sum += 0.5 * (ka + kb);
        s_sq += 0.5 * (ka * ka + kb * kb);
    }
    let mean = s_sum / m;
    let numerator = s_prod / m - mean * mean;
    let denominator = s_sq / m - mean * mean;
    Ok(numerator / denominator)
}

/// Local clustering per node and the global transitivity.
#[derive(Debug, Clone)]
pub struct ClusteringStats {
    /// Fraction of connected neighbor pairs; 0 for nodes of degree < 2.
    pub local: Vec<f64>,
    /// Three times the triangle count over the connected-triple count; 0
    /// on triangle-free and wedge-free networks.
    pub global: f64,
}

pub fn clustering(net: &WordNetwork) -> ClusteringStats {
    let n = net.node_count();
    let mut local = vec![0.0; n];
    let mut wedges = 0.0;
    let mut triangle_ends = 0.0;
    for i in 0..n {
        let neigh = net.neighbors(i);
        let k = neigh.len();
        if k < 2 {
            continue;
        }
        let mut links = 0usize;
        for (a_pos, &a) in neigh.iter().enumerate() {
            for &b in &neigh[a_pos + 1..] {
                if net.are_adjacent(a as usize, b as usize) {
                    links += 1;
                }
            }
        }
        let pairs = (k * (k - 1) / 2) as f64;
        local[i] = links as f64 / pairs;
        wedges += pairs;
        triangle_ends += links as f64;
    }
    // Each triangle is counted once per corner in triangle_ends, so the
    // 3*triangles numerator is triangle_ends itself.
    let global = if wedges > 0.0 {
        triangle_ends / wedges
    } else {
        0.0
    };
    ClusteringStats { local, global }
}

/// Per-node mean geodesic distance and the network average over ordered
/// reachable pairs; unreachable pairs are excluded and their fraction
/// reported.
#[derive(Debug, Clone)]
pub struct PathStats {
    /// Mean distance from each node to the nodes it can reach; `None` for
    /// nodes that reach nothing.
    pub mean_distance: Vec<Option<f64>>,
    /// Mean over all ordered reachable pairs; `None` when no pair connects.
    pub network_mean: Option<f64>,
    /// Fraction of ordered pairs with no connecting path.
    pub unreachable_fraction: f64,
}

pub fn shortest_paths(net: &WordNetwork) -> PathStats {
    let n = net.node_count();
    let mut mean_distance = vec![None; n];
    let mut total = 0.0;
    let mut reachable_pairs = 0usize;
    for i in 0..n {
        let dist = bfs_distances(net, i);
        let mut sum = 0usize;
        let mut reached = 0usize;
        for (j, d) in dist.iter().enumerate() {
            if j == i {
                continue;
            }
            if let Some(d) = d {
                sum += d;
                reached += 1;
            }
        }
        if reached > 0 {
            mean_distance[i] = Some(sum as f64 / reached as f64);
            total += sum as f64;
            reachable_pairs += reached;
        }
    }
    let ordered_pairs = n * n.saturating_sub(1);
    let network_mean = if reachable_pairs > 0 {
        Some(total / reachable_pairs as f64)
    } else {
        None
    };
    let unreachable_fraction = if ordered_pairs > 0 {
        (ordered_pairs - reachable_pairs) as f64 / ordered_pairs as f64
    } else {
        0.0
    };
    PathStats {
        mean_distance,
        network_mean,
        unreachable_fraction,
    }
}

/// Document-level summary of one per-node measurement.
#[derive(Debug, Clone, Copy)]
pub struct MetricSummary {
    pub mean: f64,
    /// Mean over the eta most frequent lemmas (ties broken by lemma).
    pub top_mean: f64,
    /// Population standard deviation.
    pub std_dev: f64,
    /// Population skewness m3 / m2^(3/2); 0 when the variance vanishes.
    pub skewness: f64,
    /// True when fewer than eta lemmas were available (or none of the top
    /// lemmas had a defined value) and `top_mean` fell back to `mean`.
    pub top_fallback: bool,
}

fn population_moments(values: &[f64]) -> (f64, f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let m2 = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let m3 = values.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
    (mean, m2, m3)
}

/// Collapse per-node values (missing entries excluded) into the four
/// summary statistics. `None` when every value is missing.
pub fn summarize_metric(
    values: &[Option<f64>],
    counts: &[u32],
    lemmas: &[&str],
    eta: usize,
) -> Option<MetricSummary> {
    assert!(eta >= 1, "eta must be at least 1");
    assert_eq!(values.len(), counts.len());
    assert_eq!(values.len(), lemmas.len());
    let defined: Vec<f64> = values.iter().flatten().copied().collect();
    if defined.is_empty() {
        return None;
    }
    let (mean, m2, m3) = population_moments(&defined);
    let std_dev = m2.max(0.0).sqrt();
    let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]).then_with(|| lemmas[a].cmp(lemmas[b])));
    let mut top_fallback = values.len() < eta;
    let top_values: Vec<f64> = order
        .iter()
        .take(eta)
        .filter_map(|&i| values[i])
        .collect();
    let top_mean = if top_values.is_empty() {
        top_fallback = true;
        mean
    } else if top_fallback {
        mean
    } else {
        top_values.iter().sum::<f64>() / top_values.len() as f64
    };
    Some(MetricSummary {
        mean,
        top_mean,
        std_dev,
        skewness,
        top_fallback,
    })
}

/// Every per-node measurement of a network, for the given walk lengths.
#[derive(Debug, Clone)]
pub struct NodeMetricTable {
    pub h_levels: Vec<u8>,
    pub degree: Vec<usize>,
    pub neighbor_mean: Vec<Option<f64>>,
    pub neighbor_std: Vec<Option<f64>>,
    /// Keyed by h, aligned with `h_levels`.
    pub accessibility: BTreeMap<u8, Vec<f64>>,
    pub diversity: BTreeMap<u8, Vec<Option<f64>>>,
    pub betweenness: Vec<f64>,
    pub clustering: Vec<f64>,
    pub path_length: Vec<Option<f64>>,
}

impl NodeMetricTable {
    pub fn compute(net: &WordNetwork, h_levels: &[u8]) -> Self {
        let n = net.node_count();
        let ds = degree_stats(net);
        let mut acc = BTreeMap::new();
        let mut div = BTreeMap::new();
        for &h in h_levels {
            let mut a = Vec::with_capacity(n);
            let mut d = Vec::with_capacity(n);
            for i in 0..n {
                let delta = diversity(net, i, h as usize);
                a.push(delta.map_or(0.0, f64::exp));
                d.push(delta);
            }
            acc.insert(h, a);
            div.insert(h, d);
        }
        let paths = shortest_paths(net);
        NodeMetricTable {
            h_levels: h_levels.to_vec(),
            degree: ds.degree,
            neighbor_mean: ds.neighbor_mean,
            neighbor_std: ds.neighbor_std,
            accessibility: acc,
            diversity: div,
            betweenness: betweenness(net),
            clustering: clustering(net).local,
            path_length: paths.mean_distance,
        }
    }

    /// Per-node values of one metric, missing entries as `None`.
    pub fn values(&self, metric: NodeMetric) -> Vec<Option<f64>> {
        match metric {
            NodeMetric::Degree => self.degree.iter().map(|&k| Some(k as f64)).collect(),
            NodeMetric::NeighborDegree => self.neighbor_mean.clone(),
            NodeMetric::NeighborDegreeStd => self.neighbor_std.clone(),
            NodeMetric::Accessibility(h) => self.accessibility[&h]
                .iter()
                .map(|&v| Some(v))
                .collect(),
            NodeMetric::Diversity(h) => self.diversity[&h].clone(),
            NodeMetric::Betweenness => self.betweenness.iter().map(|&v| Some(v)).collect(),
            NodeMetric::Clustering => self.clustering.iter().map(|&v| Some(v)).collect(),
            NodeMetric::PathLength => self.path_length.clone(),
        }
    }
}

/// All document-level metric values for a network. Metrics that are
/// undefined on this network are absent from the map.
pub fn network_summary(
    net: &WordNetwork,
    h_levels: &[u8],
    eta: usize,
) -> BTreeMap<MetricId, f64> {
    let table = NodeMetricTable::compute(net, h_levels);
    let counts = net.occurrence_counts();
    let lemmas: Vec<&str> = (0..net.node_count()).map(|i| net.lemma(i)).collect();
    let mut out = BTreeMap::new();
    for metric in node_metrics(h_levels) {
        let values = table.values(metric);
        if let Some(summary) = summarize_metric(&values, counts, &lemmas, eta) {
            out.insert(MetricId::Node(metric, SummaryStat::Mean), summary.mean);
            out.insert(MetricId::Node(metric, SummaryStat::TopMean), summary.top_mean);
            out.insert(MetricId::Node(metric, SummaryStat::StdDev), summary.std_dev);
            out.insert(MetricId::Node(metric, SummaryStat::Skewness), summary.skewness);
        }
    }
    if let Ok(r) = assortativity(net) {
        out.insert(MetricId::Global(GlobalMetric::Assortativity), r);
    }
    out.insert(
        MetricId::Global(GlobalMetric::GlobalClustering),
        clustering(net).global,
    );
    if let Some(l) = shortest_paths(net).network_mean {
        out.insert(MetricId::Global(GlobalMetric::AvgPathLength), l);
    }
    out
}
