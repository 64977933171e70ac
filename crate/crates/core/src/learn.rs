//! Supervised classification with per-class membership strengths, feature
//! relevance by information gain, and a stratified cross-validation
//! harness.
//!
//! Classifiers plug in behind [`MembershipClassifier`]: anything that maps
//! (training set, test rows) to a row-normalized membership matrix. Two
//! built-ins are provided, a fuzzy k-nearest-neighbors classifier and a
//! nearest-centroid classifier.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::features::FeatureMatrix;
use crate::util::derive_seed;

/// Distance regularizer in the fuzzy-kNN weights 1/(d^2 + XI).
const KNN_XI: f64 = 1e-9;

/// Feature rows with class labels, sharing one attribute schema.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub attributes: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    /// Class index per row, into `classes`.
    pub labels: Vec<usize>,
    /// Sorted class names; the index order is the tie-break order.
    pub classes: Vec<String>,
}

impl LabeledDataset {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Build from a feature matrix. Columns ending in `_err` (propagated
    /// normalization errors) and columns with any missing value are
    /// excluded; the dropped names are returned as the column mask.
    pub fn from_matrix(matrix: &FeatureMatrix) -> (Self, Vec<String>) {
        let mut classes: Vec<String> = matrix.rows.iter().map(|r| r.label.clone()).collect();
        classes.sort();
        classes.dedup();
        let mut kept = Vec::new();
        let mut dropped = Vec::new();
        for col in &matrix.columns {
            let complete = matrix.rows.iter().all(|r| r.features.get(col).is_some());
            if col.ends_with("_err") || !complete {
                dropped.push(col.clone());
            } else {
                kept.push(col.clone());
            }
        }
        let rows: Vec<Vec<f64>> = matrix
            .rows
            .iter()
            .map(|r| kept.iter().map(|c| r.features.get(c).unwrap()).collect())
            .collect();
        let labels = matrix
            .rows
            .iter()
            .map(|r| classes.binary_search(&r.label).unwrap())
            .collect();
        (
            LabeledDataset {
                attributes: kept,
                rows,
                labels,
                classes,
            },
            dropped,
        )
    }

    fn subset(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            attributes: self.attributes.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            classes: self.classes.clone(),
        }
    }
}

/// Shift and scale every attribute by the training fold's mean and
/// population standard deviation; attributes with zero training variance
/// are dropped from both sets and their names returned.
pub fn standardize(
    train: &LabeledDataset,
    test: &LabeledDataset,
) -> Result<(LabeledDataset, LabeledDataset, Vec<String>)> {
    if train.attributes != test.attributes {
        return Err(Error::Validation(
            "train and test datasets have different attribute schemas".into(),
        ));
    }
    if train.is_empty() {
        return Err(Error::Validation("empty training set".into()));
    }
    let n = train.len() as f64;
    let dim = train.attributes.len();
    let mut keep = Vec::new();
    let mut dropped = Vec::new();
    let mut scale = Vec::new();
    for a in 0..dim {
        let mean = train.rows.iter().map(|r| r[a]).sum::<f64>() / n;
        let var = train.rows.iter().map(|r| (r[a] - mean).powi(2)).sum::<f64>() / n;
        let std = var.max(0.0).sqrt();
        if std > 0.0 {
            keep.push(a);
            scale.push((mean, std));
        } else {
            dropped.push(train.attributes[a].clone());
        }
    }
    let project = |data: &LabeledDataset| LabeledDataset {
        attributes: keep.iter().map(|&a| data.attributes[a].clone()).collect(),
        rows: data
            .rows
            .iter()
            .map(|r| {
                keep.iter()
                    .zip(&scale)
                    .map(|(&a, &(m, s))| (r[a] - m) / s)
                    .collect()
            })
            .collect(),
        labels: data.labels.clone(),
        classes: data.classes.clone(),
    };
    Ok((project(train), project(test), dropped))
}

/// Per-instance, per-class membership strengths; rows sum to 1.
#[derive(Debug, Clone)]
pub struct MembershipMatrix {
    pub n_classes: usize,
    pub rows: Vec<Vec<f64>>,
}

impl MembershipMatrix {
    pub fn new(n_classes: usize, rows: Vec<Vec<f64>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == n_classes));
        MembershipMatrix { n_classes, rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Per-instance argmax class, lowest index on ties.
    pub fn decide(&self) -> Vec<usize> {
        self.rows.iter().map(|row| argmax(row)).collect()
    }
}

pub(crate) fn argmax(row: &[f64]) -> usize {
    let mut best = 0;
    for (j, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = j;
        }
    }
    best
}

fn euclidean_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// A supervised model producing membership strengths. Implementations
/// receive standardized features.
pub trait MembershipClassifier {
    fn memberships(&self, train: &LabeledDataset, test: &[Vec<f64>]) -> Result<MembershipMatrix>;
    /// Short identifier for reports, e.g. `fknn(k=5)`.
    fn id(&self) -> String;
}

/// Fuzzy k-nearest-neighbors: memberships are the class-wise shares of the
/// inverse-square-distance weights of the k nearest training instances.
#[derive(Debug, Clone, Copy)]
pub struct FuzzyKnn {
    pub k: usize,
}

impl MembershipClassifier for FuzzyKnn {
    fn memberships(&self, train: &LabeledDataset, test: &[Vec<f64>]) -> Result<MembershipMatrix> {
        if train.is_empty() {
            return Err(Error::Validation("empty training set".into()));
        }
        if self.k == 0 || self.k > train.len() {
            return Err(Error::Validation(format!(
                "k must be in 1..={}, got {}",
                train.len(),
                self.k
            )));
        }
        let n_classes = train.classes.len();
        let mut rows = Vec::with_capacity(test.len());
        for x in test {
            let mut dist: Vec<(f64, usize)> = train
                .rows
                .iter()
                .enumerate()
                .map(|(i, t)| (euclidean_sq(x, t), i))
                .collect();
            // Distance ties break on training-instance index.
            dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut weights = vec![0.0; n_classes];
            let mut total = 0.0;
            for &(d_sq, idx) in dist.iter().take(self.k) {
                let w = 1.0 / (d_sq + KNN_XI);
                weights[train.labels[idx]] += w;
                total += w;
            }
            for w in &mut weights {
                *w /= total;
            }
            rows.push(weights);
        }
        Ok(MembershipMatrix::new(n_classes, rows))
    }

    fn id(&self) -> String {
        format!("fknn(k={})", self.k)
    }
}

/// Nearest-centroid memberships: softmax of negative distances to the
/// per-class mean vectors.
#[derive(Debug, Clone, Copy, Default)]
pub struct NearestCentroid;

impl MembershipClassifier for NearestCentroid {
    fn memberships(&self, train: &LabeledDataset, test: &[Vec<f64>]) -> Result<MembershipMatrix> {
        if train.is_empty() {
            return Err(Error::Validation("empty training set".into()));
        }
        let n_classes = train.classes.len();
        let dim = train.attributes.len();
        let mut centroids = vec![vec![0.0; dim]; n_classes];
        let mut counts = vec![0usize; n_classes];
        for (row, &label) in train.rows.iter().zip(&train.labels) {
            counts[label] += 1;
            for (c, v) in centroids[label].iter_mut().zip(row) {
                *c += v;
            }
        }
        for (j, count) in counts.iter().enumerate() {
            if *count == 0 {
                return Err(Error::Validation(format!(
                    "class {:?} has no training instances",
                    train.classes[j]
                )));
            }
            for c in &mut centroids[j] {
                *c /= *count as f64;
            }
        }
        let mut rows = Vec::with_capacity(test.len());
        for x in test {
            let d: Vec<f64> = centroids
                .iter()
                .map(|c| euclidean_sq(x, c).sqrt())
                .collect();
            let d_min = d.iter().copied().fold(f64::INFINITY, f64::min);
            let mut m: Vec<f64> = d.iter().map(|&di| (-(di - d_min)).exp()).collect();
            let total: f64 = m.iter().sum();
            for v in &mut m {
                *v /= total;
            }
            rows.push(m);
        }
        Ok(MembershipMatrix::new(n_classes, rows))
    }

    fn id(&self) -> String {
        "centroid".into()
    }
}

/// Information gain of one attribute: the base-2 entropy of the class
/// distribution minus the entropy after discretizing the attribute into
/// `bins` equal-width intervals over its observed range. A constant
/// attribute carries no information and scores 0.
pub fn info_gain(data: &LabeledDataset, attribute: &str, bins: usize) -> Result<f64> {
    let a = data
        .attributes
        .iter()
        .position(|name| name == attribute)
        .ok_or_else(|| Error::UnknownAttribute(attribute.to_string()))?;
    if bins < 2 {
        return Err(Error::Validation(format!(
            "info gain needs at least 2 bins, got {bins}"
        )));
    }
    if data.is_empty() {
        return Err(Error::Validation("empty dataset".into()));
    }
    let values: Vec<f64> = data.rows.iter().map(|r| r[a]).collect();
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Ok(0.0);
    }
    let n_classes = data.classes.len();
    let width = (max - min) / bins as f64;
    let mut per_bin = vec![vec![0usize; n_classes]; bins];
    for (v, &label) in values.iter().zip(&data.labels) {
        let b = (((v - min) / width) as usize).min(bins - 1);
        per_bin[b][label] += 1;
    }
    let total = data.len() as f64;
    let mut overall = vec![0usize; n_classes];
    for &label in &data.labels {
        overall[label] += 1;
    }
    let base = entropy(&overall);
    let conditional: f64 = per_bin
        .iter()
        .map(|counts| {
            let size: usize = counts.iter().sum();
            if size == 0 {
                0.0
            } else {
                size as f64 / total * entropy(counts)
            }
        })
        .sum();
    Ok((base - conditional).max(0.0))
}

fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let total = total as f64;
    -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / total;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Base-2 entropy of a dataset's class distribution.
pub fn dataset_entropy(data: &LabeledDataset) -> f64 {
    let mut counts = vec![0usize; data.classes.len()];
    for &label in &data.labels {
        counts[label] += 1;
    }
    entropy(&counts)
}

/// Every attribute scored by information gain, sorted descending (name
/// ascending on ties).
pub fn info_gain_ranking(data: &LabeledDataset, bins: usize) -> Result<Vec<(String, f64)>> {
    let mut scores = Vec::with_capacity(data.attributes.len());
    for name in &data.attributes {
        scores.push((name.clone(), info_gain(data, name, bins)?));
    }
    scores.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(scores)
}

/// Stratified fold assignment.
#[derive(Debug, Clone)]
pub struct FoldPlan {
    pub folds: usize,
    /// Fold index per instance.
    pub assignment: Vec<usize>,
    pub seed: u64,
    pub warnings: Vec<String>,
}

impl FoldPlan {
    /// Stratified assignment: each class's instances are shuffled and
    /// dealt round-robin, with a rotating offset so fold sizes stay
    /// balanced across classes. Deterministic for a fixed seed.
    pub fn stratified(labels: &[usize], classes: &[String], folds: usize, seed: u64) -> Result<Self> {
        if folds < 2 {
            return Err(Error::Validation(format!(
                "cross-validation needs at least 2 folds, got {folds}"
            )));
        }
        if labels.len() < folds {
            return Err(Error::Validation(format!(
                "{} instance(s) cannot fill {folds} folds",
                labels.len()
            )));
        }
        let mut warnings = Vec::new();
        let mut assignment = vec![0usize; labels.len()];
        let mut offset = 0usize;
        for class in 0..classes.len() {
            let mut members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
            if members.len() < folds {
                warnings.push(format!(
                    "class {:?} has {} instance(s) for {folds} folds; some folds will lack it",
                    classes[class],
                    members.len()
                ));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, class as u64));
            members.shuffle(&mut rng);
            for (i, &idx) in members.iter().enumerate() {
                assignment[idx] = (offset + i) % folds;
            }
            offset = (offset + members.len()) % folds;
        }
        Ok(FoldPlan {
            folds,
            assignment,
            seed,
            warnings,
        })
    }

    pub fn test_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == fold)
            .collect()
    }

    pub fn train_indices(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] != fold)
            .collect()
    }
}

/// Memberships emitted for one fold's held-out instances.
#[derive(Debug, Clone)]
pub struct FoldMemberships {
    pub fold: usize,
    pub test_indices: Vec<usize>,
    pub memberships: MembershipMatrix,
}

/// Cross-validation outcome: per-fold membership matrices and the pooled
/// accuracy.
#[derive(Debug, Clone)]
pub struct CvOutcome {
    pub folds: Vec<FoldMemberships>,
    pub fold_accuracies: Vec<f64>,
    /// Fraction of all instances whose argmax membership matches the true
    /// class.
    pub accuracy: f64,
}

/// Run the classifier under the fold plan: for each fold, train on the
/// complement (standardized by the training fold) and emit memberships for
/// the held-out instances.
pub fn cross_validate(
    data: &LabeledDataset,
    classifier: &dyn MembershipClassifier,
    plan: &FoldPlan,
) -> Result<CvOutcome> {
    if data.classes.len() < 2 {
        return Err(Error::Validation(
            "classification needs at least 2 classes".into(),
        ));
    }
    if plan.assignment.len() != data.len() {
        return Err(Error::Validation(format!(
            "fold plan covers {} instance(s), dataset has {}",
            plan.assignment.len(),
            data.len()
        )));
    }
    let mut folds = Vec::with_capacity(plan.folds);
    let mut fold_accuracies = Vec::with_capacity(plan.folds);
    let mut correct = 0usize;
    for fold in 0..plan.folds {
        let test_indices = plan.test_indices(fold);
        if test_indices.is_empty() {
            fold_accuracies.push(f64::NAN);
            continue;
        }
        let train = data.subset(&plan.train_indices(fold));
        let test = data.subset(&test_indices);
        let (train_std, test_std, _dropped) = standardize(&train, &test)?;
        let memberships = classifier.memberships(&train_std, &test_std.rows)?;
        let decisions = memberships.decide();
        let fold_correct = decisions
            .iter()
            .zip(&test_indices)
            .filter(|&(&d, &i)| d == data.labels[i])
            .count();
        correct += fold_correct;
        fold_accuracies.push(fold_correct as f64 / test_indices.len() as f64);
        folds.push(FoldMemberships {
            fold,
            test_indices,
            memberships,
        });
    }
    Ok(CvOutcome {
        folds,
        fold_accuracies,
        accuracy: correct as f64 / data.len() as f64,
    })
}
