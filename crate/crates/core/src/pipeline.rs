//! Experiment orchestration: ingest a corpus, materialize per-family
//! feature matrices, run cross-validated classification, and fuse the
//! evidence over parameter grids.
//!
//! Orchestration is file-mediated: `run_features` writes one CSV per
//! feature family plus a provenance JSON, and `run_classify` reads those
//! CSVs back, so partial reruns and external tools work on the same
//! artifacts. Every output embeds the configuration hash.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{load_lexicon, load_manifest, load_stopword_file, read_text};
use crate::error::{Error, Result};
use crate::features::{
    network_features, FeatureMatrix, FeatureRow, FeatureVector, NetFeatureConfig, NetProvenance,
};
use crate::fusion::{sweep, FoldPair, FusionConfig, FusionMode, GainReport};
use crate::learn::{
    cross_validate, info_gain_ranking, FoldPlan, FuzzyKnn, LabeledDataset, MembershipClassifier,
    NearestCentroid,
};
use crate::metrics::NodeMetricTable;
use crate::net::WordNetwork;
use crate::style::{char_bigram_features, intermittency_features, stopword_frequency_features};
use crate::text::{
    derive_corpus_stopwords, lemmatize, remove_stopwords, tokenize, Document, LemmaLexicon,
    PolicyMode, StopwordPolicy,
};
use crate::util::{derive_seed, fnv1a64, hash_hex};

pub const FAMILIES: [&str; 4] = ["net", "int", "stop", "bg"];

/// Where the stopword list comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode", content = "path")]
pub enum StopwordSource {
    /// The bundled standard English list.
    English,
    /// A one-lemma-per-line file.
    File(PathBuf),
    /// Lemmas occurring in every corpus document.
    Corpus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierChoice {
    Fknn,
    Centroid,
}

/// Full experiment configuration; validated before any computation and
/// serialized verbatim into every results JSON.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    /// Primary input of the run: the corpus manifest for feature
    /// extraction and dumps, the features directory for classification.
    pub manifest: PathBuf,
    pub lexicon: Option<PathBuf>,
    pub stopwords: StopwordSource,
    pub h_levels: Vec<u8>,
    pub eta: usize,
    pub shuffles: usize,
    pub seed: u64,
    pub classifier: ClassifierChoice,
    pub k_values: Vec<usize>,
    pub folds: usize,
    pub lambda_step: f64,
    pub theta_step: f64,
    /// Minimum occurrences for a word's intermittency feature.
    pub min_word_count: usize,
    pub info_gain_bins: usize,
    pub out_dir: PathBuf,
}

impl RunConfig {
    /// Paper-mirroring defaults: h up to 3, eta 50, 30 shuffles, 10 folds,
    /// fuzzy kNN with k = 5, grid step 0.01.
    pub fn new(manifest: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            manifest: manifest.into(),
            lexicon: None,
            stopwords: StopwordSource::English,
            h_levels: vec![1, 2, 3],
            eta: 50,
            shuffles: 30,
            seed: 42,
            classifier: ClassifierChoice::Fknn,
            k_values: vec![5],
            folds: 10,
            lambda_step: 0.01,
            theta_step: 0.01,
            min_word_count: 5,
            info_gain_bins: 10,
            out_dir: out_dir.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.h_levels.is_empty() || self.h_levels.iter().any(|&h| h == 0 || h > 8) {
            return Err(Error::Validation(
                "walk lengths must be a non-empty list within 1..=8".into(),
            ));
        }
        if self.eta == 0 {
            return Err(Error::Validation("eta must be at least 1".into()));
        }
        if self.shuffles < 2 {
            return Err(Error::Validation("shuffle count must be at least 2".into()));
        }
        if self.folds < 2 {
            return Err(Error::Validation("fold count must be at least 2".into()));
        }
        if self.k_values.is_empty() || self.k_values.contains(&0) {
            return Err(Error::Validation(
                "k values must be a non-empty list of positive integers".into(),
            ));
        }
        if self.info_gain_bins < 2 {
            return Err(Error::Validation(
                "info gain needs at least 2 bins".into(),
            ));
        }
        crate::fusion::parameter_grid(self.lambda_step)?;
        crate::fusion::parameter_grid(self.theta_step)?;
        Ok(())
    }

    /// Stable hash of the serialized configuration.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hash_hex(fnv1a64(json.as_bytes()))
    }
}

/// One ingested document in every preprocessing state the feature
/// families need.
#[derive(Debug, Clone)]
pub struct CorpusDocument {
    pub id: String,
    pub label: String,
    pub raw: String,
    /// Tokenized and lemmatized, stopwords retained (the stream for
    /// intermittency and stopword-frequency features).
    pub full: Document,
    /// Stopwords removed and lemmatized (the stream networks are built
    /// from).
    pub filtered: Document,
}

/// A loaded corpus plus the stopword policy in force.
#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub documents: Vec<CorpusDocument>,
    pub policy: StopwordPolicy,
    pub lexicon_warnings: Vec<String>,
}

/// Resolve the stopword source. `Corpus` mode needs the lemmatized
/// documents and is handled in [`load_corpus`].
fn explicit_policy(source: &StopwordSource) -> Result<Option<StopwordPolicy>> {
    match source {
        StopwordSource::English => Ok(Some(StopwordPolicy::english())),
        StopwordSource::File(path) => load_stopword_file(path).map(Some),
        StopwordSource::Corpus => Ok(None),
    }
}

/// Ingest the manifest: read texts, tokenize (case-folded), lemmatize,
/// and apply the stopword policy.
///
/// With an explicit list the order follows the preprocessing table:
/// stopwords are removed from the (case-folded) surface stream first and
/// the survivors are lemmatized. In corpus mode the intersection is taken
/// over lemmatized vocabularies and removal matches lemmas, so inflected
/// variants unify before the intersection.
pub fn load_corpus(config: &RunConfig) -> Result<LoadedCorpus> {
    let entries = load_manifest(&config.manifest)?;
    let (lexicon, lexicon_warnings) = match &config.lexicon {
        Some(path) => load_lexicon(path)?,
        None => (LemmaLexicon::default(), Vec::new()),
    };
    let mut raw_docs = Vec::with_capacity(entries.len());
    for entry in &entries {
        let raw = read_text(&entry.path)?;
        let tokens = tokenize(&raw, true);
        let base = Document::new(entry.id.clone(), entry.label.clone(), tokens);
        let full = lemmatize(&base, &lexicon);
        raw_docs.push((entry, raw, base, full));
    }
    let policy = match explicit_policy(&config.stopwords)? {
        Some(policy) => policy,
        None => {
            let fulls: Vec<Document> = raw_docs.iter().map(|(_, _, _, f)| f.clone()).collect();
            derive_corpus_stopwords(&fulls)?
        }
    };
    let documents = raw_docs
        .into_iter()
        .map(|(entry, raw, base, full)| {
            let filtered = match policy.mode {
                PolicyMode::ExplicitList => lemmatize(&remove_stopwords(&base, &policy), &lexicon),
                PolicyMode::CorpusIntersection => remove_stopwords(&full, &policy),
            };
            CorpusDocument {
                id: entry.id.clone(),
                label: entry.label.clone(),
                raw,
                full,
                filtered,
            }
        })
        .collect();
    Ok(LoadedCorpus {
        documents,
        policy,
        lexicon_warnings,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DocProvenance {
    pub id: String,
    pub label: String,
    pub full_tokens: usize,
    pub filtered_tokens: usize,
    pub vocabulary: usize,
    pub edges: usize,
    pub net: NetProvenance,
}

#[derive(Debug, Clone, Serialize)]
pub struct FeaturesProvenance {
    pub config: RunConfig,
    pub config_hash: String,
    pub stopword_mode: String,
    pub stopword_count: usize,
    pub lexicon_warnings: Vec<String>,
    pub documents: Vec<DocProvenance>,
}

/// Feature CSV path for a family under an output directory.
pub fn family_csv_path(dir: &Path, family: &str) -> PathBuf {
    dir.join(format!("features_{family}.csv"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| Error::WriteOutput {
        path: path.to_path_buf(),
        source,
    })
}

/// Extract all four feature families and write one CSV per family plus
/// `provenance.json`.
pub fn run_features(config: &RunConfig) -> Result<FeaturesProvenance> {
    config.validate()?;
    let corpus = load_corpus(config)?;
    std::fs::create_dir_all(&config.out_dir).map_err(|source| Error::WriteOutput {
        path: config.out_dir.clone(),
        source,
    })?;
    let net_cfg_base = NetFeatureConfig {
        h_levels: config.h_levels.clone(),
        eta: config.eta,
        shuffles: config.shuffles,
        seed: config.seed,
    };

    // Network features dominate the cost; documents are independent, and
    // each document's ensemble seed is scoped by its id so results do not
    // depend on worker count or document order.
    let net_results: Vec<Result<(FeatureVector, NetProvenance)>> = corpus
        .documents
        .par_iter()
        .map(|doc| {
            let cfg = NetFeatureConfig {
                seed: derive_seed(config.seed, fnv1a64(doc.id.as_bytes())),
                ..net_cfg_base.clone()
            };
            network_features(&doc.filtered, &cfg)
        })
        .collect();

    let mut rows: HashMap<&str, Vec<FeatureRow>> =
        FAMILIES.iter().map(|&f| (f, Vec::new())).collect();
    let mut provenance_docs = Vec::with_capacity(corpus.documents.len());
    for (doc, net_result) in corpus.documents.iter().zip(net_results) {
        let (net_features, net_prov) = net_result?;
        let network = WordNetwork::from_document(&doc.filtered)?;
        provenance_docs.push(DocProvenance {
            id: doc.id.clone(),
            label: doc.label.clone(),
            full_tokens: doc.full.token_count(),
            filtered_tokens: doc.filtered.token_count(),
            vocabulary: network.node_count(),
            edges: network.edge_count(),
            net: net_prov,
        });
        let families = [
            ("net", net_features),
            (
                "int",
                intermittency_features(&doc.full, &corpus.policy, config.min_word_count),
            ),
            (
                "stop",
                stopword_frequency_features(&doc.full, &corpus.policy),
            ),
            ("bg", char_bigram_features(&doc.raw)),
        ];
        for (family, features) in families {
            rows.get_mut(family).unwrap().push(FeatureRow {
                id: doc.id.clone(),
                label: doc.label.clone(),
                features,
            });
        }
    }

    let hash = config.hash();
    for family in FAMILIES {
        let matrix = FeatureMatrix::from_rows(rows.remove(family).unwrap());
        matrix.write_csv(&family_csv_path(&config.out_dir, family), &hash)?;
    }
    let provenance = FeaturesProvenance {
        config: config.clone(),
        config_hash: hash,
        stopword_mode: match corpus.policy.mode {
            PolicyMode::ExplicitList => "explicit-list".into(),
            PolicyMode::CorpusIntersection => "corpus-intersection".into(),
        },
        stopword_count: corpus.policy.len(),
        lexicon_warnings: corpus.lexicon_warnings,
        documents: provenance_docs,
    };
    write_json(&config.out_dir.join("provenance.json"), &provenance)?;
    Ok(provenance)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyRun {
    pub classifier: String,
    pub k: Option<usize>,
    pub traditional_family: String,
    pub network_family: String,
    pub seed: u64,
    pub gamma_traditional: f64,
    pub gamma_network: f64,
    pub fold_accuracies_traditional: Vec<f64>,
    pub fold_accuracies_network: Vec<f64>,
    pub hybrid: GainReport,
    pub tiebreaker: GainReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyResults {
    pub config: RunConfig,
    pub config_hash: String,
    /// Config hash recorded in the consumed feature CSVs, when present.
    pub features_config_hash: Option<String>,
    pub traditional_family: String,
    pub network_family: String,
    /// Columns dropped from each family (error columns and columns with
    /// missing values).
    pub column_masks: std::collections::BTreeMap<String, Vec<String>>,
    pub fold_warnings: Vec<String>,
    pub runs: Vec<ClassifyRun>,
    /// Per-attribute information-gain ranking of each family.
    pub info_gain: std::collections::BTreeMap<String, Vec<(String, f64)>>,
}

fn load_family_dataset(
    dir: &Path,
    family: &str,
    order: Option<&[String]>,
) -> Result<(LabeledDataset, Vec<String>, Vec<String>)> {
    let path = family_csv_path(dir, family);
    let mut matrix = FeatureMatrix::read_csv(&path)?;
    let ids: Vec<String> = matrix.rows.iter().map(|r| r.id.clone()).collect();
    if let Some(order) = order {
        let by_id: HashMap<&str, usize> = ids.iter().map(|s| s.as_str()).zip(0..).collect();
        if order.len() != ids.len() || order.iter().any(|id| !by_id.contains_key(id.as_str())) {
            return Err(Error::Validation(format!(
                "{}: document ids do not match the first family's",
                path.display()
            )));
        }
        matrix.rows = order
            .iter()
            .map(|id| matrix.rows[by_id[id.as_str()]].clone())
            .collect();
    }
    let row_ids: Vec<String> = matrix.rows.iter().map(|r| r.id.clone()).collect();
    let (dataset, dropped) = LabeledDataset::from_matrix(&matrix);
    if dataset.attributes.is_empty() {
        return Err(Error::Validation(format!(
            "{}: no usable attribute columns remain after masking",
            path.display()
        )));
    }
    Ok((dataset, dropped, row_ids))
}

fn classifier_for(choice: ClassifierChoice, k: usize) -> Box<dyn MembershipClassifier> {
    match choice {
        ClassifierChoice::Fknn => Box::new(FuzzyKnn { k }),
        ClassifierChoice::Centroid => Box::new(NearestCentroid),
    }
}

/// Cross-validate one traditional/network family pair, fuse the
/// memberships with both rules over the parameter grids, and write gain
/// curves plus `results_<T>_<R>.json`.
pub fn run_classify(
    config: &RunConfig,
    features_dir: &Path,
    traditional_family: &str,
    network_family: &str,
) -> Result<ClassifyResults> {
    config.validate()?;
    for family in [traditional_family, network_family] {
        if !FAMILIES.contains(&family) {
            return Err(Error::Validation(format!(
                "unknown feature family {family:?}; expected one of {FAMILIES:?}"
            )));
        }
    }
    let (trad, trad_dropped, ids) = load_family_dataset(features_dir, traditional_family, None)?;
    let (net, net_dropped, _) = load_family_dataset(features_dir, network_family, Some(&ids))?;
    if trad.labels != net.labels || trad.classes != net.classes {
        return Err(Error::Validation(
            "family feature files disagree on document labels".into(),
        ));
    }
    let plan = FoldPlan::stratified(&trad.labels, &trad.classes, config.folds, config.seed)?;
    let fusion_cfg = FusionConfig {
        lambda_step: config.lambda_step,
        theta_step: config.theta_step,
    };
    std::fs::create_dir_all(&config.out_dir).map_err(|source| Error::WriteOutput {
        path: config.out_dir.clone(),
        source,
    })?;
    let hash = config.hash();

    let k_runs: Vec<Option<usize>> = match config.classifier {
        ClassifierChoice::Fknn => config.k_values.iter().map(|&k| Some(k)).collect(),
        ClassifierChoice::Centroid => vec![None],
    };
    let mut runs = Vec::new();
    for k in k_runs {
        let classifier = classifier_for(config.classifier, k.unwrap_or(1));
        let cv_trad = cross_validate(&trad, classifier.as_ref(), &plan)?;
        let cv_net = cross_validate(&net, classifier.as_ref(), &plan)?;
        let folds: Vec<FoldPair> = cv_trad
            .folds
            .iter()
            .zip(&cv_net.folds)
            .map(|(t, r)| FoldPair {
                traditional: t.memberships.clone(),
                network: r.memberships.clone(),
                truth: t.test_indices.iter().map(|&i| trad.labels[i]).collect(),
            })
            .collect();
        let hybrid = sweep(FusionMode::Hybrid, &folds, &fusion_cfg)?;
        let tiebreaker = sweep(FusionMode::Tiebreaker, &folds, &fusion_cfg)?;
        for report in [&hybrid, &tiebreaker] {
            let mode = match report.mode {
                FusionMode::Hybrid => "hybrid",
                FusionMode::Tiebreaker => "tiebreaker",
            };
            let suffix = k.map(|k| format!("_k{k}")).unwrap_or_default();
            let path = config.out_dir.join(format!(
                "gain_{mode}_{traditional_family}_{network_family}{suffix}.csv"
            ));
            write_gain_csv(&path, report, &hash)?;
        }
        runs.push(ClassifyRun {
            classifier: classifier.id(),
            k,
            traditional_family: traditional_family.to_string(),
            network_family: network_family.to_string(),
            seed: config.seed,
            gamma_traditional: cv_trad.accuracy,
            gamma_network: cv_net.accuracy,
            fold_accuracies_traditional: cv_trad.fold_accuracies,
            fold_accuracies_network: cv_net.fold_accuracies,
            hybrid,
            tiebreaker,
        });
    }

    let mut info_gain = std::collections::BTreeMap::new();
    info_gain.insert(
        traditional_family.to_string(),
        info_gain_ranking(&trad, config.info_gain_bins)?,
    );
    info_gain.insert(
        network_family.to_string(),
        info_gain_ranking(&net, config.info_gain_bins)?,
    );
    let mut column_masks = std::collections::BTreeMap::new();
    column_masks.insert(traditional_family.to_string(), trad_dropped);
    column_masks.insert(network_family.to_string(), net_dropped);
    let features_config_hash =
        FeatureMatrix::read_config_hash(&family_csv_path(features_dir, traditional_family))?;
    let results = ClassifyResults {
        config: config.clone(),
        config_hash: hash,
        features_config_hash,
        traditional_family: traditional_family.to_string(),
        network_family: network_family.to_string(),
        column_masks,
        fold_warnings: plan.warnings.clone(),
        runs,
        info_gain,
    };
    write_json(
        &config
            .out_dir
            .join(format!("results_{traditional_family}_{network_family}.json")),
        &results,
    )?;
    Ok(results)
}

/// Gain-curve CSV: one row per grid point, directly plottable.
fn write_gain_csv(path: &Path, report: &GainReport, config_hash: &str) -> Result<()> {
    let mut out = String::new();
    out.push_str(&format!("# config={config_hash}\n"));
    out.push_str("x,gamma_hybrid,gamma_T,gamma_R,delta_gamma_ratio,delta_gamma_diff\n");
    for point in &report.curve {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            point.x,
            point.gamma_hybrid,
            report.gamma_traditional,
            report.gamma_network,
            point.ratio.map(|v| v.to_string()).unwrap_or_default(),
            point.diff.map(|v| v.to_string()).unwrap_or_default(),
        ));
    }
    std::fs::write(path, out).map_err(|source| Error::WriteOutput {
        path: path.to_path_buf(),
        source,
    })
}

/// Dump each document's network as plain text tables: an edge list, a
/// node table with occurrence counts, and the per-node metric values.
pub fn run_metrics_dump(config: &RunConfig) -> Result<()> {
    config.validate()?;
    let corpus = load_corpus(config)?;
    std::fs::create_dir_all(&config.out_dir).map_err(|source| Error::WriteOutput {
        path: config.out_dir.clone(),
        source,
    })?;
    let hash = config.hash();
    for doc in &corpus.documents {
        let net = WordNetwork::from_document(&doc.filtered)?;
        let mut nodes: Vec<usize> = (0..net.node_count()).collect();
        nodes.sort_by(|&a, &b| net.lemma(a).cmp(net.lemma(b)));

        let mut node_table = String::new();
        for &i in &nodes {
            node_table.push_str(&format!("{}\t{}\n", net.lemma(i), net.occurrences(i)));
        }
        let path = config.out_dir.join(format!("{}.nodes.tsv", doc.id));
        std::fs::write(&path, node_table)
            .map_err(|source| Error::WriteOutput { path, source })?;

        let mut edge_lines: Vec<(String, String)> = net
            .edges()
            .iter()
            .map(|&(a, b)| {
                let (la, lb) = (net.lemma(a as usize), net.lemma(b as usize));
                if la <= lb {
                    (la.to_string(), lb.to_string())
                } else {
                    (lb.to_string(), la.to_string())
                }
            })
            .collect();
        edge_lines.sort();
        let mut edge_table = String::new();
        for (a, b) in edge_lines {
            edge_table.push_str(&format!("{a}\t{b}\n"));
        }
        let path = config.out_dir.join(format!("{}.edges.tsv", doc.id));
        std::fs::write(&path, edge_table)
            .map_err(|source| Error::WriteOutput { path, source })?;

        let table = NodeMetricTable::compute(&net, &config.h_levels);
        let metrics = crate::metrics::node_metrics(&config.h_levels);
        let mut csv = format!("# config={hash}\nlemma,count");
        for m in &metrics {
            csv.push(',');
            csv.push_str(&m.name());
        }
        csv.push('\n');
        let columns: Vec<Vec<Option<f64>>> = metrics.iter().map(|&m| table.values(m)).collect();
        for &i in &nodes {
            csv.push_str(&format!("{},{}", net.lemma(i), net.occurrences(i)));
            for col in &columns {
                csv.push(',');
                if let Some(v) = col[i] {
                    csv.push_str(&v.to_string());
                }
            }
            csv.push('\n');
        }
        let path = config.out_dir.join(format!("{}.metrics.csv", doc.id));
        std::fs::write(&path, csv).map_err(|source| Error::WriteOutput { path, source })?;
    }
    Ok(())
}
