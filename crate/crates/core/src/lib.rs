//! Stylometry toolkit built on word-adjacency networks.
//!
//! Texts are preprocessed (tokenized, stopword-filtered, lemmatized) and
//! modeled as undirected networks over their distinct lemmas. Topological
//! measurements of those networks, normalized against frequency-preserving
//! shuffled baselines, join traditional statistical features (stopword
//! frequencies, character bigrams, word intermittency) as document
//! descriptions. Membership-producing classifiers score both feature
//! views, and two fusion rules, a convex hybrid combination and a
//! margin-triggered tiebreaker, measure how much the network topology
//! improves classification.
//!
//! Modules follow the processing order:
//!
//! - [`text`]: tokenization, stopword policies, lemma lexicons, shuffles
//! - [`corpus`]: manifest/lexicon/stopword file formats
//! - [`net`]: network construction and baseline normalization
//! - [`metrics`]: topological measurements and their summaries
//! - [`style`]: recurrence times, intermittency, frequency features
//! - [`features`]: feature vectors and the feature-matrix CSV format
//! - [`learn`]: membership classifiers, information gain, cross-validation
//! - [`fusion`]: hybrid and tiebreaker rules, parameter sweeps
//! - [`synth`]: seeded synthetic corpus generator
//! - [`pipeline`]: end-to-end experiment orchestration

pub mod corpus;
pub mod error;
pub mod features;
pub mod fusion;
pub mod learn;
pub mod metrics;
pub mod net;
pub mod pipeline;
pub mod style;
pub mod synth;
pub mod text;
pub mod util;

pub use error::{Error, Result};
