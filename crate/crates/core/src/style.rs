//! Traditional statistical text features: recurrence times and
//! intermittency of words, stopword frequencies, and character-bigram
//! frequencies.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::features::FeatureVector;
use crate::text::{tokenize, Document, StopwordPolicy};

/// Recurrence times of one word in a document: the gaps between
/// successive occurrences plus the closing term T_N = T_f + T_l, so the
/// series always sums to the document length.
#[derive(Debug, Clone)]
pub struct RecurrenceSeries {
    pub word: String,
    pub times: Vec<usize>,
    /// Occurrence count N_i.
    pub occurrences: usize,
    /// Document length N_T.
    pub doc_len: usize,
}

impl RecurrenceSeries {
    /// Mean recurrence time; equals N_T / N_i exactly.
    pub fn mean(&self) -> f64 {
        self.doc_len as f64 / self.occurrences as f64
    }
}

/// Recurrence-time series of `word` (matched against lemmas) in the given
/// token stream.
pub fn recurrence_times(doc: &Document, word: &str) -> Result<RecurrenceSeries> {
    let positions: Vec<usize> = doc
        .tokens
        .iter()
        .filter(|t| t.lemma == word)
        .map(|t| t.position)
        .collect();
    if positions.is_empty() {
        return Err(Error::WordNotFound {
            id: doc.id.clone(),
            word: word.to_string(),
        });
    }
    let n_t = doc.token_count();
    let mut times: Vec<usize> = positions.windows(2).map(|w| w[1] - w[0]).collect();
    let first = positions[0] + 1;
    let trailing = n_t - (positions[positions.len() - 1] + 1);
    times.push(first + trailing);
    Ok(RecurrenceSeries {
        word: word.to_string(),
        times,
        occurrences: positions.len(),
        doc_len: n_t,
    })
}

/// Intermittency: the coefficient of variation of the recurrence times,
/// sqrt(<T^2>/<T>^2 - 1). Needs at least two occurrences.
pub fn intermittency(series: &RecurrenceSeries) -> Result<f64> {
    if series.occurrences < 2 {
        return Err(Error::MetricUndefined {
            metric: format!("intermittency({})", series.word),
            reason: format!("word occurs {} time(s); need at least 2", series.occurrences),
        });
    }
    let n = series.times.len() as f64;
    let mean = series.times.iter().map(|&t| t as f64).sum::<f64>() / n;
    let mean_sq = series.times.iter().map(|&t| (t * t) as f64).sum::<f64>() / n;
    Ok((mean_sq / (mean * mean) - 1.0).max(0.0).sqrt())
}

/// One attribute per policy word: its occurrence frequency in the token
/// stream. Computed on the stream *before* stopword removal.
pub fn stopword_frequency_features(doc: &Document, policy: &StopwordPolicy) -> FeatureVector {
    let n_t = doc.token_count();
    let mut counts: BTreeMap<&str, usize> = policy.lemmas().map(|w| (w, 0)).collect();
    for lemma in doc.lemmas() {
        if let Some(c) = counts.get_mut(lemma) {
            *c += 1;
        }
    }
    let mut features = FeatureVector::new();
    for (word, count) in counts {
        let freq = if n_t > 0 {
            count as f64 / n_t as f64
        } else {
            0.0
        };
        features.insert(format!("stop_{word}"), freq);
    }
    features
}

/// Intermittency of each policy word over the (pre-removal) stream. Words
/// occurring fewer than `min_count` times are left out of the vector.
pub fn intermittency_features(
    doc: &Document,
    policy: &StopwordPolicy,
    min_count: usize,
) -> FeatureVector {
    let floor = min_count.max(2);
    let mut features = FeatureVector::new();
    for word in policy.lemmas() {
        match recurrence_times(doc, word) {
            Ok(series) if series.occurrences >= floor => {
                let i = intermittency(&series).expect("occurrences checked above");
                features.insert(format!("int_{word}"), i);
            }
            _ => {}
        }
    }
    features
}

/// Character-bigram frequencies over the case-folded tokens of raw text.
/// Bigrams never cross token boundaries; counts are normalized by the
/// total bigram count.
pub fn char_bigram_features(raw: &str) -> FeatureVector {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    let mut total = 0usize;
    for token in tokenize(raw, true) {
        let chars: Vec<char> = token.surface.chars().collect();
        for pair in chars.windows(2) {
            let mut key = String::with_capacity(8);
            key.push(pair[0]);
            key.push(pair[1]);
            *counts.entry(key).or_insert(0) += 1;
            total += 1;
        }
    }
    let mut features = FeatureVector::new();
    if total == 0 {
        return features;
    }
    for (bigram, count) in counts {
        features.insert(format!("bg_{bigram}"), count as f64 / total as f64);
    }
    features
}
