//! Seeded synthetic corpus generator.
//!
//! Documents are emitted by per-class token processes designed so that
//! every feature family carries class signal, each through its own
//! channel:
//!
//! - stopword frequencies: classes weight two Zipf profiles over the
//!   shared stopword inventory differently;
//! - stopword intermittency: classes repeat the previous stopword with
//!   different burst probabilities;
//! - character bigrams: classes use the shared content vocabulary under
//!   different Zipf permutations, so the frequency-weighted character
//!   statistics differ;
//! - network topology: content words follow a class-specific transition
//!   kernel (a ring lattice for even classes, tight modules for odd ones),
//!   which survives the frequency-preserving shuffle normalization.
//!
//! Each channel's strength is jittered per document with independent
//! draws, so no single family separates every document and the channels
//! fail on different documents.

use std::path::{Path, PathBuf};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::util::derive_seed;

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub classes: usize,
    pub docs_per_class: usize,
    pub tokens_per_doc: usize,
    /// Distinct content words shared by all classes.
    pub vocabulary: usize,
    /// Distinct function words shared by all classes.
    pub stopword_count: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            classes: 2,
            docs_per_class: 40,
            tokens_per_doc: 5000,
            vocabulary: 120,
            stopword_count: 30,
            seed: 42,
        }
    }
}

/// Fraction of token slots carrying a stopword.
const STOPWORD_RATE: f64 = 0.33;
/// Zipf exponent for content and stopword frequency profiles.
const ZIPF_EXPONENT: f64 = 1.0;
/// Module size of the odd-class transition kernel.
const MODULE_SIZE: usize = 8;
/// Ring reach of the even-class transition kernel.
const RING_REACH: usize = 3;

/// Per-class channel strengths; documents jitter around these.
const STOP_PROFILE_BASE: [f64; 2] = [0.30, 0.70];
const STOP_PROFILE_JITTER: f64 = 0.24;
const BURST_BASE: [f64; 2] = [0.06, 0.40];
const BURST_JITTER: f64 = 0.14;
const VOCAB_MIX_BASE: f64 = 0.74;
const VOCAB_MIX_JITTER: f64 = 0.24;
const KERNEL_NOISE_BASE: f64 = 0.18;
const KERNEL_NOISE_JITTER: f64 = 0.16;

const CONSONANTS: [char; 20] = [
    'b', 'c', 'd', 'f', 'g', 'h', 'j', 'k', 'l', 'm', 'n', 'p', 'q', 'r', 's', 't', 'v', 'w',
    'x', 'z',
];
const VOWELS: [char; 5] = ['a', 'e', 'i', 'o', 'u'];

fn syllable(index: usize) -> String {
    let c = CONSONANTS[index / VOWELS.len() % CONSONANTS.len()];
    let v = VOWELS[index % VOWELS.len()];
    format!("{c}{v}")
}

/// Three-syllable content word for a vocabulary index.
fn content_word(index: usize) -> String {
    let base = CONSONANTS.len() * VOWELS.len();
    format!(
        "{}{}{}",
        syllable(index / (base * base)),
        syllable(index / base % base),
        syllable(index % base)
    )
}

/// Two-syllable function word; disjoint from content words by length.
fn stop_word(index: usize) -> String {
    let base = CONSONANTS.len() * VOWELS.len();
    format!("{}{}", syllable(index / base), syllable(index % base))
}

/// Cumulative distribution for weighted sampling.
struct Sampler {
    cumulative: Vec<f64>,
}

impl Sampler {
    fn new(weights: &[f64]) -> Self {
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut total = 0.0;
        for &w in weights {
            total += w;
            cumulative.push(total);
        }
        Sampler { cumulative }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> usize {
        let total = *self.cumulative.last().expect("non-empty weights");
        let x = rng.random_range(0.0..total);
        self.cumulative.partition_point(|&c| c <= x)
    }
}

fn zipf_weights(n: usize) -> Vec<f64> {
    (0..n)
        .map(|rank| 1.0 / ((rank + 1) as f64).powf(ZIPF_EXPONENT))
        .collect()
}

/// Zipf weights rearranged by a seeded permutation of the vocabulary.
fn permuted_zipf(n: usize, seed: u64) -> Vec<f64> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    use rand::seq::SliceRandom;
    order.shuffle(&mut rng);
    let base = zipf_weights(n);
    let mut weights = vec![0.0; n];
    for (rank, &word) in order.iter().enumerate() {
        weights[word] = base[rank];
    }
    weights
}

fn mix(a: &[f64], b: &[f64], w: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(&x, &y)| w * x + (1.0 - w) * y).collect()
}

fn jittered(rng: &mut ChaCha8Rng, base: f64, jitter: f64) -> f64 {
    (base + rng.random_range(-jitter..jitter)).clamp(0.0, 1.0)
}

/// Class transition kernel: candidate next words for each content word.
fn kernel_candidates(class: usize, word: usize, vocabulary: usize) -> Vec<usize> {
    if class.is_multiple_of(2) {
        let mut out = Vec::with_capacity(2 * RING_REACH);
        for offset in 1..=RING_REACH {
            out.push((word + offset) % vocabulary);
            out.push((word + vocabulary - offset) % vocabulary);
        }
        out
    } else {
        let module = word / MODULE_SIZE;
        let start = module * MODULE_SIZE;
        (start..(start + MODULE_SIZE).min(vocabulary))
            .filter(|&w| w != word)
            .collect()
    }
}

/// A generated corpus on disk: manifest, per-document texts, and the
/// stopword inventory.
#[derive(Debug, Clone)]
pub struct SynthOutput {
    pub manifest: PathBuf,
    pub stopwords: PathBuf,
    pub documents: usize,
}

pub fn generate(config: &SynthConfig, out_dir: &Path) -> Result<SynthOutput> {
    if config.classes < 2 {
        return Err(Error::Validation(format!(
            "classification needs at least 2 classes, got {}",
            config.classes
        )));
    }
    if config.docs_per_class == 0 || config.tokens_per_doc < 10 {
        return Err(Error::Validation(
            "synthetic corpus needs at least 1 document per class and 10 tokens per document"
                .into(),
        ));
    }
    if config.vocabulary < 2 * MODULE_SIZE || config.stopword_count < 2 {
        return Err(Error::Validation(format!(
            "vocabulary must be at least {} and stopword count at least 2",
            2 * MODULE_SIZE
        )));
    }
    let texts_dir = out_dir.join("texts");
    std::fs::create_dir_all(&texts_dir).map_err(|source| Error::WriteOutput {
        path: texts_dir.clone(),
        source,
    })?;

    let w = config.vocabulary;
    let s = config.stopword_count;
    // Class word marginals: one permuted Zipf profile per class.
    let class_marginals: Vec<Vec<f64>> = (0..config.classes)
        .map(|c| permuted_zipf(w, derive_seed(config.seed, 0x10_000 + c as u64)))
        .collect();
    // Two stopword profiles shared by all classes: Zipf by index and its
    // reverse.
    let stop_a = zipf_weights(s);
    let stop_b: Vec<f64> = stop_a.iter().rev().copied().collect();

    let mut manifest = String::from("id,path,label\n");
    let mut doc_index = 0u64;
    for class in 0..config.classes {
        let other = class_marginals[(class + 1) % config.classes].clone();
        for d in 0..config.docs_per_class {
            let id = format!("c{class}d{d:03}");
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, doc_index));
            doc_index += 1;

            // Independent per-document channel strengths.
            let stop_w = jittered(
                &mut rng,
                STOP_PROFILE_BASE[class % 2],
                STOP_PROFILE_JITTER,
            );
            let burst = jittered(&mut rng, BURST_BASE[class % 2], BURST_JITTER);
            let vocab_mix = jittered(&mut rng, VOCAB_MIX_BASE, VOCAB_MIX_JITTER);
            let kernel_noise = jittered(&mut rng, KERNEL_NOISE_BASE, KERNEL_NOISE_JITTER);

            let stop_sampler = Sampler::new(&mix(&stop_a, &stop_b, stop_w));
            let content_sampler =
                Sampler::new(&mix(&class_marginals[class], &other, vocab_mix));

            let mut words = Vec::with_capacity(config.tokens_per_doc);
            let mut last_stop: Option<usize> = None;
            let mut last_content = content_sampler.draw(&mut rng);
            words.push(content_word(last_content));
            while words.len() < config.tokens_per_doc {
                if rng.random_range(0.0..1.0) < STOPWORD_RATE {
                    let sw = match last_stop {
                        Some(prev) if rng.random_range(0.0..1.0) < burst => prev,
                        _ => stop_sampler.draw(&mut rng),
                    };
                    last_stop = Some(sw);
                    words.push(stop_word(sw));
                } else {
                    let next = if rng.random_range(0.0..1.0) < kernel_noise {
                        content_sampler.draw(&mut rng)
                    } else {
                        let candidates = kernel_candidates(class, last_content, w);
                        candidates[rng.random_range(0..candidates.len())]
                    };
                    last_content = next;
                    words.push(content_word(next));
                }
            }

            let mut text = String::with_capacity(config.tokens_per_doc * 7);
            for (i, word) in words.iter().enumerate() {
                text.push_str(word);
                text.push(if (i + 1).is_multiple_of(15) { '\n' } else { ' ' });
            }
            text.push('\n');
            let rel = format!("texts/{id}.txt");
            let path = out_dir.join(&rel);
            std::fs::write(&path, text).map_err(|source| Error::WriteOutput { path, source })?;
            manifest.push_str(&format!("{id},{rel},class{class}\n"));
        }
    }

    let manifest_path = out_dir.join("manifest.csv");
    std::fs::write(&manifest_path, manifest).map_err(|source| Error::WriteOutput {
        path: manifest_path.clone(),
        source,
    })?;
    let stopword_path = out_dir.join("stopwords.txt");
    let mut stop_list = String::new();
    for i in 0..s {
        stop_list.push_str(&stop_word(i));
        stop_list.push('\n');
    }
    std::fs::write(&stopword_path, stop_list).map_err(|source| Error::WriteOutput {
        path: stopword_path.clone(),
        source,
    })?;
    Ok(SynthOutput {
        manifest: manifest_path,
        stopwords: stopword_path,
        documents: config.classes * config.docs_per_class,
    })
}
