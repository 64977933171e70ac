//! Text preprocessing: tokenization, stopword removal, lexicon
//! lemmatization, corpus-derived stopword lists, and frequency-preserving
//! shuffles.
//!
//! Every operation here is a pure function of its inputs; documents can be
//! processed on independent workers without shared state.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// One preprocessed token. `lemma` starts out equal to `surface` and is
/// rewritten by [`lemmatize`]. `position` is the 0-based index in the
/// token stream the document currently holds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub position: usize,
}

impl Token {
    fn new(surface: String, position: usize) -> Self {
        let lemma = surface.clone();
        Token {
            surface,
            lemma,
            position,
        }
    }
}

/// An ordered token sequence with label metadata.
#[derive(Debug, Clone)]
pub struct Document {
    pub id: String,
    pub label: String,
    pub tokens: Vec<Token>,
}

impl Document {
    pub fn new(id: impl Into<String>, label: impl Into<String>, tokens: Vec<Token>) -> Self {
        let mut doc = Document {
            id: id.into(),
            label: label.into(),
            tokens,
        };
        doc.reindex();
        doc
    }

    /// Token count after preprocessing (the stream length N_T).
    pub fn token_count(&self) -> usize {
        self.tokens.len()
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.lemma.as_str())
    }

    /// Set of distinct lemmas.
    pub fn vocabulary(&self) -> BTreeSet<String> {
        self.lemmas().map(str::to_owned).collect()
    }

    fn reindex(&mut self) {
        for (i, t) in self.tokens.iter_mut().enumerate() {
            t.position = i;
        }
    }
}

/// Surface-form to lemma map, case-folded, with identity fallback.
#[derive(Debug, Clone, Default)]
pub struct LemmaLexicon {
    map: HashMap<String, String>,
}

impl LemmaLexicon {
    /// Build from (surface, lemma) pairs. Entries are case-folded; a
    /// duplicate surface overwrites the previous entry (callers that care
    /// about duplicates detect them while parsing the lexicon file). Fails
    /// if the map is not idempotent, i.e. some lemma is itself remapped to
    /// a different form.
    pub fn from_entries<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut map = HashMap::new();
        for (surface, lemma) in entries {
            let surface = surface.as_ref().to_lowercase();
            let lemma = lemma.as_ref().to_lowercase();
            if lemma.is_empty() || surface.is_empty() {
                return Err(Error::Validation(
                    "lexicon entries must have non-empty surface and lemma".into(),
                ));
            }
            map.insert(surface, lemma);
        }
        for (surface, lemma) in &map {
            if let Some(other) = map.get(lemma) {
                if other != lemma {
                    return Err(Error::Validation(format!(
                        "lexicon is not idempotent: {surface:?} -> {lemma:?} but {lemma:?} -> {other:?}"
                    )));
                }
            }
        }
        Ok(LemmaLexicon { map })
    }

    /// Total lookup: the mapped lemma, or the case-folded surface itself.
    pub fn lookup(&self, surface: &str) -> String {
        let key = surface.to_lowercase();
        match self.map.get(&key) {
            Some(lemma) => lemma.clone(),
            None => surface.to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// How a stopword list was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyMode {
    ExplicitList,
    CorpusIntersection,
}

/// A set of lemmas to strip before network construction.
#[derive(Debug, Clone)]
pub struct StopwordPolicy {
    pub mode: PolicyMode,
    lemmas: BTreeSet<String>,
}

impl StopwordPolicy {
    pub fn explicit<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        StopwordPolicy {
            mode: PolicyMode::ExplicitList,
            lemmas: words
                .into_iter()
                .map(|w| w.as_ref().to_lowercase())
                .filter(|w| !w.is_empty())
                .collect(),
        }
    }

    /// The bundled standard English function-word list.
    pub fn english() -> Self {
        Self::explicit(include_str!("../assets/english_stopwords.txt").lines())
    }

    pub fn contains(&self, lemma: &str) -> bool {
        self.lemmas.contains(lemma)
    }

    pub fn len(&self) -> usize {
        self.lemmas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }

    /// Lemmas in sorted order.
    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.lemmas.iter().map(String::as_str)
    }
}

/// Split raw text into tokens: maximal runs of alphabetic characters, with
/// apostrophes kept word-internally. Punctuation and digits are discarded.
pub fn tokenize(raw: &str, case_fold: bool) -> Vec<Token> {
    let chars: Vec<char> = raw.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();
    let flush = |s: &mut String, out: &mut Vec<Token>| {
        if !s.is_empty() {
            let surface = if case_fold {
                s.to_lowercase()
            } else {
                s.clone()
            };
            out.push(Token::new(surface, out.len()));
            s.clear();
        }
    };
    for (i, &c) in chars.iter().enumerate() {
        let internal_apostrophe = c == '\''
            && !current.is_empty()
            && chars.get(i + 1).is_some_and(|n| n.is_alphabetic());
        if c.is_alphabetic() || internal_apostrophe {
            current.push(c);
        } else {
            flush(&mut current, &mut tokens);
        }
    }
    flush(&mut current, &mut tokens);
    tokens
}

/// Remove every token whose lemma is listed in the policy. Order of the
/// surviving tokens is preserved; positions are reindexed.
pub fn remove_stopwords(doc: &Document, policy: &StopwordPolicy) -> Document {
    let kept = doc
        .tokens
        .iter()
        .filter(|t| !policy.contains(&t.lemma))
        .cloned()
        .collect();
    Document::new(doc.id.clone(), doc.label.clone(), kept)
}

/// Rewrite every token's lemma through the lexicon. Token count and order
/// are unchanged; applying this twice is a no-op.
pub fn lemmatize(doc: &Document, lex: &LemmaLexicon) -> Document {
    let tokens = doc
        .tokens
        .iter()
        .map(|t| Token {
            surface: t.surface.clone(),
            lemma: lex.lookup(&t.surface),
            position: t.position,
        })
        .collect();
    Document::new(doc.id.clone(), doc.label.clone(), tokens)
}

/// Stopword list from a corpus: the lemmas that occur at least once in
/// every document.
pub fn derive_corpus_stopwords(corpus: &[Document]) -> Result<StopwordPolicy> {
    if corpus.is_empty() {
        return Err(Error::Validation(
            "cannot derive stopwords from an empty corpus".into(),
        ));
    }
    let mut intersection = corpus[0].vocabulary();
    for doc in &corpus[1..] {
        let vocab = doc.vocabulary();
        intersection.retain(|w| vocab.contains(w));
    }
    Ok(StopwordPolicy {
        mode: PolicyMode::CorpusIntersection,
        lemmas: intersection,
    })
}

/// Frequency-preserving shuffle: a uniform random permutation of the token
/// stream, deterministic for a fixed seed.
pub fn shuffle_tokens(doc: &Document, seed: u64) -> Document {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tokens = doc.tokens.clone();
    tokens.shuffle(&mut rng);
    Document::new(doc.id.clone(), doc.label.clone(), tokens)
}

/// Convenience for tests and examples: a document from whitespace-separated
/// lemmas.
pub fn doc_from_lemmas(id: &str, label: &str, lemmas: &[&str]) -> Document {
    let tokens = lemmas
        .iter()
        .enumerate()
        .map(|(i, w)| Token::new(w.to_string(), i))
        .collect();
    Document::new(id, label, tokens)
}
