//! Corpus loading: the manifest format, lemma-lexicon files, stopword
//! lists, and UTF-8 text ingestion.
//!
//! A corpus is a directory of UTF-8 `.txt` files plus a manifest CSV with
//! the columns `id,path,label`; relative paths resolve against the
//! manifest's directory. Lexicons are two-column TSVs
//! (`surface<TAB>lemma`, case-folded); stopword lists hold one lemma per
//! line.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::text::{LemmaLexicon, StopwordPolicy};

/// One manifest row with its path resolved.
#[derive(Debug, Clone)]
pub struct ManifestEntry {
    pub id: String,
    pub path: PathBuf,
    pub label: String,
}

/// Parse a manifest CSV. The header `id,path,label` is required and the
/// manifest must list at least one document with unique ids.
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
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
    let expected = ["id", "path", "label"];
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::Validation(format!(
            "{}: manifest header must be id,path,label (got {})",
            path.display(),
            got.join(",")
        )));
    }
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut entries = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for record in reader.records() {
        let record = record.map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })?;
        let id = record.get(0).unwrap_or("").trim().to_string();
        let rel = record.get(1).unwrap_or("").trim();
        let label = record.get(2).unwrap_or("").trim().to_string();
        if id.is_empty() || rel.is_empty() || label.is_empty() {
            return Err(Error::Validation(format!(
                "{}: manifest row with empty id, path, or label",
                path.display()
            )));
        }
        if !seen.insert(id.clone()) {
            return Err(Error::Validation(format!(
                "{}: duplicate document id {id:?}",
                path.display()
            )));
        }
        let doc_path = if Path::new(rel).is_absolute() {
            PathBuf::from(rel)
        } else {
            base.join(rel)
        };
        entries.push(ManifestEntry {
            id,
            path: doc_path,
            label,
        });
    }
    if entries.is_empty() {
        return Err(Error::Validation(format!(
            "{}: manifest lists no documents",
            path.display()
        )));
    }
    Ok(entries)
}

/// Read a file as UTF-8; undecodable bytes report their offset.
pub fn read_text(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|source| Error::ReadInput {
        path: path.to_path_buf(),
        source,
    })?;
    String::from_utf8(bytes).map_err(|e| Error::Encoding {
        path: path.to_path_buf(),
        offset: e.utf8_error().valid_up_to(),
    })
}

/// Parse a two-column TSV lexicon. A duplicated surface form keeps the
/// last entry and emits a warning.
pub fn load_lexicon(path: &Path) -> Result<(LemmaLexicon, Vec<String>)> {
    let text = read_text(path)?;
    let mut entries: Vec<(String, String)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut warnings = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut parts = line.splitn(2, '\t');
        let surface = parts.next().unwrap_or("").trim().to_lowercase();
        let lemma = parts.next().unwrap_or("").trim().to_lowercase();
        if surface.is_empty() || lemma.is_empty() {
            return Err(Error::Validation(format!(
                "{}:{}: lexicon lines must be surface<TAB>lemma",
                path.display(),
                lineno + 1
            )));
        }
        if !seen.insert(surface.clone()) {
            warnings.push(format!(
                "{}:{}: duplicate surface {surface:?}; last entry wins",
                path.display(),
                lineno + 1
            ));
        }
        entries.push((surface, lemma));
    }
    let lexicon = LemmaLexicon::from_entries(entries)?;
    Ok((lexicon, warnings))
}

/// Parse a one-lemma-per-line stopword list.
pub fn load_stopword_file(path: &Path) -> Result<StopwordPolicy> {
    let text = read_text(path)?;
    let policy = StopwordPolicy::explicit(text.lines().map(str::trim));
    if policy.is_empty() {
        return Err(Error::Validation(format!(
            "{}: stopword list is empty",
            path.display()
        )));
    }
    Ok(policy)
}
