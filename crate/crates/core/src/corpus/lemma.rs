use std::collections::HashMap;
use std::fs;
use std::path::Path;

use super::CorpusError;

/// Surface form → lemma lookup, loaded from a two-column TSV.
///
/// Lookups that miss return the token unchanged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaTable {
    entries: HashMap<String, String>,
}

impl LemmaTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, surface: &str, lemma: &str) {
        self.entries
            .insert(surface.to_lowercase(), lemma.to_owned());
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lemma<'a>(&'a self, token: &'a str) -> &'a str {
        self.entries.get(token).map(String::as_str).unwrap_or(token)
    }

    /// Parses `surface<TAB>lemma` lines; blank lines and `#` comments are skipped.
    pub fn parse_tsv(text: &str) -> Result<Self, CorpusError> {
        let mut table = LemmaTable::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            match (cols.next(), cols.next(), cols.next()) {
                (Some(surface), Some(lemma), None)
                    if !surface.trim().is_empty() && !lemma.trim().is_empty() =>
                {
                    table.insert(surface.trim(), lemma.trim());
                }
                _ => {
                    return Err(CorpusError::Parse {
                        line: idx + 1,
                        message: "lemma table rows must be `surface<TAB>lemma`".into(),
                    })
                }
            }
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, CorpusError> {
        let text = fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))?;
        Self::parse_tsv(&text)
    }
}

impl<S: AsRef<str>> FromIterator<(S, S)> for LemmaTable {
    fn from_iter<I: IntoIterator<Item = (S, S)>>(iter: I) -> Self {
        let mut table = LemmaTable::new();
        for (surface, lemma) in iter {
            table.insert(surface.as_ref(), lemma.as_ref());
        }
        table
    }
}

/// Replaces each token by its lemma; length is preserved.
pub fn lemmatize(tokens: &[String], table: &LemmaTable) -> Vec<String> {
    tokens.iter().map(|t| table.lemma(t).to_owned()).collect()
}
