use std::collections::HashMap;

use crate::corpus::is_enhanced;

use super::EmbeddingError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VocabEntry {
    pub token: String,
    pub count: u64,
    pub enhanced: bool,
}

/// Token ↔ dense id mapping with occurrence counts.
///
/// Entries are ordered by descending count, ties broken by token string, and
/// ids are positions in that order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    entries: Vec<VocabEntry>,
    index: HashMap<String, u32>,
    total_tokens: u64,
}

impl Vocabulary {
    /// Builds a vocabulary from raw counts, dropping tokens rarer than
    /// `min_count` unless they are enhanced tokens and `exempt_enhanced` is set.
    pub fn from_counts(
        counts: HashMap<String, u64>,
        min_count: u64,
        exempt_enhanced: bool,
    ) -> Result<Self, EmbeddingError> {
        let mut entries: Vec<VocabEntry> = counts
            .into_iter()
            .filter_map(|(token, count)| {
                let enhanced = is_enhanced(&token);
                (count >= min_count || (enhanced && exempt_enhanced)).then_some(VocabEntry {
                    token,
                    count,
                    enhanced,
                })
            })
            .collect();
        if entries.is_empty() {
            return Err(EmbeddingError::EmptyVocabulary);
        }
        entries.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.token.cmp(&b.token)));
        Ok(Self::from_entries(entries))
    }

    /// Keeps the given order; used when loading saved models.
    pub fn from_entries(entries: Vec<VocabEntry>) -> Self {
        let index = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.token.clone(), i as u32))
            .collect();
        let total_tokens = entries.iter().map(|e| e.count).sum();
        Vocabulary {
            entries,
            index,
            total_tokens,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_tokens(&self) -> u64 {
        self.total_tokens
    }

    pub fn id(&self, token: &str) -> Option<u32> {
        self.index.get(token).copied()
    }

    pub fn entry(&self, id: u32) -> &VocabEntry {
        &self.entries[id as usize]
    }

    pub fn token(&self, id: u32) -> &str {
        &self.entries[id as usize].token
    }

    pub fn count(&self, id: u32) -> u64 {
        self.entries[id as usize].count
    }

    pub fn entries(&self) -> &[VocabEntry] {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &VocabEntry)> {
        self.entries.iter().enumerate().map(|(i, e)| (i as u32, e))
    }
}

/// Counts whitespace-separated tokens.
pub fn count_tokens<'a, I>(sentences: I) -> HashMap<String, u64>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut counts: HashMap<String, u64> = HashMap::new();
    for sentence in sentences {
        for token in sentence.split_whitespace() {
            match counts.get_mut(token) {
                Some(c) => *c += 1,
                None => {
                    counts.insert(token.to_owned(), 1);
                }
            }
        }
    }
    counts
}

pub fn build_vocab<'a, I>(sentences: I, min_count: u64) -> Result<Vocabulary, EmbeddingError>
where
    I: IntoIterator<Item = &'a str>,
{
    Vocabulary::from_counts(count_tokens(sentences), min_count, true)
}
