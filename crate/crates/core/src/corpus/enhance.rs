use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use super::{render_enhanced, CorpusError, DemographicKey};

/// Russian first-person singular personal pronoun, all case forms.
pub const RUSSIAN_PRONOUNS: [&str; 5] = ["я", "меня", "мне", "мной", "мною"];

/// English first-person singular forms used by the synthetic corpora.
pub const ENGLISH_PRONOUNS: [&str; 5] = ["i", "me", "my", "mine", "myself"];

/// Lowercased pronoun forms that are rewritten into enhanced tokens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PronounSet {
    forms: BTreeSet<String>,
}

impl PronounSet {
    pub fn new<I, S>(forms: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        PronounSet {
            forms: forms
                .into_iter()
                .map(|f| f.as_ref().trim().to_lowercase())
                .collect(),
        }
    }

    pub fn russian() -> Self {
        Self::new(RUSSIAN_PRONOUNS)
    }

    pub fn english() -> Self {
        Self::new(ENGLISH_PRONOUNS)
    }

    /// Union of the Russian and English builtin sets.
    pub fn builtin() -> Self {
        Self::new(RUSSIAN_PRONOUNS.iter().chain(ENGLISH_PRONOUNS.iter()))
    }

    pub fn contains(&self, token: &str) -> bool {
        self.forms.contains(token)
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.forms.iter().map(String::as_str)
    }

    /// One pronoun per line, `#` comments allowed.
    pub fn parse_list(text: &str) -> Self {
        Self::new(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#')),
        )
    }

    /// Loads a word-list file, or one of the builtin names `ru`, `en`, `builtin`.
    pub fn load(spec: &str) -> Result<Self, CorpusError> {
        match spec {
            "ru" => Ok(Self::russian()),
            "en" => Ok(Self::english()),
            "builtin" => Ok(Self::builtin()),
            path => {
                let path = Path::new(path);
                let text = fs::read_to_string(path).map_err(|e| CorpusError::io(path, e))?;
                let set = Self::parse_list(&text);
                if set.is_empty() {
                    return Err(CorpusError::Validation(format!(
                        "pronoun list {} is empty",
                        path.display()
                    )));
                }
                Ok(set)
            }
        }
    }
}

/// Replaces every pronoun form with the enhanced token for `key`.
///
/// All case forms map to the same token; length is preserved.
pub fn enhance(tokens: &[String], key: DemographicKey, pronouns: &PronounSet) -> Vec<String> {
    let surface = render_enhanced(key);
    tokens
        .iter()
        .map(|t| {
            if pronouns.contains(t) {
                surface.clone()
            } else {
                t.clone()
            }
        })
        .collect()
}
