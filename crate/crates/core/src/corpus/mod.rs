//! Corpus ingestion: JSONL posts in, rewritten token lines out.
//!
//! Every first-person singular pronoun is replaced by an enhanced token
//! `<I:G:AGE>` carrying the author's gender and age, so that a single
//! embedding model learns one vector per demographic cell.

mod enhance;
mod key;
mod lemma;
mod post;
mod prep;
mod tokenize;

use std::io;
use std::path::{Path, PathBuf};

pub use enhance::{enhance, PronounSet, ENGLISH_PRONOUNS, RUSSIAN_PRONOUNS};
pub use key::{is_enhanced, parse_enhanced, render_enhanced, DemographicKey, Gender};
pub use lemma::{lemmatize, LemmaTable};
pub use post::{parse_post, AgeRange, Post};
pub use prep::{PrepStats, Preprocessor};
pub use tokenize::tokenize;

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid record: {0}")]
    Validation(String),
    #[error("line {line}: age {age} outside [{min}, {max}]")]
    AgeOutOfRange {
        line: usize,
        age: u32,
        min: u32,
        max: u32,
    },
    #[error("not an enhanced token: {0:?}")]
    NotEnhanced(String),
    #[error("malformed enhanced token: {0:?}")]
    EnhancedFormat(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
}

impl CorpusError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        CorpusError::Io {
            path: path.to_owned(),
            source,
        }
    }
}
