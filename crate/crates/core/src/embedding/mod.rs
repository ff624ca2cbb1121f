//! Static word embeddings trained with negative sampling (CBOW or skip-gram).

mod config;
mod io;
mod matrix;
mod model;
mod sampling;
mod step;
mod train;
mod vocab;

use std::path::{Path, PathBuf};

pub use config::{Arch, TrainConfig};
pub use io::{format_g6, load_model, read_vectors, save_model, sidecar_path, write_vectors};
pub use matrix::{AtomicMatrix, DenseRows, Matrix, ParamStore, SharedRows};
pub use model::EmbeddingModel;
pub use sampling::{keep_probability, keep_table, NegativeSampler};
pub use step::{cbow_step, skipgram_step, StepScratch};
pub use train::{train, train_encoded, train_sentences, EncodedCorpus, TrainReport};
pub use vocab::{build_vocab, count_tokens, VocabEntry, Vocabulary};

#[derive(Debug, thiserror::Error)]
pub enum EmbeddingError {
    #[error("invalid training config: {0}")]
    Config(String),
    #[error("vocabulary is empty after filtering")]
    EmptyVocabulary,
    #[error("training produced non-finite parameters")]
    NonFinite,
    #[error("model file line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("model file line {line}: expected {expected} values, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("duplicate token {0:?} in model file")]
    DuplicateToken(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl EmbeddingError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        EmbeddingError::Io {
            path: path.to_owned(),
            source,
        }
    }
}
