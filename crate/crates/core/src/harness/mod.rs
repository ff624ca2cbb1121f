//! Synthetic planted-signal corpora, robustness sweeps and report bundles.

mod report;
mod sweep;
mod synth;

use std::path::{Path, PathBuf};

pub use report::{
    emit_report, read_manifest, sha256_bytes, sha256_file, verify_report, FileDigest, Manifest,
    ReportBundle, RunInfo, CONFIG_FILE, MANIFEST_FILE,
};
pub use sweep::{
    gender_correlations, prefix_len, run_sweep, sweep_tsv, SweepAxis, SweepCell, SweepGrid,
    SweepRow, SWEEP_HEADER,
};
pub use synth::{generate_corpus, pseudo_word, write_corpus, AgeProfile, Lexicon, SyntheticSpec};

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("invalid spec: {0}")]
    Spec(String),
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.to_owned(),
            source,
        }
    }
}
