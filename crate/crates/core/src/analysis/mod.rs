//! Statistics over enhanced-token vectors: PCA, demographic correlations,
//! semantic-axis projections and the pole-shuffling permutation test.

mod axis;
mod ordering;
mod pca;
mod permutation;
mod report;
mod stats;
pub mod tables;
mod tokens;

use std::path::PathBuf;

pub use axis::{
    build_axis, parse_word_list, project, project_onto, read_word_list, AxisOptions, Projection,
    SemanticAxis,
};
pub use ordering::{age_ordering, age_ordering_score, AgeOrdering};
pub use pca::{pca, PcaResult};
pub use permutation::{gender_gap, permutation_test, PermutationResult};
pub use report::{
    age_correlations, analyze, axis_report, gender_labels, AgeCorrelation, AnalysisConfig,
    AnalysisReport, AxisReport,
};
pub use stats::{
    average_ranks, correlation_log10_p, ln_beta_regularized, pearson, pearson_r, point_biserial,
    spearman, t_two_tailed_ln_p, CorrelationResult,
};
pub use tokens::{extract_token_matrix, TokenMatrix};

#[derive(Debug, thiserror::Error)]
pub enum AnalysisError {
    #[error("need at least 2 enhanced tokens, found {0}")]
    TooFewTokens(usize),
    #[error("{0}")]
    Invalid(String),
    #[error("correlation undefined: an input has zero variance")]
    UndefinedCorrelation,
    #[error("{0} is empty")]
    EmptyPole(String),
    #[error("{pole}: {missing} of {total} words missing from the vocabulary")]
    TooManyMissing {
        pole: String,
        missing: usize,
        total: usize,
    },
    #[error("axis is degenerate: pole means coincide")]
    DegenerateAxis,
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}
