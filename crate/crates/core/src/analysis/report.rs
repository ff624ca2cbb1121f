use serde::Serialize;

use crate::corpus::Gender;
use crate::embedding::EmbeddingModel;

use super::axis::{build_axis, project_onto, AxisOptions, SemanticAxis};
use super::ordering::{age_ordering, AgeOrdering};
use super::pca::{pca, PcaResult};
use super::permutation::{permutation_test, PermutationResult};
use super::stats::{point_biserial, spearman, CorrelationResult};
use super::{extract_token_matrix, AnalysisError, TokenMatrix};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisConfig {
    /// Principal components to keep (capped by the data).
    pub components: usize,
    /// Boundary between the "younger" and "older" age subranges.
    pub age_split: u32,
    pub axis: AxisOptions,
    /// Permutations for the axis test; 0 skips it.
    pub n_perms: usize,
    pub ordering_shuffles: usize,
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            components: 3,
            age_split: 26,
            axis: AxisOptions::default(),
            n_perms: 0,
            ordering_shuffles: 100,
            seed: 1,
        }
    }
}

/// Spearman correlation between age and one component over an age subrange.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AgeCorrelation {
    /// 1-based component number.
    pub component: usize,
    pub subrange: String,
    pub result: Option<CorrelationResult>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxisReport {
    pub axis: SemanticAxis,
    /// One projection per token, in token-matrix order.
    pub projections: Vec<f64>,
    pub r_gender: CorrelationResult,
    pub female_positive: f64,
    pub male_negative: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnalysisReport {
    pub tokens: TokenMatrix,
    pub pca: PcaResult,
    pub r_pc1_gender: CorrelationResult,
    pub age_correlations: Vec<AgeCorrelation>,
    pub ordering: Vec<AgeOrdering>,
    pub axis: Option<AxisReport>,
    pub permutation: Option<PermutationResult>,
}

pub fn gender_labels(tokens: &TokenMatrix) -> Vec<bool> {
    tokens
        .keys()
        .iter()
        .map(|k| k.gender == Gender::F)
        .collect()
}

/// Projects every token onto `axis` and summarizes the gender split.
pub fn axis_report(
    tokens: &TokenMatrix,
    axis: SemanticAxis,
    options: &AxisOptions,
) -> Result<AxisReport, AnalysisError> {
    let projections = (0..tokens.len())
        .map(|i| project_onto(tokens.row(i), &axis.direction, options.projection))
        .collect::<Result<Vec<_>, _>>()?;
    let r_gender = point_biserial(&gender_labels(tokens), &projections)?;
    let share = |gender: Gender, positive: bool| {
        let idx = tokens.indices_of(gender);
        let hits = idx
            .iter()
            .filter(|&&i| (projections[i] > 0.0) == positive)
            .count();
        hits as f64 / idx.len().max(1) as f64
    };
    Ok(AxisReport {
        female_positive: share(Gender::F, true),
        male_negative: share(Gender::M, false),
        axis,
        projections,
        r_gender,
    })
}

/// Spearman ρ between age and component scores, over all ages and over the
/// younger (`age <= split`) and older (`age >= split`) subranges.
pub fn age_correlations(tokens: &TokenMatrix, pca: &PcaResult, split: u32) -> Vec<AgeCorrelation> {
    let ages = tokens.ages();
    let mut out = Vec::new();
    for c in 1..pca.k() {
        let scores = pca.component_scores(c);
        let ranges = [
            ("all", 0..=u32::MAX),
            ("younger", 0..=split),
            ("older", split..=u32::MAX),
        ];
        for (label, keep) in ranges {
            let idx: Vec<usize> = (0..tokens.len())
                .filter(|&i| keep.contains(&tokens.keys()[i].age))
                .collect();
            let x: Vec<f64> = idx.iter().map(|&i| ages[i]).collect();
            let y: Vec<f64> = idx.iter().map(|&i| scores[i]).collect();
            out.push(AgeCorrelation {
                component: c + 1,
                subrange: label.to_owned(),
                result: spearman(&x, &y).ok(),
            });
        }
    }
    out
}

/// Runs the full battery on the enhanced tokens of `model`.
///
/// The axis and permutation sections are computed only when poles are given.
pub fn analyze(
    model: &EmbeddingModel,
    poles: Option<(&[String], &[String])>,
    config: &AnalysisConfig,
) -> Result<AnalysisReport, AnalysisError> {
    let tokens = extract_token_matrix(model)?;
    let k = config
        .components
        .min(tokens.len() - 1)
        .min(tokens.dims())
        .max(1);
    let pca = pca(tokens.rows(), k)?;
    let r_pc1_gender = point_biserial(&gender_labels(&tokens), &pca.component_scores(0))?;
    let age_correlations = age_correlations(&tokens, &pca, config.age_split);
    let ordering = Gender::ALL
        .iter()
        .filter_map(|&g| age_ordering(&tokens, g, config.ordering_shuffles, config.seed).ok())
        .collect();

    let (axis, permutation) = match poles {
        Some((pos, neg)) => {
            let axis = build_axis(model, pos, neg, &config.axis)?;
            let report = axis_report(&tokens, axis, &config.axis)?;
            let perm = if config.n_perms > 0 {
                Some(permutation_test(
                    model,
                    pos,
                    neg,
                    &tokens,
                    config.n_perms,
                    config.seed,
                    &config.axis,
                )?)
            } else {
                None
            };
            (Some(report), perm)
        }
        None => (None, None),
    };

    Ok(AnalysisReport {
        tokens,
        pca,
        r_pc1_gender,
        age_correlations,
        ordering,
        axis,
        permutation,
    })
}
