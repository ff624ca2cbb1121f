use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::Gender;
use crate::embedding::EmbeddingModel;

use super::axis::{build_axis, direction_from, project_onto, AxisOptions, Projection};
use super::{AnalysisError, TokenMatrix};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PermutationResult {
    /// Gender gap on the real axis: mean projection of F tokens minus M tokens.
    pub observed: f64,
    pub p_value: f64,
    pub n_perms: usize,
    /// Degenerate random axes that were redrawn.
    pub resampled: usize,
    pub null_samples: Vec<f64>,
}

/// Mean projection of `F`-keyed rows minus mean projection of `M`-keyed rows.
pub fn gender_gap(
    tokens: &TokenMatrix,
    direction: &[f64],
    kind: Projection,
) -> Result<f64, AnalysisError> {
    let mut sums = [0.0f64; 2];
    let mut counts = [0usize; 2];
    for (i, key) in tokens.keys().iter().enumerate() {
        let slot = match key.gender {
            Gender::F => 0,
            Gender::M => 1,
        };
        sums[slot] += project_onto(tokens.row(i), direction, kind)?;
        counts[slot] += 1;
    }
    if counts.contains(&0) {
        return Err(AnalysisError::Invalid(
            "gender gap needs tokens of both genders".into(),
        ));
    }
    Ok(sums[0] / counts[0] as f64 - sums[1] / counts[1] as f64)
}

/// Shuffles the pooled pole words into pseudo-poles of the original sizes,
/// rebuilds the axis and recomputes the gender gap, `n_perms` times.
///
/// Replicate `i` draws from its own generator seeded with `seed + i`, so the
/// null samples do not depend on how replicates are scheduled. The p-value is
/// `(1 + #{|null| >= |observed|}) / (n_perms + 1)`.
pub fn permutation_test(
    model: &EmbeddingModel,
    pos_words: &[String],
    neg_words: &[String],
    tokens: &TokenMatrix,
    n_perms: usize,
    seed: u64,
    options: &AxisOptions,
) -> Result<PermutationResult, AnalysisError> {
    if n_perms < 1 {
        return Err(AnalysisError::Invalid("n_perms must be >= 1".into()));
    }
    let axis = build_axis(model, pos_words, neg_words, options)?;
    let observed = gender_gap(tokens, &axis.direction, options.projection)?;

    let pool: Vec<&[f64]> = axis
        .pos_pole
        .iter()
        .chain(&axis.neg_pole)
        .map(|w| model.vector(w).expect("resolved pole word"))
        .collect();
    let n_pos = axis.pos_pole.len();
    let cap = 10 * n_perms;

    let replicates: Vec<Result<(f64, usize), AnalysisError>> = (0..n_perms)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let mut order: Vec<usize> = (0..pool.len()).collect();
            let mut redraws = 0;
            loop {
                order.shuffle(&mut rng);
                let pos: Vec<&[f64]> = order[..n_pos].iter().map(|&j| pool[j]).collect();
                let neg: Vec<&[f64]> = order[n_pos..].iter().map(|&j| pool[j]).collect();
                if let Some(dir) = direction_from(&pos, &neg) {
                    return Ok((gender_gap(tokens, &dir, options.projection)?, redraws));
                }
                redraws += 1;
                if redraws > cap {
                    return Err(AnalysisError::DegenerateAxis);
                }
            }
        })
        .collect();

    let mut null_samples = Vec::with_capacity(n_perms);
    let mut resampled = 0;
    for r in replicates {
        let (gap, redraws) = r?;
        null_samples.push(gap);
        resampled += redraws;
    }
    if resampled > cap {
        return Err(AnalysisError::DegenerateAxis);
    }

    let threshold = observed.abs() * (1.0 - 1e-12);
    let extreme = null_samples.iter().filter(|s| s.abs() >= threshold).count();
    Ok(PermutationResult {
        observed,
        p_value: (1 + extreme) as f64 / (n_perms + 1) as f64,
        n_perms,
        resampled,
        null_samples,
    })
}
