use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::corpus::Gender;

use super::{AnalysisError, TokenMatrix};

/// Betweenness of consecutive ages for one gender.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AgeOrdering {
    pub gender: Gender,
    /// Fraction of interior ages that lie between their neighbours.
    pub score: f64,
    /// Same fraction averaged over random reorderings of the ages.
    pub shuffled_baseline: f64,
    pub interior: usize,
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `v` is between `prev` and `next` when it sits inside the ball whose
/// diameter is the segment joining them.
fn between(prev: &[f64], v: &[f64], next: &[f64]) -> bool {
    let mid: Vec<f64> = prev.iter().zip(next).map(|(a, b)| (a + b) / 2.0).collect();
    dist(v, &mid) < dist(prev, next) / 2.0
}

fn score_sequence(rows: &[&[f64]]) -> f64 {
    let interior = rows.len() - 2;
    let hits = rows
        .windows(3)
        .filter(|w| between(w[0], w[1], w[2]))
        .count();
    hits as f64 / interior as f64
}

/// Fraction of interior ages `i` whose vector lies between those of the
/// neighbouring ages, for one gender.
pub fn age_ordering_score(tokens: &TokenMatrix, gender: Gender) -> Result<f64, AnalysisError> {
    let idx = tokens.indices_of(gender);
    if idx.len() < 3 {
        return Err(AnalysisError::Invalid(format!(
            "age ordering needs >= 3 ages for {gender}, got {}",
            idx.len()
        )));
    }
    let rows: Vec<&[f64]> = idx.iter().map(|&i| tokens.row(i)).collect();
    Ok(score_sequence(&rows))
}

/// Ordering score together with its shuffled-age baseline.
pub fn age_ordering(
    tokens: &TokenMatrix,
    gender: Gender,
    shuffles: usize,
    seed: u64,
) -> Result<AgeOrdering, AnalysisError> {
    let score = age_ordering_score(tokens, gender)?;
    let mut rows: Vec<&[f64]> = tokens
        .indices_of(gender)
        .iter()
        .map(|&i| tokens.row(i))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut total = 0.0;
    for _ in 0..shuffles {
        rows.shuffle(&mut rng);
        total += score_sequence(&rows);
    }
    Ok(AgeOrdering {
        gender,
        score,
        shuffled_baseline: if shuffles > 0 {
            total / shuffles as f64
        } else {
            f64::NAN
        },
        interior: rows.len() - 2,
    })
}
