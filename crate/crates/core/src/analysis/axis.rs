use std::collections::BTreeSet;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingModel;

use super::AnalysisError;

/// How a vector is scored against an axis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Projection {
    /// Cosine similarity with the axis direction, in [-1, 1].
    #[default]
    Cosine,
    /// Raw dot product with the unit axis direction.
    Dot,
}

impl FromStr for Projection {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cosine" => Ok(Projection::Cosine),
            "dot" => Ok(Projection::Dot),
            other => Err(AnalysisError::Invalid(format!(
                "unknown projection {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AxisOptions {
    /// Largest tolerated fraction of out-of-vocabulary words per pole.
    pub max_missing_fraction: f64,
    pub projection: Projection,
}

impl Default for AxisOptions {
    fn default() -> Self {
        AxisOptions {
            max_missing_fraction: 0.5,
            projection: Projection::Cosine,
        }
    }
}

/// Unit direction from the negative pole's mean vector to the positive pole's.
#[derive(Clone, Debug, PartialEq)]
pub struct SemanticAxis {
    pub direction: Vec<f64>,
    pub pos_pole: Vec<String>,
    pub neg_pole: Vec<String>,
    pub missing: Vec<String>,
}

/// Reads a pole word list: one word per line, `#` comments.
pub fn read_word_list(path: &Path) -> Result<Vec<String>, AnalysisError> {
    let text = fs::read_to_string(path).map_err(|e| AnalysisError::Io {
        path: path.to_owned(),
        source: e,
    })?;
    Ok(parse_word_list(&text))
}

pub fn parse_word_list(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

fn mean(rows: &[&[f64]]) -> Vec<f64> {
    let mut acc = vec![0.0; rows[0].len()];
    for row in rows {
        for (a, v) in acc.iter_mut().zip(row.iter()) {
            *a += v;
        }
    }
    let n = rows.len() as f64;
    acc.iter_mut().for_each(|a| *a /= n);
    acc
}

// Means are formed separately so that swapping the poles negates exactly.
pub(crate) fn mean_difference(pos: &[&[f64]], neg: &[&[f64]]) -> Vec<f64> {
    let (mp, mn) = (mean(pos), mean(neg));
    mp.iter().zip(&mn).map(|(a, b)| a - b).collect()
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Normalized mean difference, or `None` when the poles coincide.
pub(crate) fn direction_from(pos: &[&[f64]], neg: &[&[f64]]) -> Option<Vec<f64>> {
    let diff = mean_difference(pos, neg);
    let len = norm(&diff);
    let scale = pos.iter().chain(neg).map(|r| norm(r)).fold(0.0, f64::max);
    if !len.is_finite() || len <= 1e-12 * scale || len == 0.0 {
        return None;
    }
    Some(diff.into_iter().map(|v| v / len).collect())
}

struct Pole {
    found: Vec<String>,
    missing: Vec<String>,
}

fn resolve_pole(
    model: &EmbeddingModel,
    words: &[String],
    name: &str,
    max_missing: f64,
) -> Result<Pole, AnalysisError> {
    let mut seen = BTreeSet::new();
    let mut found = Vec::new();
    let mut missing = Vec::new();
    for w in words {
        let w = w.trim().to_lowercase();
        if w.is_empty() || !seen.insert(w.clone()) {
            continue;
        }
        if model.vocab.id(&w).is_some() {
            found.push(w);
        } else {
            missing.push(w);
        }
    }
    let total = found.len() + missing.len();
    if total == 0 {
        return Err(AnalysisError::EmptyPole(name.to_owned()));
    }
    if found.is_empty() {
        return Err(AnalysisError::EmptyPole(format!(
            "{name} (all {total} words missing)"
        )));
    }
    let frac = missing.len() as f64 / total as f64;
    if frac > max_missing {
        return Err(AnalysisError::TooManyMissing {
            pole: name.to_owned(),
            missing: missing.len(),
            total,
        });
    }
    Ok(Pole { found, missing })
}

/// Builds `normalize(mean(pos) − mean(neg))` from input vectors.
///
/// Out-of-vocabulary words are skipped and listed in `missing`.
pub fn build_axis(
    model: &EmbeddingModel,
    pos_words: &[String],
    neg_words: &[String],
    options: &AxisOptions,
) -> Result<SemanticAxis, AnalysisError> {
    let pos = resolve_pole(
        model,
        pos_words,
        "positive pole",
        options.max_missing_fraction,
    )?;
    let neg = resolve_pole(
        model,
        neg_words,
        "negative pole",
        options.max_missing_fraction,
    )?;
    let rows = |words: &[String]| -> Vec<&[f64]> {
        words
            .iter()
            .map(|w| model.vector(w).expect("resolved word"))
            .collect()
    };
    let direction = direction_from(&rows(&pos.found), &rows(&neg.found))
        .ok_or(AnalysisError::DegenerateAxis)?;
    if let Some(shared) = pos.found.iter().find(|w| neg.found.contains(w)) {
        return Err(AnalysisError::Invalid(format!(
            "word {shared:?} appears in both poles"
        )));
    }
    let mut missing = pos.missing;
    missing.extend(neg.missing);
    Ok(SemanticAxis {
        direction,
        pos_pole: pos.found,
        neg_pole: neg.found,
        missing,
    })
}

/// Scores `vector` against a unit direction.
pub fn project_onto(
    vector: &[f64],
    direction: &[f64],
    kind: Projection,
) -> Result<f64, AnalysisError> {
    let len = norm(vector);
    if len == 0.0 {
        return Err(AnalysisError::Invalid(
            "cannot project a zero vector".into(),
        ));
    }
    let dot: f64 = vector.iter().zip(direction).map(|(a, b)| a * b).sum();
    Ok(match kind {
        Projection::Cosine => (dot / len).clamp(-1.0, 1.0),
        Projection::Dot => dot,
    })
}

/// Cosine similarity between `vector` and the axis direction.
pub fn project(vector: &[f64], axis: &SemanticAxis) -> Result<f64, AnalysisError> {
    project_onto(vector, &axis.direction, Projection::Cosine)
}
