use crate::corpus::{parse_enhanced, DemographicKey, Gender};
use crate::embedding::{EmbeddingModel, Matrix};

use super::AnalysisError;

/// Input vectors of every enhanced token, one row per demographic key.
#[derive(Clone, Debug, PartialEq)]
pub struct TokenMatrix {
    keys: Vec<DemographicKey>,
    rows: Matrix,
}

impl TokenMatrix {
    /// Builds a matrix from `(key, vector)` pairs, sorting by key.
    pub fn new(mut items: Vec<(DemographicKey, Vec<f64>)>) -> Result<Self, AnalysisError> {
        if items.len() < 2 {
            return Err(AnalysisError::TooFewTokens(items.len()));
        }
        items.sort_by_key(|a| a.0);
        if items.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(AnalysisError::Invalid("duplicate demographic key".into()));
        }
        let dims = items[0].1.len();
        if items.iter().any(|(_, v)| v.len() != dims) {
            return Err(AnalysisError::Invalid("ragged token vectors".into()));
        }
        let keys = items.iter().map(|(k, _)| *k).collect();
        let data: Vec<f64> = items.into_iter().flat_map(|(_, v)| v).collect();
        let n = data_len_rows(&data, dims);
        Ok(TokenMatrix {
            keys,
            rows: Matrix::from_vec(n, dims, data),
        })
    }

    pub fn keys(&self) -> &[DemographicKey] {
        &self.keys
    }

    pub fn rows(&self) -> &Matrix {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn dims(&self) -> usize {
        self.rows.cols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        self.rows.row(i)
    }

    /// 1.0 for `F`, 0.0 for `M`, in row order.
    pub fn gender_indicator(&self) -> Vec<f64> {
        self.keys.iter().map(|k| k.gender.indicator()).collect()
    }

    pub fn ages(&self) -> Vec<f64> {
        self.keys.iter().map(|k| f64::from(k.age)).collect()
    }

    /// Row indices of one gender, in ascending age order.
    pub fn indices_of(&self, gender: Gender) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.keys[i].gender == gender)
            .collect()
    }
}

fn data_len_rows(data: &[f64], dims: usize) -> usize {
    data.len().checked_div(dims).unwrap_or(0)
}

/// Collects every enhanced token in the model's vocabulary.
pub fn extract_token_matrix(model: &EmbeddingModel) -> Result<TokenMatrix, AnalysisError> {
    let items: Vec<(DemographicKey, Vec<f64>)> = model
        .vocab
        .iter()
        .filter_map(|(id, entry)| {
            parse_enhanced(&entry.token)
                .ok()
                .map(|key| (key, model.input.row(id as usize).to_vec()))
        })
        .collect();
    TokenMatrix::new(items)
}
