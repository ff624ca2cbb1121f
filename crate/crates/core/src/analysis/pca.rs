use nalgebra::DMatrix;

use crate::embedding::Matrix;

use super::AnalysisError;

/// Principal components of a set of row vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct PcaResult {
    /// k × d, rows are orthonormal principal directions.
    pub components: Matrix,
    /// n × k projections of the centered rows.
    pub scores: Matrix,
    pub explained_variance_ratio: Vec<f64>,
    pub means: Vec<f64>,
}

impl PcaResult {
    pub fn k(&self) -> usize {
        self.components.rows()
    }

    /// Scores on component `c` (0-based) for every row.
    pub fn component_scores(&self, c: usize) -> Vec<f64> {
        (0..self.scores.rows())
            .map(|i| self.scores.row(i)[c])
            .collect()
    }
}

/// Column-centered PCA from the eigendecomposition of the scatter matrix.
///
/// Each component is sign-flipped so that its largest-magnitude entry is
/// positive, which makes the output deterministic.
pub fn pca(rows: &Matrix, k: usize) -> Result<PcaResult, AnalysisError> {
    let (n, d) = (rows.rows(), rows.cols());
    if n < 2 {
        return Err(AnalysisError::Invalid(format!(
            "PCA needs at least 2 rows, got {n}"
        )));
    }
    let max_k = (n - 1).min(d);
    if k < 1 || k > max_k {
        return Err(AnalysisError::Invalid(format!(
            "component count {k} outside 1..={max_k}"
        )));
    }

    let means: Vec<f64> = (0..d)
        .map(|j| (0..n).map(|i| rows.row(i)[j]).sum::<f64>() / n as f64)
        .collect();
    let centered = DMatrix::from_fn(n, d, |i, j| rows.row(i)[j] - means[j]);
    let total: f64 = centered.iter().map(|v| v * v).sum();

    // The scatter matrix is symmetric, and its eigen solver stays accurate on
    // rank-deficient data where the bidiagonal SVD loses digits.
    let scatter = centered.transpose() * &centered;
    let eigen = scatter.symmetric_eigen();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[b]
            .total_cmp(&eigen.eigenvalues[a])
            .then(a.cmp(&b))
    });

    let mut components = Matrix::zeros(k, d);
    let mut explained = Vec::with_capacity(k);
    for (c, &idx) in order.iter().take(k).enumerate() {
        let dir = components.row_mut(c);
        for (j, v) in dir.iter_mut().enumerate() {
            *v = eigen.eigenvectors[(j, idx)];
        }
        let pivot = dir
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (j, &v)| {
                if v.abs() > best.1 {
                    (j, v.abs())
                } else {
                    best
                }
            })
            .0;
        if dir[pivot] < 0.0 {
            dir.iter_mut().for_each(|v| *v = -*v);
        }
        let lambda = eigen.eigenvalues[idx].max(0.0);
        explained.push(if total > 0.0 {
            (lambda / total).min(1.0)
        } else {
            0.0
        });
    }

    let mut scores = Matrix::zeros(n, k);
    for i in 0..n {
        for c in 0..k {
            scores.row_mut(i)[c] = (0..d)
                .map(|j| centered[(i, j)] * components.row(c)[j])
                .sum();
        }
    }

    Ok(PcaResult {
        components,
        scores,
        explained_variance_ratio: explained,
        means,
    })
}
