use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;

use super::{EmbeddingError, Vocabulary};

/// Probability of keeping one occurrence of a token during subsampling.
///
/// With `f = count / total` this is `min(1, sqrt(t / f))`. Enhanced tokens
/// are always kept, and `t = 0` disables subsampling.
pub fn keep_probability(count: u64, total: u64, t: f64, is_enhanced: bool) -> f64 {
    if is_enhanced || t <= 0.0 || count == 0 || total == 0 {
        return 1.0;
    }
    let f = count as f64 / total as f64;
    (t / f).sqrt().min(1.0)
}

/// Per-id keep probabilities for a whole vocabulary.
pub fn keep_table(vocab: &Vocabulary, t: f64, exempt_enhanced: bool) -> Vec<f64> {
    let total = vocab.total_tokens();
    vocab
        .entries()
        .iter()
        .map(|e| keep_probability(e.count, total, t, exempt_enhanced && e.enhanced))
        .collect()
}

/// Noise distribution over token ids, `P(i) ∝ count_i^power`.
#[derive(Clone, Debug)]
pub struct NegativeSampler {
    alias: Option<WeightedAliasIndex<f64>>,
    probabilities: Vec<f64>,
}

impl NegativeSampler {
    pub fn new(vocab: &Vocabulary, power: f64) -> Result<Self, EmbeddingError> {
        let weights: Vec<f64> = vocab
            .entries()
            .iter()
            .map(|e| (e.count as f64).powf(power))
            .collect();
        Self::from_weights(weights)
    }

    pub fn from_weights(weights: Vec<f64>) -> Result<Self, EmbeddingError> {
        if weights.is_empty() {
            return Err(EmbeddingError::EmptyVocabulary);
        }
        let mut weights = weights;
        // loaded models carry no counts; fall back to uniform noise
        if weights.iter().all(|&w| w == 0.0) {
            weights.iter_mut().for_each(|w| *w = 1.0);
        }
        let sum: f64 = weights.iter().sum();
        let probabilities = weights.iter().map(|w| w / sum).collect();
        let alias = if weights.len() == 1 {
            None
        } else {
            Some(
                WeightedAliasIndex::new(weights)
                    .map_err(|e| EmbeddingError::Config(format!("noise distribution: {e}")))?,
            )
        };
        Ok(NegativeSampler {
            alias,
            probabilities,
        })
    }

    pub fn probability(&self, id: u32) -> f64 {
        self.probabilities[id as usize]
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        match &self.alias {
            Some(alias) => alias.sample(rng) as u32,
            None => 0,
        }
    }

    /// Draws `k` ids different from `exclude` into `out`.
    ///
    /// Gives up on a slot after a bounded number of rejections, so a
    /// vocabulary consisting only of `exclude` yields no negatives.
    pub fn sample_negatives<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        k: usize,
        exclude: u32,
        out: &mut Vec<u32>,
    ) {
        out.clear();
        if self.len() < 2 {
            return;
        }
        for _ in 0..k {
            for _ in 0..64 {
                let id = self.sample(rng);
                if id != exclude {
                    out.push(id);
                    break;
                }
            }
        }
    }
}
