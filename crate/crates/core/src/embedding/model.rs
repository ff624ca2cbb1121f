use super::matrix::{DenseRows, Matrix};
use super::step::{cbow_step, skipgram_step, StepScratch};
use super::{TrainConfig, Vocabulary};

/// A trained (or loaded) embedding model.
///
/// `input` holds the word vectors that are analyzed; `output` holds the
/// negative-sampling context weights.
#[derive(Clone, Debug)]
pub struct EmbeddingModel {
    pub vocab: Vocabulary,
    pub input: Matrix,
    pub output: Matrix,
    pub config: TrainConfig,
}

impl EmbeddingModel {
    pub fn new(vocab: Vocabulary, input: Matrix, output: Matrix, config: TrainConfig) -> Self {
        assert_eq!(input.rows(), vocab.len());
        assert_eq!(output.rows(), vocab.len());
        assert_eq!(input.cols(), output.cols());
        EmbeddingModel {
            vocab,
            input,
            output,
            config,
        }
    }

    pub fn dims(&self) -> usize {
        self.input.cols()
    }

    pub fn len(&self) -> usize {
        self.vocab.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vocab.is_empty()
    }

    /// Input vector of `token`, if it is in the vocabulary.
    pub fn vector(&self, token: &str) -> Option<&[f64]> {
        self.vocab.id(token).map(|id| self.input.row(id as usize))
    }

    pub fn is_finite(&self) -> bool {
        self.input.is_finite() && self.output.is_finite()
    }

    /// Applies one CBOW update in place and returns the pre-update loss.
    pub fn cbow_step(&mut self, context: &[u32], target: u32, negatives: &[u32], lr: f64) -> f64 {
        let mut scratch = StepScratch::new(self.dims());
        cbow_step(
            &mut DenseRows(&mut self.input),
            &mut DenseRows(&mut self.output),
            context,
            target,
            negatives,
            lr,
            &mut scratch,
        )
    }

    /// Applies one skip-gram update in place and returns the pre-update loss.
    pub fn skipgram_step(&mut self, center: u32, context: u32, negatives: &[u32], lr: f64) -> f64 {
        let mut scratch = StepScratch::new(self.dims());
        skipgram_step(
            &mut DenseRows(&mut self.input),
            &mut DenseRows(&mut self.output),
            center,
            context,
            negatives,
            lr,
            &mut scratch,
        )
    }
}
