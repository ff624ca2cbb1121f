use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::EmbeddingError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Arch {
    Cbow,
    #[serde(rename = "sg")]
    SkipGram,
}

impl fmt::Display for Arch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arch::Cbow => "cbow",
            Arch::SkipGram => "sg",
        })
    }
}

impl FromStr for Arch {
    type Err = EmbeddingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cbow" => Ok(Arch::Cbow),
            "sg" | "skipgram" | "skip-gram" => Ok(Arch::SkipGram),
            other => Err(EmbeddingError::Config(format!(
                "unknown architecture {other:?} (expected cbow or sg)"
            ))),
        }
    }
}

/// Training hyperparameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub arch: Arch,
    pub dims: usize,
    pub epochs: usize,
    /// Maximum context radius; the effective radius is drawn from `1..=window`.
    pub window: usize,
    pub negatives: usize,
    pub initial_lr: f64,
    /// Subsampling threshold `t`; 0 disables subsampling.
    pub subsample_t: f64,
    pub min_count: u64,
    /// Exponent of the unigram noise distribution.
    pub noise_power: f64,
    /// Enhanced tokens bypass `min_count` and subsampling.
    pub exempt_enhanced: bool,
    pub seed: u64,
    pub workers: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            arch: Arch::Cbow,
            dims: 100,
            epochs: 10,
            window: 5,
            negatives: 5,
            initial_lr: 0.025,
            subsample_t: 1e-4,
            min_count: 5,
            noise_power: 0.75,
            exempt_enhanced: true,
            seed: 1,
            workers: 1,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), EmbeddingError> {
        let fail = |msg: &str| Err(EmbeddingError::Config(msg.to_owned()));
        if self.dims < 1 {
            return fail("dims must be >= 1");
        }
        if self.epochs < 1 {
            return fail("epochs must be >= 1");
        }
        if self.window < 1 {
            return fail("window must be >= 1");
        }
        if self.negatives < 1 {
            return fail("negatives must be >= 1");
        }
        if !(self.initial_lr > 0.0 && self.initial_lr.is_finite()) {
            return fail("learning rate must be positive");
        }
        if !(self.subsample_t >= 0.0 && self.subsample_t.is_finite()) {
            return fail("subsample threshold must be >= 0");
        }
        if !(self.noise_power > 0.0 && self.noise_power.is_finite()) {
            return fail("noise power must be positive");
        }
        if self.workers < 1 {
            return fail("workers must be >= 1");
        }
        Ok(())
    }
}
