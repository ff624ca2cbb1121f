use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use crate::analysis::{AnalysisConfig, AxisOptions, Projection};
use crate::corpus::AgeRange;
use crate::embedding::{Arch, TrainConfig};
use crate::harness::SweepGrid;

use super::CliError;

/// Settings that may come from flags or from a config file.
///
/// Every field is optional; `None` means "not given at this layer". Keys in
/// the file are the flag names without the leading dashes.
#[derive(Args, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Overrides {
    /// Input file
    #[arg(long = "in", value_name = "PATH")]
    #[serde(rename = "in")]
    pub input: Option<PathBuf>,
    /// Output file or directory
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Model file (word2vec text format)
    #[arg(long, value_name = "PATH")]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub dims: Option<usize>,
    #[arg(long)]
    pub epochs: Option<usize>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub negatives: Option<usize>,
    /// Initial learning rate
    #[arg(long)]
    pub lr: Option<f64>,
    #[arg(long = "min-count")]
    pub min_count: Option<u64>,
    /// Subsampling threshold, 0 disables
    #[arg(long)]
    pub subsample: Option<f64>,
    #[arg(long, value_parser = parse_arch)]
    pub arch: Option<Arch>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Training threads; for `sweep`, cells trained in parallel
    #[arg(long)]
    pub workers: Option<usize>,
    /// Pronoun list file, or one of `ru`, `en`, `builtin`
    #[arg(long, value_name = "PATH")]
    pub pronouns: Option<String>,
    /// Two-column surface/lemma TSV
    #[arg(long, value_name = "PATH")]
    pub lemmas: Option<PathBuf>,
    /// Positive pole word list
    #[arg(long, value_name = "PATH")]
    pub pos: Option<PathBuf>,
    /// Negative pole word list
    #[arg(long, value_name = "PATH")]
    pub neg: Option<PathBuf>,
    /// Permutations
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "age-min")]
    pub age_min: Option<u32>,
    #[arg(long = "age-max")]
    pub age_max: Option<u32>,
    /// Flat TOML file with any of these keys
    #[arg(long, value_name = "PATH")]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Synthetic corpus spec (TOML)
    #[arg(long, value_name = "PATH")]
    pub spec: Option<PathBuf>,
    /// `cosine` or `dot`
    #[arg(long, value_parser = parse_projection)]
    pub projection: Option<Projection>,
    /// Principal components to report
    #[arg(long)]
    pub components: Option<usize>,
    /// First age of the "older" subrange
    #[arg(long = "age-split")]
    pub age_split: Option<u32>,
    #[arg(long = "grid-archs", value_delimiter = ',', value_parser = parse_arch)]
    pub grid_archs: Option<Vec<Arch>>,
    #[arg(long = "grid-dims", value_delimiter = ',')]
    pub grid_dims: Option<Vec<usize>>,
    #[arg(long = "grid-epochs", value_delimiter = ',')]
    pub grid_epochs: Option<Vec<usize>>,
    #[arg(long = "grid-fractions", value_delimiter = ',')]
    pub grid_fractions: Option<Vec<f64>>,
}

fn parse_arch(s: &str) -> Result<Arch, String> {
    s.parse()
        .map_err(|e: crate::embedding::EmbeddingError| e.to_string())
}

fn parse_projection(s: &str) -> Result<Projection, String> {
    s.parse()
        .map_err(|e: crate::analysis::AnalysisError| e.to_string())
}

macro_rules! layer {
    ($top:expr, $bottom:expr; $($f:ident),*) => {
        Overrides { $($f: $top.$f.or($bottom.$f),)* config: $top.config.or($bottom.config) }
    };
}

impl Overrides {
    /// `self` wins over `lower`.
    pub fn over(self, lower: Overrides) -> Overrides {
        layer!(self, lower; input, out, model, dims, epochs, window, negatives, lr, min_count, subsample,
            arch, seed, workers, pronouns, lemmas, pos, neg, n, age_min, age_max, spec, projection,
            components, age_split, grid_archs, grid_dims, grid_epochs, grid_fractions)
    }

    pub fn from_toml(text: &str) -> Result<Overrides, CliError> {
        toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Overrides, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved settings for one invocation.
///
/// Serializes to the same flat keys `Overrides` reads, so a written config
/// can be passed back with `--config`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct RunConfig {
    #[serde(rename = "in", skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<PathBuf>,
    pub dims: usize,
    pub epochs: usize,
    pub window: usize,
    pub negatives: usize,
    pub lr: f64,
    pub min_count: u64,
    pub subsample: f64,
    pub arch: Arch,
    pub seed: u64,
    /// True when the seed came from a flag or the config file.
    #[serde(skip)]
    pub seed_given: bool,
    pub workers: usize,
    pub pronouns: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pos: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neg: Option<PathBuf>,
    pub n: usize,
    pub age_min: u32,
    pub age_max: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<PathBuf>,
    pub projection: Projection,
    pub components: usize,
    pub age_split: u32,
    pub grid_archs: Vec<Arch>,
    pub grid_dims: Vec<usize>,
    pub grid_epochs: Vec<usize>,
    pub grid_fractions: Vec<f64>,
}

impl RunConfig {
    /// Flags over the `--config` file over defaults.
    pub fn resolve(flags: Overrides) -> Result<RunConfig, CliError> {
        let merged = match &flags.config {
            Some(path) => {
                let file = Overrides::load(path)?;
                flags.over(file)
            }
            None => flags,
        };
        let train = TrainConfig::default();
        let analysis = AnalysisConfig::default();
        let grid = SweepGrid::default();
        let ages = AgeRange::default();
        let cfg = RunConfig {
            input: merged.input,
            out: merged.out,
            model: merged.model,
            dims: merged.dims.unwrap_or(train.dims),
            epochs: merged.epochs.unwrap_or(train.epochs),
            window: merged.window.unwrap_or(train.window),
            negatives: merged.negatives.unwrap_or(train.negatives),
            lr: merged.lr.unwrap_or(train.initial_lr),
            min_count: merged.min_count.unwrap_or(train.min_count),
            subsample: merged.subsample.unwrap_or(train.subsample_t),
            arch: merged.arch.unwrap_or(train.arch),
            seed_given: merged.seed.is_some(),
            seed: merged.seed.unwrap_or(train.seed),
            workers: merged.workers.unwrap_or(train.workers),
            pronouns: merged.pronouns.unwrap_or_else(|| "builtin".to_owned()),
            lemmas: merged.lemmas,
            pos: merged.pos,
            neg: merged.neg,
            n: merged.n.unwrap_or(999),
            age_min: merged.age_min.unwrap_or(ages.min),
            age_max: merged.age_max.unwrap_or(ages.max),
            spec: merged.spec,
            projection: merged.projection.unwrap_or(analysis.axis.projection),
            components: merged.components.unwrap_or(analysis.components),
            age_split: merged.age_split.unwrap_or(analysis.age_split),
            grid_archs: merged.grid_archs.unwrap_or(grid.archs),
            grid_dims: merged.grid_dims.unwrap_or(grid.dims),
            grid_epochs: merged.grid_epochs.unwrap_or(grid.epochs),
            grid_fractions: merged.grid_fractions.unwrap_or(grid.fractions),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.train_config()
            .validate()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if self.age_min > self.age_max {
            return Err(CliError::Usage(format!(
                "age-min {} exceeds age-max {}",
                self.age_min, self.age_max
            )));
        }
        if self.components < 1 {
            return Err(CliError::Usage("components must be >= 1".into()));
        }
        Ok(())
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            arch: self.arch,
            dims: self.dims,
            epochs: self.epochs,
            window: self.window,
            negatives: self.negatives,
            initial_lr: self.lr,
            subsample_t: self.subsample,
            min_count: self.min_count,
            seed: self.seed,
            workers: self.workers,
            ..TrainConfig::default()
        }
    }

    pub fn analysis_config(&self, n_perms: usize) -> AnalysisConfig {
        AnalysisConfig {
            components: self.components,
            age_split: self.age_split,
            axis: AxisOptions {
                projection: self.projection,
                ..AxisOptions::default()
            },
            n_perms,
            seed: self.seed,
            ..AnalysisConfig::default()
        }
    }

    pub fn ages(&self) -> AgeRange {
        AgeRange::new(self.age_min, self.age_max)
    }

    pub fn grid(&self) -> SweepGrid {
        SweepGrid {
            archs: self.grid_archs.clone(),
            dims: self.grid_dims.clone(),
            epochs: self.grid_epochs.clone(),
            fractions: self.grid_fractions.clone(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serializes")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("run config serializes")
    }
}
