use std::fmt::Write as _;
use std::time::Instant;

use log::info;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{
    axis_report, build_axis, extract_token_matrix, gender_labels, pca, point_biserial, AxisOptions,
};
use crate::embedding::{train_sentences, Arch, EmbeddingModel, TrainConfig};

use super::HarnessError;

/// Cartesian grid of training settings; cells run in
/// `arch × dims × epochs × fraction` order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub archs: Vec<Arch>,
    pub dims: Vec<usize>,
    pub epochs: Vec<usize>,
    pub fractions: Vec<f64>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            archs: vec![Arch::Cbow, Arch::SkipGram],
            dims: vec![50, 100, 200, 300],
            epochs: vec![1, 10],
            fractions: vec![0.25, 0.5, 1.0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepCell {
    pub arch: Arch,
    pub dims: usize,
    pub epochs: usize,
    pub fraction: f64,
}

impl SweepGrid {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.archs.is_empty()
            || self.dims.is_empty()
            || self.epochs.is_empty()
            || self.fractions.is_empty()
        {
            return Err(HarnessError::Spec("sweep grid has an empty axis".into()));
        }
        if let Some(f) = self.fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
            return Err(HarnessError::Spec(format!(
                "corpus fraction {f} outside (0, 1]"
            )));
        }
        Ok(())
    }

    pub fn cells(&self) -> Vec<SweepCell> {
        let mut out = Vec::new();
        for &arch in &self.archs {
            for &dims in &self.dims {
                for &epochs in &self.epochs {
                    for &fraction in &self.fractions {
                        out.push(SweepCell {
                            arch,
                            dims,
                            epochs,
                            fraction,
                        });
                    }
                }
            }
        }
        out
    }
}

/// Pole word lists for the per-cell axis correlation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepAxis {
    pub pos: Vec<String>,
    pub neg: Vec<String>,
    pub options: AxisOptions,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub arch: Arch,
    pub dims: usize,
    pub epochs: usize,
    pub fraction: f64,
    /// Signed; the sign of a principal component is arbitrary.
    pub r_pc1_gender: Option<f64>,
    pub r_axis_gender: Option<f64>,
    pub wall_time_s: f64,
    /// `ok`, or the error that stopped the cell.
    pub status: String,
}

pub const SWEEP_HEADER: &str =
    "model\tdims\tepochs\tfraction\tr_pc1_gender\tr_axis_gender\twall_time_s\tstatus";

/// Point-biserial correlations of gender with PC1 and, when poles are
/// given, with the axis projections.
pub fn gender_correlations(
    model: &EmbeddingModel,
    axis: Option<&SweepAxis>,
) -> Result<(f64, Option<f64>), String> {
    let tokens = extract_token_matrix(model).map_err(|e| e.to_string())?;
    let p = pca(tokens.rows(), 1).map_err(|e| e.to_string())?;
    let labels = gender_labels(&tokens);
    let r_pc1 = point_biserial(&labels, &p.component_scores(0)).map_err(|e| e.to_string())?;
    let r_axis = match axis {
        Some(a) => {
            let built = build_axis(model, &a.pos, &a.neg, &a.options).map_err(|e| e.to_string())?;
            Some(
                axis_report(&tokens, built, &a.options)
                    .map_err(|e| e.to_string())?
                    .r_gender
                    .statistic,
            )
        }
        None => None,
    };
    Ok((r_pc1.statistic, r_axis))
}

/// Number of sentences kept for `fraction` of `n`, at least one.
pub fn prefix_len(n: usize, fraction: f64) -> usize {
    ((n as f64 * fraction).ceil() as usize).clamp(1, n.max(1))
}

/// Trains and scores every grid cell on prefixes of one shuffled copy of
/// `sentences`.
///
/// The shuffle is seeded by `base.seed`. Each cell trains with `workers = 1`
/// and cells run on a pool of `parallel_cells` threads. A failing cell is
/// reported in its `status` column and does not stop the sweep.
pub fn run_sweep(
    sentences: &[String],
    grid: &SweepGrid,
    axis: Option<&SweepAxis>,
    base: &TrainConfig,
    parallel_cells: usize,
) -> Result<Vec<SweepRow>, HarnessError> {
    grid.validate()?;
    if sentences.is_empty() {
        return Err(HarnessError::Spec("sweep corpus is empty".into()));
    }
    let mut shuffled: Vec<&str> = sentences.iter().map(String::as_str).collect();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(base.seed));

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallel_cells.max(1))
        .build()
        .map_err(|e| HarnessError::Spec(e.to_string()))?;
    let cells = grid.cells();
    let rows = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let start = Instant::now();
                let config = TrainConfig {
                    arch: cell.arch,
                    dims: cell.dims,
                    epochs: cell.epochs,
                    workers: 1,
                    ..base.clone()
                };
                let corpus = &shuffled[..prefix_len(shuffled.len(), cell.fraction)];
                let outcome = train_sentences(corpus.iter().copied(), &config)
                    .map_err(|e| e.to_string())
                    .and_then(|(model, _)| gender_correlations(&model, axis));
                let wall = start.elapsed().as_secs_f64();
                let (r_pc1, r_axis, status) = match outcome {
                    Ok((a, b)) => (Some(a), b, "ok".to_owned()),
                    Err(e) => (None, None, e),
                };
                info!(
                    "sweep cell {} d={} epochs={} fraction={}: {status} in {wall:.1}s",
                    cell.arch, cell.dims, cell.epochs, cell.fraction
                );
                SweepRow {
                    arch: cell.arch,
                    dims: cell.dims,
                    epochs: cell.epochs,
                    fraction: cell.fraction,
                    r_pc1_gender: r_pc1,
                    r_axis_gender: r_axis,
                    wall_time_s: wall,
                    status,
                }
            })
            .collect()
    });
    Ok(rows)
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NA".to_owned(), |x| x.to_string())
}

pub fn sweep_tsv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let status: String = r
            .status
            .chars()
            .map(|c| if c == '\t' || c == '\n' { ' ' } else { c })
            .collect();
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{:.3}\t{}",
            r.arch,
            r.dims,
            r.epochs,
            r.fraction,
            opt(r.r_pc1_gender),
            opt(r.r_axis_gender),
            r.wall_time_s,
            status
        )
        .unwrap();
    }
    out
}
