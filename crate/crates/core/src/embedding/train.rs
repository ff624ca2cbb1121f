use std::fs;
use std::ops::Range;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use log::{debug, info};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::matrix::{AtomicMatrix, DenseRows, Matrix, ParamStore, SharedRows};
use super::sampling::{keep_table, NegativeSampler};
use super::step::{cbow_step, skipgram_step, StepScratch};
use super::vocab::{count_tokens, Vocabulary};
use super::{Arch, EmbeddingError, EmbeddingModel, TrainConfig};

const MIN_LR_FRACTION: f64 = 1e-4;

/// Sentences encoded as vocabulary ids; out-of-vocabulary tokens are dropped.
#[derive(Clone, Debug, Default)]
pub struct EncodedCorpus {
    ids: Vec<u32>,
    offsets: Vec<usize>,
}

impl EncodedCorpus {
    pub fn encode<'a, I>(sentences: I, vocab: &Vocabulary) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut ids = Vec::new();
        let mut offsets = vec![0];
        for sentence in sentences {
            ids.extend(sentence.split_whitespace().filter_map(|t| vocab.id(t)));
            offsets.push(ids.len());
        }
        EncodedCorpus { ids, offsets }
    }

    pub fn len(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn token_count(&self) -> usize {
        self.ids.len()
    }

    pub fn sentence(&self, i: usize) -> &[u32] {
        &self.ids[self.offsets[i]..self.offsets[i + 1]]
    }
}

/// Summary of a training run.
#[derive(Clone, Debug, Default)]
pub struct TrainReport {
    pub epochs: usize,
    pub examples: u64,
    pub mean_loss: f64,
    pub seconds: f64,
}

/// Reads a rewritten corpus (one sentence per line) and trains on it.
pub fn train(corpus: &Path, config: &TrainConfig) -> Result<EmbeddingModel, EmbeddingError> {
    config.validate()?;
    let text = fs::read_to_string(corpus).map_err(|e| EmbeddingError::io(corpus, e))?;
    train_sentences(text.lines(), config).map(|(model, _)| model)
}

/// Trains on in-memory sentences.
pub fn train_sentences<'a, I>(
    sentences: I,
    config: &TrainConfig,
) -> Result<(EmbeddingModel, TrainReport), EmbeddingError>
where
    I: IntoIterator<Item = &'a str> + Clone,
{
    config.validate()?;
    let counts = count_tokens(sentences.clone());
    let vocab = Vocabulary::from_counts(counts, config.min_count, config.exempt_enhanced)?;
    let corpus = EncodedCorpus::encode(sentences, &vocab);
    train_encoded(vocab, &corpus, config)
}

pub fn train_encoded(
    vocab: Vocabulary,
    corpus: &EncodedCorpus,
    config: &TrainConfig,
) -> Result<(EmbeddingModel, TrainReport), EmbeddingError> {
    config.validate()?;
    let started = Instant::now();
    let dims = config.dims;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let scale = 0.5 / dims as f64;
    let init: Vec<f64> = (0..vocab.len() * dims)
        .map(|_| (rng.random::<f64>() * 2.0 - 1.0) * scale)
        .collect();
    let mut input = Matrix::from_vec(vocab.len(), dims, init);
    let mut output = Matrix::zeros(vocab.len(), dims);

    let ctx = TrainContext {
        config,
        corpus,
        keep: keep_table(&vocab, config.subsample_t, config.exempt_enhanced),
        sampler: NegativeSampler::new(&vocab, config.noise_power)?,
        scheduled: (config.epochs as u64 * corpus.token_count() as u64).max(1),
        processed: AtomicU64::new(0),
    };
    info!(
        "training {} on {} sentences, {} tokens, vocab {}, d={}, epochs={}, workers={}",
        config.arch,
        corpus.len(),
        corpus.token_count(),
        vocab.len(),
        dims,
        config.epochs,
        config.workers
    );

    let workers = config.workers.min(corpus.len().max(1));
    let (examples, loss_sum) = if workers <= 1 {
        let mut worker_rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1));
        ctx.run(
            &mut DenseRows(&mut input),
            &mut DenseRows(&mut output),
            0..corpus.len(),
            &mut worker_rng,
        )
    } else {
        let shared_in = AtomicMatrix::from_matrix(&input);
        let shared_out = AtomicMatrix::from_matrix(&output);
        let per = corpus.len().div_ceil(workers);
        let totals = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let range = (w * per).min(corpus.len())..((w + 1) * per).min(corpus.len());
                    let (ctx, shared_in, shared_out) = (&ctx, &shared_in, &shared_out);
                    scope.spawn(move || {
                        let mut rng =
                            ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(1 + w as u64));
                        ctx.run(
                            &mut SharedRows(shared_in),
                            &mut SharedRows(shared_out),
                            range,
                            &mut rng,
                        )
                    })
                })
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("training worker panicked"))
                .fold((0u64, 0.0f64), |a, b| (a.0 + b.0, a.1 + b.1))
        });
        input = shared_in.to_matrix();
        output = shared_out.to_matrix();
        totals
    };

    let model = EmbeddingModel::new(vocab, input, output, config.clone());
    if !model.is_finite() {
        return Err(EmbeddingError::NonFinite);
    }
    let report = TrainReport {
        epochs: config.epochs,
        examples,
        mean_loss: if examples > 0 {
            loss_sum / examples as f64
        } else {
            0.0
        },
        seconds: started.elapsed().as_secs_f64(),
    };
    info!(
        "trained {} examples in {:.1}s, mean loss {:.4}",
        report.examples, report.seconds, report.mean_loss
    );
    Ok((model, report))
}

struct TrainContext<'a> {
    config: &'a TrainConfig,
    corpus: &'a EncodedCorpus,
    keep: Vec<f64>,
    sampler: NegativeSampler,
    scheduled: u64,
    processed: AtomicU64,
}

impl TrainContext<'_> {
    fn learning_rate(&self) -> f64 {
        let done = self.processed.load(Ordering::Relaxed) as f64 / self.scheduled as f64;
        self.config.initial_lr * (1.0 - done).max(MIN_LR_FRACTION)
    }

    /// Trains on `sentences` for every epoch; returns (examples, summed loss).
    fn run<I: ParamStore, O: ParamStore>(
        &self,
        input: &mut I,
        output: &mut O,
        sentences: Range<usize>,
        rng: &mut ChaCha8Rng,
    ) -> (u64, f64) {
        let cfg = self.config;
        let mut scratch = StepScratch::new(cfg.dims);
        let mut kept: Vec<u32> = Vec::new();
        let mut context: Vec<u32> = Vec::new();
        let mut negatives: Vec<u32> = Vec::with_capacity(cfg.negatives);
        let mut examples = 0u64;
        let mut loss_sum = 0.0;

        for epoch in 0..cfg.epochs {
            let mut epoch_loss = 0.0;
            let mut epoch_examples = 0u64;
            for s in sentences.clone() {
                let sentence = self.corpus.sentence(s);
                let lr = self.learning_rate();
                self.processed
                    .fetch_add(sentence.len() as u64, Ordering::Relaxed);

                kept.clear();
                for &id in sentence {
                    let p = self.keep[id as usize];
                    if p >= 1.0 || rng.random::<f64>() < p {
                        kept.push(id);
                    }
                }
                for pos in 0..kept.len() {
                    let radius = rng.random_range(1..=cfg.window);
                    let lo = pos.saturating_sub(radius);
                    let hi = (pos + radius + 1).min(kept.len());
                    let center = kept[pos];
                    match cfg.arch {
                        Arch::Cbow => {
                            context.clear();
                            context.extend_from_slice(&kept[lo..pos]);
                            context.extend_from_slice(&kept[pos + 1..hi]);
                            if context.is_empty() {
                                continue;
                            }
                            self.sampler.sample_negatives(
                                rng,
                                cfg.negatives,
                                center,
                                &mut negatives,
                            );
                            epoch_loss += cbow_step(
                                input,
                                output,
                                &context,
                                center,
                                &negatives,
                                lr,
                                &mut scratch,
                            );
                            epoch_examples += 1;
                        }
                        Arch::SkipGram => {
                            for c in (lo..hi).filter(|&c| c != pos) {
                                let target = kept[c];
                                self.sampler.sample_negatives(
                                    rng,
                                    cfg.negatives,
                                    target,
                                    &mut negatives,
                                );
                                epoch_loss += skipgram_step(
                                    input,
                                    output,
                                    center,
                                    target,
                                    &negatives,
                                    lr,
                                    &mut scratch,
                                );
                                epoch_examples += 1;
                            }
                        }
                    }
                }
            }
            debug!(
                "epoch {}: {} examples, mean loss {:.4}, lr {:.6}",
                epoch + 1,
                epoch_examples,
                epoch_loss / epoch_examples.max(1) as f64,
                self.learning_rate()
            );
            examples += epoch_examples;
            loss_sum += epoch_loss;
        }
        (examples, loss_sum)
    }
}
