//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the code path it is used to check.
#![allow(dead_code, clippy::needless_range_loop)]

use demovec::embedding::{EmbeddingModel, Matrix, TrainConfig, VocabEntry, Vocabulary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Negative-sampling loss, written out from the definition.

fn log1p_exp(x: f64) -> f64 {
    // ln(1 + e^x)
    if x > 30.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn ns_loss(h: &[f64], output: &Matrix, target: usize, negatives: &[usize]) -> f64 {
    let score = |id: usize| -> f64 { output.row(id).iter().zip(h).map(|(a, b)| a * b).sum() };
    let mut loss = log1p_exp(-score(target));
    for &n in negatives {
        loss += log1p_exp(score(n));
    }
    loss
}

pub fn cbow_loss(
    input: &Matrix,
    output: &Matrix,
    context: &[usize],
    target: usize,
    negatives: &[usize],
) -> f64 {
    let d = input.cols();
    let mut h = vec![0.0; d];
    for &c in context {
        for j in 0..d {
            h[j] += input.row(c)[j];
        }
    }
    for v in &mut h {
        *v /= context.len() as f64;
    }
    ns_loss(&h, output, target, negatives)
}

pub fn skipgram_loss(
    input: &Matrix,
    output: &Matrix,
    center: usize,
    context: usize,
    negatives: &[usize],
) -> f64 {
    ns_loss(input.row(center), output, context, negatives)
}

pub struct GradCheck {
    pub configs: usize,
    pub params_checked: usize,
    pub max_rel_err: f64,
}

pub const FD_STEP: f64 = 1e-5;
/// Denominator floor for the relative error of near-zero partials.
pub const REL_FLOOR: f64 = 1e-6;

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(REL_FLOOR)
}

fn random_model(rng: &mut ChaCha8Rng, vocab: usize, dims: usize) -> EmbeddingModel {
    let entries = (0..vocab)
        .map(|i| VocabEntry {
            token: format!("t{i}"),
            count: 1,
            enhanced: false,
        })
        .collect();
    let mut fill = |n| {
        (0..n)
            .map(|_| rng.random_range(-0.8..0.8))
            .collect::<Vec<f64>>()
    };
    let input = Matrix::from_vec(vocab, dims, fill(vocab * dims));
    let output = Matrix::from_vec(vocab, dims, fill(vocab * dims));
    EmbeddingModel::new(
        Vocabulary::from_entries(entries),
        input,
        output,
        TrainConfig {
            dims,
            ..TrainConfig::default()
        },
    )
}

enum Which {
    Input,
    Output,
}

/// Compares every partial derivative touched by one step against central
/// finite differences, over `configs` random small problems.
pub fn check_gradients(skipgram: bool, configs: usize, seed: u64) -> GradCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_rel_err: f64 = 0.0;
    let mut params_checked = 0;
    for _ in 0..configs {
        let dims = rng.random_range(3..=10);
        let k = rng.random_range(1..=5);
        let vocab = 12;
        let model = random_model(&mut rng, vocab, dims);
        let target = rng.random_range(0..vocab);
        let mut negatives = Vec::new();
        while negatives.len() < k {
            let n = rng.random_range(0..vocab);
            if n != target {
                negatives.push(n);
            }
        }
        let context: Vec<usize> = if skipgram {
            vec![rng.random_range(0..vocab)]
        } else {
            (0..rng.random_range(1..=6))
                .map(|_| rng.random_range(0..vocab))
                .collect()
        };

        let loss_at = |m: &EmbeddingModel| {
            if skipgram {
                skipgram_loss(&m.input, &m.output, context[0], target, &negatives)
            } else {
                cbow_loss(&m.input, &m.output, &context, target, &negatives)
            }
        };

        let lr = 1.0;
        let mut stepped = model.clone();
        let ctx32: Vec<u32> = context.iter().map(|&c| c as u32).collect();
        let neg32: Vec<u32> = negatives.iter().map(|&n| n as u32).collect();
        let reported = if skipgram {
            stepped.skipgram_step(ctx32[0], target as u32, &neg32, lr)
        } else {
            stepped.cbow_step(&ctx32, target as u32, &neg32, lr)
        };
        assert!(
            (reported - loss_at(&model)).abs() < 1e-12,
            "reported loss differs from definition"
        );

        let mut touched: Vec<(Which, usize)> = Vec::new();
        let mut ins: Vec<usize> = context.clone();
        ins.sort_unstable();
        ins.dedup();
        touched.extend(ins.into_iter().map(|r| (Which::Input, r)));
        let mut outs: Vec<usize> = std::iter::once(target)
            .chain(negatives.iter().copied())
            .collect();
        outs.sort_unstable();
        outs.dedup();
        touched.extend(outs.into_iter().map(|r| (Which::Output, r)));

        for (which, row) in touched {
            for j in 0..dims {
                let idx = row * dims + j;
                let (before, after) = match which {
                    Which::Input => (model.input.as_slice()[idx], stepped.input.as_slice()[idx]),
                    Which::Output => (model.output.as_slice()[idx], stepped.output.as_slice()[idx]),
                };
                let analytic = (before - after) / lr;
                let mut plus = model.clone();
                let mut minus = model.clone();
                match which {
                    Which::Input => {
                        plus.input.as_mut_slice()[idx] += FD_STEP;
                        minus.input.as_mut_slice()[idx] -= FD_STEP;
                    }
                    Which::Output => {
                        plus.output.as_mut_slice()[idx] += FD_STEP;
                        minus.output.as_mut_slice()[idx] -= FD_STEP;
                    }
                }
                let numeric = (loss_at(&plus) - loss_at(&minus)) / (2.0 * FD_STEP);
                max_rel_err = max_rel_err.max(rel_err(analytic, numeric));
                params_checked += 1;
            }
        }
    }
    GradCheck {
        configs,
        params_checked,
        max_rel_err,
    }
}

// ---------------------------------------------------------------------------
// Symmetric eigendecomposition by cyclic Jacobi rotations.

/// Returns eigenvalues (descending) and matching unit eigenvectors.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| f64::from(u8::from(i == j))).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[j][j].partial_cmp(&m[i][i]).unwrap());
    let values = order.iter().map(|&i| m[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k][i]).collect())
        .collect();
    (values, vectors)
}

/// Sample covariance (divisor n-1) of row-major data.
pub fn covariance(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = rows.len();
    let d = rows[0].len();
    let means: Vec<f64> = (0..d)
        .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / n as f64)
        .collect();
    let mut cov = vec![vec![0.0; d]; d];
    for r in rows {
        for i in 0..d {
            for j in 0..d {
                cov[i][j] += (r[i] - means[i]) * (r[j] - means[j]);
            }
        }
    }
    for row in &mut cov {
        for v in row.iter_mut() {
            *v /= (n - 1) as f64;
        }
    }
    cov
}

// ---------------------------------------------------------------------------
// Correlation by hand.

pub fn pearson_naive(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Average ranks by counting, O(n^2): rank = 1 + #less + (#equal - 1) / 2.
pub fn ranks_naive(x: &[f64]) -> Vec<f64> {
    x.iter()
        .map(|&v| {
            let less = x.iter().filter(|&&w| w < v).count() as f64;
            let equal = x.iter().filter(|&&w| w == v).count() as f64;
            1.0 + less + (equal - 1.0) / 2.0
        })
        .collect()
}

pub fn spearman_naive(x: &[f64], y: &[f64]) -> f64 {
    pearson_naive(&ranks_naive(x), &ranks_naive(y))
}

// ---------------------------------------------------------------------------
// Semantic-axis gap statistic, from the definition.

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}

/// mean cos(F tokens, axis) - mean cos(M tokens, axis), axis = mean(pos) - mean(neg).
pub fn gap_statistic(pos: &[&[f64]], neg: &[&[f64]], f_rows: &[&[f64]], m_rows: &[&[f64]]) -> f64 {
    let d = pos[0].len();
    let mean = |rows: &[&[f64]]| -> Vec<f64> {
        (0..d)
            .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / rows.len() as f64)
            .collect()
    };
    let (mp, mn) = (mean(pos), mean(neg));
    let axis: Vec<f64> = mp.iter().zip(&mn).map(|(a, b)| a - b).collect();
    let avg =
        |rows: &[&[f64]]| rows.iter().map(|r| cosine(r, &axis)).sum::<f64>() / rows.len() as f64;
    avg(f_rows) - avg(m_rows)
}

/// All ways to choose `k` of `n` indices, lexicographic.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

// ---------------------------------------------------------------------------
// Checks reused by the integration tests and the acceptance runner.

use demovec::analysis::{
    pca, permutation_test, point_biserial, spearman, AxisOptions, TokenMatrix,
};
use demovec::corpus::{DemographicKey, Gender};

pub fn random_rows(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..d).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect()
}

pub struct PcaCheck {
    pub component_err: f64,
    pub variance_err: f64,
}

/// Largest deviation of `pca` from a Jacobi eigendecomposition of the sample
/// covariance, over `trials` random `n × d` matrices. The leading `k`
/// components are compared up to sign.
pub fn pca_against_jacobi(trials: usize, n: usize, d: usize, k: usize, seed: u64) -> PcaCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = PcaCheck {
        component_err: 0.0,
        variance_err: 0.0,
    };
    for _ in 0..trials {
        let rows = random_rows(&mut rng, n, d);
        let m = Matrix::from_vec(n, d, rows.concat());
        let got = pca(&m, k).unwrap();
        let (values, vectors) = jacobi_eigen(&covariance(&rows));
        let total: f64 = values.iter().sum();
        for c in 0..k {
            let ours = got.components.row(c);
            let same: f64 = ours
                .iter()
                .zip(&vectors[c])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let flipped: f64 = ours
                .iter()
                .zip(&vectors[c])
                .map(|(a, b)| (a + b).abs())
                .fold(0.0, f64::max);
            check.component_err = check.component_err.max(same.min(flipped));
            let ratio_err = (got.explained_variance_ratio[c] - values[c] / total).abs();
            check.variance_err = check.variance_err.max(ratio_err);
        }
    }
    check
}

pub struct StatsCheck {
    pub point_biserial_err: f64,
    pub spearman_err: f64,
    pub cases: usize,
}

/// Point-biserial against Pearson on 0/1 codes, Spearman against
/// rank-then-Pearson, on random and heavily tied inputs.
pub fn statistics_against_naive(trials: usize, seed: u64) -> StatsCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut check = StatsCheck {
        point_biserial_err: 0.0,
        spearman_err: 0.0,
        cases: 0,
    };
    for t in 0..trials {
        let n = rng.random_range(4..60);
        let mut labels: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        labels[0] = true;
        labels[1] = false;
        let scores: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let coded: Vec<f64> = labels.iter().map(|&l| f64::from(u8::from(l))).collect();
        let pb = point_biserial(&labels, &scores).unwrap().statistic;
        check.point_biserial_err = check
            .point_biserial_err
            .max((pb - pearson_naive(&coded, &scores)).abs());

        // every other trial draws from a handful of values, so ties dominate
        let draw = |rng: &mut ChaCha8Rng| {
            if t % 2 == 0 {
                f64::from(rng.random_range(0..3u8))
            } else {
                rng.random_range(-1.0..1.0)
            }
        };
        let mut x: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        let mut y: Vec<f64> = (0..n).map(|_| draw(&mut rng)).collect();
        x[0] = -5.0;
        y[1] = -5.0;
        let rho = spearman(&x, &y).unwrap().statistic;
        check.spearman_err = check.spearman_err.max((rho - spearman_naive(&x, &y)).abs());
        check.cases += 1;
    }
    check
}

pub fn pole_model(words: &[(String, Vec<f64>)]) -> EmbeddingModel {
    let entries = words
        .iter()
        .map(|(w, _)| VocabEntry {
            token: w.clone(),
            count: 1,
            enhanced: false,
        })
        .collect();
    let d = words[0].1.len();
    EmbeddingModel::new(
        Vocabulary::from_entries(entries),
        Matrix::from_vec(
            words.len(),
            d,
            words.iter().flat_map(|(_, v)| v.clone()).collect(),
        ),
        Matrix::zeros(words.len(), d),
        TrainConfig::default(),
    )
}

pub struct EnumerationCheck {
    /// The six gaps of every 2+2 split, from the oracle.
    pub enumerated: Vec<f64>,
    pub observed_err: f64,
    /// Largest distance from a null sample to its nearest enumerated gap.
    pub sample_err: f64,
    /// How often each enumerated split was drawn.
    pub hits: Vec<usize>,
    pub n_perms: usize,
    pub p_value: f64,
    /// p recomputed from the samples and the enumeration.
    pub p_expected: f64,
}

/// With two words per pole there are only six splits of the pool; every
/// permutation replicate must land on one of them.
pub fn enumerate_two_plus_two(n_perms: usize, seed: u64) -> EnumerationCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = 6;
    let names = ["pa", "pb", "na", "nb"];
    let vecs = random_rows(&mut rng, 4, d);
    let words: Vec<(String, Vec<f64>)> = names
        .iter()
        .map(|s| s.to_string())
        .zip(vecs.clone())
        .collect();
    let model = pole_model(&words);
    let tokens: Vec<(DemographicKey, Vec<f64>)> = (0..12)
        .map(|i| {
            let g = if i % 2 == 0 { Gender::F } else { Gender::M };
            let row = random_rows(&mut rng, 1, d).remove(0);
            (DemographicKey::new(g, 20 + i / 2), row)
        })
        .collect();
    let f_rows: Vec<&[f64]> = tokens
        .iter()
        .filter(|(k, _)| k.gender == Gender::F)
        .map(|(_, v)| v.as_slice())
        .collect();
    let m_rows: Vec<&[f64]> = tokens
        .iter()
        .filter(|(k, _)| k.gender == Gender::M)
        .map(|(_, v)| v.as_slice())
        .collect();
    let splits = combinations(4, 2);
    let enumerated: Vec<f64> = splits
        .iter()
        .map(|pos| {
            let p: Vec<&[f64]> = pos.iter().map(|&i| vecs[i].as_slice()).collect();
            let n: Vec<&[f64]> = (0..4)
                .filter(|i| !pos.contains(i))
                .map(|i| vecs[i].as_slice())
                .collect();
            gap_statistic(&p, &n, &f_rows, &m_rows)
        })
        .collect();
    let matrix = TokenMatrix::new(tokens.clone()).unwrap();
    let pos = vec!["pa".to_owned(), "pb".to_owned()];
    let neg = vec!["na".to_owned(), "nb".to_owned()];
    let res = permutation_test(
        &model,
        &pos,
        &neg,
        &matrix,
        n_perms,
        seed,
        &AxisOptions::default(),
    )
    .unwrap();

    let mut hits = vec![0; enumerated.len()];
    let mut sample_err: f64 = 0.0;
    let mut extreme = 0;
    for s in &res.null_samples {
        let (best, err) = enumerated
            .iter()
            .enumerate()
            .map(|(i, e)| (i, (s - e).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        hits[best] += 1;
        sample_err = sample_err.max(err);
        if enumerated[best].abs() >= enumerated[0].abs() {
            extreme += 1;
        }
    }
    EnumerationCheck {
        observed_err: (res.observed - enumerated[0]).abs(),
        enumerated,
        sample_err,
        hits,
        n_perms,
        p_value: res.p_value,
        p_expected: (1 + extreme) as f64 / (n_perms + 1) as f64,
    }
}

// ---------------------------------------------------------------------------
// Planted-signal pipeline.

use demovec::corpus::{Preprocessor, PronounSet};
use demovec::embedding::train_sentences;
use demovec::harness::{generate_corpus, SyntheticSpec};
use std::path::Path;

/// Generates `spec`, rewrites it with the English pronoun set and returns
/// the training sentences.
pub fn planted_sentences(spec: &SyntheticSpec, dir: &Path) -> Vec<String> {
    std::fs::create_dir_all(dir).unwrap();
    let posts = dir.join(format!("posts-{}.jsonl", spec.seed));
    let corpus = dir.join(format!("corpus-{}.txt", spec.seed));
    generate_corpus(spec, &posts).unwrap();
    Preprocessor::new(PronounSet::english())
        .with_ages(spec.ages())
        .rewrite_file(&posts, &corpus)
        .unwrap();
    std::fs::read_to_string(&corpus)
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect()
}

pub fn train_on(sentences: &[String], config: &TrainConfig) -> EmbeddingModel {
    train_sentences(sentences.iter().map(String::as_str), config)
        .unwrap()
        .0
}
