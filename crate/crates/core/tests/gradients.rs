mod common;

use demovec::embedding::{EmbeddingModel, Matrix, TrainConfig, VocabEntry, Vocabulary};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn model(vocab: usize, dims: usize, zero_output: bool, seed: u64) -> EmbeddingModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = (0..vocab)
        .map(|i| VocabEntry {
            token: format!("w{i}"),
            count: 1,
            enhanced: false,
        })
        .collect();
    let mut fill = |n| {
        (0..n)
            .map(|_| rng.random_range(-0.5..0.5))
            .collect::<Vec<f64>>()
    };
    let input = Matrix::from_vec(vocab, dims, fill(vocab * dims));
    let output = if zero_output {
        Matrix::zeros(vocab, dims)
    } else {
        Matrix::from_vec(vocab, dims, fill(vocab * dims))
    };
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

#[test]
fn cbow_gradient_matches_finite_differences() {
    let check = common::check_gradients(false, 120, 17);
    assert!(
        check.max_rel_err < 1e-4,
        "max rel err {}",
        check.max_rel_err
    );
    assert!(check.params_checked > 1000);
}

#[test]
fn skipgram_gradient_matches_finite_differences() {
    let check = common::check_gradients(true, 120, 23);
    assert!(
        check.max_rel_err < 1e-4,
        "max rel err {}",
        check.max_rel_err
    );
}

#[test]
fn zero_learning_rate_leaves_model_unchanged() {
    let mut m = model(6, 4, false, 1);
    let before = m.clone();
    let loss = m.cbow_step(&[1, 2], 0, &[3, 4], 0.0);
    assert!(loss > 0.0);
    assert_eq!(m.input, before.input);
    assert_eq!(m.output, before.output);
    m.skipgram_step(1, 0, &[3], 0.0);
    assert_eq!(m.input, before.input);
    assert_eq!(m.output, before.output);
}

#[test]
fn zero_logits_give_k_plus_one_log_two() {
    for k in 1..=5u32 {
        let mut m = model(8, 5, true, u64::from(k));
        let negatives: Vec<u32> = (1..=k).collect();
        let loss = m.cbow_step(&[6, 7], 0, &negatives, 0.025);
        let expected = f64::from(k + 1) * std::f64::consts::LN_2;
        assert!(
            (loss - expected).abs() < 1e-12,
            "k={k}: {loss} vs {expected}"
        );
        let mut m = model(8, 5, true, u64::from(k));
        let loss = m.skipgram_step(6, 0, &negatives, 0.025);
        assert!((loss - expected).abs() < 1e-12);
    }
}

#[test]
fn repeated_cbow_steps_descend() {
    let mut m = model(10, 6, false, 5);
    let first = m.cbow_step(&[4, 5, 6], 1, &[2, 3, 7], 0.1);
    let mut last = first;
    for _ in 0..49 {
        last = m.cbow_step(&[4, 5, 6], 1, &[2, 3, 7], 0.1);
        assert!(last >= 0.0);
    }
    assert!(last < first, "{first} -> {last}");
}

#[test]
fn repeated_skipgram_steps_descend() {
    let mut m = model(10, 6, false, 6);
    let first = m.skipgram_step(4, 1, &[2, 3], 0.1);
    let mut last = first;
    for _ in 0..49 {
        last = m.skipgram_step(4, 1, &[2, 3], 0.1);
    }
    assert!(last < first, "{first} -> {last}");
}

#[test]
fn identical_inputs_give_identical_updates() {
    let mut a = model(10, 6, false, 8);
    let mut b = model(10, 6, false, 8);
    a.skipgram_step(3, 2, &[1, 5, 9], 0.05);
    b.skipgram_step(3, 2, &[1, 5, 9], 0.05);
    assert_eq!(a.input, b.input);
    assert_eq!(a.output, b.output);
}

#[test]
fn extreme_logits_stay_finite() {
    let mut m = model(4, 3, false, 2);
    m.input.as_mut_slice().iter_mut().for_each(|v| *v *= 1e6);
    m.output.as_mut_slice().iter_mut().for_each(|v| *v *= 1e6);
    let loss = m.cbow_step(&[1], 0, &[2, 3], 0.025);
    assert!(loss.is_finite() && loss >= 0.0);
    assert!(m.is_finite());
}
