//! Negative-sampling update rules.
//!
//! For a hidden vector `h` and output vectors `u`, the loss of one example is
//!
//! ```text
//! L = -log σ(u_target · h) - Σ_neg log σ(-u_neg · h)
//! ```
//!
//! All gradients are evaluated at the pre-update parameters and applied
//! afterwards, so repeated ids within one example accumulate exactly.

use super::matrix::ParamStore;

const LOGIT_CLAMP: f64 = 30.0;

pub(crate) fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// `-log σ(x)` computed stably.
pub(crate) fn neg_log_sigmoid(x: f64) -> f64 {
    if x > 0.0 {
        (-x).exp().ln_1p()
    } else {
        -x + x.exp().ln_1p()
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len().min(b.len());
    let (a, b) = (&a[..n], &b[..n]);
    let mut acc = [0.0f64; 4];
    let chunks = n / 4;
    for i in 0..chunks {
        let j = i * 4;
        acc[0] += a[j] * b[j];
        acc[1] += a[j + 1] * b[j + 1];
        acc[2] += a[j + 2] * b[j + 2];
        acc[3] += a[j + 3] * b[j + 3];
    }
    let mut tail = 0.0;
    for j in chunks * 4..n {
        tail += a[j] * b[j];
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

/// Reusable buffers so the hot loop never allocates.
#[derive(Clone, Debug, Default)]
pub struct StepScratch {
    hidden: Vec<f64>,
    grad_hidden: Vec<f64>,
    row: Vec<f64>,
    coeffs: Vec<(u32, f64)>,
}

impl StepScratch {
    pub fn new(dims: usize) -> Self {
        StepScratch {
            hidden: vec![0.0; dims],
            grad_hidden: vec![0.0; dims],
            row: vec![0.0; dims],
            coeffs: Vec::new(),
        }
    }

    fn ensure(&mut self, dims: usize) {
        if self.hidden.len() != dims {
            *self = StepScratch::new(dims);
        }
    }
}

/// Scores the target and negatives against `scratch.hidden`, fills
/// `scratch.grad_hidden` with the descent direction for `h`, and applies the
/// output-vector updates. Returns the pre-update loss.
fn score_and_update_outputs<O: ParamStore>(
    output: &mut O,
    target: u32,
    negatives: &[u32],
    lr: f64,
    scratch: &mut StepScratch,
) -> f64 {
    scratch.grad_hidden.iter_mut().for_each(|g| *g = 0.0);
    scratch.coeffs.clear();
    let mut loss = 0.0;
    let samples = std::iter::once((target, true)).chain(negatives.iter().map(|&n| (n, false)));
    for (id, positive) in samples {
        output.read(id, &mut scratch.row);
        let logit = dot(&scratch.row, &scratch.hidden).clamp(-LOGIT_CLAMP, LOGIT_CLAMP);
        // g = -dL/dlogit
        let g = if positive {
            loss += neg_log_sigmoid(logit);
            1.0 - sigmoid(logit)
        } else {
            loss += neg_log_sigmoid(-logit);
            -sigmoid(logit)
        };
        for (gh, u) in scratch.grad_hidden.iter_mut().zip(&scratch.row) {
            *gh += g * u;
        }
        scratch.coeffs.push((id, g));
    }
    if lr != 0.0 {
        for &(id, g) in &scratch.coeffs {
            output.add_scaled(id, &scratch.hidden, lr * g);
        }
    }
    loss
}

/// One CBOW example: the mean of the context input vectors predicts `target`.
pub fn cbow_step<I: ParamStore, O: ParamStore>(
    input: &mut I,
    output: &mut O,
    context: &[u32],
    target: u32,
    negatives: &[u32],
    lr: f64,
    scratch: &mut StepScratch,
) -> f64 {
    assert!(
        !context.is_empty(),
        "cbow_step needs at least one context id"
    );
    scratch.ensure(input.dims());
    scratch.hidden.iter_mut().for_each(|h| *h = 0.0);
    for &c in context {
        input.read(c, &mut scratch.row);
        for (h, v) in scratch.hidden.iter_mut().zip(&scratch.row) {
            *h += v;
        }
    }
    let inv = 1.0 / context.len() as f64;
    scratch.hidden.iter_mut().for_each(|h| *h *= inv);

    let loss = score_and_update_outputs(output, target, negatives, lr, scratch);
    if lr != 0.0 {
        for &c in context {
            input.add_scaled(c, &scratch.grad_hidden, lr * inv);
        }
    }
    loss
}

/// One skip-gram example: the input vector of `center` predicts `context`.
pub fn skipgram_step<I: ParamStore, O: ParamStore>(
    input: &mut I,
    output: &mut O,
    center: u32,
    context: u32,
    negatives: &[u32],
    lr: f64,
    scratch: &mut StepScratch,
) -> f64 {
    scratch.ensure(input.dims());
    input.read(center, &mut scratch.hidden);
    let loss = score_and_update_outputs(output, context, negatives, lr, scratch);
    if lr != 0.0 {
        input.add_scaled(center, &scratch.grad_hidden, lr);
    }
    loss
}
