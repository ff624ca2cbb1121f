use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::AnalysisError;

/// A correlation coefficient with its two-tailed p-value.
///
/// `log10_p` keeps magnitudes that underflow `p_value` (it is `-inf` when
/// the correlation is exactly ±1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationResult {
    pub statistic: f64,
    pub p_value: f64,
    pub log10_p: f64,
    pub n: usize,
}

impl CorrelationResult {
    fn from_r(r: f64, n: usize) -> Self {
        let r = r.clamp(-1.0, 1.0);
        let log10_p = correlation_log10_p(r, n);
        CorrelationResult {
            statistic: r,
            p_value: 10f64.powf(log10_p),
            log10_p,
            n,
        }
    }
}

fn check_lengths(x: &[f64], y: &[f64]) -> Result<(), AnalysisError> {
    if x.len() != y.len() {
        return Err(AnalysisError::Invalid(format!(
            "length mismatch: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(AnalysisError::Invalid(format!(
            "correlation needs n >= 3, got {}",
            x.len()
        )));
    }
    Ok(())
}

fn is_constant(x: &[f64]) -> bool {
    x.iter().all(|&v| v == x[0])
}

/// Pearson correlation coefficient.
pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64, AnalysisError> {
    check_lengths(x, y)?;
    if is_constant(x) || is_constant(y) {
        return Err(AnalysisError::UndefinedCorrelation);
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

pub fn pearson(x: &[f64], y: &[f64]) -> Result<CorrelationResult, AnalysisError> {
    Ok(CorrelationResult::from_r(pearson_r(x, y)?, x.len()))
}

/// Point-biserial correlation: Pearson against 0/1-coded labels.
pub fn point_biserial(labels: &[bool], scores: &[f64]) -> Result<CorrelationResult, AnalysisError> {
    if !labels.iter().any(|&l| l) || labels.iter().all(|&l| l) {
        return Err(AnalysisError::Invalid(
            "point-biserial needs both label classes".into(),
        ));
    }
    let coded: Vec<f64> = labels.iter().map(|&l| if l { 1.0 } else { 0.0 }).collect();
    pearson(&coded, scores)
}

/// 1-based ranks; tied values share the mean of their positions.
pub fn average_ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut ranks = vec![0.0; x.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && x[order[end]] == x[order[start]] {
            end += 1;
        }
        // positions start+1 ..= end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

/// Spearman's ρ: Pearson correlation of average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<CorrelationResult, AnalysisError> {
    check_lengths(x, y)?;
    pearson(&average_ranks(x), &average_ranks(y))
}

/// Two-tailed log10 p-value of a correlation via
/// `t = r·sqrt((n−2)/(1−r²))` on `n − 2` degrees of freedom.
pub fn correlation_log10_p(r: f64, n: usize) -> f64 {
    if r.abs() >= 1.0 {
        return f64::NEG_INFINITY;
    }
    let df = (n - 2) as f64;
    let t2 = r * r * df / (1.0 - r * r);
    t_two_tailed_ln_p(t2, df) / std::f64::consts::LN_10
}

/// ln of the two-tailed Student-t p-value for `t²` on `df` degrees of freedom.
pub fn t_two_tailed_ln_p(t_squared: f64, df: f64) -> f64 {
    // P(|T| > t) = I_{df/(df+t²)}(df/2, 1/2)
    let x = df / (df + t_squared);
    ln_beta_regularized(df / 2.0, 0.5, x)
}

/// ln I_x(a, b), the log of the regularized incomplete beta function.
pub fn ln_beta_regularized(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if x >= 1.0 {
        return 0.0;
    }
    let ln_beta = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
    let ln_front = a * x.ln() + b * (-x).ln_1p() - ln_beta;
    if x < (a + 1.0) / (a + b + 2.0) {
        ln_front + beta_continued_fraction(a, b, x).ln() - a.ln()
    } else {
        let ln_front_sym = b * (-x).ln_1p() + a * x.ln() - ln_beta;
        let tail = (ln_front_sym + beta_continued_fraction(b, a, 1.0 - x).ln() - b.ln()).exp();
        (-tail).ln_1p()
    }
}

// Modified Lentz evaluation of the incomplete-beta continued fraction.
fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let (qab, qap, qam) = (a + b, a + 1.0, a - 1.0);
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..10_000 {
        let m = f64::from(m);
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
