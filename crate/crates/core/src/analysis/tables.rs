//! Tab-separated output tables, one header row each.

use std::fmt::Write;

use super::report::AnalysisReport;
use super::{CorrelationResult, PcaResult, PermutationResult, TokenMatrix};

pub fn pca_scores_tsv(tokens: &TokenMatrix, pca: &PcaResult) -> String {
    let mut out = String::from("gender\tage");
    for c in 1..=pca.k() {
        write!(out, "\tpc{c}").unwrap();
    }
    out.push('\n');
    for (i, key) in tokens.keys().iter().enumerate() {
        write!(out, "{}\t{}", key.gender, key.age).unwrap();
        for v in pca.scores.row(i) {
            write!(out, "\t{v}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn explained_variance_tsv(pca: &PcaResult) -> String {
    let mut out = String::from("component\texplained_variance_ratio\n");
    for (c, v) in pca.explained_variance_ratio.iter().enumerate() {
        writeln!(out, "pc{}\t{v}", c + 1).unwrap();
    }
    out
}

pub fn projections_tsv(tokens: &TokenMatrix, projections: &[f64]) -> String {
    let mut out = String::from("gender\tage\tprojection\n");
    for (key, p) in tokens.keys().iter().zip(projections) {
        writeln!(out, "{}\t{}\t{p}", key.gender, key.age).unwrap();
    }
    out
}

pub fn permutation_summary_tsv(result: &PermutationResult) -> String {
    format!(
        "observed\tp_value\tn_perms\n{}\t{}\t{}\n",
        result.observed, result.p_value, result.n_perms
    )
}

pub fn null_samples_text(result: &PermutationResult) -> String {
    let mut out = String::new();
    for s in &result.null_samples {
        writeln!(out, "{s}").unwrap();
    }
    out
}

fn correlation_row(out: &mut String, measure: &str, r: Option<&CorrelationResult>) {
    match r {
        Some(r) => writeln!(
            out,
            "{measure}\t{}\t{}\t{}\t{}",
            r.statistic, r.p_value, r.log10_p, r.n
        )
        .unwrap(),
        None => writeln!(out, "{measure}\tNA\tNA\tNA\t0").unwrap(),
    }
}

/// Every correlation in the report, one row per measure.
pub fn correlations_tsv(report: &AnalysisReport) -> String {
    let mut out = String::from("measure\tstatistic\tp_value\tlog10_p\tn\n");
    correlation_row(
        &mut out,
        "pointbiserial_gender_pc1",
        Some(&report.r_pc1_gender),
    );
    for ac in &report.age_correlations {
        let name = format!("spearman_age_pc{}_{}", ac.component, ac.subrange);
        correlation_row(&mut out, &name, ac.result.as_ref());
    }
    if let Some(axis) = &report.axis {
        correlation_row(&mut out, "pointbiserial_gender_axis", Some(&axis.r_gender));
    }
    out
}

pub fn age_ordering_tsv(report: &AnalysisReport) -> String {
    let mut out = String::from("gender\tscore\tshuffled_baseline\tinterior\n");
    for o in &report.ordering {
        writeln!(
            out,
            "{}\t{}\t{}\t{}",
            o.gender, o.score, o.shuffled_baseline, o.interior
        )
        .unwrap();
    }
    out
}
