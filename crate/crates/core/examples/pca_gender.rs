//! PCA of the enhanced pronoun vectors: the first component separates the
//! authors' genders, later ones follow age.

use demovec::analysis::{analyze, AnalysisConfig};
use demovec::corpus::{Preprocessor, PronounSet};
use demovec::embedding::{train_sentences, TrainConfig};
use demovec::harness::{generate_corpus, SyntheticSpec};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        gamma: 0.5,
        ..SyntheticSpec::default()
    };
    let posts = dir.path().join("posts.jsonl");
    let corpus = dir.path().join("corpus.txt");
    generate_corpus(&spec, &posts).unwrap();
    Preprocessor::new(PronounSet::english())
        .with_ages(spec.ages())
        .rewrite_file(&posts, &corpus)
        .unwrap();
    let text = std::fs::read_to_string(&corpus).unwrap();
    // one epoch already finds gender; the weaker age gradient needs more
    let (model, _) = train_sentences(text.lines(), &TrainConfig::default()).unwrap();

    let report = analyze(&model, None, &AnalysisConfig::default()).unwrap();
    println!(
        "{} enhanced tokens in {} dimensions",
        report.tokens.len(),
        report.tokens.dims()
    );
    for (i, v) in report.pca.explained_variance_ratio.iter().enumerate() {
        println!("PC{} explains {:.1}%", i + 1, 100.0 * v);
    }
    let r = report.r_pc1_gender;
    println!(
        "point-biserial r(gender, PC1) = {:.3} (log10 p = {:.1})",
        r.statistic, r.log10_p
    );
    for ac in &report.age_correlations {
        if let Some(res) = &ac.result {
            println!(
                "Spearman rho(age, PC{}) on {} = {:.3}",
                ac.component, ac.subrange, res.statistic
            );
        }
    }
    for o in &report.ordering {
        println!(
            "{}: {:.0}% of ages lie between their neighbours (shuffled: {:.0}%)",
            o.gender,
            100.0 * o.score,
            100.0 * o.shuffled_baseline
        );
    }
}
