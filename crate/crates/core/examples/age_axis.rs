//! Builds an age axis from age-marked words against neutral ones and
//! checks that token projections rise with the author's age.

use demovec::analysis::{axis_report, build_axis, extract_token_matrix, spearman, AxisOptions};
use demovec::corpus::{Gender, Preprocessor, PronounSet};
use demovec::embedding::{train_sentences, TrainConfig};
use demovec::harness::{generate_corpus, AgeProfile, SyntheticSpec};

fn main() {
    let two_segment = std::env::args().any(|a| a == "--two-segment");
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        gamma: 0.5,
        n_posts: 100_000,
        age_profile: if two_segment {
            AgeProfile::TwoSegment
        } else {
            AgeProfile::Linear
        },
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
    let (model, _) = train_sentences(text.lines(), &TrainConfig::default()).unwrap();

    let tokens = extract_token_matrix(&model).unwrap();
    let lex = spec.lexicon();
    let options = AxisOptions::default();
    let axis = build_axis(&model, &lex.age, &lex.neutral, &options).unwrap();
    let report = axis_report(&tokens, axis, &options).unwrap();
    let rho = spearman(&tokens.ages(), &report.projections).unwrap();
    println!(
        "{:?} profile: rho(age, projection) = {:.3}",
        spec.age_profile, rho.statistic
    );
    for g in Gender::ALL {
        let idx = tokens.indices_of(g);
        let ages: Vec<f64> = idx
            .iter()
            .map(|&i| f64::from(tokens.keys()[i].age))
            .collect();
        let proj: Vec<f64> = idx.iter().map(|&i| report.projections[i]).collect();
        println!(
            "  {g} only: {:.3}",
            spearman(&ages, &proj).unwrap().statistic
        );
    }
}
