//! Projects every enhanced pronoun onto a semantic axis built from two word
//! lists and tests the gender gap against shuffled poles.

use demovec::analysis::{
    axis_report, build_axis, extract_token_matrix, permutation_test, AxisOptions, Projection,
};
use demovec::corpus::{Gender, Preprocessor, PronounSet};
use demovec::embedding::{train_sentences, TrainConfig};
use demovec::harness::{generate_corpus, SyntheticSpec};

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec::default();
    let posts = dir.path().join("posts.jsonl");
    let corpus = dir.path().join("corpus.txt");
    generate_corpus(&spec, &posts).unwrap();
    Preprocessor::new(PronounSet::english())
        .with_ages(spec.ages())
        .rewrite_file(&posts, &corpus)
        .unwrap();
    let text = std::fs::read_to_string(&corpus).unwrap();
    let config = TrainConfig {
        epochs: 1,
        ..TrainConfig::default()
    };
    let (model, _) = train_sentences(text.lines(), &config).unwrap();
    let tokens = extract_token_matrix(&model).unwrap();
    let lex = spec.lexicon();

    for projection in [Projection::Cosine, Projection::Dot] {
        let options = AxisOptions {
            projection,
            ..AxisOptions::default()
        };
        let axis = build_axis(&model, &lex.fem, &lex.mas, &options).unwrap();
        let report = axis_report(&tokens, axis, &options).unwrap();
        println!(
            "{projection:?}: r(gender, projection) = {:.3}, F above zero {:.0}%, M below zero {:.0}%",
            report.r_gender.statistic,
            100.0 * report.female_positive,
            100.0 * report.male_negative
        );
    }

    let options = AxisOptions::default();
    let axis = build_axis(&model, &lex.fem, &lex.mas, &options).unwrap();
    let report = axis_report(&tokens, axis, &options).unwrap();
    println!("\nage  F        M");
    for age in (spec.age_min..=spec.age_max).step_by(5) {
        let at = |g: Gender| {
            tokens
                .keys()
                .iter()
                .position(|k| k.gender == g && k.age == age)
                .map_or(f64::NAN, |i| report.projections[i])
        };
        println!("{age}   {:+.3}   {:+.3}", at(Gender::F), at(Gender::M));
    }

    let result = permutation_test(&model, &lex.fem, &lex.mas, &tokens, 999, 7, &options).unwrap();
    println!(
        "\npermutation test: gap {:.4}, p = {} from {} shuffles",
        result.observed, result.p_value, result.n_perms
    );
}
