//! Writes an analysis as a directory of TSV tables plus a manifest of
//! digests, then verifies it.
//!
//!     cargo run --release --example report_bundle -- [output dir]

use std::collections::BTreeMap;
use std::path::PathBuf;

use demovec::analysis::{analyze, AnalysisConfig};
use demovec::corpus::{Preprocessor, PronounSet};
use demovec::embedding::{save_model, train_sentences, TrainConfig};
use demovec::harness::{
    emit_report, generate_corpus, verify_report, ReportBundle, RunInfo, SyntheticSpec,
};

fn main() {
    let scratch = tempfile::tempdir().unwrap();
    let out: PathBuf = std::env::args()
        .nth(1)
        .map_or_else(|| scratch.path().join("report"), PathBuf::from);

    let spec = SyntheticSpec {
        n_posts: 60_000,
        ..SyntheticSpec::default()
    };
    let posts = scratch.path().join("posts.jsonl");
    let corpus = scratch.path().join("corpus.txt");
    generate_corpus(&spec, &posts).unwrap();
    Preprocessor::new(PronounSet::english())
        .with_ages(spec.ages())
        .rewrite_file(&posts, &corpus)
        .unwrap();
    let text = std::fs::read_to_string(&corpus).unwrap();
    let train = TrainConfig {
        dims: 50,
        epochs: 2,
        ..TrainConfig::default()
    };
    let (model, _) = train_sentences(text.lines(), &train).unwrap();
    let model_path = scratch.path().join("model.vec");
    save_model(&model, &model_path).unwrap();

    let lex = spec.lexicon();
    let config = AnalysisConfig {
        n_perms: 199,
        ..AnalysisConfig::default()
    };
    let report = analyze(&model, Some((&lex.fem, &lex.mas)), &config).unwrap();
    let mut bundle = ReportBundle::new();
    bundle.add_analysis(&report);

    let run = RunInfo {
        command: "analyze".into(),
        config: serde_json::json!({ "train": train, "analysis": config, "spec": spec }),
        config_toml: None,
        seeds: BTreeMap::from([
            ("train".to_owned(), train.seed),
            ("analysis".to_owned(), config.seed),
        ]),
        inputs: vec![model_path],
    };
    let manifest = emit_report(&bundle, &out, &run).unwrap();
    println!("wrote {}", out.display());
    for f in &manifest.outputs {
        println!("  {}  {}", &f.sha256[..12], f.path);
    }
    verify_report(&out).unwrap();
    println!("digests verified");
}
