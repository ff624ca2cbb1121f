//! Retrains over a small grid of architectures, sizes, epochs and corpus
//! fractions and prints the sweep table.
//!
//!     cargo run --release --example robustness_sweep -- [cells in parallel]

use demovec::corpus::{Preprocessor, PronounSet};
use demovec::embedding::{Arch, TrainConfig};
use demovec::harness::{
    generate_corpus, run_sweep, sweep_tsv, SweepAxis, SweepGrid, SyntheticSpec,
};

fn main() {
    let parallel: usize = std::env::args()
        .nth(1)
        .map_or(1, |a| a.parse().expect("cell count"));
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        n_posts: 100_000,
        ..SyntheticSpec::default()
    };
    let posts = dir.path().join("posts.jsonl");
    let corpus = dir.path().join("corpus.txt");
    generate_corpus(&spec, &posts).unwrap();
    Preprocessor::new(PronounSet::english())
        .with_ages(spec.ages())
        .rewrite_file(&posts, &corpus)
        .unwrap();
    let sentences: Vec<String> = std::fs::read_to_string(&corpus)
        .unwrap()
        .lines()
        .map(str::to_owned)
        .collect();

    let grid = SweepGrid {
        archs: vec![Arch::Cbow, Arch::SkipGram],
        dims: vec![25, 100],
        epochs: vec![1, 3],
        fractions: vec![0.1, 1.0],
    };
    let lex = spec.lexicon();
    let axis = SweepAxis {
        pos: lex.fem,
        neg: lex.mas,
        ..SweepAxis::default()
    };
    let rows = run_sweep(
        &sentences,
        &grid,
        Some(&axis),
        &TrainConfig::default(),
        parallel,
    )
    .unwrap();
    print!("{}", sweep_tsv(&rows));
}
