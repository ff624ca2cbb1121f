//! Trains CBOW and skip-gram on a small planted corpus, saves one model in
//! word2vec text format and reads it back.

use demovec::corpus::{render_enhanced, DemographicKey, Gender, Preprocessor, PronounSet};
use demovec::embedding::{
    load_model, save_model, sidecar_path, train_sentences, Arch, TrainConfig,
};
use demovec::harness::{generate_corpus, SyntheticSpec};

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let n = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (n(a) * n(b))
}

fn main() {
    let dir = tempfile::tempdir().unwrap();
    let spec = SyntheticSpec {
        n_posts: 60_000,
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

    for arch in [Arch::Cbow, Arch::SkipGram] {
        let config = TrainConfig {
            arch,
            dims: 50,
            epochs: 2,
            ..TrainConfig::default()
        };
        let (model, report) = train_sentences(text.lines(), &config).unwrap();
        println!(
            "{arch}: {} words, {} examples, mean loss {:.3}, {:.1}s",
            model.len(),
            report.examples,
            report.mean_loss,
            report.seconds
        );
        let token = |g, age| render_enhanced(DemographicKey::new(g, age));
        let f = model.vector(&token(Gender::F, 30)).unwrap();
        let m = model.vector(&token(Gender::M, 30)).unwrap();
        let f2 = model.vector(&token(Gender::F, 31)).unwrap();
        println!(
            "  cos(F30, F31) = {:.3}, cos(F30, M30) = {:.3}",
            cosine(f, f2),
            cosine(f, m)
        );

        if arch == Arch::Cbow {
            let path = dir.path().join("model.vec");
            save_model(&model, &path).unwrap();
            let back = load_model(&path).unwrap();
            let drift = f
                .iter()
                .zip(back.vector(&token(Gender::F, 30)).unwrap())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            println!(
                "  saved {} and {}, reload drift {drift:.1e}",
                path.file_name().unwrap().to_string_lossy(),
                sidecar_path(&path).file_name().unwrap().to_string_lossy()
            );
        }
    }
}
