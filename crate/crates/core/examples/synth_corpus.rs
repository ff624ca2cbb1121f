//! Generates a planted-signal corpus and shows what went into it.
//!
//!     cargo run --release --example synth_corpus -- [beta] [n_posts]

use std::io::{BufRead, BufReader};

use demovec::harness::{generate_corpus, SyntheticSpec};

fn main() {
    let mut args = std::env::args().skip(1);
    let beta: f64 = args.next().map_or(0.5, |a| a.parse().expect("beta"));
    let n_posts: usize = args.next().map_or(2_000, |a| a.parse().expect("n_posts"));
    let spec = SyntheticSpec {
        beta,
        gamma: 0.5,
        n_posts,
        ..SyntheticSpec::default()
    };
    spec.validate().unwrap();

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("posts.jsonl");
    generate_corpus(&spec, &path).unwrap();
    let size = std::fs::metadata(&path).unwrap().len();
    println!("{} posts, {:.2} MB", spec.n_posts, size as f64 / 1e6);

    let lex = spec.lexicon();
    println!("fem lexicon: {} ...", lex.fem[..5].join(" "));
    println!("mas lexicon: {} ...", lex.mas[..5].join(" "));
    println!("age-marked:  {} ...", lex.age[..5].join(" "));
    for age in [spec.age_min, 26, spec.age_max] {
        println!(
            "age-marked rate at {age}: {:.2}",
            spec.gamma * spec.age_level(age)
        );
    }

    println!("\nfirst posts:");
    let file = std::fs::File::open(&path).unwrap();
    for line in BufReader::new(file).lines().take(3) {
        println!("{}", line.unwrap());
    }

    println!("\nspec as TOML:\n{}", toml::to_string(&spec).unwrap());
}
