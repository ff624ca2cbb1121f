//! Rewrites a few posts the way `prep` does: tokenize, lemmatize, then swap
//! first-person pronouns for a token carrying the author's gender and age.

use demovec::corpus::{
    enhance, lemmatize, parse_enhanced, parse_post, tokenize, AgeRange, LemmaTable, Preprocessor,
    PronounSet,
};

const POSTS: &str = r#"{"text": "Я сегодня такая счастливая, мне подарили цветы", "gender": "f", "age": 23}
{"text": "Honestly I think my code is well-known for being fast", "gender": "m", "age": 41}
{"text": "Меня не было дома, я был занят", "gender": "m", "birth_year": 1990, "post_date": "2015-06-01"}
{"text": "no pronoun here", "gender": "f", "age": 70}"#;

fn main() {
    // gendered adjective forms collapse to one lemma so they cannot leak gender
    let lemmas =
        LemmaTable::parse_tsv("счастливая\tсчастливый\nзанят\tзанятый\nтакая\tтакой\n").unwrap();
    let pronouns = PronounSet::builtin();
    let ages = AgeRange::new(14, 60);

    for (i, line) in POSTS.lines().enumerate() {
        match parse_post(line, i + 1, ages) {
            Ok(post) => {
                let tokens = tokenize(&post.text);
                let lemmatized = lemmatize(&tokens, &lemmas);
                let enhanced = enhance(&lemmatized, post.key(), &pronouns);
                println!("{:?}\n  -> {}", post.text, enhanced.join(" "));
                for t in enhanced.iter().filter(|t| t.starts_with('<')) {
                    println!("     {t} = {:?}", parse_enhanced(t).unwrap());
                }
            }
            Err(e) => println!("skipped: {e}"),
        }
    }

    // the same steps, streamed, with counters
    let pre = Preprocessor::new(pronouns)
        .with_lemmas(lemmas)
        .with_ages(ages);
    let mut out = Vec::new();
    let stats = pre.rewrite_stream(POSTS.as_bytes(), &mut out).unwrap();
    println!("\n{}", String::from_utf8(out).unwrap().trim_end());
    println!("{stats:?}");
}
