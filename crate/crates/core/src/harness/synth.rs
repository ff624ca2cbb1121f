use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rand::distr::{Distribution, Uniform};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Zipf;
use serde::{Deserialize, Serialize};

use crate::corpus::{AgeRange, Gender};

use super::HarnessError;

/// How the age-marked usage rate grows with age.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgeProfile {
    #[default]
    Linear,
    /// Steep rise up to `age_knee`, then a gentler one.
    TwoSegment,
}

/// Parameters of the planted-signal corpus generator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n_posts: usize,
    pub age_min: u32,
    pub age_max: u32,
    /// Gender bias of the marked lexicon: 0 is none, 1 is exclusive use.
    pub beta: f64,
    /// Strength of the age gradient on the age-marked lexicon.
    pub gamma: f64,
    pub age_profile: AgeProfile,
    pub age_knee: u32,
    /// Words in each gender lexicon.
    pub lexicon_size: usize,
    /// Words in the age-marked and in the neutral lexicon.
    pub age_lexicon_size: usize,
    pub background_vocab_size: usize,
    pub zipf_exponent: f64,
    /// Gender-lexicon slots per post.
    pub gender_words_per_post: usize,
    /// Chance that a gender word is followed by its private collocate, which
    /// gives each marked word contexts of its own.
    pub collocate_rate: f64,
    /// Expected gender-independent uses per post of a random gender word
    /// together with its collocate, placed outside the pronoun phrase.
    pub topic_rate: f64,
    /// Age-or-neutral slots per post.
    pub age_words_per_post: usize,
    pub post_len_min: usize,
    pub post_len_max: usize,
    pub pronoun_rate: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_posts: 210_000,
            age_min: 16,
            age_max: 45,
            beta: 0.5,
            gamma: 0.0,
            age_profile: AgeProfile::Linear,
            age_knee: 26,
            lexicon_size: 140,
            age_lexicon_size: 20,
            background_vocab_size: 20_000,
            zipf_exponent: 1.0,
            gender_words_per_post: 8,
            collocate_rate: 0.0,
            topic_rate: 0.0,
            age_words_per_post: 2,
            post_len_min: 11,
            post_len_max: 13,
            pronoun_rate: 0.8,
            seed: 1,
        }
    }
}

/// The planted word lists plus the background vocabulary.
#[derive(Clone, Debug, PartialEq)]
pub struct Lexicon {
    pub fem: Vec<String>,
    pub mas: Vec<String>,
    pub age: Vec<String>,
    pub neutral: Vec<String>,
    /// One private collocate per word of `fem`, then of `mas`.
    pub collocates: Vec<String>,
    pub background: Vec<String>,
}

/// Letters-only pseudo-word: `prefix` followed by a bijective base-26 index.
pub fn pseudo_word(prefix: &str, index: usize) -> String {
    let mut letters = Vec::new();
    let mut n = index + 1;
    while n > 0 {
        n -= 1;
        letters.push(b'a' + (n % 26) as u8);
        n /= 26;
    }
    letters.reverse();
    format!("{prefix}{}", String::from_utf8(letters).expect("ascii"))
}

// Emitted with these relative weights; all of them map to one enhanced token.
const PRONOUN_FORMS: [(&str, u32); 5] =
    [("I", 12), ("me", 3), ("my", 3), ("mine", 1), ("myself", 1)];

#[derive(Serialize)]
struct Record<'a> {
    text: &'a str,
    gender: &'a str,
    age: u32,
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        let fail = |m: String| Err(HarnessError::Spec(m));
        if !(0.0..=1.0).contains(&self.beta) {
            return fail(format!("beta {} outside [0, 1]", self.beta));
        }
        if !(0.0..=1.0).contains(&self.gamma) {
            return fail(format!("gamma {} outside [0, 1]", self.gamma));
        }
        if !(0.0..=1.0).contains(&self.collocate_rate) {
            return fail(format!(
                "collocate_rate {} outside [0, 1]",
                self.collocate_rate
            ));
        }
        if !(self.topic_rate >= 0.0 && self.topic_rate <= 4.0) {
            return fail(format!("topic_rate {} outside [0, 4]", self.topic_rate));
        }
        if !(self.pronoun_rate > 0.0 && self.pronoun_rate <= 1.0) {
            return fail(format!("pronoun_rate {} outside (0, 1]", self.pronoun_rate));
        }
        if self.age_min >= self.age_max {
            return fail(format!(
                "empty age range {}..={}",
                self.age_min, self.age_max
            ));
        }
        if self.age_profile == AgeProfile::TwoSegment
            && !(self.age_min < self.age_knee && self.age_knee < self.age_max)
        {
            return fail(format!(
                "age_knee {} must lie strictly inside the age range",
                self.age_knee
            ));
        }
        if self.lexicon_size == 0 || self.age_lexicon_size == 0 || self.background_vocab_size == 0 {
            return fail("lexicon and background sizes must be positive".into());
        }
        if !(self.zipf_exponent >= 0.0 && self.zipf_exponent.is_finite()) {
            return fail("zipf_exponent must be finite and >= 0".into());
        }
        let collocates = if self.collocate_rate > 0.0 {
            self.gender_words_per_post
        } else {
            0
        };
        let slots = self.gender_words_per_post + collocates + self.age_words_per_post + 1;
        if self.post_len_min < slots || self.post_len_min > self.post_len_max {
            return fail(format!(
                "post length {}..={} must hold the {slots} planted slots",
                self.post_len_min, self.post_len_max
            ));
        }
        Ok(())
    }

    pub fn ages(&self) -> AgeRange {
        AgeRange::new(self.age_min, self.age_max)
    }

    pub fn lexicon(&self) -> Lexicon {
        let list = |prefix: &str, n: usize| (0..n).map(|i| pseudo_word(prefix, i)).collect();
        Lexicon {
            fem: list("fem", self.lexicon_size),
            mas: list("mas", self.lexicon_size),
            age: list("age", self.age_lexicon_size),
            neutral: list("neu", self.age_lexicon_size),
            collocates: list("co", 2 * self.lexicon_size),
            background: list("w", self.background_vocab_size),
        }
    }

    /// Position of `age` on the age gradient, in [0, 1].
    pub fn age_level(&self, age: u32) -> f64 {
        let (lo, hi) = (f64::from(self.age_min), f64::from(self.age_max));
        let a = f64::from(age.clamp(self.age_min, self.age_max));
        match self.age_profile {
            AgeProfile::Linear => (a - lo) / (hi - lo),
            AgeProfile::TwoSegment => {
                const KNEE_LEVEL: f64 = 2.0 / 3.0;
                let k = f64::from(self.age_knee);
                if a <= k {
                    KNEE_LEVEL * (a - lo) / (k - lo)
                } else {
                    KNEE_LEVEL + (1.0 - KNEE_LEVEL) * (a - k) / (hi - k)
                }
            }
        }
    }
}

/// Writes `spec.n_posts` JSONL records to `out`.
///
/// Each post draws its author uniformly over genders and ages. Every gender
/// slot holds the author's own lexicon with probability `beta` and a word
/// from the pooled gender lexicons otherwise. Every age slot holds an
/// age-marked word with probability `gamma * age_level(age)` and a neutral
/// word otherwise. One pronoun is inserted with probability `pronoun_rate`.
/// The remaining positions are Zipf-distributed background words.
pub fn generate_corpus(spec: &SyntheticSpec, out: &Path) -> Result<(), HarnessError> {
    spec.validate()?;
    let file = File::create(out).map_err(|e| HarnessError::io(out, e))?;
    let mut w = BufWriter::new(file);
    write_corpus(spec, &mut w).map_err(|e| HarnessError::io(out, e))?;
    w.flush().map_err(|e| HarnessError::io(out, e))
}

/// Same stream as [`generate_corpus`], into any writer.
pub fn write_corpus<W: Write>(spec: &SyntheticSpec, w: &mut W) -> std::io::Result<()> {
    let lex = spec.lexicon();
    let gendered: Vec<&String> = lex.fem.iter().chain(&lex.mas).collect();
    let n_lex = spec.lexicon_size;
    let zipf =
        Zipf::new(spec.background_vocab_size as f64, spec.zipf_exponent).expect("validated spec");
    let lengths =
        Uniform::new_inclusive(spec.post_len_min, spec.post_len_max).expect("validated spec");
    let pronoun_total: u32 = PRONOUN_FORMS.iter().map(|p| p.1).sum();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    // A unit is a planted word plus an optional collocate that stays next to it.
    let mut units: Vec<(&str, Option<&str>)> = Vec::new();
    let mut words: Vec<&str> = Vec::with_capacity(spec.post_len_max);
    let mut text = String::new();

    for _ in 0..spec.n_posts {
        let gender = if rng.random_bool(0.5) {
            Gender::F
        } else {
            Gender::M
        };
        let age = rng.random_range(spec.age_min..=spec.age_max);
        let len = lengths.sample(&mut rng);
        units.clear();

        let own_offset = match gender {
            Gender::F => 0,
            Gender::M => n_lex,
        };
        for _ in 0..spec.gender_words_per_post {
            let idx = if rng.random_bool(spec.beta) {
                own_offset + rng.random_range(0..n_lex)
            } else {
                rng.random_range(0..2 * n_lex)
            };
            let collocate = rng
                .random_bool(spec.collocate_rate)
                .then(|| lex.collocates[idx].as_str());
            units.push((gendered[idx], collocate));
        }
        let age_rate = spec.gamma * spec.age_level(age);
        for _ in 0..spec.age_words_per_post {
            let list = if rng.random_bool(age_rate) {
                &lex.age
            } else {
                &lex.neutral
            };
            units.push((list.choose(&mut rng).expect("non-empty lexicon"), None));
        }
        if rng.random_bool(spec.pronoun_rate) {
            let mut pick = rng.random_range(0..pronoun_total);
            let form = PRONOUN_FORMS
                .iter()
                .find(|(_, weight)| {
                    let hit = pick < *weight;
                    pick = pick.saturating_sub(*weight);
                    hit
                })
                .expect("weights cover the range")
                .0;
            units.push((form, None));
        }
        // The planted words form one phrase around the pronoun, the way
        // agreement-marked words sit next to it in real text.
        units.shuffle(&mut rng);
        words.clear();
        for &(word, collocate) in &units {
            words.push(word);
            words.extend(collocate);
        }
        let phrase = words.len();
        let mut topics = spec.topic_rate.floor() as usize;
        if rng.random_bool(spec.topic_rate.fract()) {
            topics += 1;
        }
        for _ in 0..topics {
            let idx = rng.random_range(0..2 * n_lex);
            words.push(gendered[idx]);
            words.push(&lex.collocates[idx]);
        }
        while words.len() < len {
            let rank = zipf.sample(&mut rng) as usize;
            words.push(&lex.background[rank - 1]);
        }
        let at = rng.random_range(0..=words.len() - phrase);
        words[..phrase + at].rotate_right(at);

        text.clear();
        for (i, word) in words.iter().enumerate() {
            if i > 0 {
                text.push(' ');
            }
            text.push_str(word);
        }
        let record = Record {
            text: &text,
            gender: match gender {
                Gender::F => "f",
                Gender::M => "m",
            },
            age,
        };
        serde_json::to_writer(&mut *w, &record)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::collections::{HashMap, HashSet};

    use super::*;
    use crate::corpus::{parse_post, tokenize};

    fn small(beta: f64, seed: u64) -> SyntheticSpec {
        SyntheticSpec {
            n_posts: 2000,
            beta,
            background_vocab_size: 500,
            seed,
            ..SyntheticSpec::default()
        }
    }

    fn generate(spec: &SyntheticSpec) -> Vec<u8> {
        let mut buf = Vec::new();
        write_corpus(spec, &mut buf).unwrap();
        buf
    }

    #[test]
    fn pseudo_words_are_distinct_letter_runs() {
        assert_eq!(pseudo_word("w", 0), "wa");
        assert_eq!(pseudo_word("w", 25), "wz");
        assert_eq!(pseudo_word("w", 26), "waa");
        let words: HashSet<String> = (0..5000).map(|i| pseudo_word("w", i)).collect();
        assert_eq!(words.len(), 5000);
        assert!(words.iter().all(|w| tokenize(w) == vec![w.clone()]));
    }

    #[test]
    fn lexicons_disjoint_from_background() {
        let lex = SyntheticSpec::default().lexicon();
        let bg: HashSet<&String> = lex.background.iter().collect();
        for list in [&lex.fem, &lex.mas, &lex.age, &lex.neutral] {
            assert!(list.iter().all(|w| !bg.contains(w)));
        }
    }

    #[test]
    fn same_seed_same_bytes() {
        assert_eq!(generate(&small(0.5, 3)), generate(&small(0.5, 3)));
        assert_ne!(generate(&small(0.5, 3)), generate(&small(0.5, 4)));
    }

    #[test]
    fn records_parse_and_respect_lengths() {
        let spec = small(0.5, 1);
        let bytes = generate(&spec);
        let text = String::from_utf8(bytes).unwrap();
        assert_eq!(text.lines().count(), spec.n_posts);
        for (i, line) in text.lines().enumerate() {
            let post = parse_post(line, i + 1, spec.ages()).unwrap();
            let n = post.text.split(' ').count();
            assert!((spec.post_len_min..=spec.post_len_max).contains(&n));
        }
    }

    #[test]
    fn exclusive_at_full_beta() {
        let spec = small(1.0, 2);
        let text = String::from_utf8(generate(&spec)).unwrap();
        for (i, line) in text.lines().enumerate() {
            let post = parse_post(line, i + 1, spec.ages()).unwrap();
            let wrong = match post.gender {
                Gender::F => "mas",
                Gender::M => "fem",
            };
            assert!(
                !post.text.split(' ').any(|w| w.starts_with(wrong)),
                "{line}"
            );
        }
    }

    #[test]
    fn pronoun_rate_is_respected() {
        let spec = SyntheticSpec {
            pronoun_rate: 0.3,
            ..small(0.0, 5)
        };
        let text = String::from_utf8(generate(&spec)).unwrap();
        let forms: HashSet<&str> = PRONOUN_FORMS.iter().map(|p| p.0).collect();
        let with = text
            .lines()
            .filter(|l| {
                let post = parse_post(l, 1, spec.ages()).unwrap();
                post.text.split(' ').any(|w| forms.contains(w))
            })
            .count();
        let rate = with as f64 / spec.n_posts as f64;
        assert!((rate - 0.3).abs() < 0.04, "{rate}");
    }

    #[test]
    fn age_words_follow_the_gradient() {
        let spec = SyntheticSpec {
            gamma: 1.0,
            ..small(0.0, 6)
        };
        let text = String::from_utf8(generate(&spec)).unwrap();
        let mut per_age: HashMap<bool, (usize, usize)> = HashMap::new();
        for line in text.lines() {
            let post = parse_post(line, 1, spec.ages()).unwrap();
            let hits = post
                .text
                .split(' ')
                .filter(|w| w.starts_with("age"))
                .count();
            let e = per_age.entry(post.age > 30).or_default();
            e.0 += hits;
            e.1 += 1;
        }
        let young = per_age[&false].0 as f64 / per_age[&false].1 as f64;
        let old = per_age[&true].0 as f64 / per_age[&true].1 as f64;
        assert!(old > 2.0 * young, "young {young} old {old}");
    }

    #[test]
    fn two_segment_profile_bends_at_the_knee() {
        let spec = SyntheticSpec {
            age_profile: AgeProfile::TwoSegment,
            ..SyntheticSpec::default()
        };
        assert_eq!(spec.age_level(16), 0.0);
        assert!((spec.age_level(26) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(spec.age_level(45), 1.0);
        let early = spec.age_level(17) - spec.age_level(16);
        let late = spec.age_level(45) - spec.age_level(44);
        assert!(early > late);
    }

    #[test]
    fn invalid_specs_rejected() {
        for bad in [
            SyntheticSpec {
                beta: 1.5,
                ..SyntheticSpec::default()
            },
            SyntheticSpec {
                gamma: -0.1,
                ..SyntheticSpec::default()
            },
            SyntheticSpec {
                pronoun_rate: 0.0,
                ..SyntheticSpec::default()
            },
            SyntheticSpec {
                age_min: 30,
                age_max: 30,
                ..SyntheticSpec::default()
            },
            SyntheticSpec {
                post_len_min: 3,
                ..SyntheticSpec::default()
            },
            SyntheticSpec {
                age_profile: AgeProfile::TwoSegment,
                age_knee: 50,
                ..SyntheticSpec::default()
            },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
        assert!(SyntheticSpec::default().validate().is_ok());
    }

    #[test]
    fn spec_from_flat_toml() {
        let spec: SyntheticSpec =
            toml::from_str("n_posts = 10\nbeta = 0.25\nage_profile = \"two_segment\"\n").unwrap();
        assert_eq!(spec.n_posts, 10);
        assert_eq!(spec.beta, 0.25);
        assert_eq!(spec.age_profile, AgeProfile::TwoSegment);
        assert_eq!(spec.age_min, 16);
        assert!(toml::from_str::<SyntheticSpec>("bogus = 1\n").is_err());
    }
}
