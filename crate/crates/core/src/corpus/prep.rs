use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use super::{
    enhance, lemmatize, parse_post, tokenize, AgeRange, CorpusError, LemmaTable, Post, PronounSet,
};

const CHUNK_LINES: usize = 4096;

/// Counters reported after rewriting a JSONL file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PrepStats {
    pub lines: usize,
    pub written: usize,
    pub blank_lines: usize,
    pub skipped_age: usize,
    pub skipped_empty: usize,
    pub pronouns_replaced: usize,
}

/// Tokenize → lemmatize → enhance, configured once and shared by workers.
#[derive(Clone, Debug)]
pub struct Preprocessor {
    pub pronouns: PronounSet,
    pub lemmas: Option<LemmaTable>,
    pub ages: AgeRange,
}

enum LineOutcome {
    Blank,
    OutOfRange,
    Empty,
    Tokens(Vec<String>, usize),
}

impl Preprocessor {
    pub fn new(pronouns: PronounSet) -> Self {
        Preprocessor {
            pronouns,
            lemmas: None,
            ages: AgeRange::default(),
        }
    }

    pub fn with_lemmas(mut self, table: LemmaTable) -> Self {
        self.lemmas = Some(table);
        self
    }

    pub fn with_ages(mut self, ages: AgeRange) -> Self {
        self.ages = ages;
        self
    }

    /// Rewritten token sequence for one post.
    pub fn rewrite(&self, post: &Post) -> Vec<String> {
        let tokens = tokenize(&post.text);
        let tokens = match &self.lemmas {
            Some(table) => lemmatize(&tokens, table),
            None => tokens,
        };
        enhance(&tokens, post.key(), &self.pronouns)
    }

    fn process_line(&self, line: &str, line_no: usize) -> Result<LineOutcome, CorpusError> {
        if line.trim().is_empty() {
            return Ok(LineOutcome::Blank);
        }
        let post = match parse_post(line, line_no, self.ages) {
            Ok(post) => post,
            Err(CorpusError::AgeOutOfRange { .. }) => return Ok(LineOutcome::OutOfRange),
            Err(e) => return Err(e),
        };
        let replaced = tokenize(&post.text)
            .iter()
            .filter(|t| self.pronouns.contains(t))
            .count();
        let tokens = self.rewrite(&post);
        if tokens.is_empty() {
            return Ok(LineOutcome::Empty);
        }
        Ok(LineOutcome::Tokens(tokens, replaced))
    }

    /// Streams JSONL posts from `reader` and writes one rewritten post per line.
    ///
    /// Lines are read sequentially in chunks and each chunk is mapped in
    /// parallel; output order always matches input order.
    pub fn rewrite_stream<R: BufRead, W: Write>(
        &self,
        reader: R,
        mut writer: W,
    ) -> Result<PrepStats, CorpusError> {
        let mut stats = PrepStats::default();
        let mut lines = reader.lines();
        let mut chunk: Vec<(usize, String)> = Vec::with_capacity(CHUNK_LINES);
        loop {
            chunk.clear();
            for line in lines.by_ref().take(CHUNK_LINES) {
                stats.lines += 1;
                let line = line.map_err(|e| CorpusError::Io {
                    path: "<input>".into(),
                    source: e,
                })?;
                chunk.push((stats.lines, line));
            }
            if chunk.is_empty() {
                break;
            }
            let outcomes: Vec<LineOutcome> = chunk
                .par_iter()
                .map(|(no, line)| self.process_line(line, *no))
                .collect::<Result<_, _>>()?;
            for outcome in outcomes {
                match outcome {
                    LineOutcome::Blank => stats.blank_lines += 1,
                    LineOutcome::OutOfRange => stats.skipped_age += 1,
                    LineOutcome::Empty => stats.skipped_empty += 1,
                    LineOutcome::Tokens(tokens, replaced) => {
                        stats.written += 1;
                        stats.pronouns_replaced += replaced;
                        writeln!(writer, "{}", tokens.join(" ")).map_err(|e| CorpusError::Io {
                            path: "<output>".into(),
                            source: e,
                        })?;
                    }
                }
            }
        }
        writer.flush().map_err(|e| CorpusError::Io {
            path: "<output>".into(),
            source: e,
        })?;
        Ok(stats)
    }

    pub fn rewrite_file(&self, input: &Path, output: &Path) -> Result<PrepStats, CorpusError> {
        let reader = BufReader::new(File::open(input).map_err(|e| CorpusError::io(input, e))?);
        let writer = BufWriter::new(File::create(output).map_err(|e| CorpusError::io(output, e))?);
        self.rewrite_stream(reader, writer)
    }
}
