//! word2vec text format: a `V D` header followed by `token v1 .. vD` rows.
//!
//! Input vectors go to the given path and output vectors to a sidecar with
//! the `.out` suffix appended.

use std::collections::HashSet;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use log::warn;

use super::matrix::Matrix;
use super::vocab::{VocabEntry, Vocabulary};
use super::{EmbeddingError, EmbeddingModel, TrainConfig};
use crate::corpus::is_enhanced;

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut name = OsString::from(path.as_os_str());
    name.push(".out");
    PathBuf::from(name)
}

/// Formats like C's `%g`: 6 significant digits, trailing zeros trimmed.
pub fn format_g6(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let sci = format!("{v:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (5 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_owned()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_vectors<W: Write>(mut w: W, vocab: &Vocabulary, m: &Matrix) -> std::io::Result<()> {
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    let mut line = String::new();
    for (id, entry) in vocab.iter() {
        line.clear();
        line.push_str(&entry.token);
        for &v in m.row(id as usize) {
            line.push(' ');
            line.push_str(&format_g6(v));
        }
        line.push('\n');
        w.write_all(line.as_bytes())?;
    }
    w.flush()
}

/// Parses a word2vec text file into tokens (file order) and a matrix.
pub fn read_vectors<R: BufRead>(reader: R) -> Result<(Vec<String>, Matrix), EmbeddingError> {
    let mut lines = reader.lines();
    let fmt = |line: usize, msg: String| EmbeddingError::Format { line, message: msg };
    let header = lines
        .next()
        .ok_or_else(|| fmt(1, "empty file".into()))?
        .map_err(|e| fmt(1, e.to_string()))?;
    let mut parts = header.split(' ');
    let (rows, cols) = match (parts.next(), parts.next(), parts.next()) {
        (Some(r), Some(c), None) => (
            r.parse::<usize>()
                .map_err(|_| fmt(1, format!("bad header {header:?}")))?,
            c.parse::<usize>()
                .map_err(|_| fmt(1, format!("bad header {header:?}")))?,
        ),
        _ => return Err(fmt(1, format!("header must be `V D`, got {header:?}"))),
    };

    let mut tokens = Vec::with_capacity(rows);
    let mut seen = HashSet::with_capacity(rows);
    let mut data = Vec::with_capacity(rows * cols);
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line.map_err(|e| fmt(line_no, e.to_string()))?;
        if line.is_empty() {
            continue;
        }
        if tokens.len() == rows {
            return Err(fmt(line_no, format!("more than {rows} rows")));
        }
        let mut fields = line.split(' ');
        let token = fields.next().unwrap_or_default().to_owned();
        let start = data.len();
        for field in fields {
            let v: f64 = field
                .parse()
                .map_err(|_| fmt(line_no, format!("bad value {field:?}")))?;
            data.push(v);
        }
        if data.len() - start != cols {
            return Err(EmbeddingError::DimensionMismatch {
                line: line_no,
                expected: cols,
                found: data.len() - start,
            });
        }
        if !seen.insert(token.clone()) {
            return Err(EmbeddingError::DuplicateToken(token));
        }
        tokens.push(token);
    }
    if tokens.len() != rows {
        return Err(fmt(
            tokens.len() + 2,
            format!("header promises {rows} rows, found {}", tokens.len()),
        ));
    }
    Ok((tokens, Matrix::from_vec(rows, cols, data)))
}

pub fn save_model(model: &EmbeddingModel, path: &Path) -> Result<(), EmbeddingError> {
    for (p, m) in [
        (path.to_owned(), &model.input),
        (sidecar_path(path), &model.output),
    ] {
        let file = File::create(&p).map_err(|e| EmbeddingError::io(&p, e))?;
        write_vectors(BufWriter::new(file), &model.vocab, m)
            .map_err(|e| EmbeddingError::io(&p, e))?;
    }
    Ok(())
}

/// Loads a model saved by [`save_model`].
///
/// Counts are not persisted, so the loaded vocabulary has zero counts. A
/// missing sidecar leaves the output vectors at zero.
pub fn load_model(path: &Path) -> Result<EmbeddingModel, EmbeddingError> {
    let file = File::open(path).map_err(|e| EmbeddingError::io(path, e))?;
    let (tokens, input) = read_vectors(BufReader::new(file))?;

    let side = sidecar_path(path);
    let output = if side.exists() {
        let file = File::open(&side).map_err(|e| EmbeddingError::io(&side, e))?;
        let (out_tokens, output) = read_vectors(BufReader::new(file))?;
        if out_tokens != tokens || output.cols() != input.cols() {
            return Err(EmbeddingError::Format {
                line: 1,
                message: format!("{} does not match {}", side.display(), path.display()),
            });
        }
        output
    } else {
        warn!("no sidecar {}; output vectors set to zero", side.display());
        Matrix::zeros(input.rows(), input.cols())
    };

    let vocab = Vocabulary::from_entries(
        tokens
            .into_iter()
            .map(|token| VocabEntry {
                enhanced: is_enhanced(&token),
                token,
                count: 0,
            })
            .collect(),
    );
    let config = TrainConfig {
        dims: input.cols(),
        ..TrainConfig::default()
    };
    Ok(EmbeddingModel::new(vocab, input, output, config))
}
