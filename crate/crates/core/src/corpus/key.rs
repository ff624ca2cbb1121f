use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::CorpusError;

/// Self-reported author gender.
///
/// `F` sorts before `M`, which fixes the `(gender, age)` order used for
/// token matrices and tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gender {
    F,
    M,
}

impl Gender {
    pub const ALL: [Gender; 2] = [Gender::F, Gender::M];

    pub fn as_char(self) -> char {
        match self {
            Gender::F => 'F',
            Gender::M => 'M',
        }
    }

    /// 1 for `F`, 0 for `M`; the coding used by point-biserial correlation.
    pub fn indicator(self) -> f64 {
        match self {
            Gender::F => 1.0,
            Gender::M => 0.0,
        }
    }
}

impl fmt::Display for Gender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for Gender {
    type Err = CorpusError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "f" | "F" => Ok(Gender::F),
            "m" | "M" => Ok(Gender::M),
            other => Err(CorpusError::Validation(format!(
                "gender must be \"f\" or \"m\", got {other:?}"
            ))),
        }
    }
}

/// The `(gender, age)` identity carried by an enhanced token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DemographicKey {
    pub gender: Gender,
    pub age: u32,
}

impl DemographicKey {
    pub fn new(gender: Gender, age: u32) -> Self {
        DemographicKey { gender, age }
    }

    /// Surface form of the token, e.g. `<I:F:24>`.
    pub fn render(&self) -> String {
        render_enhanced(*self)
    }
}

impl fmt::Display for DemographicKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<I:{}:{}>", self.gender.as_char(), self.age)
    }
}

const PREFIX: &str = "<I:";

pub fn render_enhanced(key: DemographicKey) -> String {
    key.to_string()
}

/// Inverse of [`render_enhanced`].
///
/// Strings that do not start with `<I:` yield [`CorpusError::NotEnhanced`];
/// strings that do but are otherwise malformed yield
/// [`CorpusError::EnhancedFormat`].
pub fn parse_enhanced(s: &str) -> Result<DemographicKey, CorpusError> {
    let Some(rest) = s.strip_prefix(PREFIX) else {
        return Err(CorpusError::NotEnhanced(s.to_owned()));
    };
    let format_err = || CorpusError::EnhancedFormat(s.to_owned());
    let body = rest.strip_suffix('>').ok_or_else(format_err)?;
    let (g, age) = body.split_once(':').ok_or_else(format_err)?;
    let gender = match g {
        "F" => Gender::F,
        "M" => Gender::M,
        _ => return Err(format_err()),
    };
    let canonical = !age.is_empty()
        && age.bytes().all(|b| b.is_ascii_digit())
        && (age == "0" || !age.starts_with('0'));
    if !canonical {
        return Err(format_err());
    }
    let age = age.parse::<u32>().map_err(|_| format_err())?;
    Ok(DemographicKey { gender, age })
}

/// True when `token` is a well-formed enhanced token.
pub fn is_enhanced(token: &str) -> bool {
    token.starts_with(PREFIX) && parse_enhanced(token).is_ok()
}
