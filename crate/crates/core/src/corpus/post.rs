use std::ops::RangeInclusive;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{CorpusError, DemographicKey, Gender};

/// Inclusive bounds on accepted author ages.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgeRange {
    pub min: u32,
    pub max: u32,
}

impl AgeRange {
    pub fn new(min: u32, max: u32) -> Self {
        AgeRange { min, max }
    }

    pub fn contains(&self, age: u32) -> bool {
        (self.min..=self.max).contains(&age)
    }

    pub fn as_range(&self) -> RangeInclusive<u32> {
        self.min..=self.max
    }
}

impl Default for AgeRange {
    fn default() -> Self {
        AgeRange { min: 14, max: 60 }
    }
}

/// One authored document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Post {
    pub text: String,
    pub gender: Gender,
    pub age: u32,
}

impl Post {
    pub fn key(&self) -> DemographicKey {
        DemographicKey::new(self.gender, self.age)
    }
}

/// Parses one JSONL record.
///
/// `line_no` is 1-based and only used for error messages. Age comes from
/// `age`, or from `post_date` year minus `birth_year` when `age` is absent.
pub fn parse_post(line: &str, line_no: usize, ages: AgeRange) -> Result<Post, CorpusError> {
    let record: Value = serde_json::from_str(line).map_err(|e| CorpusError::Parse {
        line: line_no,
        message: e.to_string(),
    })?;
    let Value::Object(fields) = record else {
        return Err(CorpusError::Parse {
            line: line_no,
            message: "record is not a JSON object".into(),
        });
    };
    let invalid = |msg: String| CorpusError::Validation(format!("line {line_no}: {msg}"));

    let text = match fields.get("text") {
        Some(Value::String(s)) if !s.trim().is_empty() => s.clone(),
        Some(Value::String(_)) => return Err(invalid("empty text".into())),
        Some(_) => return Err(invalid("`text` must be a string".into())),
        None => return Err(invalid("missing `text`".into())),
    };

    let gender = match fields.get("gender") {
        Some(Value::String(s)) => match s.trim().to_ascii_lowercase().as_str() {
            "f" => Gender::F,
            "m" => Gender::M,
            other => return Err(invalid(format!("unknown gender {other:?}"))),
        },
        Some(_) => return Err(invalid("`gender` must be a string".into())),
        None => return Err(invalid("missing `gender`".into())),
    };

    let age = match fields.get("age") {
        Some(v) => v
            .as_u64()
            .and_then(|a| u32::try_from(a).ok())
            .ok_or_else(|| invalid(format!("`age` must be a non-negative integer, got {v}")))?,
        None => derived_age(&fields).map_err(invalid)?,
    };

    if !ages.contains(age) {
        return Err(CorpusError::AgeOutOfRange {
            line: line_no,
            age,
            min: ages.min,
            max: ages.max,
        });
    }

    Ok(Post { text, gender, age })
}

fn derived_age(fields: &serde_json::Map<String, Value>) -> Result<u32, String> {
    let (Some(birth), Some(date)) = (fields.get("birth_year"), fields.get("post_date")) else {
        return Err("missing `age` (or `birth_year` + `post_date`)".into());
    };
    let birth = birth
        .as_i64()
        .ok_or_else(|| format!("`birth_year` must be an integer, got {birth}"))?;
    let date = date
        .as_str()
        .ok_or_else(|| "`post_date` must be an ISO-8601 string".to_string())?;
    let day = date.get(..10).unwrap_or(date);
    let parsed = NaiveDate::parse_from_str(day, "%Y-%m-%d")
        .map_err(|e| format!("bad `post_date` {date:?}: {e}"))?;
    let age = i64::from(parsed.year()) - birth;
    u32::try_from(age).map_err(|_| format!("derived age {age} is negative"))
}
