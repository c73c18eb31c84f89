//! Validated methodology documents and their canonical text form.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::canon;
use crate::dsl::grammar::Grammar;
use crate::dsl::validate::{validate, Diagnostics};

/// A typed parameter value. Serialized as the natural JSON shape
/// (strings, numbers, booleans, arrays), so document files read like
/// plain configuration; the schema supplies the type on the way back in.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum DslValue {
    Flag(bool),
    Int(i64),
    Real(f64),
    Text(String),
    TextList(Vec<String>),
}

impl DslValue {
    pub fn as_int(&self) -> Option<i64> {
        match self {
            DslValue::Int(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            DslValue::Real(v) => Some(*v),
            DslValue::Int(v) => Some(*v as f64),
            _ => None,
        }
    }

    pub fn as_flag(&self) -> Option<bool> {
        match self {
            DslValue::Flag(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            DslValue::Text(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[String]> {
        match self {
            DslValue::TextList(v) => Some(v),
            _ => None,
        }
    }
}

/// A methodology document that satisfied its grammar.
///
/// Instances are only constructed by [`validate`], so holding one is
/// proof the schema and cross-parameter rules held at construction time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DslDocument {
    pub topic_id: String,
    pub paradigm: String,
    pub params: BTreeMap<String, DslValue>,
}

// Deserialization of values goes through the raw JSON shape; the typed
// variants are re-established by validating against the grammar.
impl<'de> Deserialize<'de> for DslValue {
    fn deserialize<D>(deserializer: D) -> Result<Self, D::Error>
    where
        D: serde::Deserializer<'de>,
    {
        let raw = serde_json::Value::deserialize(deserializer)?;
        DslValue::from_raw(&raw).ok_or_else(|| {
            serde::de::Error::custom("unsupported JSON shape for a DSL parameter value")
        })
    }
}

impl DslValue {
    /// Best-effort typing of a raw JSON value; the validator narrows
    /// this further against the schema kind.
    pub fn from_raw(raw: &serde_json::Value) -> Option<DslValue> {
        match raw {
            serde_json::Value::Bool(b) => Some(DslValue::Flag(*b)),
            serde_json::Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Some(DslValue::Int(i))
                } else {
                    n.as_f64().map(DslValue::Real)
                }
            }
            serde_json::Value::String(s) => Some(DslValue::Text(s.clone())),
            serde_json::Value::Array(items) => {
                let mut texts = Vec::with_capacity(items.len());
                for item in items {
                    texts.push(item.as_str()?.to_string());
                }
                Some(DslValue::TextList(texts))
            }
            _ => None,
        }
    }
}

/// Parse failure with position information.
#[derive(Debug, thiserror::Error, PartialEq)]
#[error("malformed document at line {line}, column {column} (byte {offset}): {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("document failed validation: {0}")]
    Invalid(#[from] Diagnostics),
}

impl DslDocument {
    /// Canonical text form: sorted keys, compact, shortest round-trip
    /// numbers. Two semantically equal documents serialize identically.
    pub fn to_canonical_json(&self) -> String {
        canon::to_canonical_json(self)
    }

    /// 256-bit content digest of the canonical form.
    pub fn digest(&self) -> String {
        canon::digest256_hex(self.to_canonical_json().as_bytes())
    }

    /// Parses canonical (or any well-formed) document text and
    /// re-validates it under the grammar, restoring typed values.
    pub fn parse_with(grammar: &Grammar, text: &str) -> Result<DslDocument, DocumentError> {
        let raw: serde_json::Value =
            serde_json::from_str(text).map_err(|e| position_error(text, &e))?;
        Ok(validate(grammar, &raw)?)
    }
}

fn position_error(text: &str, err: &serde_json::Error) -> ParseError {
    let (line, column) = (err.line(), err.column());
    let offset = byte_offset(text, line, column);
    ParseError {
        line,
        column,
        offset,
        message: err.to_string(),
    }
}

/// Byte offset of a 1-based (line, column) position.
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut remaining = line - 1;
    let mut offset = 0;
    for (idx, b) in text.bytes().enumerate() {
        if remaining == 0 {
            break;
        }
        if b == b'\n' {
            remaining -= 1;
            offset = idx + 1;
        }
    }
    (offset + column.saturating_sub(1)).min(text.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_typing_prefers_int_for_integral_numbers() {
        assert_eq!(
            DslValue::from_raw(&serde_json::json!(5)),
            Some(DslValue::Int(5))
        );
        assert_eq!(
            DslValue::from_raw(&serde_json::json!(5.5)),
            Some(DslValue::Real(5.5))
        );
    }

    #[test]
    fn truncated_text_reports_byte_offset() {
        let text = "{\"topic_id\": \"x\",\n  \"paradigm\"";
        let err = serde_json::from_str::<serde_json::Value>(text).unwrap_err();
        let pe = position_error(text, &err);
        assert!(pe.offset <= text.len());
        assert!(pe.offset > 0);
        assert_eq!(pe.line, 2);
    }

    #[test]
    fn nested_objects_are_rejected_as_param_values() {
        assert_eq!(DslValue::from_raw(&serde_json::json!({"a": 1})), None);
        assert_eq!(DslValue::from_raw(&serde_json::json!([1, 2])), None);
    }
}
