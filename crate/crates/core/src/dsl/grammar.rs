//! Grammar schemas for topic-specific methodology documents.
//!
//! A grammar is pure data: paradigms, parameter schemas, and named
//! cross-parameter rules, loadable from a JSON file. New research topics
//! need a new grammar file plus an interpreter entry, not engine changes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// Value kind a parameter accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    NaturalLanguageText,
    NaturalLanguageList,
    Integer,
    Real,
    Flag,
    Enum,
    CodeFragment,
}

/// Optional bounds and allowed-value constraints for one parameter.
///
/// Natural-language values are opaque to the validator apart from length
/// bounds; the defaults (1..=8192 characters) apply when no explicit
/// text bounds are given.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Constraints {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_int: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_int: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_real: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_real: Option<f64>,
    /// Allowed tokens for `Enum` parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub allowed: Option<Vec<String>>,
    /// List length bounds for `NaturalLanguageList`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_items: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_items: Option<usize>,
    /// Text length bounds (characters) for text-like kinds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_chars: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_chars: Option<usize>,
}

/// Default character bounds for natural-language and code text.
pub const DEFAULT_MIN_CHARS: usize = 1;
pub const DEFAULT_MAX_CHARS: usize = 8192;

impl Constraints {
    pub fn text_bounds(&self) -> (usize, usize) {
        (
            self.min_chars.unwrap_or(DEFAULT_MIN_CHARS),
            self.max_chars.unwrap_or(DEFAULT_MAX_CHARS),
        )
    }
}

/// Schema for a single grammar parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSchema {
    pub name: String,
    pub kind: ParamKind,
    #[serde(default)]
    pub constraints: Constraints,
    #[serde(default = "default_required")]
    pub required: bool,
}

fn default_required() -> bool {
    true
}

impl ParamSchema {
    pub fn new(name: &str, kind: ParamKind) -> Self {
        Self {
            name: name.to_string(),
            kind,
            constraints: Constraints::default(),
            required: true,
        }
    }

    pub fn optional(mut self) -> Self {
        self.required = false;
        self
    }

    pub fn with(mut self, constraints: Constraints) -> Self {
        self.constraints = constraints;
        self
    }
}

/// A named cross-parameter rule; the kind is interpreted by the
/// validator, the name and message surface in diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossRule {
    pub name: String,
    /// Paradigm the rule applies to; `None` means any paradigm that has
    /// all the referenced parameters.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paradigm: Option<String>,
    pub kind: CrossRuleKind,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum CrossRuleKind {
    /// The integer parameter must not exceed the list parameter's length.
    IntAtMostListLen { int_param: String, list_param: String },
}

impl CrossRuleKind {
    /// Parameter names the rule reads.
    pub fn params(&self) -> Vec<&str> {
        match self {
            CrossRuleKind::IntAtMostListLen { int_param, list_param } => {
                vec![int_param, list_param]
            }
        }
    }
}

/// A topic grammar: paradigms of parameter schemas plus cross rules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grammar {
    pub topic_id: String,
    pub version: u32,
    pub paradigms: BTreeMap<String, Vec<ParamSchema>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cross_rules: Vec<CrossRule>,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GrammarError {
    #[error("topic '{0}' is already registered")]
    DuplicateTopic(String),
    #[error("malformed grammar schema: {0}")]
    Malformed(String),
    #[error("topic '{0}' is not registered")]
    UnknownTopic(String),
}

impl Grammar {
    /// Checks the grammar's own invariants.
    pub fn check(&self) -> Result<(), GrammarError> {
        if self.topic_id.is_empty() {
            return Err(GrammarError::Malformed("topic_id is empty".into()));
        }
        if self.paradigms.is_empty() {
            return Err(GrammarError::Malformed("grammar has no paradigms".into()));
        }
        for (paradigm, schemas) in &self.paradigms {
            if schemas.is_empty() {
                return Err(GrammarError::Malformed(format!(
                    "paradigm '{paradigm}' has no parameters"
                )));
            }
            let mut seen = BTreeSet::new();
            for schema in schemas {
                if !seen.insert(schema.name.as_str()) {
                    return Err(GrammarError::Malformed(format!(
                        "duplicate parameter '{}' in paradigm '{paradigm}'",
                        schema.name
                    )));
                }
                check_constraints(paradigm, schema)?;
            }
        }
        for rule in &self.cross_rules {
            let applies_somewhere = self.paradigms.iter().any(|(name, schemas)| {
                rule.paradigm.as_deref().is_none_or(|p| p == name)
                    && rule
                        .kind
                        .params()
                        .iter()
                        .all(|p| schemas.iter().any(|s| s.name == *p))
            });
            if !applies_somewhere {
                return Err(GrammarError::Malformed(format!(
                    "cross rule '{}' references parameters missing from every paradigm",
                    rule.name
                )));
            }
        }
        Ok(())
    }

    pub fn paradigm(&self, name: &str) -> Option<&[ParamSchema]> {
        self.paradigms.get(name).map(Vec::as_slice)
    }
}

fn check_constraints(paradigm: &str, schema: &ParamSchema) -> Result<(), GrammarError> {
    let c = &schema.constraints;
    let bad = |what: &str| {
        Err(GrammarError::Malformed(format!(
            "parameter '{}' in paradigm '{paradigm}': {what}",
            schema.name
        )))
    };
    if let (Some(lo), Some(hi)) = (c.min_int, c.max_int) {
        if lo > hi {
            return bad("integer bounds are not well-ordered");
        }
    }
    if let (Some(lo), Some(hi)) = (c.min_real, c.max_real) {
        if lo > hi {
            return bad("real bounds are not well-ordered");
        }
    }
    if let (Some(lo), Some(hi)) = (c.min_items, c.max_items) {
        if lo > hi {
            return bad("list length bounds are not well-ordered");
        }
    }
    if let (Some(lo), Some(hi)) = (c.min_chars, c.max_chars) {
        if lo > hi {
            return bad("text length bounds are not well-ordered");
        }
    }
    if schema.kind == ParamKind::Enum {
        match &c.allowed {
            Some(values) if !values.is_empty() => {}
            _ => return bad("enum parameter must list at least one allowed value"),
        }
    }
    Ok(())
}

/// Registry of topic grammars, immutable per topic once registered.
#[derive(Debug, Default)]
pub struct GrammarRegistry {
    grammars: BTreeMap<String, Arc<Grammar>>,
}

impl GrammarRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers a grammar, returning the shared handle.
    pub fn register(&mut self, grammar: Grammar) -> Result<Arc<Grammar>, GrammarError> {
        grammar.check()?;
        if self.grammars.contains_key(&grammar.topic_id) {
            return Err(GrammarError::DuplicateTopic(grammar.topic_id));
        }
        let handle = Arc::new(grammar);
        self.grammars.insert(handle.topic_id.clone(), handle.clone());
        Ok(handle)
    }

    pub fn get(&self, topic_id: &str) -> Result<&Arc<Grammar>, GrammarError> {
        self.grammars
            .get(topic_id)
            .ok_or_else(|| GrammarError::UnknownTopic(topic_id.to_string()))
    }

    pub fn topics(&self) -> impl Iterator<Item = &str> {
        self.grammars.keys().map(String::as_str)
    }
}
