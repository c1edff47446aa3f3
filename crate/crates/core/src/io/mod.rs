//! Textual formats: the bracketed attribute-value layout shared by voxeme,
//! voxicon and scene files, logical-form terms, and trace records.

pub mod avm;
pub mod scene;
pub mod term;
pub mod trace;
pub mod voxeme;

use thiserror::Error;

use crate::model::UnknownValue;

pub use scene::{parse_scene, serialize_scene};
pub use term::{parse_logical_form, Atom, Term};
pub use trace::serialize_trace;
pub use voxeme::{locate, parse_voxeme, parse_voxicon, serialize_voxeme, serialize_voxicon};

/// A diagnostic positioned at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("unknown field `{0}`")]
    UnknownField(String),
    #[error("missing field `{0}`")]
    MissingField(String),
    #[error("duplicate field `{0}`")]
    DuplicateField(String),
    #[error(transparent)]
    UnknownValue(#[from] UnknownValue),
    #[error("duplicate entry: {kind} `{pred}` already defined by entry {first}")]
    DuplicateEntry {
        pred: String,
        kind: String,
        first: usize,
    },
    #[error("{0}")]
    Invalid(String),
}

impl ParseErrorKind {
    /// Lexical or bracket-structure failures, as opposed to well-formed text
    /// that violates the schema.
    pub fn is_syntax(&self) -> bool {
        matches!(self, ParseErrorKind::Syntax(_))
    }
}

impl ParseError {
    pub fn new(line: usize, column: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, column, kind }
    }

    pub fn syntax(line: usize, column: usize, msg: impl Into<String>) -> Self {
        ParseError::new(line, column, ParseErrorKind::Syntax(msg.into()))
    }

    pub fn invalid(line: usize, column: usize, msg: impl Into<String>) -> Self {
        ParseError::new(line, column, ParseErrorKind::Invalid(msg.into()))
    }

    /// Re-anchors an error from a single-line sub-parse at `(line, column)`.
    pub(crate) fn shifted(mut self, line: usize, column: usize) -> Self {
        if self.line == 1 {
            self.column += column - 1;
        }
        self.line += line - 1;
        self
    }
}

/// Formats a real with at most 9 significant digits and no trailing zeros.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        // -0 and non-finite values never reach the formats; keep output stable
        return if x.is_finite() {
            "0".into()
        } else {
            x.to_string()
        };
    }
    let rounded: f64 = format!("{x:.8e}").parse().unwrap_or(x);
    if rounded == 0.0 {
        "0".into()
    } else {
        rounded.to_string()
    }
}
