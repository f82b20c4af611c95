//! Concrete syntax for formulas (`.bpi`) and models (`.bpm`).

mod formula;
mod model;

use std::fmt;

use thiserror::Error;

pub use formula::{parse_formula, render_formula};
pub use model::{parse_model, render_model};

/// A syntax or declaration error with a 1-based position into the input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Option<String>,
}

impl ParseError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            message: message.into(),
            expected: None,
        }
    }

    pub(crate) fn expecting(mut self, what: impl Into<String>) -> Self {
        self.expected = Some(what.into());
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if let Some(expected) = &self.expected {
            write!(f, " (expected {expected})")?;
        }
        Ok(())
    }
}

pub(crate) const KEYWORDS: [&str; 7] = ["true", "AX", "EX", "EF", "EG", "AG", "AF"];

/// `[A-Za-z_][A-Za-z0-9_]*` and not a reserved word.
pub fn is_symbol(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && !KEYWORDS.contains(&name)
}
