use std::fmt;

use thiserror::Error;

use crate::guard::Interrupted;

/// What went wrong while reading one of the text formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    /// Unexpected character, token or end of input.
    Syntax,
    /// An interval `[a,b]` with `a > b`.
    Interval,
    /// Timesteps of different widths, or a width that disagrees with the expected one.
    Width,
}

/// A diagnostic for formula, trace or regex text, positioned at a 1-based
/// line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn at(kind: ParseErrorKind, text: &str, offset: usize, message: impl Into<String>) -> Self {
        let before = &text[..offset.min(text.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError { kind, line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// Errors from the regex-producing entry points.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WestError {
    #[error("interval bound a <= b violated in `{subformula}`")]
    IllDefinedInterval { subformula: String },
    #[error("formula is not in negation normal form")]
    NotNnf,
    #[error("formula uses {needed} propositions but only {available} were requested")]
    TooFewVars { needed: usize, available: usize },
    #[error("trace regex of length {len} does not fit in padded length {target}")]
    PadTooShort { len: usize, target: usize },
    #[error(transparent)]
    Interrupted(#[from] Interrupted),
}

/// A proposition index outside the width used for encoding.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("proposition p{prop} at timestep {timestep} does not fit in width {width}")]
pub struct EncodeError {
    pub timestep: usize,
    pub prop: usize,
    pub width: usize,
}
