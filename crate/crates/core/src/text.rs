//! Line-oriented tokenizing shared by the `.mta`, `.dag` and `.ac` readers.

use std::fmt;

use thiserror::Error;

/// A malformed input position, 1-based.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl<'a> Token<'a> {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }

    pub fn parse_usize(&self) -> Result<usize, ParseError> {
        self.text.parse().map_err(|_| self.error(format!("expected a non-negative integer, found `{}`", self.text)))
    }
}

/// One non-blank input line split on whitespace; `#` starts a comment.
#[derive(Clone, Debug)]
pub struct Line<'a> {
    pub number: usize,
    pub tokens: Vec<Token<'a>>,
    /// Column just past the last token, for "missing argument" diagnostics.
    end_column: usize,
}

impl<'a> Line<'a> {
    pub fn keyword(&self) -> &'a str {
        self.tokens[0].text
    }

    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.number, column: 1, message: message.into() }
    }

    /// The argument at `i` (the keyword is argument 0).
    pub fn arg(&self, i: usize, what: &str) -> Result<Token<'a>, ParseError> {
        self.tokens.get(i).copied().ok_or_else(|| ParseError {
            line: self.number,
            column: self.end_column,
            message: format!("missing {what}"),
        })
    }

    pub fn expect_len(&self, n: usize) -> Result<(), ParseError> {
        match self.tokens.get(n) {
            Some(extra) => Err(extra.error(format!("unexpected `{}`", extra.text))),
            None if self.tokens.len() < n => Err(ParseError {
                line: self.number,
                column: self.end_column,
                message: format!("`{}` takes {} argument(s)", self.keyword(), n - 1),
            }),
            None => Ok(()),
        }
    }
}

pub fn lines(input: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (i, raw) in input.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token { text: &content[s..pos], line: i + 1, column: content[..s].chars().count() + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if !tokens.is_empty() {
            out.push(Line { number: i + 1, tokens, end_column: content.trim_end().chars().count() + 1 });
        }
    }
    out
}

/// Consumes lines from a reader, returning a positioned error at end of input.
pub struct LineCursor<'a> {
    lines: Vec<Line<'a>>,
    next: usize,
    last_line: usize,
}

impl<'a> LineCursor<'a> {
    pub fn new(input: &'a str) -> LineCursor<'a> {
        LineCursor { lines: lines(input), next: 0, last_line: input.lines().count().max(1) }
    }

    pub fn peek(&self) -> Option<&Line<'a>> {
        self.lines.get(self.next)
    }

    pub fn next_line(&mut self, what: &str) -> Result<Line<'a>, ParseError> {
        match self.lines.get(self.next) {
            Some(line) => {
                self.next += 1;
                Ok(line.clone())
            }
            None => Err(ParseError { line: self.last_line, column: 1, message: format!("unexpected end of input, expected {what}") }),
        }
    }

    pub fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            Some(line) => Err(line.tokens[0].error(format!("unexpected `{}` after end of document", line.keyword()))),
            None => Ok(()),
        }
    }
}
