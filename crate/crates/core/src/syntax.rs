//! Concrete syntax for formulas and traces.
//!
//! Formula grammar, loosest binding first:
//!
//! ```text
//! or       := and ('|' and)*                      left-associative
//! and      := temporal ('&' temporal)*            left-associative
//! temporal := unary (('U' | 'R') interval temporal)?   right-associative
//! unary    := '!' unary | 'F' interval unary | 'G' interval unary | atom
//! atom     := 'true' | 'false' | 'p' digits | '(' or ')'
//! interval := '[' digits ',' digits ']'
//! ```
//!
//! Whitespace is ignored between tokens. Traces are written as their bit
//! string: one group of `n` characters from `{0,1}` per timestep, groups
//! separated by commas (`_` for a timestep when `n = 0`).

use std::fmt;
use std::str::FromStr;

use crate::error::{EncodeError, ParseError, ParseErrorKind};
use crate::formula::{Formula, Interval, State, Trace};
use crate::regex::{trace_to_bits, TraceRegex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tok {
    True,
    False,
    Prop(usize),
    Num(usize),
    Bang,
    Future,
    Global,
    Until,
    Release,
    And,
    Or,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Eof,
}

impl Tok {
    fn describe(self) -> String {
        match self {
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::Prop(p) => format!("`p{p}`"),
            Tok::Num(v) => format!("number {v}"),
            Tok::Bang => "`!`".into(),
            Tok::Future => "`F`".into(),
            Tok::Global => "`G`".into(),
            Tok::Until => "`U`".into(),
            Tok::Release => "`R`".into(),
            Tok::And => "`&`".into(),
            Tok::Or => "`|`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let number = |start: usize| -> Result<(usize, usize), ParseError> {
        let end = start + bytes[start..].iter().take_while(|b| b.is_ascii_digit()).count();
        text[start..end]
            .parse::<usize>()
            .map(|v| (v, end))
            .map_err(|_| ParseError::at(ParseErrorKind::Syntax, text, start, "number out of range"))
    };
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = |tok| (tok, 1usize);
        let (tok, len) = match c {
            b'!' => single(Tok::Bang),
            b'&' => single(Tok::And),
            b'|' => single(Tok::Or),
            b'(' => single(Tok::LParen),
            b')' => single(Tok::RParen),
            b'[' => single(Tok::LBracket),
            b']' => single(Tok::RBracket),
            b',' => single(Tok::Comma),
            b'F' => single(Tok::Future),
            b'G' => single(Tok::Global),
            b'U' => single(Tok::Until),
            b'R' => single(Tok::Release),
            b'0'..=b'9' => {
                let (v, end) = number(i)?;
                (Tok::Num(v), end - i)
            }
            b'p' if bytes.get(i + 1).is_some_and(u8::is_ascii_digit) => {
                let (v, end) = number(i + 1)?;
                (Tok::Prop(v), end - i)
            }
            _ if text[i..].starts_with("true") => (Tok::True, 4),
            _ if text[i..].starts_with("false") => (Tok::False, 5),
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::at(
                    ParseErrorKind::Syntax,
                    text,
                    i,
                    format!("unexpected character {ch:?}"),
                ));
            }
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

struct Parser<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Tok {
        self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let tok = self.peek();
        if tok != Tok::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: String) -> ParseError {
        ParseError::at(ParseErrorKind::Syntax, self.text, self.offset(), message)
    }

    fn expect(&mut self, want: Tok) -> Result<(), ParseError> {
        if self.peek() == want {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {} but found {}", want.describe(), self.peek().describe())))
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.and()?;
        while self.peek() == Tok::Or {
            self.bump();
            lhs = Formula::or(lhs, self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.temporal()?;
        while self.peek() == Tok::And {
            self.bump();
            lhs = Formula::and(lhs, self.temporal()?);
        }
        Ok(lhs)
    }

    fn temporal(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        match self.peek() {
            Tok::Until => {
                self.bump();
                let iv = self.interval()?;
                Ok(Formula::Until(Box::new(lhs), Box::new(self.temporal()?), iv))
            }
            Tok::Release => {
                self.bump();
                let iv = self.interval()?;
                Ok(Formula::Release(Box::new(lhs), Box::new(self.temporal()?), iv))
            }
            _ => Ok(lhs),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Future => {
                self.bump();
                let iv = self.interval()?;
                Ok(Formula::Future(Box::new(self.unary()?), iv))
            }
            Tok::Global => {
                self.bump();
                let iv = self.interval()?;
                Ok(Formula::Global(Box::new(self.unary()?), iv))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Prop(p) => {
                self.bump();
                Ok(Formula::Prop(p))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.or()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            other => Err(self.error(format!("expected a formula but found {}", other.describe()))),
        }
    }

    fn interval(&mut self) -> Result<Interval, ParseError> {
        let open = self.offset();
        self.expect(Tok::LBracket)?;
        let lo = self.num()?;
        self.expect(Tok::Comma)?;
        let hi = self.num()?;
        self.expect(Tok::RBracket)?;
        if lo > hi {
            return Err(ParseError::at(
                ParseErrorKind::Interval,
                self.text,
                open,
                format!("interval bound a ≤ b violated at {lo}..{hi}"),
            ));
        }
        Ok(Interval::new(lo, hi))
    }

    fn num(&mut self) -> Result<usize, ParseError> {
        match self.peek() {
            Tok::Num(v) => {
                self.bump();
                Ok(v)
            }
            other => Err(self.error(format!("expected a number but found {}", other.describe()))),
        }
    }
}

/// Parses a formula. Intervals with `a > b` are rejected here, so every
/// parsed formula is interval well-defined.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser { text, toks: lex(text)?, pos: 0 };
    let formula = parser.or()?;
    if parser.peek() != Tok::Eof {
        return Err(parser.error(format!("unexpected {} after formula", parser.peek().describe())));
    }
    Ok(formula)
}

fn precedence(formula: &Formula) -> u8 {
    match formula {
        Formula::Or(..) => 1,
        Formula::And(..) => 2,
        Formula::Until(..) | Formula::Release(..) => 3,
        Formula::Not(_) | Formula::Future(..) | Formula::Global(..) => 4,
        Formula::True | Formula::False | Formula::Prop(_) => 5,
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, formula: &Formula, min: u8) -> fmt::Result {
    let wrap = precedence(formula) < min;
    if wrap {
        f.write_str("(")?;
    }
    match formula {
        Formula::True => f.write_str("true")?,
        Formula::False => f.write_str("false")?,
        Formula::Prop(p) => write!(f, "p{p}")?,
        Formula::Not(c) => {
            f.write_str("!")?;
            write_formula(f, c, 4)?;
        }
        Formula::Future(c, iv) => {
            write!(f, "F{iv} ")?;
            write_formula(f, c, 4)?;
        }
        Formula::Global(c, iv) => {
            write!(f, "G{iv} ")?;
            write_formula(f, c, 4)?;
        }
        Formula::And(l, r) => {
            write_formula(f, l, 2)?;
            f.write_str(" & ")?;
            write_formula(f, r, 3)?;
        }
        Formula::Or(l, r) => {
            write_formula(f, l, 1)?;
            f.write_str(" | ")?;
            write_formula(f, r, 2)?;
        }
        Formula::Until(l, r, iv) | Formula::Release(l, r, iv) => {
            let op = if matches!(formula, Formula::Until(..)) { 'U' } else { 'R' };
            write_formula(f, l, 4)?;
            write!(f, " {op}{iv} ")?;
            write_formula(f, r, 3)?;
        }
    }
    if wrap {
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

/// Renders a formula with the fewest parentheses the grammar allows.
pub fn pretty(formula: &Formula) -> String {
    formula.to_string()
}

/// Parses a trace bit string over `n` propositions.
pub fn parse_trace(text: &str, n: usize) -> Result<Trace, ParseError> {
    let body = text.trim();
    let lead = text.len() - text.trim_start().len();
    if body.is_empty() {
        return Ok(Trace::empty());
    }
    let mut states = Vec::new();
    let mut at = lead;
    for group in body.split(',') {
        let err = |kind, off: usize, msg: String| ParseError::at(kind, text, at + off, msg);
        let mut state = State::new();
        if !(n == 0 && group == "_") {
            let mut count = 0;
            for (i, c) in group.char_indices() {
                match c {
                    '1' => {
                        state.insert(count);
                    }
                    '0' => {}
                    _ => {
                        return Err(err(
                            ParseErrorKind::Syntax,
                            i,
                            format!("unexpected character {c:?}; expected 0 or 1"),
                        ))
                    }
                }
                count += 1;
            }
            if count != n {
                return Err(err(
                    ParseErrorKind::Width,
                    0,
                    format!("timestep {} has {count} bits, expected {n}", states.len()),
                ));
            }
        }
        states.push(state);
        at += group.len() + 1;
    }
    Ok(Trace::new(states))
}

/// Renders a trace as its bit string over `n` propositions.
pub fn trace_to_text(trace: &[State], n: usize) -> Result<String, EncodeError> {
    if trace.is_empty() {
        return Ok(String::new());
    }
    Ok(trace_to_bits(trace, n)?.to_string())
}

/// Renders an `S`-free trace regex as a trace bit string.
pub fn concrete_to_text(bits: &TraceRegex) -> String {
    if bits.is_empty() {
        String::new()
    } else {
        bits.to_string()
    }
}
