//! Trace regular expressions.
//!
//! The model is a four-level tower: a [`WestBit`] constrains one proposition
//! at one timestep, a [`StateRegex`] constrains one timestep, a [`TraceRegex`]
//! constrains a prefix of a trace and a [`WestRegex`] is a finite alternation
//! of trace regexes.
//!
//! Text form: bits are `0`, `1` and `S`; timesteps are separated by `,` and
//! alternatives by newlines. The empty text is the regex with no alternatives
//! (it matches nothing). Two degenerate values get their own tokens: a
//! timestep of width zero is written `_`, and a trace regex with no timesteps
//! (which matches every trace) is written `*`.

use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use crate::error::{EncodeError, ParseError, ParseErrorKind};
use crate::formula::State;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WestBit {
    Zero,
    One,
    /// Either value.
    S,
}

impl WestBit {
    pub fn to_char(self) -> char {
        match self {
            WestBit::Zero => '0',
            WestBit::One => '1',
            WestBit::S => 'S',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '0' => Some(WestBit::Zero),
            '1' => Some(WestBit::One),
            'S' => Some(WestBit::S),
            _ => None,
        }
    }

    /// Whether a proposition with truth value `value` is allowed by this bit.
    pub fn admits(self, value: bool) -> bool {
        match self {
            WestBit::Zero => !value,
            WestBit::One => value,
            WestBit::S => true,
        }
    }
}

/// Constraint on one timestep, one bit per proposition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateRegex(Vec<WestBit>);

impl StateRegex {
    pub fn new(bits: Vec<WestBit>) -> Self {
        StateRegex(bits)
    }

    /// The all-`S` state of width `width`.
    pub fn arbitrary(width: usize) -> Self {
        StateRegex(vec![WestBit::S; width])
    }

    pub fn bits(&self) -> &[WestBit] {
        &self.0
    }

    pub fn bits_mut(&mut self) -> &mut [WestBit] {
        &mut self.0
    }

    pub fn into_bits(self) -> Vec<WestBit> {
        self.0
    }

    /// A `One` bit requires its proposition to hold, a `Zero` bit requires it
    /// not to hold, `S` allows both.
    pub fn matches(&self, state: &State) -> bool {
        self.0.iter().enumerate().all(|(i, bit)| bit.admits(state.contains(&i)))
    }
}

impl Deref for StateRegex {
    type Target = [WestBit];

    fn deref(&self) -> &[WestBit] {
        &self.0
    }
}

impl From<Vec<WestBit>> for StateRegex {
    fn from(bits: Vec<WestBit>) -> Self {
        StateRegex(bits)
    }
}

/// Constraint on the first `len()` timesteps of a trace.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TraceRegex(Vec<StateRegex>);

impl TraceRegex {
    pub fn new(states: Vec<StateRegex>) -> Self {
        TraceRegex(states)
    }

    /// `len` arbitrary states of width `width`.
    pub fn arbitrary(width: usize, len: usize) -> Self {
        TraceRegex(vec![StateRegex::arbitrary(width); len])
    }

    pub fn states(&self) -> &[StateRegex] {
        &self.0
    }

    pub fn states_mut(&mut self) -> &mut Vec<StateRegex> {
        &mut self.0
    }

    pub fn into_states(self) -> Vec<StateRegex> {
        self.0
    }

    /// Every state regex has width `width`.
    pub fn of_vars(&self, width: usize) -> bool {
        self.0.iter().all(|s| s.len() == width)
    }

    /// The trace must be at least as long as the regex and every timestep
    /// must match.
    pub fn matches(&self, trace: &[State]) -> bool {
        trace.len() >= self.0.len() && self.0.iter().zip(trace).all(|(s, st)| s.matches(st))
    }

    /// Number of `S` bits.
    pub fn free_bits(&self) -> usize {
        self.0.iter().flat_map(|s| s.iter()).filter(|b| **b == WestBit::S).count()
    }

    /// Number of `S` bits, or `None` once the count passes `limit`.
    pub(crate) fn free_bits_within(&self, limit: usize) -> Option<usize> {
        let mut count = 0;
        for bit in self.0.iter().flat_map(|s| s.iter()) {
            if *bit == WestBit::S {
                count += 1;
                if count > limit {
                    return None;
                }
            }
        }
        Some(count)
    }
}

impl Deref for TraceRegex {
    type Target = [StateRegex];

    fn deref(&self) -> &[StateRegex] {
        &self.0
    }
}

impl From<Vec<StateRegex>> for TraceRegex {
    fn from(states: Vec<StateRegex>) -> Self {
        TraceRegex(states)
    }
}

/// A finite alternation of trace regexes. Duplicates are allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WestRegex(Vec<TraceRegex>);

impl WestRegex {
    pub fn new(alternatives: Vec<TraceRegex>) -> Self {
        WestRegex(alternatives)
    }

    /// The alternation with no members; it matches no trace.
    pub fn empty() -> Self {
        WestRegex(Vec::new())
    }

    /// A single empty trace regex; it matches every trace.
    pub fn universal() -> Self {
        WestRegex(vec![TraceRegex::default()])
    }

    pub fn alternatives(&self) -> &[TraceRegex] {
        &self.0
    }

    pub fn alternatives_mut(&mut self) -> &mut Vec<TraceRegex> {
        &mut self.0
    }

    pub fn into_alternatives(self) -> Vec<TraceRegex> {
        self.0
    }

    pub fn of_vars(&self, width: usize) -> bool {
        self.0.iter().all(|r| r.of_vars(width))
    }

    pub fn matches(&self, trace: &[State]) -> bool {
        self.0.iter().any(|r| r.matches(trace))
    }

    /// Length of the longest alternative, 0 when there are none.
    pub fn max_len(&self) -> usize {
        self.0.iter().map(|r| r.len()).max().unwrap_or(0)
    }
}

impl Deref for WestRegex {
    type Target = [TraceRegex];

    fn deref(&self) -> &[TraceRegex] {
        &self.0
    }
}

impl From<Vec<TraceRegex>> for WestRegex {
    fn from(alternatives: Vec<TraceRegex>) -> Self {
        WestRegex(alternatives)
    }
}

impl FromIterator<TraceRegex> for WestRegex {
    fn from_iter<I: IntoIterator<Item = TraceRegex>>(iter: I) -> Self {
        WestRegex(iter.into_iter().collect())
    }
}

/// `trace_regex_of_vars`: every state regex of `r` has width `n`.
pub fn trace_regex_of_vars(r: &TraceRegex, n: usize) -> bool {
    r.of_vars(n)
}

/// `west_regex_of_vars`: every alternative of `regex` is well formed for `n`.
pub fn west_regex_of_vars(regex: &WestRegex, n: usize) -> bool {
    regex.of_vars(n)
}

pub fn match_timestep(state: &State, s: &StateRegex) -> bool {
    s.matches(state)
}

pub fn match_regex(trace: &[State], r: &TraceRegex) -> bool {
    r.matches(trace)
}

pub fn matches(trace: &[State], regex: &WestRegex) -> bool {
    regex.matches(trace)
}

/// The bit string of a trace over `n` propositions, as an `S`-free trace regex.
pub fn trace_to_bits(trace: &[State], n: usize) -> Result<TraceRegex, EncodeError> {
    trace
        .iter()
        .enumerate()
        .map(|(t, state)| {
            if let Some(&prop) = state.iter().find(|&&p| p >= n) {
                return Err(EncodeError { timestep: t, prop, width: n });
            }
            Ok(StateRegex((0..n)
                .map(|k| if state.contains(&k) { WestBit::One } else { WestBit::Zero })
                .collect()))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(TraceRegex)
}

/// Reads an `S`-free trace regex back as a trace.
pub fn bits_to_trace(r: &TraceRegex) -> Option<Vec<State>> {
    r.iter()
        .map(|s| {
            let mut state = State::new();
            for (k, bit) in s.iter().enumerate() {
                match bit {
                    WestBit::One => {
                        state.insert(k);
                    }
                    WestBit::Zero => {}
                    WestBit::S => return None,
                }
            }
            Some(state)
        })
        .collect()
}

impl fmt::Display for StateRegex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("_");
        }
        self.0.iter().try_for_each(|b| write!(f, "{}", b.to_char()))
    }
}

impl fmt::Display for TraceRegex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("*");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Display for WestRegex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Renders a WEST regex in the text format.
pub fn regex_to_text(regex: &WestRegex) -> String {
    regex.to_string()
}

/// Parses the text format. A single trailing newline is tolerated.
pub fn text_to_regex(text: &str) -> Result<WestRegex, ParseError> {
    let body = text
        .strip_suffix("\r\n")
        .or_else(|| text.strip_suffix('\n'))
        .unwrap_or(text);
    if body.is_empty() {
        return Ok(WestRegex::empty());
    }
    let mut alternatives = Vec::new();
    let mut offset = 0;
    for raw in body.split('\n') {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        alternatives.push(parse_trace_regex_line(text, offset, line)?);
        offset += raw.len() + 1;
    }
    Ok(WestRegex(alternatives))
}

/// Parses one line of the text format as a trace regex.
pub fn text_to_trace_regex(line: &str) -> Result<TraceRegex, ParseError> {
    if let Some(pos) = line.find('\n') {
        return Err(ParseError::at(ParseErrorKind::Syntax, line, pos, "expected a single trace regex line"));
    }
    parse_trace_regex_line(line, 0, line)
}

fn parse_trace_regex_line(full: &str, start: usize, line: &str) -> Result<TraceRegex, ParseError> {
    let err = |kind, at: usize, msg: String| ParseError::at(kind, full, start + at, msg);
    if line.is_empty() {
        return Err(err(ParseErrorKind::Syntax, 0, "empty line; write `*` for the empty trace regex".into()));
    }
    if line == "*" {
        return Ok(TraceRegex::default());
    }
    let mut states = Vec::new();
    let mut width = None;
    let mut at = 0;
    for group in line.split(',') {
        let state = if group == "_" {
            StateRegex::default()
        } else {
            if group.is_empty() {
                return Err(err(ParseErrorKind::Syntax, at, "empty timestep; write `_` for a width-0 state".into()));
            }
            let mut bits = Vec::with_capacity(group.len());
            for (i, c) in group.char_indices() {
                match WestBit::from_char(c) {
                    Some(b) => bits.push(b),
                    None => {
                        return Err(err(
                            ParseErrorKind::Syntax,
                            at + i,
                            format!("unexpected character {c:?}; expected 0, 1 or S"),
                        ))
                    }
                }
            }
            StateRegex(bits)
        };
        match width {
            None => width = Some(state.len()),
            Some(w) if w != state.len() => {
                return Err(err(
                    ParseErrorKind::Width,
                    at,
                    format!("timestep has width {} but earlier timesteps have width {w}", state.len()),
                ))
            }
            Some(_) => {}
        }
        states.push(state);
        at += group.len() + 1;
    }
    Ok(TraceRegex(states))
}

impl FromStr for WestRegex {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text_to_regex(s)
    }
}

impl FromStr for TraceRegex {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text_to_trace_regex(s)
    }
}
