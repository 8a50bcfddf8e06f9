//! Test-side reference implementations, written independently of the
//! library: traces are vectors of bitmasks, formulas are evaluated at a
//! position rather than on suffix slices, and regexes are matched straight
//! from their text form.

#![allow(dead_code)]

use west_core::{Formula, State, WestRegex};

pub type Bits = Vec<u32>;

/// Evaluates `f` on the suffix of `trace` starting at `pos`.
pub fn eval(f: &Formula, trace: &Bits, pos: usize) -> bool {
    let len = trace.len().saturating_sub(pos);
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Prop(p) => len > 0 && *p < 32 && trace[pos] >> p & 1 == 1,
        Formula::Not(c) => !eval(c, trace, pos),
        Formula::And(l, r) => eval(l, trace, pos) && eval(r, trace, pos),
        Formula::Or(l, r) => eval(l, trace, pos) || eval(r, trace, pos),
        Formula::Future(c, iv) => {
            if len <= iv.lo {
                return false;
            }
            let mut i = iv.lo;
            while i <= iv.hi {
                if eval(c, trace, pos + i) {
                    return true;
                }
                i += 1;
            }
            false
        }
        Formula::Global(c, iv) => {
            if len <= iv.lo {
                return true;
            }
            let mut i = iv.lo;
            while i <= iv.hi {
                if !eval(c, trace, pos + i) {
                    return false;
                }
                i += 1;
            }
            true
        }
        Formula::Until(l, r, iv) => {
            if len <= iv.lo {
                return false;
            }
            let mut guard_ok = true;
            for i in iv.lo..=iv.hi {
                if guard_ok && eval(r, trace, pos + i) {
                    return true;
                }
                guard_ok = guard_ok && eval(l, trace, pos + i);
            }
            false
        }
        Formula::Release(l, r, iv) => {
            if len <= iv.lo {
                return true;
            }
            let mut held = true;
            for i in iv.lo..=iv.hi {
                held = held && eval(r, trace, pos + i);
                if !held {
                    return false;
                }
                if i < iv.hi && eval(l, trace, pos + i) {
                    return true;
                }
            }
            true
        }
    }
}

/// Matches a trace against the regex text of one alternative.
pub fn match_line(line: &str, trace: &Bits) -> bool {
    if line == "*" {
        return true;
    }
    let groups: Vec<&str> = line.split(',').collect();
    if trace.len() < groups.len() {
        return false;
    }
    groups.iter().zip(trace).all(|(g, &state)| {
        g.chars().filter(|c| *c != '_').enumerate().all(|(k, c)| match c {
            '1' => state >> k & 1 == 1,
            '0' => state >> k & 1 == 0,
            _ => true,
        })
    })
}

/// Matches a trace against a whole regex via its text form.
pub fn match_text(regex: &WestRegex, trace: &Bits) -> bool {
    let text = regex.to_string();
    !text.is_empty() && text.lines().any(|line| match_line(line, trace))
}

/// All traces of length `m` over `n` propositions.
pub fn traces(n: usize, m: usize) -> impl Iterator<Item = Bits> {
    let per_state = 1u32 << n;
    let total = (per_state as u64).pow(m as u32);
    (0..total).map(move |mut i| {
        let mut t = vec![0u32; m];
        for slot in t.iter_mut() {
            *slot = (i % per_state as u64) as u32;
            i /= per_state as u64;
        }
        t
    })
}

/// All traces of every length in `0..=max_len`.
pub fn traces_upto(n: usize, max_len: usize) -> impl Iterator<Item = Bits> {
    (0..=max_len).flat_map(move |m| traces(n, m))
}

pub fn to_states(trace: &Bits) -> Vec<State> {
    trace.iter().map(|&s| (0..32).filter(|k| s >> k & 1 == 1).collect()).collect()
}

/// Whether two regexes accept the same traces among all traces up to
/// `max_len` over `n` propositions.
pub fn same_matches(a: &WestRegex, b: &WestRegex, n: usize, max_len: usize) -> bool {
    traces_upto(n, max_len).all(|t| match_text(a, &t) == match_text(b, &t))
}

/// Whether `regex` accepts exactly the traces selected by `want` among all
/// traces of the given lengths.
pub fn accepts_exactly(
    regex: &WestRegex,
    n: usize,
    lengths: impl IntoIterator<Item = usize>,
    want: impl Fn(&Bits) -> bool,
) -> bool {
    lengths
        .into_iter()
        .flat_map(|m| traces(n, m))
        .all(|t| match_text(regex, &t) == want(&t))
}

pub fn bit(trace: &Bits, t: usize, k: usize) -> bool {
    trace.get(t).is_some_and(|s| s >> k & 1 == 1)
}
