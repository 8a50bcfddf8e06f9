//! Reference machinery for the acceptance checks, independent of the
//! library's own evaluator and matcher. A trace of length `m` over `n`
//! propositions is packed into a `u64` with proposition `k` at timestep `t`
//! in bit `t * n + k`. A trace regex becomes a pair of masks read off its
//! text form.

#![allow(dead_code)]

use west_core::{Formula, State, WestRegex};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Packed {
    pub bits: u64,
    pub len: usize,
}

/// One alternative as (length, care mask, required values).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Masks {
    pub len: usize,
    pub care: u64,
    pub value: u64,
}

pub fn masks_of(regex: &WestRegex, n: usize) -> Vec<Masks> {
    let text = regex.to_string();
    text.lines()
        .filter(|l| !l.is_empty())
        .map(|line| {
            if line == "*" {
                return Masks { len: 0, care: 0, value: 0 };
            }
            let groups: Vec<&str> = line.split(',').collect();
            let mut care = 0u64;
            let mut value = 0u64;
            for (t, g) in groups.iter().enumerate() {
                let g = if *g == "_" { "" } else { g };
                assert_eq!(g.len(), n, "state width in {line:?}");
                for (k, c) in g.chars().enumerate() {
                    let b = 1u64 << (t * n + k);
                    match c {
                        '1' => {
                            care |= b;
                            value |= b;
                        }
                        '0' => care |= b,
                        'S' => {}
                        other => panic!("unexpected {other:?} in regex text"),
                    }
                }
            }
            Masks { len: groups.len(), care, value }
        })
        .collect()
}

pub fn matches_masks(alts: &[Masks], trace: Packed) -> bool {
    alts.iter().any(|a| trace.len >= a.len && trace.bits & a.care == a.value)
}

/// Every packed trace of length `m` over `n` propositions.
pub fn traces(n: usize, m: usize) -> impl Iterator<Item = Packed> {
    (0..1u64 << (n * m)).map(move |bits| Packed { bits, len: m })
}

pub fn traces_between(n: usize, lo: usize, hi: usize) -> impl Iterator<Item = Packed> {
    (lo..=hi).flat_map(move |m| traces(n, m))
}

pub fn unpack(trace: Packed, n: usize) -> Vec<State> {
    (0..trace.len).map(|t| (0..n).filter(|k| trace.bits >> (t * n + k) & 1 == 1).collect()).collect()
}

/// Drops the first `t` states.
pub fn drop_states(trace: Packed, n: usize, t: usize) -> Packed {
    if t >= trace.len {
        Packed { bits: 0, len: 0 }
    } else {
        Packed { bits: trace.bits >> (t * n), len: trace.len - t }
    }
}

fn holds(trace: Packed, n: usize, pos: usize, p: usize) -> bool {
    pos < trace.len && trace.bits >> (pos * n + p) & 1 == 1
}

/// The finite-trace semantics, evaluated at position `pos`.
pub fn eval(f: &Formula, trace: Packed, n: usize, pos: usize) -> bool {
    let remaining = trace.len.saturating_sub(pos);
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Prop(p) => holds(trace, n, pos, *p),
        Formula::Not(c) => !eval(c, trace, n, pos),
        Formula::And(l, r) => eval(l, trace, n, pos) && eval(r, trace, n, pos),
        Formula::Or(l, r) => eval(l, trace, n, pos) || eval(r, trace, n, pos),
        Formula::Future(c, iv) => remaining > iv.lo && (iv.lo..=iv.hi).any(|i| eval(c, trace, n, pos + i)),
        Formula::Global(c, iv) => remaining <= iv.lo || (iv.lo..=iv.hi).all(|i| eval(c, trace, n, pos + i)),
        Formula::Until(l, r, iv) => {
            remaining > iv.lo
                && (iv.lo..=iv.hi).any(|i| {
                    eval(r, trace, n, pos + i) && (iv.lo..i).all(|j| eval(l, trace, n, pos + j))
                })
        }
        Formula::Release(l, r, iv) => {
            remaining <= iv.lo
                || (iv.lo..=iv.hi).all(|i| eval(r, trace, n, pos + i))
                || (iv.lo..iv.hi).any(|j| {
                    eval(l, trace, n, pos + j) && (iv.lo..=j).all(|k| eval(r, trace, n, pos + k))
                })
        }
    }
}
