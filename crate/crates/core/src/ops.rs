//! Intersection, union, shifting and simplification of WEST regexes.
//!
//! All operators take the proposition count `n` explicitly. Each preserves
//! the set of traces it is meant to describe:
//!
//! * `and_regex(L1, L2, n)` matches exactly the traces both inputs match,
//! * `or_regex(L1, L2)` matches the traces either input matches,
//! * `shift(L, n, t)` matches `π` iff `L` matches `π` with `t` states dropped
//!   (for `π` long enough),
//! * `west_simp(L, n)` matches exactly what `L` matches.

pub use crate::guard::{Guard, Interrupted};
use crate::par;
use crate::regex::{StateRegex, TraceRegex, WestBit, WestRegex};

/// Intersection of two bits; `None` when they contradict.
pub fn and_bitwise(a: WestBit, b: WestBit) -> Option<WestBit> {
    match (a, b) {
        (WestBit::S, other) | (other, WestBit::S) => Some(other),
        (x, y) if x == y => Some(x),
        _ => None,
    }
}

/// Pointwise intersection of two state regexes; `None` when their widths
/// differ or some bit pair contradicts.
pub fn and_state(a: &StateRegex, b: &StateRegex) -> Option<StateRegex> {
    if a.len() != b.len() {
        return None;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| and_bitwise(*x, *y))
        .collect::<Option<Vec<_>>>()
        .map(StateRegex::new)
}

/// Timestep-wise intersection. The shorter input is treated as if padded
/// with arbitrary states of width `n`.
pub fn and_trace(a: &TraceRegex, b: &TraceRegex, n: usize) -> Option<TraceRegex> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut states = Vec::with_capacity(long.len());
    for (t, s) in long.iter().enumerate() {
        let joined = match short.get(t) {
            Some(other) => and_state(s, other)?,
            // Intersecting with the arbitrary state keeps `s` iff its width is n.
            None if s.len() == n => s.clone(),
            None => return None,
        };
        states.push(joined);
    }
    Some(TraceRegex::new(states))
}

/// Intersection of two alternations: every non-contradictory pairwise
/// intersection, in `lhs`-major order.
pub fn and_regex(lhs: &WestRegex, rhs: &WestRegex, n: usize) -> WestRegex {
    and_regex_guarded(lhs, rhs, n, &Guard::unlimited()).expect("unlimited guard")
}

pub fn and_regex_guarded(
    lhs: &WestRegex,
    rhs: &WestRegex,
    n: usize,
    guard: &Guard,
) -> Result<WestRegex, Interrupted> {
    let row = |r1: &TraceRegex| -> Result<Vec<TraceRegex>, Interrupted> {
        guard.check()?;
        Ok(rhs.iter().filter_map(|r2| and_trace(r1, r2, n)).collect())
    };
    let rows = if lhs.len().saturating_mul(rhs.len()) >= 4096 {
        par::try_map(lhs.alternatives(), row)?
    } else {
        lhs.iter().map(row).collect::<Result<Vec<_>, _>>()?
    };
    let out: WestRegex = rows.into_iter().flatten().collect();
    guard.check_size(out.len())?;
    Ok(out)
}

/// Union of two alternations: `lhs` followed by `rhs`.
pub fn or_regex(lhs: &WestRegex, rhs: &WestRegex) -> WestRegex {
    lhs.iter().chain(rhs.iter()).cloned().collect()
}

/// `t` arbitrary states of width `n`.
pub fn arbitrary_trace(n: usize, t: usize) -> TraceRegex {
    TraceRegex::arbitrary(n, t)
}

/// Prefixes every alternative with `t` arbitrary states, moving its
/// constraints `t` timesteps later.
pub fn shift(regex: &WestRegex, n: usize, t: usize) -> WestRegex {
    regex
        .iter()
        .map(|r| {
            let mut states = Vec::with_capacity(t + r.len());
            states.resize(t, StateRegex::arbitrary(n));
            states.extend(r.iter().cloned());
            TraceRegex::new(states)
        })
        .collect()
}

/// A pair of alternatives that can be fused into one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeCandidate {
    pub i: usize,
    pub j: usize,
    /// `(timestep, proposition)` where the two differ, or `None` if identical.
    pub pos: Option<(usize, usize)>,
}

/// Where two trace regexes differ, if they can be fused: `Some(None)` when
/// identical, `Some(Some(pos))` when they have the same shape and differ at
/// exactly one coordinate, `None` otherwise.
pub fn merge_position(a: &TraceRegex, b: &TraceRegex) -> Option<Option<(usize, usize)>> {
    if a.len() != b.len() {
        return None;
    }
    let mut found = None;
    for (t, (sa, sb)) in a.iter().zip(b.iter()).enumerate() {
        if sa.len() != sb.len() {
            return None;
        }
        for (k, (x, y)) in sa.iter().zip(sb.iter()).enumerate() {
            if x != y {
                if found.is_some() {
                    return None;
                }
                found = Some((t, k));
            }
        }
    }
    Some(found)
}

/// The first mergeable pair in lexicographic `(i, j)` order.
pub fn first_merge_candidate(regex: &WestRegex) -> Option<MergeCandidate> {
    (0..regex.len()).find_map(|i| {
        (i + 1..regex.len())
            .find_map(|j| merge_position(&regex[i], &regex[j]).map(|pos| MergeCandidate { i, j, pos }))
    })
}

/// Fuses alternative `j` into alternative `i` (`i < j`): the merged regex
/// carries `S` at the differing coordinate and `j` is removed.
fn apply_merge(alts: &mut Vec<TraceRegex>, i: usize, j: usize, pos: Option<(usize, usize)>) {
    debug_assert!(i < j);
    if let Some((t, k)) = pos {
        alts[i].states_mut()[t].bits_mut()[k] = WestBit::S;
    }
    alts.remove(j);
}

/// Greedy simplification: repeatedly fuses the lexicographically first pair
/// of alternatives that are identical or differ at a single coordinate,
/// until no pair remains. The matched trace set is unchanged and the
/// alternative count never grows.
pub fn west_simp(regex: WestRegex, n: usize) -> WestRegex {
    west_simp_guarded(regex, n, &Guard::unlimited()).expect("unlimited guard")
}

/// [`west_simp`] with cooperative interruption.
///
/// Produces exactly the result of rescanning from `(0, 1)` after every
/// merge, without paying for the rescan: after fusing `(i, j)`, only pairs
/// `(k, i)` with `k < i` can have become mergeable ahead of `i`, and the
/// row of `i` itself must be rescanned because alternative `i` changed.
pub fn west_simp_guarded(regex: WestRegex, _n: usize, guard: &Guard) -> Result<WestRegex, Interrupted> {
    let mut alts = regex.into_alternatives();
    let mut i = 0;
    while i < alts.len() {
        guard.check()?;
        let mut j = i + 1;
        while j < alts.len() {
            let Some(pos) = merge_position(&alts[i], &alts[j]) else {
                j += 1;
                continue;
            };
            let before = alts.len();
            apply_merge(&mut alts, i, j, pos);
            let mut cur = i;
            while let Some((k, pos)) =
                (0..cur).find_map(|k| merge_position(&alts[k], &alts[cur]).map(|p| (k, p)))
            {
                apply_merge(&mut alts, k, cur, pos);
                cur = k;
            }
            debug_assert!(alts.len() < before, "simp must shrink the alternation");
            guard.check()?;
            i = cur;
            j = i + 1;
        }
        i += 1;
    }
    Ok(WestRegex::new(alts))
}

pub fn and_simp(lhs: &WestRegex, rhs: &WestRegex, n: usize) -> WestRegex {
    and_simp_guarded(lhs, rhs, n, &Guard::unlimited()).expect("unlimited guard")
}

pub fn and_simp_guarded(
    lhs: &WestRegex,
    rhs: &WestRegex,
    n: usize,
    guard: &Guard,
) -> Result<WestRegex, Interrupted> {
    west_simp_guarded(and_regex_guarded(lhs, rhs, n, guard)?, n, guard)
}

pub fn or_simp(lhs: &WestRegex, rhs: &WestRegex, n: usize) -> WestRegex {
    or_simp_guarded(lhs, rhs, n, &Guard::unlimited()).expect("unlimited guard")
}

pub fn or_simp_guarded(
    lhs: &WestRegex,
    rhs: &WestRegex,
    n: usize,
    guard: &Guard,
) -> Result<WestRegex, Interrupted> {
    let union = or_regex(lhs, rhs);
    guard.check_size(union.len())?;
    west_simp_guarded(union, n, guard)
}
