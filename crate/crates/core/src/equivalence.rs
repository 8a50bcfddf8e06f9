//! Equivalence of trace regexes by explicit expansion.
//!
//! Both sides are padded with arbitrary states to a common length, every `S`
//! is expanded into `0` and `1`, and the resulting sets of concrete bit
//! strings are compared. Expansion is exponential in the number of `S` bits,
//! so it runs under an [`ExpansionBudget`].

use std::collections::HashSet;
use std::hash::Hash;

use thiserror::Error;

use crate::algorithm::{pad_to, simp_pad_with_vars};
use crate::error::WestError;
use crate::formula::Formula;
use crate::guard::{Guard, Interrupted};
use crate::par;
use crate::regex::{StateRegex, TraceRegex, WestBit, WestRegex};

/// Limits on how much expansion a single comparison may do.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpansionBudget {
    /// Most `S` bits allowed in one padded alternative.
    pub max_free_bits: usize,
    /// Most concrete strings generated across both sides, if bounded.
    pub max_expansions: Option<u64>,
}

impl ExpansionBudget {
    pub const DEFAULT_FREE_BITS: usize = 24;

    pub fn with_free_bits(max_free_bits: usize) -> Self {
        ExpansionBudget { max_free_bits, ..Self::default() }
    }

    pub fn with_max_expansions(mut self, limit: u64) -> Self {
        self.max_expansions = Some(limit);
        self
    }
}

impl Default for ExpansionBudget {
    fn default() -> Self {
        ExpansionBudget { max_free_bits: Self::DEFAULT_FREE_BITS, max_expansions: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivVerdict {
    Equivalent,
    /// `witness` is `S`-free and matched by exactly one side once padded. It
    /// is the least bit string accepted only by the left side or, if there
    /// is none, the least accepted only by the right side.
    Inequivalent { witness: TraceRegex },
    LimitExceeded { limit: BudgetLimit, reason: String },
}

/// Which part of an [`ExpansionBudget`] stopped the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BudgetLimit {
    FreeBits,
    Expansions,
}

impl EquivVerdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, EquivVerdict::Equivalent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("state regex of width {found} where width {expected} was expected")]
    Width { expected: usize, found: usize },
    #[error(transparent)]
    West(#[from] WestError),
}

impl From<Interrupted> for EquivError {
    fn from(e: Interrupted) -> Self {
        EquivError::West(e.into())
    }
}

/// Every `S`-free trace regex obtained by replacing each `S` in `r` with
/// `0` or `1`, in lexicographic order. `None` when `r` has more than
/// `max_free_bits` free bits.
pub fn expand_trace_regex(r: &TraceRegex, max_free_bits: usize) -> Option<Vec<TraceRegex>> {
    let free = r.free_bits_within(max_free_bits)?;
    let mut out = Vec::with_capacity(1usize << free);
    for mask in 0..1u64 << free {
        // The first S takes the most significant bit of the mask, which keeps
        // the output sorted.
        let mut next = free;
        let states = r
            .iter()
            .map(|s| {
                StateRegex::new(
                    s.iter()
                        .map(|&bit| match bit {
                            WestBit::S => {
                                next -= 1;
                                if mask >> next & 1 == 1 {
                                    WestBit::One
                                } else {
                                    WestBit::Zero
                                }
                            }
                            b => b,
                        })
                        .collect(),
                )
            })
            .collect();
        out.push(TraceRegex::new(states));
    }
    Some(out)
}

/// A concrete bit string of fixed length packed so that numeric order is
/// lexicographic order on the string.
trait BitKey: Clone + Ord + Hash + Send + Sync {
    fn zero(len: usize) -> Self;
    fn set(&mut self, index: usize, len: usize);
    fn get(&self, index: usize, len: usize) -> bool;
}

impl BitKey for u128 {
    fn zero(_: usize) -> Self {
        0
    }

    fn set(&mut self, index: usize, len: usize) {
        *self |= 1 << (len - 1 - index);
    }

    fn get(&self, index: usize, len: usize) -> bool {
        self >> (len - 1 - index) & 1 == 1
    }
}

impl BitKey for Vec<u64> {
    fn zero(len: usize) -> Self {
        vec![0; len.div_ceil(64)]
    }

    fn set(&mut self, index: usize, _: usize) {
        self[index / 64] |= 1 << (63 - index % 64);
    }

    fn get(&self, index: usize, _: usize) -> bool {
        self[index / 64] >> (63 - index % 64) & 1 == 1
    }
}

fn expand_keys<K: BitKey>(r: &TraceRegex, len: usize, guard: &Guard) -> Result<Vec<K>, Interrupted> {
    let mut base = K::zero(len);
    let mut free = Vec::new();
    for (i, bit) in r.iter().flat_map(|s| s.iter()).enumerate() {
        match bit {
            WestBit::One => base.set(i, len),
            WestBit::S => free.push(i),
            WestBit::Zero => {}
        }
    }
    let count = 1u64 << free.len();
    let mut out = Vec::with_capacity(count as usize);
    for mask in 0..count {
        if mask & 0xFFFF == 0 {
            guard.check()?;
        }
        let mut key = base.clone();
        for (j, &i) in free.iter().enumerate() {
            if mask >> j & 1 == 1 {
                key.set(i, len);
            }
        }
        out.push(key);
    }
    Ok(out)
}

fn expand_side<K: BitKey>(side: &[TraceRegex], len: usize, guard: &Guard) -> Result<HashSet<K>, Interrupted> {
    let parts = par::try_map(side, |r| expand_keys::<K>(r, len, guard))?;
    Ok(parts.into_iter().flatten().collect())
}

fn compare<K: BitKey>(
    lhs: &[TraceRegex],
    rhs: &[TraceRegex],
    n: usize,
    m: usize,
    guard: &Guard,
) -> Result<EquivVerdict, Interrupted> {
    let len = n * m;
    let a = expand_side::<K>(lhs, len, guard)?;
    guard.check()?;
    let b = expand_side::<K>(rhs, len, guard)?;
    guard.check()?;
    let least = a.difference(&b).min().or_else(|| b.difference(&a).min()).cloned();
    Ok(match least {
        None => EquivVerdict::Equivalent,
        Some(key) => {
            let states = (0..m)
                .map(|t| {
                    StateRegex::new(
                        (0..n)
                            .map(|k| if key.get(t * n + k, len) { WestBit::One } else { WestBit::Zero })
                            .collect(),
                    )
                })
                .collect();
            EquivVerdict::Inequivalent { witness: TraceRegex::new(states) }
        }
    })
}

fn check_width(regex: &WestRegex, n: usize) -> Result<(), EquivError> {
    match regex.iter().flat_map(|r| r.iter()).find(|s| s.len() != n) {
        Some(s) => Err(EquivError::Width { expected: n, found: s.len() }),
        None => Ok(()),
    }
}

/// Compares two regexes over `n` propositions after padding every
/// alternative to the longest one on either side.
pub fn naive_equivalence(
    lhs: &WestRegex,
    rhs: &WestRegex,
    n: usize,
    budget: &ExpansionBudget,
) -> Result<EquivVerdict, EquivError> {
    naive_equivalence_at(lhs, rhs, n, 0, budget, &Guard::unlimited())
}

/// [`naive_equivalence`] with the common length raised to at least
/// `min_len`, polling `guard` while expanding.
pub fn naive_equivalence_at(
    lhs: &WestRegex,
    rhs: &WestRegex,
    n: usize,
    min_len: usize,
    budget: &ExpansionBudget,
    guard: &Guard,
) -> Result<EquivVerdict, EquivError> {
    check_width(lhs, n)?;
    check_width(rhs, n)?;
    let m = lhs.max_len().max(rhs.max_len()).max(min_len);
    let lhs = pad_to(lhs, m, n)?;
    let rhs = pad_to(rhs, m, n)?;

    let mut total: u64 = 0;
    for r in lhs.iter().chain(rhs.iter()) {
        let Some(free) = r.free_bits_within(budget.max_free_bits) else {
            return Ok(EquivVerdict::LimitExceeded {
                limit: BudgetLimit::FreeBits,
                reason: format!(
                    "an alternative has {} free bits, more than the budget of {}",
                    r.free_bits(),
                    budget.max_free_bits
                ),
            });
        };
        total = total.saturating_add(1u64.checked_shl(free as u32).unwrap_or(u64::MAX));
    }
    if let Some(limit) = budget.max_expansions {
        if total > limit {
            return Ok(EquivVerdict::LimitExceeded {
                limit: BudgetLimit::Expansions,
                reason: format!("expansion would produce {total} bit strings, more than the budget of {limit}"),
            });
        }
    }

    let verdict = if n * m <= 128 {
        compare::<u128>(&lhs, &rhs, n, m, guard)?
    } else {
        compare::<Vec<u64>>(&lhs, &rhs, n, m, guard)?
    };
    Ok(verdict)
}

/// Decides whether two formulas denote the same traces, by comparing their
/// padded regexes over `n = max(num_vars)` propositions at the larger of the
/// two computation lengths.
pub fn formula_equivalence(
    lhs: &Formula,
    rhs: &Formula,
    budget: &ExpansionBudget,
    guard: &Guard,
) -> Result<EquivVerdict, EquivError> {
    let n = lhs.num_vars().max(rhs.num_vars());
    let m = lhs.complen().max(rhs.complen());
    let a = simp_pad_with_vars(lhs, n, guard)?;
    let b = simp_pad_with_vars(rhs, n, guard)?;
    naive_equivalence_at(&a, &b, n, m, budget, guard)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    fn west(text: &str) -> WestRegex {
        text.parse().unwrap()
    }

    fn tr(text: &str) -> TraceRegex {
        text.parse().unwrap()
    }

    fn equiv(a: &str, b: &str, n: usize) -> EquivVerdict {
        naive_equivalence(&west(a), &west(b), n, &ExpansionBudget::default()).unwrap()
    }

    #[test]
    fn expansion() {
        assert_eq!(expand_trace_regex(&tr("S0"), 24).unwrap(), vec![tr("00"), tr("10")]);
        assert_eq!(expand_trace_regex(&tr("01"), 24).unwrap(), vec![tr("01")]);
        assert_eq!(expand_trace_regex(&tr("S,S"), 24).unwrap().len(), 4);
        assert_eq!(
            expand_trace_regex(&tr("S,S,S"), 24).unwrap(),
            ["0,0,0", "0,0,1", "0,1,0", "0,1,1", "1,0,0", "1,0,1", "1,1,0", "1,1,1"].map(tr).to_vec()
        );
        assert!(expand_trace_regex(&tr("SSS"), 2).is_none());
    }

    #[test]
    fn verdicts() {
        assert_eq!(equiv("SS", "S1\n1S\n00", 2), EquivVerdict::Equivalent);
        assert_eq!(equiv("1", "0", 1), EquivVerdict::Inequivalent { witness: tr("1") });
        assert_eq!(equiv("S1,00", "S1,00\n01,00", 2), EquivVerdict::Equivalent);
        // Trailing S states do not change the match set.
        assert_eq!(equiv("1", "1,S", 1), EquivVerdict::Equivalent);
        assert_eq!(equiv("1", "", 1), EquivVerdict::Inequivalent { witness: tr("1") });
        assert_eq!(equiv("", "1", 1), EquivVerdict::Inequivalent { witness: tr("1") });
        assert_eq!(equiv("S", "1", 1), EquivVerdict::Inequivalent { witness: tr("0") });
        assert_eq!(equiv("", "", 1), EquivVerdict::Equivalent);
        assert_eq!(equiv("*", "S,S", 1), EquivVerdict::Equivalent);
        assert_eq!(equiv("S1", "1S", 2), EquivVerdict::Inequivalent { witness: tr("01") });
    }

    #[test]
    fn budgets_surface_as_verdicts() {
        let tight = ExpansionBudget::with_free_bits(3);
        let v = naive_equivalence(&west("SSSS"), &west("SSSS"), 4, &tight).unwrap();
        assert!(matches!(v, EquivVerdict::LimitExceeded { .. }));
        let few = ExpansionBudget::default().with_max_expansions(10);
        let v = naive_equivalence(&west("SSS"), &west("SSS"), 3, &few).unwrap();
        assert!(matches!(v, EquivVerdict::LimitExceeded { .. }));
        assert!(naive_equivalence(&west("SS"), &west("S"), 2, &tight).is_err());
    }

    #[test]
    fn long_strings_use_wide_keys() {
        let a = west(&["01"; 70].join(","));
        let b = west(&format!("S0,{}", ["01"; 69].join(",")));
        let v = naive_equivalence(&b, &a, 2, &ExpansionBudget::default()).unwrap();
        let EquivVerdict::Inequivalent { witness } = v else { panic!("{v:?}") };
        assert!(witness.to_string().starts_with("00,01,01"));
        assert!(b.matches(&crate::regex::bits_to_trace(&witness).unwrap()));
        assert!(!a.matches(&crate::regex::bits_to_trace(&witness).unwrap()));
    }

    #[test]
    fn formulas() {
        let f = |s: &str| parse_formula(s).unwrap();
        let check = |a: &str, b: &str| {
            formula_equivalence(&f(a), &f(b), &ExpansionBudget::default(), &Guard::unlimited()).unwrap()
        };
        assert!(check("F[0,1] p0", "p0 | F[1,1] p0").is_equivalent());
        assert!(check("true", "p0 | !p0").is_equivalent());
        assert_eq!(check("p0", "p1"), EquivVerdict::Inequivalent { witness: tr("10") });
        assert!(check("!G[0,2] p0", "F[0,2] !p0").is_equivalent());
        assert!(!check("G[0,2] p0", "G[0,1] p0").is_equivalent());
    }
}
