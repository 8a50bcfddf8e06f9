//! The formula-to-regex transformation.
//!
//! [`west_reg`] maps a formula to a WEST regex that, on every trace at least
//! as long as the formula's computation length, matches exactly the traces
//! satisfying the formula. Temporal operators unfold their finite
//! quantifiers into shifted intersections and unions; the empty
//! intersection is [`WestRegex::universal`] and the empty union is
//! [`WestRegex::empty`].

use crate::error::WestError;
use crate::formula::{Formula, Interval};
use crate::guard::{Guard, Interrupted};
use crate::ops::{and_simp_guarded, or_simp_guarded, shift, west_simp_guarded};
use crate::regex::{StateRegex, TraceRegex, WestBit, WestRegex};
use crate::syntax::pretty;

/// `G[a,b]`: the intersection of `regex` shifted by every `i` in `[a,b]`,
/// folded from `a` upwards as `and(shift(b), global(a, b-1))`.
pub fn west_global(regex: &WestRegex, lo: usize, hi: usize, n: usize) -> WestRegex {
    west_global_guarded(regex, lo, hi, n, &Guard::unlimited()).expect("unlimited guard")
}

pub fn west_global_guarded(
    regex: &WestRegex,
    lo: usize,
    hi: usize,
    n: usize,
    guard: &Guard,
) -> Result<WestRegex, Interrupted> {
    debug_assert!(lo <= hi);
    let mut acc = shift(regex, n, lo);
    for i in lo + 1..=hi {
        acc = and_simp_guarded(&shift(regex, n, i), &acc, n, guard)?;
    }
    Ok(acc)
}

/// `F[a,b]`: the union of `regex` shifted by every `i` in `[a,b]`.
pub fn west_future(regex: &WestRegex, lo: usize, hi: usize, n: usize) -> WestRegex {
    west_future_guarded(regex, lo, hi, n, &Guard::unlimited()).expect("unlimited guard")
}

pub fn west_future_guarded(
    regex: &WestRegex,
    lo: usize,
    hi: usize,
    n: usize,
    guard: &Guard,
) -> Result<WestRegex, Interrupted> {
    debug_assert!(lo <= hi);
    let mut acc = shift(regex, n, lo);
    for i in lo + 1..=hi {
        acc = or_simp_guarded(&shift(regex, n, i), &acc, n, guard)?;
    }
    Ok(acc)
}

/// `φ U[a,b] ψ`: union over `i` in `[a,b]` of `ψ` at `i` intersected with
/// `φ` at every `j` in `[a, i-1]`.
pub fn west_until(lhs: &WestRegex, rhs: &WestRegex, lo: usize, hi: usize, n: usize) -> WestRegex {
    west_until_guarded(lhs, rhs, lo, hi, n, &Guard::unlimited()).expect("unlimited guard")
}

pub fn west_until_guarded(
    lhs: &WestRegex,
    rhs: &WestRegex,
    lo: usize,
    hi: usize,
    n: usize,
    guard: &Guard,
) -> Result<WestRegex, Interrupted> {
    debug_assert!(lo <= hi);
    // `prefix` is the intersection of φ shifted by each j in [a, i-1].
    let mut prefix = WestRegex::universal();
    let mut acc = WestRegex::empty();
    for i in lo..=hi {
        let disjunct = and_simp_guarded(&prefix, &shift(rhs, n, i), n, guard)?;
        acc = or_simp_guarded(&acc, &disjunct, n, guard)?;
        if i < hi {
            prefix = and_simp_guarded(&prefix, &shift(lhs, n, i), n, guard)?;
        }
    }
    Ok(acc)
}

/// `φ R[a,b] ψ`: either `ψ` holds throughout `[a,b]`, or for some `j` in
/// `[a, b-1]` `φ` holds at `j` and `ψ` holds throughout `[a, j]`.
pub fn west_release(lhs: &WestRegex, rhs: &WestRegex, lo: usize, hi: usize, n: usize) -> WestRegex {
    west_release_guarded(lhs, rhs, lo, hi, n, &Guard::unlimited()).expect("unlimited guard")
}

pub fn west_release_guarded(
    lhs: &WestRegex,
    rhs: &WestRegex,
    lo: usize,
    hi: usize,
    n: usize,
    guard: &Guard,
) -> Result<WestRegex, Interrupted> {
    debug_assert!(lo <= hi);
    let mut acc = west_global_guarded(rhs, lo, hi, n, guard)?;
    // `held` is ψ throughout [a, j].
    let mut held = WestRegex::universal();
    for j in lo..hi {
        held = and_simp_guarded(&held, &shift(rhs, n, j), n, guard)?;
        let disjunct = and_simp_guarded(&shift(lhs, n, j), &held, n, guard)?;
        acc = or_simp_guarded(&acc, &disjunct, n, guard)?;
    }
    Ok(acc)
}

fn single_state(n: usize, pinned: Option<(usize, WestBit)>) -> WestRegex {
    let mut state = StateRegex::arbitrary(n);
    if let Some((p, bit)) = pinned {
        state.bits_mut()[p] = bit;
    }
    WestRegex::new(vec![TraceRegex::new(vec![state])])
}

/// Structural recursion over a formula already in negation normal form,
/// producing a regex over `n` propositions.
pub fn west_reg_aux(formula: &Formula, n: usize) -> Result<WestRegex, WestError> {
    west_reg_aux_guarded(formula, n, &Guard::unlimited())
}

pub fn west_reg_aux_guarded(formula: &Formula, n: usize, guard: &Guard) -> Result<WestRegex, WestError> {
    if !formula.is_nnf() {
        return Err(WestError::NotNnf);
    }
    if let Some(bad) = formula.first_ill_defined() {
        return Err(WestError::IllDefinedInterval { subformula: pretty(bad) });
    }
    let needed = formula.num_vars();
    if needed > n {
        return Err(WestError::TooFewVars { needed, available: n });
    }
    Ok(reg_aux(formula, n, guard)?)
}

fn reg_aux(formula: &Formula, n: usize, guard: &Guard) -> Result<WestRegex, Interrupted> {
    guard.check()?;
    let rec = |child: &Formula| {
        debug_assert!(child.size() < formula.size(), "recursion must descend");
        reg_aux(child, n, guard)
    };
    Ok(match formula {
        Formula::True => single_state(n, None),
        Formula::False => WestRegex::empty(),
        Formula::Prop(p) => single_state(n, Some((*p, WestBit::One))),
        Formula::Not(child) => match **child {
            Formula::Prop(p) => single_state(n, Some((p, WestBit::Zero))),
            _ => unreachable!("checked to be in negation normal form"),
        },
        Formula::And(l, r) => and_simp_guarded(&rec(l)?, &rec(r)?, n, guard)?,
        Formula::Or(l, r) => or_simp_guarded(&rec(l)?, &rec(r)?, n, guard)?,
        Formula::Future(c, Interval { lo, hi }) => west_future_guarded(&rec(c)?, *lo, *hi, n, guard)?,
        Formula::Global(c, Interval { lo, hi }) => west_global_guarded(&rec(c)?, *lo, *hi, n, guard)?,
        Formula::Until(l, r, Interval { lo, hi }) => {
            west_until_guarded(&rec(l)?, &rec(r)?, *lo, *hi, n, guard)?
        }
        Formula::Release(l, r, Interval { lo, hi }) => {
            west_release_guarded(&rec(l)?, &rec(r)?, *lo, *hi, n, guard)?
        }
    })
}

/// The transformation for arbitrary formulas: normalise to NNF once, then
/// recurse with `n = num_vars(formula)`.
pub fn west_reg(formula: &Formula) -> Result<WestRegex, WestError> {
    west_reg_guarded(formula, &Guard::unlimited())
}

pub fn west_reg_guarded(formula: &Formula, guard: &Guard) -> Result<WestRegex, WestError> {
    west_reg_with_vars(formula, formula.num_vars(), guard)
}

/// Like [`west_reg_guarded`] but over `n >= num_vars(formula)` propositions,
/// which lets two formulas be compared over a common width.
pub fn west_reg_with_vars(formula: &Formula, n: usize, guard: &Guard) -> Result<WestRegex, WestError> {
    if let Some(bad) = formula.first_ill_defined() {
        return Err(WestError::IllDefinedInterval { subformula: pretty(bad) });
    }
    west_reg_aux_guarded(&formula.to_nnf(), n, guard)
}

/// Extends every alternative with arbitrary states up to length `len`.
pub fn pad_to(regex: &WestRegex, len: usize, n: usize) -> Result<WestRegex, WestError> {
    regex
        .iter()
        .map(|r| {
            if r.len() > len {
                return Err(WestError::PadTooShort { len: r.len(), target: len });
            }
            let mut states = r.states().to_vec();
            states.resize(len, StateRegex::arbitrary(n));
            Ok(TraceRegex::new(states))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(WestRegex::new)
}

/// [`west_reg`] with every alternative padded to the computation length and
/// the result simplified again.
pub fn simp_pad_west_reg(formula: &Formula) -> Result<WestRegex, WestError> {
    simp_pad_west_reg_guarded(formula, &Guard::unlimited())
}

pub fn simp_pad_west_reg_guarded(formula: &Formula, guard: &Guard) -> Result<WestRegex, WestError> {
    simp_pad_with_vars(formula, formula.num_vars(), guard)
}

/// [`simp_pad_west_reg_guarded`] over `n >= num_vars(formula)` propositions.
pub fn simp_pad_with_vars(formula: &Formula, n: usize, guard: &Guard) -> Result<WestRegex, WestError> {
    let raw = west_reg_with_vars(formula, n, guard)?;
    let padded = pad_to(&raw, formula.complen(), n)?;
    Ok(west_simp_guarded(padded, n, guard)?)
}
