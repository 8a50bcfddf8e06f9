//! Exhaustive semantic oracle.
//!
//! For small formulas every trace of a given length can be enumerated and
//! evaluated directly against [`satisfies`]. Comparing that against regex
//! matching certifies the transformation on those lengths.

use thiserror::Error;

use crate::algorithm::{simp_pad_west_reg_guarded, west_reg_guarded};
use crate::error::WestError;
use crate::formula::{satisfies, Formula, State, Trace};
use crate::guard::Guard;
use crate::par;
use crate::regex::WestRegex;

/// Default cap on `num_vars * trace_length` for enumeration.
pub const DEFAULT_MAX_BITS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration needs {needed} bits per trace but the budget is {limit}")]
    TooLarge { needed: usize, limit: usize },
    #[error(transparent)]
    West(#[from] WestError),
}

/// The trace of length `m` over `n` propositions whose bit string, read as a
/// binary number with the first bit most significant, equals `index`.
pub fn trace_from_index(index: u64, n: usize, m: usize) -> Vec<State> {
    let total = n * m;
    (0..m)
        .map(|t| (0..n).filter(|&k| index >> (total - 1 - (t * n + k)) & 1 == 1).collect())
        .collect()
}

/// All `2^(n*m)` traces of length `m` over `n` propositions, in bit-string order.
pub fn all_traces(n: usize, m: usize) -> impl Iterator<Item = Vec<State>> {
    (0..1u64 << (n * m)).map(move |i| trace_from_index(i, n, m))
}

/// Every trace of length `m` over `num_vars(formula)` propositions that
/// satisfies `formula`, in bit-string order.
pub fn brute_force_sat_traces(formula: &Formula, m: usize, max_bits: usize) -> Result<Vec<Trace>, OracleError> {
    if let Some(bad) = formula.first_ill_defined() {
        return Err(WestError::IllDefinedInterval { subformula: bad.to_string() }.into());
    }
    let n = formula.num_vars();
    if n * m > max_bits {
        return Err(OracleError::TooLarge { needed: n * m, limit: max_bits });
    }
    Ok(par::filter_map(0..1u64 << (n * m), |i| {
        let trace = trace_from_index(i, n, m);
        satisfies(&trace, formula).then(|| Trace::new(trace))
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Cap on `num_vars * (complen + 1)`.
    pub max_bits: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_bits: DEFAULT_MAX_BITS }
    }
}

/// A trace on which the semantics and at least one regex disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub trace: Trace,
    pub satisfies: bool,
    pub matches_raw: bool,
    pub matches_padded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    pub n: usize,
    /// Trace lengths that were enumerated.
    pub lengths: Vec<usize>,
    pub traces_checked: u64,
    /// The first disagreement in enumeration order, if any.
    pub counterexample: Option<Counterexample>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks, for every trace of length `complen` and `complen + 1`, that the
/// semantics, the raw regex and the padded regex all agree.
pub fn oracle_check(formula: &Formula, config: &OracleConfig) -> Result<OracleReport, OracleError> {
    oracle_check_guarded(formula, config, &Guard::unlimited())
}

pub fn oracle_check_guarded(
    formula: &Formula,
    config: &OracleConfig,
    guard: &Guard,
) -> Result<OracleReport, OracleError> {
    check_budget(formula, config)?;
    let raw = west_reg_guarded(formula, guard)?;
    let padded = simp_pad_west_reg_guarded(formula, guard)?;
    oracle_check_regexes(formula, &raw, &padded, config)
}

/// The comparison behind [`oracle_check`] with the two regexes supplied by
/// the caller, so alternative or deliberately broken transformations can be
/// measured against the same oracle.
pub fn oracle_check_regexes(
    formula: &Formula,
    raw: &WestRegex,
    padded: &WestRegex,
    config: &OracleConfig,
) -> Result<OracleReport, OracleError> {
    check_budget(formula, config)?;
    let n = formula.num_vars();
    let m0 = formula.complen();
    let mut report = OracleReport { n, lengths: vec![m0, m0 + 1], traces_checked: 0, counterexample: None };
    for m in [m0, m0 + 1] {
        let count = 1u64 << (n * m);
        let found = par::find_first(0..count, |i| {
            let trace = trace_from_index(i, n, m);
            let sat = satisfies(&trace, formula);
            let matches_raw = raw.matches(&trace);
            let matches_padded = padded.matches(&trace);
            (sat != matches_raw || sat != matches_padded).then(|| Counterexample {
                trace: Trace::new(trace),
                satisfies: sat,
                matches_raw,
                matches_padded,
            })
        });
        if let Some(cex) = found {
            report.traces_checked += 1 + trace_index(&cex.trace, n);
            report.counterexample = Some(cex);
            return Ok(report);
        }
        report.traces_checked += count;
    }
    Ok(report)
}

fn trace_index(trace: &[State], n: usize) -> u64 {
    trace
        .iter()
        .flat_map(|s| (0..n).map(move |k| s.contains(&k)))
        .fold(0, |acc, bit| acc << 1 | u64::from(bit))
}

fn check_budget(formula: &Formula, config: &OracleConfig) -> Result<(), OracleError> {
    if let Some(bad) = formula.first_ill_defined() {
        return Err(WestError::IllDefinedInterval { subformula: bad.to_string() }.into());
    }
    let needed = formula.num_vars() * (formula.complen() + 1);
    if needed > config.max_bits {
        return Err(OracleError::TooLarge { needed, limit: config.max_bits });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops::shift;
    use crate::syntax::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text).unwrap()
    }

    #[test]
    fn trace_indexing() {
        assert_eq!(trace_from_index(0b10_11_00_01, 2, 4), *Trace::from_sets([vec![0], vec![0, 1], vec![], vec![1]]));
        assert_eq!(trace_from_index(0, 0, 3).len(), 3);
        assert_eq!(all_traces(2, 2).count(), 16);
        for i in 0..64 {
            assert_eq!(trace_index(&trace_from_index(i, 3, 2), 3), i);
        }
    }

    #[test]
    fn sat_traces() {
        assert_eq!(brute_force_sat_traces(&f("p0"), 1, 20).unwrap(), vec![Trace::from_sets([vec![0]])]);
        assert_eq!(brute_force_sat_traces(&f("true & p0 | true"), 2, 20).unwrap().len(), 4);
        assert!(brute_force_sat_traces(&f("p0 & !p0"), 1, 20).unwrap().is_empty());
        assert!(matches!(brute_force_sat_traces(&f("p4"), 5, 20), Err(OracleError::TooLarge { .. })));
    }

    #[test]
    fn agreement_on_small_formulas() {
        let g = oracle_check(&f("G[0,1] p0"), &OracleConfig::default()).unwrap();
        assert!(g.passed());
        assert_eq!(g.traces_checked, 4 + 8);
        let r = oracle_check(&f("p0 R[0,2] p1"), &OracleConfig::default()).unwrap();
        assert!(r.passed());
        assert_eq!(r.traces_checked, 64 + 256);
    }

    #[test]
    fn shifted_transformation_is_caught() {
        let formula = f("G[0,1] p0");
        let good = crate::algorithm::simp_pad_west_reg(&formula).unwrap();
        let broken = shift(&crate::algorithm::west_reg(&formula).unwrap(), 1, 1);
        let report = oracle_check_regexes(&formula, &broken, &good, &OracleConfig::default()).unwrap();
        let cex = report.counterexample.expect("an off-by-one shift must be detected");
        assert_ne!(cex.satisfies, cex.matches_raw);
    }
}
