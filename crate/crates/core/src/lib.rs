//! MLTL formulas and their trace regular expressions.
//!
//! [`west_reg`] turns a formula into a [`WestRegex`]: a finite list of trace
//! regexes over `{0, 1, S}` whose matching traces are exactly the traces that
//! satisfy the formula, for traces at least the formula's computation length
//! long. The crate also provides the direct finite-trace semantics
//! ([`satisfies`]), an exhaustive oracle comparing the two
//! ([`oracle::oracle_check`]), expansion-based regex equivalence
//! ([`naive_equivalence`]), a parser and printer for formulas and traces, and
//! a seeded formula generator.
//!
//! With the default `parallel` feature, large regex products, equivalence
//! expansion, oracle enumeration and batch generation run on rayon. Results
//! do not depend on the thread count.

pub mod algorithm;
pub mod equivalence;
pub mod error;
pub mod formula;
pub mod generate;
pub mod guard;
pub mod ops;
pub mod oracle;
mod par;
pub mod regex;
pub mod syntax;

pub use algorithm::{
    pad_to, simp_pad_west_reg, simp_pad_west_reg_guarded, simp_pad_with_vars, west_future, west_global,
    west_reg, west_reg_aux, west_reg_guarded, west_reg_with_vars, west_release, west_until,
};
pub use equivalence::{
    expand_trace_regex, formula_equivalence, naive_equivalence, naive_equivalence_at, BudgetLimit, EquivError, EquivVerdict,
    ExpansionBudget,
};
pub use error::{EncodeError, ParseError, ParseErrorKind, WestError};
pub use formula::{convert_nnf, satisfies, Formula, Interval, State, Trace};
pub use generate::{random_formula_at, random_formulas, FormulaGenParams};
pub use guard::{Guard, Interrupted};
pub use ops::{
    and_bitwise, and_regex, and_simp, and_state, and_trace, first_merge_candidate, or_regex, or_simp, shift, west_simp,
};
pub use regex::{
    bits_to_trace, match_regex, match_timestep, matches, regex_to_text, text_to_regex, trace_to_bits, StateRegex,
    TraceRegex, WestBit, WestRegex,
};
pub use syntax::{parse_formula, parse_trace, pretty, trace_to_text};
