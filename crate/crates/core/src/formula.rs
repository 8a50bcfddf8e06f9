//! MLTL abstract syntax and its finite-trace semantics.
//!
//! Propositions are natural-number indices. Every temporal operator carries a
//! closed interval `[lo, hi]` of timesteps; a formula is only meaningful when
//! `lo <= hi` holds at every temporal node (see [`Formula::intervals_welldef`]).

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Deref;

/// A closed interval `[lo, hi]` of timesteps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: usize,
    pub hi: usize,
}

impl Interval {
    pub const fn new(lo: usize, hi: usize) -> Self {
        Interval { lo, hi }
    }

    pub fn is_welldef(self) -> bool {
        self.lo <= self.hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.lo, self.hi)
    }
}

/// An MLTL formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Prop(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `F[a,b] φ`
    Future(Box<Formula>, Interval),
    /// `G[a,b] φ`
    Global(Box<Formula>, Interval),
    /// `φ U[a,b] ψ`
    Until(Box<Formula>, Box<Formula>, Interval),
    /// `φ R[a,b] ψ`
    Release(Box<Formula>, Box<Formula>, Interval),
}

/// Smart constructors, mostly so tests and examples read like formulas.
impl Formula {
    pub fn prop(index: usize) -> Self {
        Formula::Prop(index)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(child: Formula) -> Self {
        Formula::Not(Box::new(child))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Self {
        Formula::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Self {
        Formula::Or(Box::new(lhs), Box::new(rhs))
    }

    pub fn future(child: Formula, lo: usize, hi: usize) -> Self {
        Formula::Future(Box::new(child), Interval::new(lo, hi))
    }

    pub fn global(child: Formula, lo: usize, hi: usize) -> Self {
        Formula::Global(Box::new(child), Interval::new(lo, hi))
    }

    pub fn until(lhs: Formula, rhs: Formula, lo: usize, hi: usize) -> Self {
        Formula::Until(Box::new(lhs), Box::new(rhs), Interval::new(lo, hi))
    }

    pub fn release(lhs: Formula, rhs: Formula, lo: usize, hi: usize) -> Self {
        Formula::Release(Box::new(lhs), Box::new(rhs), Interval::new(lo, hi))
    }
}

impl Formula {
    /// Direct children, left to right.
    pub fn children(&self) -> impl Iterator<Item = &Formula> {
        let (first, second): (Option<&Formula>, Option<&Formula>) = match self {
            Formula::True | Formula::False | Formula::Prop(_) => (None, None),
            Formula::Not(c) | Formula::Future(c, _) | Formula::Global(c, _) => (Some(c), None),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Until(l, r, _)
            | Formula::Release(l, r, _) => (Some(l), Some(r)),
        };
        first.into_iter().chain(second)
    }

    /// The interval of a temporal node.
    pub fn interval(&self) -> Option<Interval> {
        match self {
            Formula::Future(_, i)
            | Formula::Global(_, i)
            | Formula::Until(_, _, i)
            | Formula::Release(_, _, i) => Some(*i),
            _ => None,
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().map(Formula::size).sum::<usize>()
    }

    /// Height of the AST counting every operator node; atoms have depth 0.
    pub fn depth(&self) -> usize {
        self.children().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// Maximum number of temporal operators on any root-to-leaf path.
    pub fn temporal_depth(&self) -> usize {
        let own = usize::from(self.interval().is_some());
        own + self.children().map(Formula::temporal_depth).max().unwrap_or(0)
    }

    /// Largest interval upper bound occurring anywhere, or 0 when there is none.
    pub fn max_bound(&self) -> usize {
        let own = self.interval().map_or(0, |i| i.hi);
        self.children().map(Formula::max_bound).fold(own, usize::max)
    }

    /// True iff every temporal subformula has `lo <= hi`.
    pub fn intervals_welldef(&self) -> bool {
        self.first_ill_defined().is_none()
    }

    /// The outermost subformula whose own interval is ill-defined, if any.
    pub fn first_ill_defined(&self) -> Option<&Formula> {
        if matches!(self.interval(), Some(i) if !i.is_welldef()) {
            return Some(self);
        }
        self.children().find_map(Formula::first_ill_defined)
    }

    /// Number of propositions the formula ranges over: one more than the
    /// largest proposition index, or 0 when no proposition occurs.
    pub fn num_vars(&self) -> usize {
        match self {
            Formula::Prop(p) => p + 1,
            _ => self.children().map(Formula::num_vars).max().unwrap_or(0),
        }
    }

    /// True iff negation is only ever applied directly to a proposition.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Not(child) => matches!(**child, Formula::Prop(_)),
            _ => self.children().all(Formula::is_nnf),
        }
    }

    /// Computation length: the trace length sufficient to decide the formula.
    pub fn complen(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => 1,
            Formula::Not(c) => c.complen(),
            Formula::And(l, r) | Formula::Or(l, r) => l.complen().max(r.complen()),
            Formula::Future(c, i) | Formula::Global(c, i) => i.hi + c.complen(),
            Formula::Until(l, r, i) | Formula::Release(l, r, i) => {
                i.hi + l.complen().max(r.complen())
            }
        }
    }

    /// Rewrites the formula into negation normal form by pushing negations
    /// through the connectives and temporal duals.
    pub fn to_nnf(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => self.clone(),
            Formula::Not(child) => child.negated_nnf(),
            Formula::And(l, r) => Formula::and(l.to_nnf(), r.to_nnf()),
            Formula::Or(l, r) => Formula::or(l.to_nnf(), r.to_nnf()),
            Formula::Future(c, i) => Formula::Future(Box::new(c.to_nnf()), *i),
            Formula::Global(c, i) => Formula::Global(Box::new(c.to_nnf()), *i),
            Formula::Until(l, r, i) => {
                Formula::Until(Box::new(l.to_nnf()), Box::new(r.to_nnf()), *i)
            }
            Formula::Release(l, r, i) => {
                Formula::Release(Box::new(l.to_nnf()), Box::new(r.to_nnf()), *i)
            }
        }
    }

    /// NNF of `¬self`.
    fn negated_nnf(&self) -> Formula {
        let neg = |f: &Formula| Box::new(f.negated_nnf());
        match self {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Prop(_) => Formula::not(self.clone()),
            Formula::Not(child) => child.to_nnf(),
            Formula::And(l, r) => Formula::Or(neg(l), neg(r)),
            Formula::Or(l, r) => Formula::And(neg(l), neg(r)),
            Formula::Future(c, i) => Formula::Global(neg(c), *i),
            Formula::Global(c, i) => Formula::Future(neg(c), *i),
            Formula::Until(l, r, i) => Formula::Release(neg(l), neg(r), *i),
            Formula::Release(l, r, i) => Formula::Until(neg(l), neg(r), *i),
        }
    }
}

/// Free-function alias of [`Formula::to_nnf`].
pub fn convert_nnf(formula: &Formula) -> Formula {
    formula.to_nnf()
}

/// One state of a trace: the set of propositions that hold at that timestep.
pub type State = BTreeSet<usize>;

/// A finite trace. Dereferences to its slice of states; suffixes are slices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Trace {
    states: Vec<State>,
}

impl Trace {
    pub fn new(states: Vec<State>) -> Self {
        Trace { states }
    }

    pub fn empty() -> Self {
        Trace::default()
    }

    /// Builds a trace from per-timestep proposition lists.
    pub fn from_sets<I, S>(states: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: IntoIterator<Item = usize>,
    {
        Trace::new(states.into_iter().map(|s| s.into_iter().collect()).collect())
    }

    pub fn states(&self) -> &[State] {
        &self.states
    }

    pub fn into_states(self) -> Vec<State> {
        self.states
    }

    /// The suffix starting at timestep `start`; empty once `start` passes the end.
    pub fn suffix(&self, start: usize) -> Trace {
        Trace::new(self.states[start.min(self.states.len())..].to_vec())
    }
}

impl Deref for Trace {
    type Target = [State];

    fn deref(&self) -> &[State] {
        &self.states
    }
}

impl From<Vec<State>> for Trace {
    fn from(states: Vec<State>) -> Self {
        Trace::new(states)
    }
}

/// Decides `trace ⊨ formula` under the finite MLTL semantics.
///
/// A proposition never holds on the empty trace. `G` and `R` hold vacuously
/// when the trace is no longer than the interval's lower bound, while `F` and
/// `U` fail in that case.
pub fn satisfies(trace: &[State], formula: &Formula) -> bool {
    let suffix = |i: usize| &trace[i.min(trace.len())..];
    let len = trace.len();
    match formula {
        Formula::True => true,
        Formula::False => false,
        Formula::Prop(p) => trace.first().is_some_and(|s| s.contains(p)),
        Formula::Not(c) => !satisfies(trace, c),
        Formula::And(l, r) => satisfies(trace, l) && satisfies(trace, r),
        Formula::Or(l, r) => satisfies(trace, l) || satisfies(trace, r),
        Formula::Future(c, iv) => {
            len > iv.lo && (iv.lo..=iv.hi).any(|i| satisfies(suffix(i), c))
        }
        Formula::Global(c, iv) => {
            len <= iv.lo || (iv.lo..=iv.hi).all(|i| satisfies(suffix(i), c))
        }
        Formula::Until(l, r, iv) => {
            len > iv.lo
                && (iv.lo..=iv.hi).any(|i| {
                    satisfies(suffix(i), r) && (iv.lo..i).all(|j| satisfies(suffix(j), l))
                })
        }
        Formula::Release(l, r, iv) => {
            len <= iv.lo
                || (iv.lo..=iv.hi).all(|i| satisfies(suffix(i), r))
                || (iv.lo..iv.hi).any(|j| {
                    satisfies(suffix(j), l) && (iv.lo..=j).all(|k| satisfies(suffix(k), r))
                })
        }
    }
}
