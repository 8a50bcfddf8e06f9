//! Seeded random formula generation.
//!
//! Each formula is drawn from its own ChaCha stream selected by
//! `(seed, index)`, so a batch can be produced in parallel, or sliced, and
//! still come out identical to a sequential run.
//!
//! Distribution: with depth budget 0 the generator draws a leaf uniformly from
//! `true`, `false` and `p0..p(n-1)`, and negates a proposition with
//! probability 1/2. With a positive budget it draws uniformly among the ten
//! constructors (the three atom kinds included); every non-atom node spends
//! one unit of budget for its children, so a negated leaf can sit one level
//! below the budget. Intervals are uniform over the pairs
//! `a <= b <= bound`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaGenParams {
    /// Number of propositions; must be at least 1.
    pub n: usize,
    /// Maximum operator nesting depth.
    pub d: usize,
    /// Maximum interval upper bound.
    pub b: usize,
    pub seed: u64,
    pub count: usize,
    /// Restrict every operator node to `U` and `R`.
    pub nested_ur: bool,
}

impl FormulaGenParams {
    pub fn new(n: usize, d: usize, b: usize, seed: u64, count: usize) -> Self {
        FormulaGenParams { n, d, b, seed, count, nested_ur: false }
    }

    pub fn nested_ur(mut self, on: bool) -> Self {
        self.nested_ur = on;
        self
    }
}

/// The `index`-th formula of the batch described by `params`.
pub fn random_formula_at(params: &FormulaGenParams, index: u64) -> Formula {
    assert!(params.n >= 1, "formula generation needs at least one proposition");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    rng.set_stream(index);
    let mut gen = Gen { rng, params };
    gen.formula(params.d)
}

/// `params.count` formulas, deterministic in `params.seed`.
pub fn random_formulas(params: &FormulaGenParams) -> Vec<Formula> {
    let indices: Vec<u64> = (0..params.count as u64).collect();
    par::map(&indices, |&i| random_formula_at(params, i))
}

struct Gen<'a> {
    rng: ChaCha8Rng,
    params: &'a FormulaGenParams,
}

impl Gen<'_> {
    fn formula(&mut self, budget: usize) -> Formula {
        if budget == 0 {
            return self.leaf();
        }
        if self.params.nested_ur {
            let (lhs, rhs) = (self.formula(budget - 1), self.formula(budget - 1));
            let (lo, hi) = self.interval();
            return if self.rng.random_bool(0.5) {
                Formula::until(lhs, rhs, lo, hi)
            } else {
                Formula::release(lhs, rhs, lo, hi)
            };
        }
        let inner = budget - 1;
        match self.rng.random_range(0..10u8) {
            0 => Formula::True,
            1 => Formula::False,
            2 => Formula::prop(self.rng.random_range(0..self.params.n)),
            3 => Formula::not(self.formula(inner)),
            4 => {
                let lhs = self.formula(inner);
                Formula::and(lhs, self.formula(inner))
            }
            5 => {
                let lhs = self.formula(inner);
                Formula::or(lhs, self.formula(inner))
            }
            6 => {
                let (lo, hi) = self.interval();
                Formula::future(self.formula(inner), lo, hi)
            }
            7 => {
                let (lo, hi) = self.interval();
                Formula::global(self.formula(inner), lo, hi)
            }
            8 => {
                let (lo, hi) = self.interval();
                let lhs = self.formula(inner);
                Formula::until(lhs, self.formula(inner), lo, hi)
            }
            _ => {
                let (lo, hi) = self.interval();
                let lhs = self.formula(inner);
                Formula::release(lhs, self.formula(inner), lo, hi)
            }
        }
    }

    fn leaf(&mut self) -> Formula {
        let n = self.params.n;
        match self.rng.random_range(0..n + 2) {
            0 => Formula::True,
            1 => Formula::False,
            k => {
                let p = Formula::prop(k - 2);
                if self.rng.random_bool(0.5) {
                    Formula::not(p)
                } else {
                    p
                }
            }
        }
    }

    fn interval(&mut self) -> (usize, usize) {
        let b = self.params.b;
        let pairs = (b + 1) * (b + 2) / 2;
        let mut k = self.rng.random_range(0..pairs);
        for hi in 0..=b {
            if k <= hi {
                return (k, hi);
            }
            k -= hi + 1;
        }
        unreachable!("interval index out of range")
    }
}
