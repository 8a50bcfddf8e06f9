mod common;

use common::{eval, match_text, to_states, traces, traces_upto, Bits};
use proptest::prelude::*;
use west_core::equivalence::{expand_trace_regex, naive_equivalence, EquivVerdict, ExpansionBudget};
use west_core::ops::{and_regex, and_simp, and_trace, or_regex, or_simp, shift, west_simp};
use west_core::regex::{bits_to_trace, match_regex, trace_to_bits, west_regex_of_vars};
use west_core::*;

fn bit() -> impl Strategy<Value = WestBit> {
    prop_oneof![Just(WestBit::Zero), Just(WestBit::One), Just(WestBit::S)]
}

fn trace_regex(n: usize, max_len: usize) -> impl Strategy<Value = TraceRegex> {
    prop::collection::vec(prop::collection::vec(bit(), n).prop_map(StateRegex::new), 0..=max_len)
        .prop_map(TraceRegex::new)
}

fn west_regex(n: usize, max_len: usize, max_alts: usize) -> impl Strategy<Value = WestRegex> {
    prop::collection::vec(trace_regex(n, max_len), 0..=max_alts).prop_map(WestRegex::new)
}

/// Width, regexes sharing it, and a length bound covering all of them.
fn sized_pair() -> impl Strategy<Value = (usize, WestRegex, WestRegex)> {
    (1usize..=2).prop_flat_map(|n| (Just(n), west_regex(n, 3, 4), west_regex(n, 3, 4)))
}

fn concrete_trace(n: usize, max_len: usize) -> impl Strategy<Value = Bits> {
    prop::collection::vec(0u32..1 << n, 0..=max_len)
}

fn formula(n: usize, bound: usize) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        (0..n).prop_map(Formula::prop),
    ];
    let interval = (0..=bound).prop_flat_map(|hi| (0..=hi, Just(hi)));
    leaf.prop_recursive(3, 12, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), interval.clone()).prop_map(|(a, (lo, hi))| Formula::future(a, lo, hi)),
            (inner.clone(), interval.clone()).prop_map(|(a, (lo, hi))| Formula::global(a, lo, hi)),
            (inner.clone(), inner.clone(), interval.clone())
                .prop_map(|(a, b, (lo, hi))| Formula::until(a, b, lo, hi)),
            (inner.clone(), inner, interval.clone()).prop_map(|(a, b, (lo, hi))| Formula::release(a, b, lo, hi)),
        ]
    })
}

/// Formulas small enough to enumerate every trace at complen + 1.
fn small_formula() -> impl Strategy<Value = Formula> {
    formula(2, 2).prop_filter("enumeration budget", |f| f.num_vars() * (f.complen() + 1) <= 12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn conjunction_law((n, a, b) in sized_pair()) {
        let both = and_regex(&a, &b, n);
        prop_assert!(west_regex_of_vars(&both, n));
        for t in traces_upto(n, 4) {
            prop_assert_eq!(match_text(&both, &t), match_text(&a, &t) && match_text(&b, &t));
        }
    }

    #[test]
    fn trace_conjunction_law((n, r1, r2) in (1usize..=2).prop_flat_map(|n| (Just(n), trace_regex(n, 3), trace_regex(n, 3)))) {
        let got = and_trace(&r1, &r2, n);
        if let Some(r) = &got {
            prop_assert_eq!(r.len(), r1.len().max(r2.len()));
        }
        let got = WestRegex::new(got.into_iter().collect());
        let (w1, w2) = (WestRegex::new(vec![r1]), WestRegex::new(vec![r2]));
        for t in traces_upto(n, 4) {
            prop_assert_eq!(match_text(&got, &t), match_text(&w1, &t) && match_text(&w2, &t));
        }
    }

    #[test]
    fn disjunction_law((n, a, b) in sized_pair()) {
        let either = or_regex(&a, &b);
        prop_assert_eq!(either.len(), a.len() + b.len());
        for t in traces_upto(n, 4) {
            prop_assert_eq!(match_text(&either, &t), match_text(&a, &t) || match_text(&b, &t));
        }
    }

    #[test]
    fn simp_preserves_matches((n, a, _b) in sized_pair()) {
        let s = west_simp(a.clone(), n);
        prop_assert!(s.len() <= a.len());
        prop_assert!(west_regex_of_vars(&s, n));
        prop_assert_eq!(west_simp(s.clone(), n), s.clone());
        for t in traces_upto(n, 4) {
            prop_assert_eq!(match_text(&s, &t), match_text(&a, &t));
        }
    }

    #[test]
    fn simp_wrappers_agree_with_unsimplified((n, a, b) in sized_pair()) {
        let and_s = and_simp(&a, &b, n);
        let or_s = or_simp(&a, &b, n);
        for t in traces_upto(n, 4) {
            prop_assert_eq!(match_text(&and_s, &t), match_text(&a, &t) && match_text(&b, &t));
            prop_assert_eq!(match_text(&or_s, &t), match_text(&a, &t) || match_text(&b, &t));
        }
    }

    #[test]
    fn shift_law((n, a, _b) in sized_pair(), t in 0usize..=2) {
        let shifted = shift(&a, n, t);
        prop_assert_eq!(shifted.len(), a.len());
        prop_assert!(west_regex_of_vars(&shifted, n));
        let need = t + a.max_len();
        for len in need..=need + 1 {
            for trace in traces(n, len) {
                prop_assert_eq!(match_text(&shifted, &trace), match_text(&a, &trace[t..].to_vec()));
            }
        }
    }

    #[test]
    fn conjunction_is_commutative_and_associative(
        (n, a, b) in sized_pair(),
        c in west_regex(2, 2, 3),
    ) {
        let c = if n == 2 { c } else { WestRegex::new(c.iter().map(narrow).collect()) };
        let ab = and_regex(&a, &b, n);
        let ba = and_regex(&b, &a, n);
        let left = and_regex(&ab, &c, n);
        let right = and_regex(&a, &and_regex(&b, &c, n), n);
        for t in traces_upto(n, 4) {
            prop_assert_eq!(match_text(&ab, &t), match_text(&ba, &t));
            prop_assert_eq!(match_text(&left, &t), match_text(&right, &t));
        }
    }

    #[test]
    fn text_round_trip((_n, a, _b) in sized_pair()) {
        prop_assert_eq!(text_to_regex(&regex_to_text(&a)).unwrap(), a.clone());
        prop_assert_eq!(regex_to_text(&text_to_regex(&regex_to_text(&a)).unwrap()), regex_to_text(&a));
    }

    #[test]
    fn encoding_is_exact(n in 1usize..=3, trace in concrete_trace(3, 4)) {
        let trace: Bits = trace.into_iter().map(|s| s & ((1 << n) - 1)).collect();
        let states = to_states(&trace);
        let bits = trace_to_bits(&states, n).unwrap();
        prop_assert_eq!(bits.len(), trace.len());
        prop_assert_eq!(bits.free_bits(), 0);
        prop_assert_eq!(bits_to_trace(&bits).unwrap(), states.clone());
        for other in traces(n, trace.len()) {
            prop_assert_eq!(match_regex(&to_states(&other), &bits), other == trace);
        }
    }

    #[test]
    fn s_means_either_bit(r in trace_regex(2, 3), trace in concrete_trace(2, 4)) {
        let states = to_states(&trace);
        for (t, s) in r.iter().enumerate() {
            for (k, b) in s.iter().enumerate() {
                if *b != WestBit::S {
                    continue;
                }
                let with = |v: WestBit| {
                    let mut states = r.states().to_vec();
                    let mut bits = states[t].bits().to_vec();
                    bits[k] = v;
                    states[t] = StateRegex::new(bits);
                    TraceRegex::new(states)
                };
                let either = match_regex(&states, &with(WestBit::Zero)) || match_regex(&states, &with(WestBit::One));
                prop_assert_eq!(match_regex(&states, &r), either);
            }
        }
    }

    #[test]
    fn prefixes_match_more(r in trace_regex(2, 4), trace in concrete_trace(2, 5)) {
        let states = to_states(&trace);
        if match_regex(&states, &r) {
            for cut in 0..=r.len() {
                prop_assert!(match_regex(&states, &TraceRegex::new(r.states()[..cut].to_vec())));
            }
        }
    }

    #[test]
    fn expansion_is_exact(r in trace_regex(2, 3)) {
        let expanded = expand_trace_regex(&r, 24).unwrap();
        prop_assert_eq!(expanded.len(), 1 << r.free_bits());
        for t in traces(2, r.len()) {
            let states = to_states(&t);
            let bits = trace_to_bits(&states, 2).unwrap();
            prop_assert_eq!(match_regex(&states, &r), expanded.binary_search(&bits).is_ok());
        }
    }

    #[test]
    fn equivalence_is_sound_and_witnesses_are_valid((n, a, b) in sized_pair()) {
        let m = a.max_len().max(b.max_len());
        let verdict = naive_equivalence(&a, &b, n, &ExpansionBudget::default()).unwrap();
        match verdict {
            EquivVerdict::Equivalent => {
                for t in traces_upto(n, m + 1).filter(|t| t.len() >= m) {
                    prop_assert_eq!(match_text(&a, &t), match_text(&b, &t));
                }
            }
            EquivVerdict::Inequivalent { witness } => {
                prop_assert_eq!(witness.len(), m);
                prop_assert!(witness.of_vars(n));
                let trace = bits_to_trace(&witness).expect("witness has no S");
                prop_assert_ne!(a.matches(&trace), b.matches(&trace));
            }
            EquivVerdict::LimitExceeded { .. } => prop_assert!(false, "default budget is ample here"),
        }
    }

    #[test]
    fn equivalence_is_reflexive_and_symmetric((n, a, b) in sized_pair()) {
        let budget = ExpansionBudget::default();
        prop_assert!(naive_equivalence(&a, &a, n, &budget).unwrap().is_equivalent());
        let ab = naive_equivalence(&a, &b, n, &budget).unwrap().is_equivalent();
        let ba = naive_equivalence(&b, &a, n, &budget).unwrap().is_equivalent();
        prop_assert_eq!(ab, ba);
        prop_assert!(naive_equivalence(&a, &west_simp(a.clone(), n), n, &budget).unwrap().is_equivalent());
    }

    #[test]
    fn pretty_parse_round_trip(f in formula(4, 5)) {
        let text = pretty(&f);
        prop_assert_eq!(parse_formula(&text).unwrap(), f.clone());
        let spaced: String = text.chars().flat_map(|c| [c, ' ']).collect();
        if !text.contains("true") && !text.contains("false") && !text.chars().any(|c| c.is_ascii_digit()) {
            prop_assert_eq!(parse_formula(&spaced).unwrap(), f);
        }
    }

    #[test]
    fn nnf_shape_length_and_meaning(f in small_formula()) {
        let nnf = convert_nnf(&f);
        prop_assert!(nnf.is_nnf());
        prop_assert_eq!(convert_nnf(&nnf), nnf.clone());
        prop_assert_eq!(nnf.complen(), f.complen());
        prop_assert!(nnf.num_vars() <= f.num_vars());
        let n = f.num_vars();
        for m in [f.complen(), f.complen() + 1] {
            for t in traces(n, m) {
                prop_assert_eq!(eval(&f, &t, 0), eval(&nnf, &t, 0));
            }
        }
    }

    #[test]
    fn duality(f in small_formula(), lo in 0usize..=1, len in 0usize..=1) {
        let hi = lo + len;
        let lhs = Formula::not(Formula::global(f.clone(), lo, hi));
        let rhs = Formula::future(convert_nnf(&Formula::not(f.clone())), lo, hi);
        let n = f.num_vars();
        for t in traces_upto(n, (lhs.complen() + 1).min(12 / n.max(1))) {
            prop_assert_eq!(eval(&lhs, &t, 0), eval(&rhs, &t, 0));
        }
    }

    #[test]
    fn library_semantics_agrees_with_reference(f in small_formula()) {
        let n = f.num_vars();
        for t in traces_upto(n, f.complen() + 1) {
            prop_assert_eq!(satisfies(&to_states(&t), &f), eval(&f, &t, 0));
        }
    }

    #[test]
    fn transformation_is_correct(f in small_formula()) {
        let n = f.num_vars();
        let raw = west_reg(&f).unwrap();
        let padded = simp_pad_west_reg(&f).unwrap();
        prop_assert!(west_regex_of_vars(&raw, n));
        prop_assert!(padded.iter().all(|r| r.len() == f.complen()));
        for m in [f.complen(), f.complen() + 1] {
            for t in traces(n, m) {
                let want = eval(&f, &t, 0);
                prop_assert_eq!(match_text(&raw, &t), want, "raw {} on {:?}", f, t);
                prop_assert_eq!(match_text(&padded, &t), want, "padded {} on {:?}", f, t);
            }
        }
    }

    #[test]
    fn width_closure(f in formula(3, 2), extra in 0usize..=2) {
        let nnf = convert_nnf(&f);
        let n = f.num_vars() + extra;
        let guard = Guard::unlimited().with_max_alternatives(5_000);
        if let Ok(r) = west_reg_with_vars(&nnf, n, &guard) {
            prop_assert!(west_regex_of_vars(&r, n));
            prop_assert!(r.max_len() <= f.complen());
        }
    }
}

fn narrow(r: &TraceRegex) -> TraceRegex {
    TraceRegex::new(r.iter().map(|s| StateRegex::new(s.bits()[..1].to_vec())).collect())
}
