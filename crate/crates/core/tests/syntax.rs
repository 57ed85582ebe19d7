use std::collections::BTreeSet;

use dere_core::syntax::SyntaxError;
use dere_core::{enumerate_formulas, parse_formula, print_formula, Formula, Name, Prop, Signature};
use proptest::prelude::*;

fn name() -> impl Strategy<Value = Name> {
    prop_oneof![Just("Ann"), Just("bf"), Just("se"), Just("x_1")].prop_map(|s| Name::new(s).unwrap())
}

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::True),
        Just(Formula::False),
        prop_oneof![Just("p"), Just("q"), Just("logician")].prop_map(|s| Formula::Prop(Prop::new(s).unwrap())),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (name(), inner.clone()).prop_map(|(n, f)| Formula::at(n, f)),
            (name(), inner.clone()).prop_map(|(n, f)| Formula::de_re(n, f)),
            (name(), inner).prop_map(|(n, f)| Formula::de_dicto(n, f)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn print_then_parse_is_identity(f in formula()) {
        let text = print_formula(&f);
        prop_assert_eq!(parse_formula(&text).unwrap(), f);
    }

    #[test]
    fn printing_is_stable(f in formula()) {
        let once = print_formula(&f);
        prop_assert_eq!(print_formula(&parse_formula(&once).unwrap()), once);
    }

    #[test]
    fn parser_never_panics(s in "[pq!|&()\\[\\]RD@A -> ]{0,24}") {
        let _ = parse_formula(&s);
    }
}

#[test]
fn precedence_and_associativity() {
    let f = |s: &str| parse_formula(s).unwrap();
    assert_eq!(f("!p | q & r"), f("(!p) | (q & r)"));
    assert_eq!(f("p -> q -> r"), f("p -> (q -> r)"));
    assert_eq!(f("p | q -> r"), f("(p | q) -> r"));
    assert_eq!(f("R[Ann] p & q"), f("(R[Ann] p) & q"));
    assert_eq!(f("D[Ann] @[Bob] !p"), f("D[Ann] (@[Bob] (!p))"));
}

#[test]
fn error_offsets() {
    assert!(matches!(parse_formula("R[] p"), Err(SyntaxError::EmptyName { offset: 2 })));
    assert!(parse_formula("p | true_").is_ok());
    assert!(matches!(parse_formula("R[true] p"), Err(SyntaxError::Reserved { .. })));
    assert!(parse_formula("").is_err());
    assert!(parse_formula("p q").is_err());
    assert!(parse_formula("(p").is_err());
    assert!(parse_formula("p #").is_err());
}

/// Every syntax tree of exactly `size` nodes over one prop, both
/// constants, negation, disjunction and the three modalities on one name.
fn all_trees(size: usize, memo: &mut Vec<Vec<Formula>>) -> Vec<Formula> {
    if let Some(v) = memo.get(size) {
        return v.clone();
    }
    let n = Name::new("n").unwrap();
    let mut out = Vec::new();
    if size == 1 {
        out = vec![Formula::Prop(Prop::new("p").unwrap()), Formula::True, Formula::False];
    } else if size > 1 {
        for f in all_trees(size - 1, memo) {
            out.push(Formula::not(f.clone()));
            out.push(Formula::at(n.clone(), f.clone()));
            out.push(Formula::de_re(n.clone(), f.clone()));
            out.push(Formula::de_dicto(n.clone(), f));
        }
        for left in 1..size - 1 {
            for a in all_trees(left, memo) {
                for b in all_trees(size - 1 - left, memo) {
                    out.push(Formula::or(a.clone(), b));
                }
            }
        }
    }
    if memo.len() == size {
        memo.push(out.clone());
    }
    out
}

#[test]
fn enumeration_is_complete_up_to_size_four() {
    let sig: Signature = "p,true,false;not,or;@[n],R[n],D[n]".parse().unwrap();
    let mut memo = Vec::new();
    for k in 0..=4 {
        all_trees(k, &mut memo);
    }
    for k in 1..=4 {
        let expected: BTreeSet<String> = (1..=k).flat_map(|s| memo[s].clone()).map(|f| f.to_string()).collect();
        let got: Vec<Formula> = enumerate_formulas(&sig, k).collect();
        let got_set: BTreeSet<String> = got.iter().map(|f| f.to_string()).collect();
        assert_eq!(got.len(), got_set.len(), "duplicates at size {k}");
        assert_eq!(got_set, expected, "size {k}");
        assert!(got.windows(2).all(|w| w[0].size() <= w[1].size()));
    }
    assert_eq!(memo[1].len(), 3);
    assert_eq!(memo[2].len(), 12);
    assert_eq!(memo[3].len(), 3 * 16 + 9);
}
