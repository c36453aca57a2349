use proptest::prelude::*;

use starfree::automata::{compile, parse_dfa, parse_regex, render_dfa, Alphabet, Dfa, QuotientSide, RegexAst};
use starfree::Error;

fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

fn lang(re: &str, sigma: &Alphabet) -> Dfa {
    compile(&parse_regex(re, sigma).unwrap(), sigma)
}

fn words(sigma: &Alphabet, maxlen: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..maxlen {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..sigma.len() {
                let mut v: Vec<usize> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn arb_regex() -> impl Strategy<Value = RegexAst> {
    let leaf = prop_oneof![
        Just(RegexAst::Empty),
        Just(RegexAst::Epsilon),
        Just(RegexAst::Letter(0)),
        Just(RegexAst::Letter(1)),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| RegexAst::union(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| RegexAst::concat(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| RegexAst::intersect(l, r)),
            inner.clone().prop_map(RegexAst::star),
            inner.prop_map(RegexAst::complement),
        ]
    })
}

#[test]
fn parse_examples() {
    let sigma = ab();
    assert_eq!(
        parse_regex("(ab)*", &sigma).unwrap(),
        RegexAst::star(RegexAst::concat(RegexAst::Letter(0), RegexAst::Letter(1)))
    );
    let all = parse_regex("~(0)", &sigma).unwrap();
    assert_eq!(all, RegexAst::complement(RegexAst::Empty));
    assert!(compile(&all, &sigma).is_universal());
    match parse_regex("(a(b", &sigma) {
        Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
        other => panic!("expected a syntax error, got {other:?}"),
    }
    assert!(matches!(parse_regex("c", &sigma), Err(Error::UnknownLetter('c'))));
}

#[test]
fn compile_examples() {
    let a = Alphabet::parse("a").unwrap();
    let empty = compile(&RegexAst::Empty, &a);
    assert_eq!(empty.num_states(), 1);
    assert!(empty.is_empty());
    let even = lang("(aa)*", &a);
    assert_eq!(even.num_states(), 2);
    assert!(even.accepts(&[]) && !even.accepts(&[0]) && even.accepts(&[0, 0]));
    let all = lang("~(0)", &a);
    assert_eq!(all.num_states(), 1);
    assert!(all.is_universal());
}

#[test]
fn boolean_examples() {
    let a = Alphabet::parse("a").unwrap();
    let even = lang("(aa)*", &a);
    assert_eq!(even.complement(), lang("a(aa)*", &a));
    for l in [lang("(ab)*", &ab()), lang("a+bb*", &ab())] {
        let sigma = l.alphabet().clone();
        assert_eq!(l.intersect(&Dfa::universal(&sigma)).unwrap(), l);
        assert_eq!(l.union(&Dfa::empty(&sigma)).unwrap(), l);
    }
    assert!(even.intersect(&lang("a(aa)*", &a)).unwrap().is_empty());
    assert!(even.union(&Dfa::empty(&ab())).is_err());
}

#[test]
fn quotient_examples() {
    let a = Alphabet::parse("a").unwrap();
    let even = lang("(aa)*", &a);
    assert_eq!(even.quotient(QuotientSide::Left, &[0]), lang("a(aa)*", &a));
    assert_eq!(even.quotient(QuotientSide::Left, &[]), even);
    let sigma = ab();
    assert_eq!(lang("(ab)*", &sigma).quotient(QuotientSide::Right, &[1]), lang("(ab)*a", &sigma));
}

#[test]
fn enumerate_examples() {
    let sigma = ab();
    let w = lang("(ab)*", &sigma).enumerate(4);
    let shown: Vec<String> = w.iter().map(|w| sigma.render(w)).collect();
    assert_eq!(shown, ["ε", "ab", "abab"]);
    assert!(Dfa::empty(&sigma).enumerate(10).is_empty());
}

#[test]
fn dfa_file_round_trip() {
    let text = "alphabet: ab\nstates: 3\ninitial: 0\naccepting: 0\n\
                trans 0 a 1\ntrans 0 b 2\ntrans 1 a 2\ntrans 1 b 0\ntrans 2 a 2\ntrans 2 b 2\n";
    let d = parse_dfa(text).unwrap();
    assert_eq!(d, lang("(ab)*", &ab()));
    assert_eq!(parse_dfa(&render_dfa(&d)).unwrap(), d);
    assert!(parse_dfa("alphabet: ab\nstates: 1\ninitial: 0\naccepting:\ntrans 0 a 0\n").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn compile_agrees_with_ast_semantics(ast in arb_regex()) {
        let sigma = ab();
        let d = compile(&ast, &sigma);
        for w in words(&sigma, 6) {
            prop_assert_eq!(d.accepts(&w), ast.matches(&w), "word {}", sigma.render(&w));
        }
        prop_assert_eq!(d.minimize(), d.clone());
    }

    #[test]
    fn printed_regex_reparses(ast in arb_regex()) {
        let sigma = ab();
        let text = ast.display(&sigma).to_string();
        let again = parse_regex(&text, &sigma).unwrap();
        prop_assert_eq!(compile(&again, &sigma), compile(&ast, &sigma));
    }

    #[test]
    fn de_morgan(l in arb_regex(), k in arb_regex()) {
        let sigma = ab();
        let (l, k) = (compile(&l, &sigma), compile(&k, &sigma));
        let lhs = l.union(&k).unwrap().complement();
        let rhs = l.complement().intersect(&k.complement()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn left_quotients_compose(
        l in arb_regex(),
        v in proptest::collection::vec(0usize..2, 0..4),
        w in proptest::collection::vec(0usize..2, 0..4),
    ) {
        let d = compile(&l, &ab());
        let vw: Vec<usize> = v.iter().chain(&w).copied().collect();
        let stepwise = d.quotient(QuotientSide::Left, &v).quotient(QuotientSide::Left, &w);
        prop_assert_eq!(stepwise, d.quotient(QuotientSide::Left, &vw));
    }

    #[test]
    fn quotient_semantics(l in arb_regex(), u in proptest::collection::vec(0usize..2, 0..3)) {
        let sigma = ab();
        let d = compile(&l, &sigma);
        let left = d.quotient(QuotientSide::Left, &u);
        let right = d.quotient(QuotientSide::Right, &u);
        for w in words(&sigma, 5) {
            let uw: Vec<usize> = u.iter().chain(&w).copied().collect();
            let wu: Vec<usize> = w.iter().chain(&u).copied().collect();
            prop_assert_eq!(left.accepts(&w), d.accepts(&uw));
            prop_assert_eq!(right.accepts(&w), d.accepts(&wu));
        }
    }
}
