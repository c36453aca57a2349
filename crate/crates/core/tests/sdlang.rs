use proptest::prelude::*;

use starfree::algebra::{syntactic_morphism, MonoidMorphism};
use starfree::automata::{compile, parse_regex, Alphabet, Dfa};
use starfree::baseclass::BaseClass;
use starfree::oracle::{brute_aperiodic, Corpus};
use starfree::sdlang::{
    ambiguity_witness, is_prefix_code, is_unambiguous, min_sync_delay, parse_sd, sd_letter, sf_concat,
    sf_epsilon, sf_letter, sf_union, star_eliminate, sync_delay_holds, sync_delay_witness, synthesize,
    synthesize_language, synthesize_partition, validate, Case, Part, Sf, SynthOptions,
};
use starfree::Error;

fn ab() -> Alphabet {
    Alphabet::parse("ab").unwrap()
}

fn lang(re: &str, sigma: &Alphabet) -> Dfa {
    compile(&parse_regex(re, sigma).unwrap(), sigma)
}

fn words(k: usize, maxlen: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut layer = vec![vec![]];
    for _ in 0..maxlen {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|w: &Vec<usize>| {
                (0..k).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

// Number of ways to cut `w` into factors from `k`.
fn factorizations(k: &Dfa, w: &[usize]) -> usize {
    let mut count = vec![0usize; w.len() + 1];
    count[0] = 1;
    for j in 1..=w.len() {
        count[j] = (0..j).filter(|&i| k.accepts(&w[i..j])).map(|i| count[i]).sum();
    }
    count[w.len()]
}

fn splits(k: &Dfa, l: &Dfa, w: &[usize]) -> usize {
    (0..=w.len()).filter(|&i| k.accepts(&w[..i]) && l.accepts(&w[i..])).count()
}

fn word_sf(w: &[usize], sigma: &Alphabet) -> Sf {
    w.iter().fold(sf_epsilon(sigma), |e, &a| sf_concat(&e, &sf_letter(a)))
}

// Finite prefix-free sets of words of length 1..=4.
fn arb_code() -> impl Strategy<Value = Vec<Vec<usize>>> {
    proptest::collection::vec(proptest::collection::vec(0usize..2, 1..5), 1..5).prop_map(|mut ws| {
        ws.sort_by_key(|w| w.len());
        ws.dedup();
        let mut code: Vec<Vec<usize>> = Vec::new();
        for w in ws {
            if !code.iter().any(|c| w.starts_with(c)) {
                code.push(w);
            }
        }
        code
    })
}

fn code_dfa(code: &[Vec<usize>], sigma: &Alphabet) -> Dfa {
    code.iter()
        .fold(Dfa::empty(sigma), |acc, w| acc.union(&Dfa::word(sigma, w)).unwrap())
}

#[test]
fn prefix_code_examples() {
    let sigma = ab();
    assert!(is_prefix_code(&lang("ab", &sigma)).unwrap());
    assert!(!is_prefix_code(&lang("a+ab", &sigma)).unwrap());
    assert!(is_prefix_code(&lang("aa", &sigma)).unwrap());
    assert!(!is_prefix_code(&lang("1+a", &sigma)).unwrap());
}

#[test]
fn delay_examples() {
    let sigma = ab();
    let k = lang("ab", &sigma);
    assert!(sync_delay_holds(&k, 1).unwrap());
    assert_eq!(min_sync_delay(&k, 8).unwrap(), Some(1));
    let k = lang("(aab)*ab", &sigma);
    assert!(!sync_delay_holds(&k, 1).unwrap());
    assert!(sync_delay_holds(&k, 2).unwrap());
    assert_eq!(min_sync_delay(&k, 8).unwrap(), Some(2));
    let k = lang("aa", &sigma);
    for d in 0..=10 {
        assert!(!sync_delay_holds(&k, d).unwrap(), "delay {d}");
    }
    assert_eq!(min_sync_delay(&k, 10).unwrap(), None);
    assert!(sync_delay_witness(&lang("a+ab", &sigma), 1).is_err());
}

#[test]
fn delay_witness_is_genuine() {
    let sigma = ab();
    for (re, d) in [("aa", 3), ("(aab)*ab", 1), ("aba+b", 1)] {
        let k = lang(re, &sigma);
        let wit = sync_delay_witness(&k, d).unwrap().unwrap();
        let uvw: Vec<usize> = wit.u.iter().chain(&wit.v).chain(&wit.w).copied().collect();
        let uv: Vec<usize> = wit.u.iter().chain(&wit.v).copied().collect();
        assert!(factorizations(&k, &uvw) > 0 && !uvw.is_empty(), "{re}");
        assert!(k.power(d).accepts(&wit.v), "{re}");
        assert!(uv.is_empty() || factorizations(&k, &uv) == 0, "{re}");
    }
}

#[test]
fn ambiguity_examples() {
    let sigma = ab();
    assert!(is_unambiguous(&lang("a", &sigma), &lang("b", &sigma)).unwrap());
    assert!(!is_unambiguous(&lang("a*", &sigma), &lang("a*", &sigma)).unwrap());
    let w = ambiguity_witness(&lang("a*", &sigma), &lang("a*", &sigma)).unwrap().unwrap();
    assert!(w.first < w.second);
    // P = {a, b}, H = {b}: (P∖H)* · H(a+b)* splits at the first b only
    assert!(is_unambiguous(&lang("a*", &sigma), &lang("b(a+b)*", &sigma)).unwrap());
}

#[test]
fn validate_examples() {
    let sigma = ab();
    let e = parse_sd("{ab}*1", &sigma).unwrap();
    assert_eq!(validate(&e, &sigma, None, 8).unwrap(), lang("(ab)*", &sigma));
    let e = parse_sd("a | a", &sigma).unwrap();
    match validate(&e, &sigma, None, 8) {
        Err(Error::Validation { rule, detail }) => {
            assert_eq!(rule, "disjoint-union");
            assert!(detail.contains("\"a\""));
        }
        other => panic!("expected a validation error, got {other:?}"),
    }
    let e = parse_sd("{aa}*10", &sigma).unwrap();
    assert!(matches!(
        validate(&e, &sigma, None, 10),
        Err(Error::Validation { rule: "sync-delay", .. })
    ));
}

#[test]
fn star_elimination_examples() {
    let sigma = ab();
    let cases: Vec<(Sf, usize, Dfa)> = vec![
        (word_sf(&[0, 1], &sigma), 1, lang("(ab)*", &sigma)),
        (sf_union(&sf_letter(0), &sf_letter(1)), 1, Dfa::universal(&sigma)),
    ];
    for (k, d, expected) in cases {
        let g = star_eliminate(&k, d, &sigma, None).unwrap();
        assert_eq!(g.compile(&sigma, None).unwrap(), expected);
    }
    // (aab)*ab with its own star removed first
    let inner = star_eliminate(&word_sf(&[0, 0, 1], &sigma), 1, &sigma, None).unwrap();
    let k = sf_concat(&inner, &word_sf(&[0, 1], &sigma));
    let g = star_eliminate(&k, 2, &sigma, None).unwrap();
    assert_eq!(g.compile(&sigma, None).unwrap(), lang("((aab)*ab)*", &sigma));
}

#[test]
fn partition_examples() {
    let sigma = ab();
    let letters: Vec<Part> = (0..2)
        .map(|a| Part {
            expr: sd_letter(a),
            dfa: Dfa::letter(&sigma, a),
            value: 0,
        })
        .collect();
    let one = MonoidMorphism::trivial(&sigma);
    let (cert, steps) = synthesize_partition(
        &Dfa::any_letter(&sigma),
        &letters,
        0,
        &one,
        &BaseClass::triv(&sigma),
        &SynthOptions::default(),
    )
    .unwrap();
    assert_eq!(cert.parts.len(), 1);
    assert!(cert.parts[0].dfa.is_universal());
    assert_eq!(steps[0].case, Some(Case::Base));

    let a = Alphabet::parse("a").unwrap();
    let parity = MonoidMorphism::length_mod(&a, 2);
    let part = vec![Part {
        expr: sd_letter(0),
        dfa: Dfa::letter(&a, 0),
        value: parity.letter_image(0),
    }];
    let p = Dfa::any_letter(&a);
    let (cert, _) = synthesize_partition(
        &p,
        &part,
        0,
        &parity,
        &BaseClass::length_mod(&a, 2),
        &SynthOptions::default(),
    )
    .unwrap();
    let mut langs: Vec<Dfa> = cert.parts.iter().map(|p| p.dfa.clone()).collect();
    langs.sort_by_key(|d| d.accepts(&[]));
    assert_eq!(langs, vec![lang("a(aa)*", &a), lang("(aa)*", &a)]);
    cert.verify(&parity).unwrap();

    let err = synthesize_partition(&p, &part, 0, &parity, &BaseClass::triv(&a), &SynthOptions::default());
    assert!(matches!(err, Err(Error::NotAperiodic { .. })));
}

#[test]
fn synthesize_language_examples() {
    let a = Alphabet::parse("a").unwrap();
    let parity = MonoidMorphism::length_mod(&a, 2);
    let e = synthesize_language(&parity, parity.eval(&[]), &BaseClass::length_mod(&a, 2), 8).unwrap();
    let fb = BaseClass::length_mod(&a, 2);
    assert_eq!(validate(&e, &a, fb.as_finite(), 8).unwrap(), lang("(aa)*", &a));

    let sigma = ab();
    let e = synthesize_language(&MonoidMorphism::trivial(&sigma), 0, &BaseClass::triv(&sigma), 8).unwrap();
    assert!(validate(&e, &sigma, None, 8).unwrap().is_universal());

    let l = lang("(ab)*", &sigma);
    let rec = syntactic_morphism(&l);
    let syn = synthesize(&rec.morphism, &BaseClass::triv(&sigma), &SynthOptions::default()).unwrap();
    let e = syn.expression_for_set(&rec.accepting_elements());
    assert_eq!(validate(&e, &sigma, None, 8).unwrap(), l);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prefix_codes_decompose_uniquely(code in arb_code()) {
        let sigma = ab();
        let k = code_dfa(&code, &sigma);
        prop_assert!(is_prefix_code(&k).unwrap());
        let star = k.star();
        for w in words(2, 8) {
            prop_assert_eq!(factorizations(&k, &w) > 0 || w.is_empty(), star.accepts(&w));
            if !w.is_empty() && star.accepts(&w) {
                prop_assert_eq!(factorizations(&k, &w), 1);
            }
        }
    }

    #[test]
    fn star_elimination_on_codes(code in arb_code()) {
        let sigma = ab();
        let k = code_dfa(&code, &sigma);
        if let Some(d) = min_sync_delay(&k, 4).unwrap() {
            let sf = code.iter().skip(1).fold(word_sf(&code[0], &sigma), |e, w| sf_union(&e, &word_sf(w, &sigma)));
            let g = star_eliminate(&sf, d, &sigma, None).unwrap();
            prop_assert_eq!(g.compile(&sigma, None).unwrap(), k.star());
        }
    }

    #[test]
    fn ambiguity_matches_split_count(s1 in any::<u64>(), s2 in any::<u64>()) {
        let sigma = ab();
        let k = Corpus::new(sigma.clone(), 3, s1).next_dfa();
        let l = Corpus::new(sigma.clone(), 3, s2).next_dfa();
        let brute = words(2, 7).iter().any(|w| splits(&k, &l, w) > 1);
        match ambiguity_witness(&k, &l).unwrap() {
            Some(wit) => {
                let w = &wit.word;
                prop_assert!(k.accepts(&w[..wit.first]) && l.accepts(&w[wit.first..]));
                prop_assert!(k.accepts(&w[..wit.second]) && l.accepts(&w[wit.second..]));
                prop_assert!(wit.first < wit.second);
            }
            None => prop_assert!(!brute),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn synthesis_recovers_star_free_languages(seed in any::<u64>()) {
        let sigma = ab();
        let d = Corpus::new(sigma.clone(), 3, seed).next_dfa();
        let rec = syntactic_morphism(&d);
        let m = rec.morphism.monoid();
        if m.size() <= 6 && brute_aperiodic(m) {
            let syn = synthesize(&rec.morphism, &BaseClass::triv(&sigma), &SynthOptions::default()).unwrap();
            prop_assert!(syn.measure_decreases());
            let e = syn.expression_for_set(&rec.accepting_elements());
            prop_assert_eq!(validate(&e, &sigma, None, 8).unwrap(), d.minimize());
        }
    }
}
