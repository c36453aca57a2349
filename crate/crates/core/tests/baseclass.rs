use proptest::prelude::*;

use starfree::algebra::MonoidMorphism;
use starfree::automata::{compile, parse_regex, Alphabet, Dfa};
use starfree::baseclass::{mod_eps_separable, mod_eps_witness, BaseClass, LengthLasso};
use starfree::oracle::{brute_mod_eps_separable, length_structures, Corpus};

fn lang(re: &str, sigma: &Alphabet) -> Dfa {
    compile(&parse_regex(re, sigma).unwrap(), sigma)
}

#[test]
fn triv_has_one_class() {
    let sigma = Alphabet::parse("ab").unwrap();
    let triv = BaseClass::triv(&sigma);
    let f = triv.as_finite().unwrap();
    assert_eq!(f.num_classes(), 1);
    for w in [vec![], vec![0], vec![1, 0, 1]] {
        assert_eq!(f.class_of(&w), f.epsilon_class());
    }
    assert!(f.class_language(&[]).is_empty());
    assert!(f.class_language(&[0]).is_universal());
}

#[test]
fn finite_from_morphism_examples() {
    let a = Alphabet::parse("a").unwrap();
    let parity = BaseClass::finite_from_morphism(&MonoidMorphism::length_mod(&a, 2));
    assert_eq!(parity.as_finite().unwrap().num_classes(), 2);
    let mod3 = BaseClass::finite_from_morphism(&MonoidMorphism::length_mod(&a, 3));
    assert_eq!(mod3.as_finite().unwrap().num_classes(), 3);
    let t = BaseClass::finite_from_morphism(&MonoidMorphism::trivial(&a));
    assert_eq!(t.as_finite().unwrap().num_classes(), 1);
    assert!(mod3.as_group().is_none());
    assert!(BaseClass::mod_class().require_finite().is_err());
}

#[test]
fn mod_eps_examples() {
    let a = Alphabet::parse("a").unwrap();
    let odd = lang("a(aa)*", &a);
    assert!(mod_eps_separable(&odd));
    assert!(brute_mod_eps_separable(&odd, 4).unwrap());
    assert!(!mod_eps_separable(&lang("(aa)*", &a)));
    assert!(!brute_mod_eps_separable(&lang("(aa)*", &a), 20).unwrap());
    let l = lang("aa(aaa)*", &a);
    assert!(mod_eps_separable(&l));
    assert!(brute_mod_eps_separable(&l, 4).unwrap());
    assert!(!brute_mod_eps_separable(&l, 2).unwrap());
}

#[test]
fn mod_agrees_with_brute_force_on_length_structures() {
    let a = Alphabet::parse("a").unwrap();
    for s in length_structures(17, 200, 6, 6) {
        let d = s.to_dfa(&a);
        let lasso = LengthLasso::of(&d);
        let mmax = lasso.tail + 2 * lasso.cycle;
        assert_eq!(
            mod_eps_separable(&d),
            brute_mod_eps_separable(&d, mmax).unwrap(),
            "{s:?}"
        );
    }
}

#[test]
fn class_of_is_a_morphism() {
    let sigma = Alphabet::parse("ab").unwrap();
    let base = BaseClass::length_mod(&sigma, 3);
    let f = base.as_finite().unwrap();
    let words: Vec<Vec<usize>> = vec![vec![], vec![0], vec![1, 1], vec![0, 1, 0, 0]];
    for u in &words {
        for v in &words {
            let uv: Vec<usize> = u.iter().chain(v).copied().collect();
            assert_eq!(f.class_of(&uv), f.mul(f.class_of(u), f.class_of(v)));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lasso_describes_lengths(seed in any::<u64>()) {
        let sigma = Alphabet::parse("ab").unwrap();
        let d = Corpus::new(sigma.clone(), 4, seed).next_dfa();
        let lasso = LengthLasso::of(&d);
        for n in 0..16 {
            let exact = Dfa::any_letter(&sigma).power(n);
            prop_assert_eq!(lasso.contains(n), !d.intersect(&exact).unwrap().is_empty());
        }
    }

    #[test]
    fn witness_modulus_avoids_language(seed in any::<u64>()) {
        let sigma = Alphabet::parse("ab").unwrap();
        let d = Corpus::new(sigma.clone(), 4, seed).next_dfa();
        if let Some(m) = mod_eps_witness(&d) {
            prop_assert!(d.intersect(&Dfa::length_mod(&sigma, m, 0)).unwrap().is_empty());
        } else {
            prop_assert!(!brute_mod_eps_separable(&d, 24).unwrap());
        }
    }
}
