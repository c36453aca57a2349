//! Naive reference procedures and seeded corpus generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::FiniteMonoid;
use crate::automata::{Alphabet, Dfa};
use crate::error::Result;

/// `L1 ⊆ K` and `K ∩ L2 = ∅`.
pub fn verify_separator(k: &Dfa, l1: &Dfa, l2: &Dfa) -> Result<bool> {
    Ok(l1.is_subset_of(k)? && k.intersect(l2)?.is_empty())
}

/// Some `m ≤ mmax` with `L ∩ (A^m)* = ∅`.
pub fn brute_mod_eps_separable(l: &Dfa, mmax: usize) -> Result<bool> {
    for m in 1..=mmax {
        let multiples = Dfa::any_letter(l.alphabet()).power(m).star();
        if l.intersect(&multiples)?.is_empty() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Every element satisfies `s^n = s^(n+1)` for `n = |M|`.
pub fn brute_aperiodic(m: &FiniteMonoid) -> bool {
    let n = m.size();
    (0..n).all(|s| {
        let mut p = s;
        for _ in 1..n {
            p = m.mul(p, s);
        }
        p == m.mul(p, s)
    })
}

/// Seeded generator of small complete DFAs.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub alphabet: Alphabet,
    pub max_states: usize,
    rng: ChaCha8Rng,
}

impl Corpus {
    pub fn new(alphabet: Alphabet, max_states: usize, seed: u64) -> Self {
        Corpus {
            alphabet,
            max_states,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// A random DFA with between 1 and `max_states` states, not minimized.
    pub fn next_dfa(&mut self) -> Dfa {
        let n = self.rng.gen_range(1..=self.max_states);
        let k = self.alphabet.len();
        let delta = (0..n)
            .map(|_| (0..k).map(|_| self.rng.gen_range(0..n)).collect())
            .collect();
        let accepting = (0..n).map(|_| self.rng.gen_bool(0.5)).collect();
        Dfa::from_parts(self.alphabet.clone(), delta, 0, accepting).expect("well-formed random DFA")
    }

    pub fn dfas(&mut self, count: usize) -> Vec<Dfa> {
        (0..count).map(|_| self.next_dfa()).collect()
    }
}

/// A language given only by its set of lengths: `tail` sporadic lengths
/// followed by a cycle of length `cycle`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LengthStructure {
    pub tail: usize,
    pub cycle: usize,
    pub accept: Vec<bool>,
}

impl LengthStructure {
    pub fn random(rng: &mut impl Rng, max_tail: usize, max_cycle: usize) -> Self {
        let tail = rng.gen_range(0..=max_tail);
        let cycle = rng.gen_range(1..=max_cycle);
        let accept = (0..tail + cycle).map(|_| rng.gen_bool(0.4)).collect();
        LengthStructure { tail, cycle, accept }
    }

    /// The DFA reading lengths along the lasso; every letter moves one step.
    pub fn to_dfa(&self, alphabet: &Alphabet) -> Dfa {
        let n = self.tail + self.cycle;
        let delta = (0..n)
            .map(|q| {
                let next = if q + 1 < n { q + 1 } else { self.tail };
                vec![next; alphabet.len()]
            })
            .collect();
        Dfa::from_parts(alphabet.clone(), delta, 0, self.accept.clone()).expect("well-formed lasso")
    }
}

pub fn length_structures(seed: u64, count: usize, max_tail: usize, max_cycle: usize) -> Vec<LengthStructure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| LengthStructure::random(&mut rng, max_tail, max_cycle))
        .collect()
}
