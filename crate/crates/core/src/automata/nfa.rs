use std::collections::HashMap;

use super::{Alphabet, Dfa, Letter};

/// Nondeterministic automaton with ε-moves. Only used as an intermediate
/// step for concatenation and star.
#[derive(Debug, Clone)]
pub(crate) struct Nfa {
    alphabet: Alphabet,
    trans: Vec<Vec<Vec<usize>>>,
    eps: Vec<Vec<usize>>,
    initial: Vec<usize>,
    accepting: Vec<bool>,
}

impl Nfa {
    pub(crate) fn new(alphabet: Alphabet) -> Self {
        Nfa {
            alphabet,
            trans: Vec::new(),
            eps: Vec::new(),
            initial: Vec::new(),
            accepting: Vec::new(),
        }
    }

    pub(crate) fn add_state(&mut self, accepting: bool) -> usize {
        self.trans.push(vec![Vec::new(); self.alphabet.len()]);
        self.eps.push(Vec::new());
        self.accepting.push(accepting);
        self.trans.len() - 1
    }

    pub(crate) fn add_edge(&mut self, from: usize, letter: Letter, to: usize) {
        self.trans[from][letter].push(to);
    }

    pub(crate) fn add_eps(&mut self, from: usize, to: usize) {
        self.eps[from].push(to);
    }

    pub(crate) fn add_initial(&mut self, q: usize) {
        self.initial.push(q);
    }

    /// Copies the states of `dfa` into this automaton and returns the offset
    /// of its first state.
    pub(crate) fn embed(&mut self, dfa: &Dfa, keep_accepting: bool) -> usize {
        let offset = self.trans.len();
        for q in 0..dfa.num_states() {
            self.add_state(keep_accepting && dfa.is_accepting(q));
        }
        for q in 0..dfa.num_states() {
            for a in 0..self.alphabet.len() {
                self.add_edge(offset + q, a, offset + dfa.step(q, a));
            }
        }
        offset
    }

    fn closure(&self, set: &mut Vec<usize>) {
        let mut seen = vec![false; self.trans.len()];
        for &q in set.iter() {
            seen[q] = true;
        }
        let mut stack = set.clone();
        while let Some(q) = stack.pop() {
            for &r in &self.eps[q] {
                if !seen[r] {
                    seen[r] = true;
                    set.push(r);
                    stack.push(r);
                }
            }
        }
        set.sort_unstable();
        set.dedup();
    }

    /// Subset construction; the result is minimized.
    pub(crate) fn determinize(&self) -> Dfa {
        let k = self.alphabet.len();
        let mut start = self.initial.clone();
        self.closure(&mut start);
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut delta: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let mut next: Vec<usize> = subsets[i]
                    .iter()
                    .flat_map(|&q| self.trans[q][a].iter().copied())
                    .collect();
                self.closure(&mut next);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len();
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                row.push(id);
            }
            delta.push(row);
            i += 1;
        }
        let accepting = subsets
            .iter()
            .map(|s| s.iter().any(|&q| self.accepting[q]))
            .collect();
        Dfa::from_parts_unchecked(self.alphabet.clone(), delta, 0, accepting).minimize()
    }
}
