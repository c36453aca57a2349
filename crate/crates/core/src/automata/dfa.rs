use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::nfa::Nfa;
use super::{Alphabet, Letter, Word};
use crate::error::{Error, Result};

/// Boolean combinations supported by [`Dfa::bool_op`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoolOp {
    Union,
    Intersect,
    Complement,
    Difference,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientSide {
    Left,
    Right,
}

/// Complete deterministic automaton.
///
/// Every operation that builds a new language returns the minimal DFA with
/// states numbered in breadth-first order from the initial state (letters
/// explored in alphabet order). Two languages are therefore equal iff their
/// results compare equal with `==`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Dfa {
    alphabet: Alphabet,
    delta: Vec<Vec<usize>>,
    initial: usize,
    accepting: Vec<bool>,
}

impl Dfa {
    /// Builds a DFA from raw parts, checking totality. The result is not
    /// minimized.
    pub fn from_parts(
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Result<Self> {
        let n = delta.len();
        if n == 0 {
            return Err(Error::Format("a DFA needs at least one state".into()));
        }
        if initial >= n {
            return Err(Error::Format(format!("initial state {initial} out of range")));
        }
        if accepting.len() != n {
            return Err(Error::Format("accepting vector has the wrong length".into()));
        }
        for (q, row) in delta.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::Format(format!(
                    "state {q} does not have exactly one transition per letter"
                )));
            }
            if let Some(&r) = row.iter().find(|&&r| r >= n) {
                return Err(Error::Format(format!("transition target {r} out of range")));
            }
        }
        Ok(Dfa {
            alphabet,
            delta,
            initial,
            accepting,
        })
    }

    pub(crate) fn from_parts_unchecked(
        alphabet: Alphabet,
        delta: Vec<Vec<usize>>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Self {
        debug_assert!(delta.iter().all(|r| r.len() == alphabet.len()));
        Dfa {
            alphabet,
            delta,
            initial,
            accepting,
        }
    }

    pub fn empty(alphabet: &Alphabet) -> Self {
        Dfa {
            delta: vec![vec![0; alphabet.len()]],
            alphabet: alphabet.clone(),
            initial: 0,
            accepting: vec![false],
        }
    }

    /// The language `A*`.
    pub fn universal(alphabet: &Alphabet) -> Self {
        Self::empty(alphabet).complement()
    }

    pub fn epsilon(alphabet: &Alphabet) -> Self {
        Self::word(alphabet, &[])
    }

    pub fn letter(alphabet: &Alphabet, a: Letter) -> Self {
        Self::word(alphabet, &[a])
    }

    /// The singleton `{w}`.
    pub fn word(alphabet: &Alphabet, w: &[Letter]) -> Self {
        let n = w.len() + 2;
        let sink = n - 1;
        let mut delta = vec![vec![sink; alphabet.len()]; n];
        for (i, &a) in w.iter().enumerate() {
            delta[i][a] = i + 1;
        }
        let mut accepting = vec![false; n];
        accepting[w.len()] = true;
        Dfa::from_parts_unchecked(alphabet.clone(), delta, 0, accepting).minimize()
    }

    /// The set of one-letter words `A`.
    pub fn any_letter(alphabet: &Alphabet) -> Self {
        let k = alphabet.len();
        let delta = vec![vec![1; k], vec![2; k], vec![2; k]];
        Dfa::from_parts_unchecked(alphabet.clone(), delta, 0, vec![false, true, false])
    }

    /// Words whose length is congruent to `residue` modulo `modulus`.
    pub fn length_mod(alphabet: &Alphabet, modulus: usize, residue: usize) -> Self {
        assert!(modulus > 0);
        let delta = (0..modulus)
            .map(|q| vec![(q + 1) % modulus; alphabet.len()])
            .collect();
        let accepting = (0..modulus).map(|q| q == residue % modulus).collect();
        Dfa::from_parts_unchecked(alphabet.clone(), delta, 0, accepting).minimize()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> Vec<usize> {
        (0..self.num_states()).filter(|&q| self.accepting[q]).collect()
    }

    #[inline]
    pub fn step(&self, q: usize, a: Letter) -> usize {
        self.delta[q][a]
    }

    pub fn run(&self, q: usize, w: &[Letter]) -> usize {
        w.iter().fold(q, |q, &a| self.delta[q][a])
    }

    pub fn accepts(&self, w: &[Letter]) -> bool {
        self.accepting[self.run(self.initial, w)]
    }

    /// Same transition structure, different initial state. Not minimized.
    pub fn with_initial(&self, q: usize) -> Dfa {
        Dfa {
            initial: q,
            ..self.clone()
        }
    }

    /// Same transition structure, different accepting set. Not minimized.
    pub fn with_accepting(&self, accepting: Vec<bool>) -> Dfa {
        assert_eq!(accepting.len(), self.num_states());
        Dfa {
            accepting,
            ..self.clone()
        }
    }

    fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let q = order[i];
            for &r in &self.delta[q] {
                if !seen[r] {
                    seen[r] = true;
                    order.push(r);
                }
            }
            i += 1;
        }
        order
    }

    /// States from which some accepting state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let n = self.num_states();
        let mut rev = vec![Vec::new(); n];
        for (q, row) in self.delta.iter().enumerate() {
            for &r in row {
                rev[r].push(q);
            }
        }
        let mut live = self.accepting.clone();
        let mut stack: Vec<usize> = (0..n).filter(|&q| live[q]).collect();
        while let Some(q) = stack.pop() {
            for &p in &rev[q] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        live
    }

    /// Minimal DFA in canonical numbering (Moore refinement on the reachable
    /// part, then BFS renumbering).
    pub fn minimize(&self) -> Dfa {
        let k = self.alphabet.len();
        let states = self.reachable();
        let mut local = vec![usize::MAX; self.num_states()];
        for (i, &q) in states.iter().enumerate() {
            local[q] = i;
        }
        let n = states.len();
        let mut class: Vec<usize> = states.iter().map(|&q| self.accepting[q] as usize).collect();
        let mut count = class.iter().copied().max().map_or(0, |m| m + 1);
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = vec![0; n];
            for i in 0..n {
                let mut sig = Vec::with_capacity(k + 1);
                sig.push(class[i]);
                for a in 0..k {
                    sig.push(class[local[self.delta[states[i]][a]]]);
                }
                let fresh = ids.len();
                next[i] = *ids.entry(sig).or_insert(fresh);
            }
            let new_count = ids.len();
            class = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }
        // canonical BFS numbering over classes
        let mut rep = vec![usize::MAX; count];
        for i in (0..n).rev() {
            rep[class[i]] = i;
        }
        let mut order = vec![usize::MAX; count];
        let mut queue = VecDeque::new();
        let start = class[0];
        order[start] = 0;
        queue.push_back(start);
        let mut seq = vec![start];
        while let Some(c) = queue.pop_front() {
            for a in 0..k {
                let d = class[local[self.delta[states[rep[c]]][a]]];
                if order[d] == usize::MAX {
                    order[d] = seq.len();
                    seq.push(d);
                    queue.push_back(d);
                }
            }
        }
        let delta = seq
            .iter()
            .map(|&c| {
                (0..k)
                    .map(|a| order[class[local[self.delta[states[rep[c]]][a]]]])
                    .collect()
            })
            .collect();
        let accepting = seq.iter().map(|&c| self.accepting[states[rep[c]]]).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            delta,
            initial: 0,
            accepting,
        }
    }

    /// Synchronous product with an arbitrary acceptance combinator.
    pub fn product(&self, other: &Dfa, accept: impl Fn(bool, bool) -> bool) -> Result<Dfa> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let k = self.alphabet.len();
        let mut index = HashMap::new();
        let mut pairs = vec![(self.initial, other.initial)];
        index.insert((self.initial, other.initial), 0usize);
        let mut delta = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            let row = (0..k)
                .map(|a| {
                    let next = (self.delta[p][a], other.delta[q][a]);
                    *index.entry(next).or_insert_with(|| {
                        pairs.push(next);
                        pairs.len() - 1
                    })
                })
                .collect();
            delta.push(row);
            i += 1;
        }
        let accepting = pairs
            .iter()
            .map(|&(p, q)| accept(self.accepting[p], other.accepting[q]))
            .collect();
        Ok(Dfa::from_parts_unchecked(self.alphabet.clone(), delta, 0, accepting).minimize())
    }

    pub fn complement(&self) -> Dfa {
        Dfa {
            accepting: self.accepting.iter().map(|b| !b).collect(),
            ..self.clone()
        }
        .minimize()
    }

    pub fn union(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a || b)
    }

    pub fn intersect(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a && !b)
    }

    pub fn symmetric_difference(&self, other: &Dfa) -> Result<Dfa> {
        self.product(other, |a, b| a != b)
    }

    /// Boolean operation entry point; `Complement` ignores `other`.
    pub fn bool_op(op: BoolOp, left: &Dfa, right: Option<&Dfa>) -> Result<Dfa> {
        let need = || {
            right.ok_or_else(|| Error::Precondition("binary operation needs two operands".into()))
        };
        match op {
            BoolOp::Complement => Ok(left.complement()),
            BoolOp::Union => left.union(need()?),
            BoolOp::Intersect => left.intersect(need()?),
            BoolOp::Difference => left.difference(need()?),
        }
    }

    pub fn concat(&self, other: &Dfa) -> Result<Dfa> {
        self.alphabet.ensure_same(&other.alphabet)?;
        let mut nfa = Nfa::new(self.alphabet.clone());
        let left = nfa.embed(self, false);
        let right = nfa.embed(other, true);
        nfa.add_initial(left + self.initial);
        for q in self.accepting_states() {
            nfa.add_eps(left + q, right + other.initial);
        }
        Ok(nfa.determinize())
    }

    /// Concatenation of a list of languages; the empty list denotes `{ε}`.
    pub fn concat_all<'a>(alphabet: &Alphabet, parts: impl IntoIterator<Item = &'a Dfa>) -> Result<Dfa> {
        parts
            .into_iter()
            .try_fold(Dfa::epsilon(alphabet), |acc, d| acc.concat(d))
    }

    pub fn star(&self) -> Dfa {
        let mut nfa = Nfa::new(self.alphabet.clone());
        let start = nfa.add_state(true);
        let body = nfa.embed(self, true);
        nfa.add_initial(start);
        nfa.add_eps(start, body + self.initial);
        for q in self.accepting_states() {
            nfa.add_eps(body + q, start);
        }
        nfa.determinize()
    }

    /// `K⁺ = K·K*`.
    pub fn plus(&self) -> Dfa {
        self.concat(&self.star()).expect("same alphabet")
    }

    /// `K^n`, with `K^0 = {ε}`.
    pub fn power(&self, n: usize) -> Dfa {
        let mut acc = Dfa::epsilon(&self.alphabet);
        for _ in 0..n {
            acc = acc.concat(self).expect("same alphabet");
        }
        acc
    }

    /// `w⁻¹L` (left) or `Lw⁻¹` (right).
    pub fn quotient(&self, side: QuotientSide, w: &[Letter]) -> Dfa {
        match side {
            QuotientSide::Left => self.with_initial(self.run(self.initial, w)).minimize(),
            QuotientSide::Right => {
                let accepting = (0..self.num_states())
                    .map(|q| self.accepting[self.run(q, w)])
                    .collect();
                self.with_accepting(accepting).minimize()
            }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.shortest_word().is_none()
    }

    pub fn is_universal(&self) -> bool {
        self.complement().is_empty()
    }

    pub fn is_subset_of(&self, other: &Dfa) -> Result<bool> {
        Ok(self.difference(other)?.is_empty())
    }

    pub fn equivalent(&self, other: &Dfa) -> Result<bool> {
        Ok(self.symmetric_difference(other)?.is_empty())
    }

    /// Length-lexicographically least accepted word.
    pub fn shortest_word(&self) -> Option<Word> {
        let n = self.num_states();
        let mut parent: Vec<Option<(usize, Letter)>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[self.initial] = true;
        let mut queue = VecDeque::from([self.initial]);
        while let Some(q) = queue.pop_front() {
            if self.accepting[q] {
                let mut w = Vec::new();
                let mut cur = q;
                while let Some((p, a)) = parent[cur] {
                    w.push(a);
                    cur = p;
                }
                w.reverse();
                return Some(w);
            }
            for (a, &r) in self.delta[q].iter().enumerate() {
                if !seen[r] {
                    seen[r] = true;
                    parent[r] = Some((q, a));
                    queue.push_back(r);
                }
            }
        }
        None
    }

    /// All accepted words of length at most `maxlen`, in length-lexicographic
    /// order.
    pub fn enumerate(&self, maxlen: usize) -> Vec<Word> {
        let live = self.coreachable();
        let mut out = Vec::new();
        let mut buf = Vec::new();
        for len in 0..=maxlen {
            self.enumerate_len(self.initial, len, &live, &mut buf, &mut out);
        }
        out
    }

    fn enumerate_len(&self, q: usize, left: usize, live: &[bool], buf: &mut Word, out: &mut Vec<Word>) {
        if !live[q] {
            return;
        }
        if left == 0 {
            if self.accepting[q] {
                out.push(buf.clone());
            }
            return;
        }
        for a in 0..self.alphabet.len() {
            buf.push(a);
            self.enumerate_len(self.delta[q][a], left - 1, live, buf, out);
            buf.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{compile, parse_regex};

    fn lang(re: &str, alpha: &str) -> Dfa {
        let a = Alphabet::parse(alpha).unwrap();
        compile(&parse_regex(re, &a).unwrap(), &a)
    }

    fn words(d: &Dfa, n: usize) -> Vec<String> {
        d.enumerate(n).iter().map(|w| d.alphabet().render(w)).collect()
    }

    #[test]
    fn boolean_examples() {
        let even = lang("(aa)*", "a");
        assert_eq!(even.complement(), lang("a(aa)*", "a"));
        let l = lang("(ab)*", "ab");
        assert_eq!(l.intersect(&Dfa::universal(l.alphabet())).unwrap(), l);
        assert_eq!(l.union(&Dfa::empty(l.alphabet())).unwrap(), l);
        assert!(even.intersect(&lang("a(aa)*", "a")).unwrap().is_empty());
    }

    #[test]
    fn quotient_examples() {
        let even = lang("(aa)*", "a");
        let a = even.alphabet().word("a").unwrap();
        assert_eq!(even.quotient(QuotientSide::Left, &a), lang("a(aa)*", "a"));
        assert_eq!(even.quotient(QuotientSide::Left, &[]), even);
        let l = lang("(ab)*", "ab");
        let b = l.alphabet().word("b").unwrap();
        assert_eq!(l.quotient(QuotientSide::Right, &b), lang("(ab)*a", "ab"));
    }

    #[test]
    fn enumeration() {
        assert_eq!(words(&lang("(ab)*", "ab"), 4), vec!["ε", "ab", "abab"]);
        assert!(lang("0", "ab").enumerate(10).is_empty());
        assert_eq!(words(&lang("a+b", "ab"), 3), vec!["a", "b"]);
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let x = lang("a", "a");
        let y = lang("a", "ab");
        assert!(matches!(x.union(&y), Err(Error::AlphabetMismatch { .. })));
    }

    #[test]
    fn totality_is_checked() {
        let a = Alphabet::parse("ab").unwrap();
        assert!(Dfa::from_parts(a.clone(), vec![vec![0]], 0, vec![true]).is_err());
        assert!(Dfa::from_parts(a, vec![vec![0, 3]], 0, vec![true]).is_err());
    }

    #[test]
    fn powers_and_star() {
        let ab = lang("ab", "ab");
        assert_eq!(ab.power(2), lang("abab", "ab"));
        assert_eq!(ab.power(0), Dfa::epsilon(ab.alphabet()));
        assert_eq!(ab.star(), lang("(ab)*", "ab"));
        assert_eq!(ab.plus(), lang("ab(ab)*", "ab"));
    }
}
