//! Prefix codes, synchronization delay and unambiguous products.

use std::collections::VecDeque;

use serde::Serialize;

use crate::automata::{Dfa, Word};
use crate::error::{Error, Result};

/// `ε ∉ K` and `K ∩ KA⁺ = ∅`. On failure returns an offending word.
pub fn prefix_code_violation(k: &Dfa) -> Result<Option<Word>> {
    if k.accepts(&[]) {
        return Ok(Some(Vec::new()));
    }
    let a_plus = Dfa::any_letter(k.alphabet()).plus();
    let extended = k.concat(&a_plus)?;
    Ok(k.intersect(&extended)?.shortest_word())
}

pub fn is_prefix_code(k: &Dfa) -> Result<bool> {
    Ok(prefix_code_violation(k)?.is_none())
}

/// A triple with `uvw ∈ K⁺`, `v ∈ K^d` and `uv ∉ K⁺`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DelayWitness {
    pub u: Word,
    pub v: Word,
    pub w: Word,
}

/// Searches for a counterexample to synchronization delay `d`. A single
/// automaton reads `uvw`, guessing both split points: it runs the `K⁺`
/// automaton throughout and the `K^d` automaton on the middle segment, and
/// may only leave the middle segment when `v ∈ K^d` and `uv ∉ K⁺`.
pub fn sync_delay_witness(k: &Dfa, d: usize) -> Result<Option<DelayWitness>> {
    if let Some(w) = prefix_code_violation(k)? {
        return Err(Error::Precondition(format!(
            "not a prefix code (witness {})",
            k.alphabet().render(&w)
        )));
    }
    let plus = k.plus();
    let kd = k.power(d);
    let letters = k.alphabet().len();
    let (np, nv) = (plus.num_states(), kd.num_states());
    // configuration = (phase, K⁺ state, K^d state)
    let index = |phase: usize, p: usize, v: usize| (phase * np + p) * nv + v;
    let total = 3 * np * nv;
    let mut parent: Vec<Option<(usize, Option<usize>)>> = vec![None; total];
    let start = index(0, plus.initial(), 0);
    let mut visited = vec![false; total];
    visited[start] = true;
    let mut queue = VecDeque::from([(0usize, plus.initial(), 0usize)]);
    let mut goal = None;
    while let Some((phase, p, v)) = queue.pop_front() {
        let here = index(phase, p, v);
        if phase == 2 && plus.is_accepting(p) {
            goal = Some(here);
            break;
        }
        let mut moves: Vec<((usize, usize, usize), Option<usize>)> = Vec::new();
        match phase {
            0 => {
                moves.push(((1, p, kd.initial()), None));
                for a in 0..letters {
                    moves.push(((0, plus.step(p, a), 0), Some(a)));
                }
            }
            1 => {
                if kd.is_accepting(v) && !plus.is_accepting(p) {
                    moves.push(((2, p, 0), None));
                }
                for a in 0..letters {
                    moves.push(((1, plus.step(p, a), kd.step(v, a)), Some(a)));
                }
            }
            _ => {
                for a in 0..letters {
                    moves.push(((2, plus.step(p, a), 0), Some(a)));
                }
            }
        }
        for ((ph, np2, nv2), label) in moves {
            let id = index(ph, np2, nv2);
            if !visited[id] {
                visited[id] = true;
                parent[id] = Some((here, label));
                queue.push_back((ph, np2, nv2));
            }
        }
    }
    let Some(mut cur) = goal else {
        return Ok(None);
    };
    let mut segments: [Word; 3] = [Vec::new(), Vec::new(), Vec::new()];
    while let Some((prev, label)) = parent[cur] {
        let phase = cur / (np * nv);
        if let Some(a) = label {
            segments[phase].push(a);
        }
        cur = prev;
    }
    for s in &mut segments {
        s.reverse();
    }
    let [u, v, w] = segments;
    Ok(Some(DelayWitness { u, v, w }))
}

pub fn sync_delay_holds(k: &Dfa, d: usize) -> Result<bool> {
    Ok(sync_delay_witness(k, d)?.is_none())
}

/// Least `d ≤ dmax` for which `K` has synchronization delay `d`.
pub fn min_sync_delay(k: &Dfa, dmax: usize) -> Result<Option<usize>> {
    for d in 0..=dmax {
        if sync_delay_holds(k, d)? {
            return Ok(Some(d));
        }
    }
    Ok(None)
}

/// A word with two distinct factorizations `u1·v1 = u2·v2`, `u_i ∈ K`,
/// `v_i ∈ L`, split at `first < second`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AmbiguityWitness {
    pub word: Word,
    pub first: usize,
    pub second: usize,
}

/// Searches for a word of `KL` with two splits. The automaton runs `K` on a
/// common prefix, then after the first split runs `L` on one track while
/// `K` continues on the other; after the second split (at least one letter
/// later) both tracks run `L`.
pub fn ambiguity_witness(k: &Dfa, l: &Dfa) -> Result<Option<AmbiguityWitness>> {
    k.alphabet().ensure_same(l.alphabet())?;
    let letters = k.alphabet().len();
    let (nk, nl) = (k.num_states(), l.num_states());
    // phases: 0 before first split, 1 just split (no letter yet), 2 between
    // splits, 3 after both. Track x is K or L depending on phase, y is L.
    let width = nk.max(nl);
    let index = |phase: usize, x: usize, y: usize| (phase * width + x) * nl + y;
    let total = 4 * width * nl;
    let mut parent: Vec<Option<(usize, Option<usize>)>> = vec![None; total];
    let mut visited = vec![false; total];
    let start = (0usize, k.initial(), 0usize);
    visited[index(start.0, start.1, start.2)] = true;
    let mut queue = VecDeque::from([start]);
    let mut goal = None;
    while let Some((phase, x, y)) = queue.pop_front() {
        let here = index(phase, x, y);
        if phase == 3 && l.is_accepting(x) && l.is_accepting(y) {
            goal = Some(here);
            break;
        }
        let mut moves: Vec<((usize, usize, usize), Option<usize>)> = Vec::new();
        match phase {
            0 => {
                if k.is_accepting(x) {
                    moves.push(((1, x, l.initial()), None));
                }
                for a in 0..letters {
                    moves.push(((0, k.step(x, a), 0), Some(a)));
                }
            }
            1 | 2 => {
                if phase == 2 && k.is_accepting(x) {
                    moves.push(((3, l.initial(), y), None));
                }
                for a in 0..letters {
                    moves.push(((2, k.step(x, a), l.step(y, a)), Some(a)));
                }
            }
            _ => {
                for a in 0..letters {
                    moves.push(((3, l.step(x, a), l.step(y, a)), Some(a)));
                }
            }
        }
        for ((ph, x2, y2), label) in moves {
            let id = index(ph, x2, y2);
            if !visited[id] {
                visited[id] = true;
                parent[id] = Some((here, label));
                queue.push_back((ph, x2, y2));
            }
        }
    }
    let Some(mut cur) = goal else {
        return Ok(None);
    };
    let mut word = Vec::new();
    let (mut first, mut second) = (0, 0);
    let phase_of = |id: usize| id / (width * nl);
    while let Some((prev, label)) = parent[cur] {
        match label {
            Some(a) => word.push(a),
            None => {
                if phase_of(cur) == 1 {
                    first = word.len();
                } else {
                    second = word.len();
                }
            }
        }
        cur = prev;
    }
    let n = word.len();
    word.reverse();
    Ok(Some(AmbiguityWitness {
        word,
        first: n - first,
        second: n - second,
    }))
}

pub fn is_unambiguous(k: &Dfa, l: &Dfa) -> Result<bool> {
    Ok(ambiguity_witness(k, l)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{compile, parse_regex, Alphabet};

    fn lang(re: &str) -> Dfa {
        let a = Alphabet::parse("ab").unwrap();
        compile(&parse_regex(re, &a).unwrap(), &a)
    }

    #[test]
    fn prefix_codes() {
        assert!(is_prefix_code(&lang("ab")).unwrap());
        assert!(!is_prefix_code(&lang("a+ab")).unwrap());
        assert!(is_prefix_code(&lang("aa")).unwrap());
        assert!(!is_prefix_code(&lang("1+a")).unwrap());
        assert!(is_prefix_code(&lang("(aab)*ab")).unwrap());
    }

    #[test]
    fn delays() {
        assert_eq!(min_sync_delay(&lang("ab"), 8).unwrap(), Some(1));
        assert!(!sync_delay_holds(&lang("(aab)*ab"), 1).unwrap());
        assert!(sync_delay_holds(&lang("(aab)*ab"), 2).unwrap());
        assert_eq!(min_sync_delay(&lang("(aab)*ab"), 8).unwrap(), Some(2));
        assert_eq!(min_sync_delay(&lang("aa"), 10).unwrap(), None);
        assert!(sync_delay_witness(&lang("a+ab"), 1).is_err());
    }

    #[test]
    fn delay_witness_is_genuine() {
        let k = lang("aa");
        let plus = k.plus();
        for d in 1..=4 {
            let wit = sync_delay_witness(&k, d).unwrap().unwrap();
            let uvw: Word = [wit.u.clone(), wit.v.clone(), wit.w.clone()].concat();
            let uv: Word = [wit.u.clone(), wit.v.clone()].concat();
            assert!(plus.accepts(&uvw));
            assert!(k.power(d).accepts(&wit.v));
            assert!(!plus.accepts(&uv));
        }
    }

    #[test]
    fn unambiguity() {
        assert!(is_unambiguous(&lang("a"), &lang("b")).unwrap());
        let w = ambiguity_witness(&lang("a*"), &lang("a*")).unwrap().unwrap();
        assert_eq!(w.word.len(), 1);
        assert!(w.first < w.second);
        assert!(is_unambiguous(&lang("a*"), &lang("b(a+b)*")).unwrap());
        assert!(!is_unambiguous(&lang("a+ab"), &lang("b+1")).unwrap());
    }
}
