use std::fmt::Write;

use super::{Alphabet, Dfa};
use crate::error::{Error, Result};

/// Parses the line-oriented DFA format:
///
/// ```text
/// alphabet: ab
/// states: 2
/// initial: 0
/// accepting: 0
/// trans 0 a 1
/// trans 0 b 0
/// ...
/// ```
///
/// Blank lines and lines starting with `#` are ignored. Every state needs
/// exactly one transition per letter. The result is not minimized.
pub fn parse_dfa(text: &str) -> Result<Dfa> {
    let mut alphabet = None;
    let mut states = None;
    let mut initial = None;
    let mut accepting: Vec<usize> = Vec::new();
    let mut trans: Vec<(usize, char, usize)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |msg: &str| Error::Format(format!("line {}: {msg}", lineno + 1));
        let num = |s: &str| s.parse::<usize>().map_err(|_| bad(&format!("expected a number, got '{s}'")));
        if let Some(rest) = line.strip_prefix("alphabet:") {
            alphabet = Some(Alphabet::parse(rest.trim())?);
        } else if let Some(rest) = line.strip_prefix("states:") {
            states = Some(num(rest.trim())?);
        } else if let Some(rest) = line.strip_prefix("initial:") {
            initial = Some(num(rest.trim())?);
        } else if let Some(rest) = line.strip_prefix("accepting:") {
            for tok in rest.split_whitespace() {
                accepting.push(num(tok)?);
            }
        } else if let Some(rest) = line.strip_prefix("trans") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 3 || toks[1].chars().count() != 1 {
                return Err(bad("expected 'trans <q> <letter> <q'>'"));
            }
            trans.push((num(toks[0])?, toks[1].chars().next().unwrap(), num(toks[2])?));
        } else {
            return Err(bad(&format!("unrecognized line '{line}'")));
        }
    }
    let alphabet = alphabet.ok_or_else(|| Error::Format("missing 'alphabet:' line".into()))?;
    let n = states.ok_or_else(|| Error::Format("missing 'states:' line".into()))?;
    let initial = initial.ok_or_else(|| Error::Format("missing 'initial:' line".into()))?;
    let mut delta = vec![vec![usize::MAX; alphabet.len()]; n];
    for (p, c, q) in trans {
        let a = alphabet.index_of(c).ok_or(Error::UnknownLetter(c))?;
        if p >= n || q >= n {
            return Err(Error::Format(format!("transition {p} {c} {q} out of range")));
        }
        if delta[p][a] != usize::MAX {
            return Err(Error::Format(format!("duplicate transition for state {p} letter {c}")));
        }
        delta[p][a] = q;
    }
    for (q, row) in delta.iter().enumerate() {
        if let Some(a) = row.iter().position(|&r| r == usize::MAX) {
            return Err(Error::Format(format!(
                "state {q} has no transition on '{}'",
                alphabet.symbol(a)
            )));
        }
    }
    let mut acc = vec![false; n];
    for q in accepting {
        if q >= n {
            return Err(Error::Format(format!("accepting state {q} out of range")));
        }
        acc[q] = true;
    }
    Dfa::from_parts(alphabet, delta, initial, acc)
}

pub fn render_dfa(dfa: &Dfa) -> String {
    let mut out = String::new();
    let alphabet = dfa.alphabet();
    writeln!(out, "alphabet: {alphabet}").unwrap();
    writeln!(out, "states: {}", dfa.num_states()).unwrap();
    writeln!(out, "initial: {}", dfa.initial()).unwrap();
    let acc: Vec<String> = dfa.accepting_states().iter().map(|q| q.to_string()).collect();
    writeln!(out, "accepting: {}", acc.join(" ")).unwrap();
    for q in 0..dfa.num_states() {
        for a in 0..alphabet.len() {
            writeln!(out, "trans {q} {} {}", alphabet.symbol(a), dfa.step(q, a)).unwrap();
        }
    }
    out
}
