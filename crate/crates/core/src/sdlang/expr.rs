//! Expressions built from `∅` and letters by intersection with base
//! languages, disjoint union, unambiguous product and star of prefix codes
//! with bounded synchronization delay.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{Alphabet, Dfa, Letter};
use crate::baseclass::{ClassId, FiniteBase};
use crate::error::{Error, Result};

use super::delay::{ambiguity_witness, prefix_code_violation, sync_delay_witness};
use super::sf::{sf_concat, sf_empty, sf_intersect, sf_letter, sf_union, star_eliminate, Sf, SfExpr};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SdExpr {
    Empty,
    Letter(Letter),
    /// `e ∩ (union of the listed ~C-classes)`.
    Inter(Sd, Vec<ClassId>),
    DisjUnion(Sd, Sd),
    UnambProduct(Sd, Sd),
    /// `e*` with declared synchronization delay.
    Star(Sd, usize),
}

pub type Sd = Arc<SdExpr>;

pub fn sd_empty() -> Sd {
    Arc::new(SdExpr::Empty)
}

pub fn sd_letter(a: Letter) -> Sd {
    Arc::new(SdExpr::Letter(a))
}

pub fn sd_inter(e: &Sd, classes: Vec<ClassId>) -> Sd {
    Arc::new(SdExpr::Inter(e.clone(), classes))
}

pub fn sd_union(l: &Sd, r: &Sd) -> Sd {
    Arc::new(SdExpr::DisjUnion(l.clone(), r.clone()))
}

pub fn sd_product(l: &Sd, r: &Sd) -> Sd {
    Arc::new(SdExpr::UnambProduct(l.clone(), r.clone()))
}

pub fn sd_star(e: &Sd, d: usize) -> Sd {
    Arc::new(SdExpr::Star(e.clone(), d))
}

/// Left-nested product of the letters of a non-empty word.
pub fn sd_word(w: &[Letter]) -> Sd {
    assert!(!w.is_empty());
    w[1..].iter().fold(sd_letter(w[0]), |acc, &a| sd_product(&acc, &sd_letter(a)))
}

/// Disjoint union of a list, `∅` when empty.
pub fn sd_union_all(items: &[Sd]) -> Sd {
    items
        .iter()
        .cloned()
        .reduce(|acc, x| sd_union(&acc, &x))
        .unwrap_or_else(sd_empty)
}

impl SdExpr {
    /// Number of distinct nodes.
    pub fn size(self: &Arc<Self>) -> usize {
        let mut seen = std::collections::HashSet::new();
        fn go(e: &Sd, seen: &mut std::collections::HashSet<usize>) -> usize {
            if !seen.insert(Arc::as_ptr(e) as usize) {
                return 0;
            }
            1 + match &**e {
                SdExpr::Inter(x, _) | SdExpr::Star(x, _) => go(x, seen),
                SdExpr::DisjUnion(l, r) | SdExpr::UnambProduct(l, r) => go(l, seen) + go(r, seen),
                _ => 0,
            }
        }
        go(self, &mut seen)
    }

    pub fn max_delay(self: &Arc<Self>) -> usize {
        match &**self {
            SdExpr::Star(x, d) => (*d).max(x.max_delay()),
            SdExpr::Inter(x, _) => x.max_delay(),
            SdExpr::DisjUnion(l, r) | SdExpr::UnambProduct(l, r) => l.max_delay().max(r.max_delay()),
            _ => 0,
        }
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        write_sd(self, alphabet, 0, &mut out);
        out
    }
}

fn word_letters(e: &SdExpr) -> Option<Vec<Letter>> {
    match e {
        SdExpr::Letter(a) => Some(vec![*a]),
        SdExpr::UnambProduct(l, r) => match &**r {
            SdExpr::Letter(b) => {
                let mut w = word_letters(l)?;
                w.push(*b);
                Some(w)
            }
            _ => None,
        },
        _ => None,
    }
}

fn write_sd(e: &SdExpr, alphabet: &Alphabet, prec: u8, out: &mut String) {
    if let Some(w) = word_letters(e).filter(|w| w.len() > 1) {
        out.push('{');
        out.push_str(&alphabet.render(&w));
        out.push('}');
        return;
    }
    let open = match e {
        SdExpr::DisjUnion(..) => prec > 1,
        SdExpr::UnambProduct(..) => prec > 2,
        _ => false,
    };
    if open {
        out.push('(');
    }
    match e {
        SdExpr::Empty => out.push('0'),
        SdExpr::Letter(a) => out.push(alphabet.symbol(*a)),
        SdExpr::Inter(x, ids) => {
            write_sd(x, alphabet, 3, out);
            let ids: Vec<String> = ids.iter().map(|c| c.to_string()).collect();
            out.push_str(&format!(" ^ {{{}}}", ids.join(",")));
        }
        SdExpr::DisjUnion(l, r) => {
            write_sd(l, alphabet, 1, out);
            out.push_str(" | ");
            write_sd(r, alphabet, 2, out);
        }
        SdExpr::UnambProduct(l, r) => {
            write_sd(l, alphabet, 2, out);
            out.push_str(" . ");
            write_sd(r, alphabet, 3, out);
        }
        SdExpr::Star(x, d) => {
            write_sd(x, alphabet, 3, out);
            out.push_str(&format!("*{d}"));
        }
    }
    if open {
        out.push(')');
    }
}

/// Parses the surface syntax:
///
/// ```text
/// union   := product ('|' product)*
/// product := postfix ('.' postfix)*
/// postfix := atom ('^' '{' ids '}' | '*' digits)*
/// atom    := '0' | letter | '{' letters '}' | '(' union ')'
/// ```
///
/// `{w}` abbreviates the product of the letters of `w`.
pub fn parse_sd(text: &str, alphabet: &Alphabet) -> Result<Sd> {
    let mut p = SdParser {
        chars: text.chars().collect(),
        pos: 0,
        alphabet,
    };
    let e = p.union()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.err(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(e)
}

struct SdParser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl SdParser<'_> {
    fn err(&self, message: String) -> Error {
        Error::Syntax {
            offset: self.pos + 1,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected '{c}'")))
        }
    }

    fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number".into()));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().map_err(|_| self.err(format!("number '{s}' out of range")))
    }

    fn union(&mut self) -> Result<Sd> {
        let mut e = self.product()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let r = self.product()?;
            e = sd_union(&e, &r);
        }
        Ok(e)
    }

    fn product(&mut self) -> Result<Sd> {
        let mut e = self.postfix()?;
        while self.peek() == Some('.') {
            self.pos += 1;
            let r = self.postfix()?;
            e = sd_product(&e, &r);
        }
        Ok(e)
    }

    fn postfix(&mut self) -> Result<Sd> {
        let mut e = self.atom()?;
        loop {
            match self.peek() {
                Some('^') => {
                    self.pos += 1;
                    self.expect('{')?;
                    let mut ids = Vec::new();
                    if self.peek() != Some('}') {
                        ids.push(self.number()?);
                        while self.peek() == Some(',') {
                            self.pos += 1;
                            ids.push(self.number()?);
                        }
                    }
                    self.expect('}')?;
                    e = sd_inter(&e, ids);
                }
                Some('*') => {
                    self.pos += 1;
                    let d = self.number()?;
                    e = sd_star(&e, d);
                }
                _ => return Ok(e),
            }
        }
    }

    fn letter(&mut self, c: char) -> Result<Letter> {
        self.alphabet.index_of(c).ok_or(Error::UnknownLetter(c))
    }

    fn atom(&mut self) -> Result<Sd> {
        match self.peek() {
            None => Err(self.err("unexpected end of expression".into())),
            Some('0') => {
                self.pos += 1;
                Ok(sd_empty())
            }
            Some('(') => {
                let open = self.pos;
                self.pos += 1;
                let e = self.union()?;
                if self.peek() != Some(')') {
                    self.pos = open;
                    return Err(self.err("unclosed parenthesis".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some('{') => {
                self.pos += 1;
                let mut w = Vec::new();
                while let Some(c) = self.peek() {
                    if c == '}' {
                        break;
                    }
                    w.push(self.letter(c)?);
                    self.pos += 1;
                }
                self.expect('}')?;
                if w.is_empty() {
                    return Err(self.err("empty word literal".into()));
                }
                Ok(sd_word(&w))
            }
            Some(c) if c.is_ascii_alphanumeric() => {
                let a = self.letter(c)?;
                self.pos += 1;
                Ok(sd_letter(a))
            }
            Some(c) => Err(self.err(format!("unexpected '{c}'"))),
        }
    }
}

/// Compiles `e` to a minimal DFA, checking the side condition of every node:
/// class ids exist, unions are disjoint, products unambiguous, and starred
/// languages are prefix codes with the declared delay (at most `dmax`).
/// Shared subexpressions are checked once.
pub fn validate(e: &Sd, alphabet: &Alphabet, base: Option<&FiniteBase>, dmax: usize) -> Result<Dfa> {
    if let Some(fb) = base {
        alphabet.ensure_same(fb.alphabet())?;
    }
    let mut memo = HashMap::new();
    validate_rec(e, alphabet, base, dmax, &mut memo)
}

fn violation(rule: &'static str, detail: String) -> Error {
    Error::Validation { rule, detail }
}

pub(crate) fn validate_rec(
    e: &Sd,
    alphabet: &Alphabet,
    base: Option<&FiniteBase>,
    dmax: usize,
    memo: &mut HashMap<usize, Dfa>,
) -> Result<Dfa> {
    let key = Arc::as_ptr(e) as usize;
    if let Some(d) = memo.get(&key) {
        return Ok(d.clone());
    }
    let mut go = |x: &Sd| validate_rec(x, alphabet, base, dmax, memo);
    let d = match &**e {
        SdExpr::Empty => Dfa::empty(alphabet),
        SdExpr::Letter(a) => Dfa::letter(alphabet, *a),
        SdExpr::Inter(x, ids) => {
            let fb = base.ok_or_else(|| Error::UnsupportedBase("class intersection needs a finite base".into()))?;
            if let Some(c) = ids.iter().find(|&&c| c >= fb.num_classes()) {
                return Err(violation("intersection", format!("unknown class {c}")));
            }
            go(x)?.intersect(&fb.class_language(ids))?
        }
        SdExpr::DisjUnion(l, r) => {
            let (l, r) = (go(l)?, go(r)?);
            if let Some(w) = l.intersect(&r)?.shortest_word() {
                return Err(violation(
                    "disjoint-union",
                    format!("operands intersect, witness \"{}\"", alphabet.render(&w)),
                ));
            }
            l.union(&r)?
        }
        SdExpr::UnambProduct(l, r) => {
            let (l, r) = (go(l)?, go(r)?);
            if let Some(w) = ambiguity_witness(&l, &r)? {
                return Err(violation(
                    "unambiguous-product",
                    format!(
                        "word \"{}\" splits after {} and after {} letters",
                        alphabet.render(&w.word),
                        w.first,
                        w.second
                    ),
                ));
            }
            l.concat(&r)?
        }
        SdExpr::Star(x, d) => {
            let k = go(x)?;
            if let Some(w) = prefix_code_violation(&k)? {
                return Err(violation(
                    "prefix-code",
                    format!("starred language is not a prefix code, witness \"{}\"", alphabet.render(&w)),
                ));
            }
            if let Some(w) = sync_delay_witness(&k, *d)? {
                return Err(violation(
                    "sync-delay",
                    format!(
                        "no synchronization delay {d}: u=\"{}\" v=\"{}\" w=\"{}\"",
                        alphabet.render(&w.u),
                        alphabet.render(&w.v),
                        alphabet.render(&w.w)
                    ),
                ));
            }
            if *d > dmax {
                return Err(violation("delay-bound", format!("declared delay {d} exceeds dmax {dmax}")));
            }
            k.star()
        }
    };
    memo.insert(key, d.clone());
    Ok(d)
}

/// Translates to a star-free expression, eliminating each star with its
/// declared delay.
pub fn to_sf(e: &Sd, alphabet: &Alphabet, base: Option<&FiniteBase>) -> Result<Sf> {
    let mut memo = HashMap::new();
    to_sf_rec(e, alphabet, base, &mut memo)
}

fn to_sf_rec(e: &Sd, alphabet: &Alphabet, base: Option<&FiniteBase>, memo: &mut HashMap<usize, Sf>) -> Result<Sf> {
    let key = Arc::as_ptr(e) as usize;
    if let Some(s) = memo.get(&key) {
        return Ok(s.clone());
    }
    let s = match &**e {
        SdExpr::Empty => sf_empty(),
        SdExpr::Letter(a) => sf_letter(*a),
        SdExpr::Inter(x, ids) => sf_intersect(
            &to_sf_rec(x, alphabet, base, memo)?,
            &Arc::new(SfExpr::ClassLang(ids.clone())),
        ),
        SdExpr::DisjUnion(l, r) => sf_union(&to_sf_rec(l, alphabet, base, memo)?, &to_sf_rec(r, alphabet, base, memo)?),
        SdExpr::UnambProduct(l, r) => {
            sf_concat(&to_sf_rec(l, alphabet, base, memo)?, &to_sf_rec(r, alphabet, base, memo)?)
        }
        SdExpr::Star(x, d) => star_eliminate(&to_sf_rec(x, alphabet, base, memo)?, *d, alphabet, base)?,
    };
    memo.insert(key, s.clone());
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{compile, parse_regex};
    use crate::baseclass::BaseClass;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    fn lang(re: &str) -> Dfa {
        compile(&parse_regex(re, &ab()).unwrap(), &ab())
    }

    #[test]
    fn parse_and_print() {
        let e = parse_sd("({ab})*1 | b . a", &ab()).unwrap();
        assert_eq!(e.display(&ab()), "{ab}*1 | {ba}");
        let again = parse_sd(&e.display(&ab()), &ab()).unwrap();
        assert_eq!(again, e);
        let e = parse_sd("(a | b)*1 ^ {0} . (0)", &ab()).unwrap();
        assert_eq!(parse_sd(&e.display(&ab()), &ab()).unwrap(), e);
        assert!(matches!(parse_sd("(a | b", &ab()), Err(Error::Syntax { offset: 1, .. })));
        assert!(matches!(parse_sd("a*", &ab()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_sd("c", &ab()), Err(Error::UnknownLetter('c'))));
    }

    #[test]
    fn validate_examples() {
        let e = parse_sd("{ab}*1", &ab()).unwrap();
        assert_eq!(validate(&e, &ab(), None, 8).unwrap(), lang("(ab)*"));

        let e = parse_sd("a | a", &ab()).unwrap();
        let err = validate(&e, &ab(), None, 8).unwrap_err();
        assert!(matches!(err, Error::Validation { rule: "disjoint-union", .. }));
        assert!(err.to_string().contains("\"a\""));

        let e = parse_sd("{aa}*10", &ab()).unwrap();
        let err = validate(&e, &ab(), None, 10).unwrap_err();
        assert!(matches!(err, Error::Validation { rule: "sync-delay", .. }));

        let e = parse_sd("(a | {ab})*3", &ab()).unwrap();
        assert!(matches!(validate(&e, &ab(), None, 8), Err(Error::Validation { rule: "prefix-code", .. })));

        let e = parse_sd("(a | b)*1 . (a | b)*1", &ab()).unwrap();
        assert!(matches!(
            validate(&e, &ab(), None, 8),
            Err(Error::Validation { rule: "unambiguous-product", .. })
        ));

        let e = parse_sd("{ab}*9", &ab()).unwrap();
        assert!(matches!(validate(&e, &ab(), None, 8), Err(Error::Validation { rule: "delay-bound", .. })));
    }

    #[test]
    fn class_intersection() {
        let base = BaseClass::length_mod(&ab(), 2);
        let fb = base.as_finite().unwrap();
        let e = parse_sd("(a | b)*1 ^ {0}", &ab()).unwrap();
        assert_eq!(validate(&e, &ab(), Some(fb), 8).unwrap(), lang("((a+b)(a+b))*"));
        assert!(validate(&e, &ab(), None, 8).is_err());
        let bad = parse_sd("a ^ {7}", &ab()).unwrap();
        assert!(validate(&bad, &ab(), Some(fb), 8).is_err());
    }

    #[test]
    fn star_free_translation() {
        let e = parse_sd("({aab}*1 . {ab})*2", &ab()).unwrap();
        let sf = to_sf(&e, &ab(), None).unwrap();
        assert_eq!(sf.compile(&ab(), None).unwrap(), lang("((aab)*ab)*"));
    }
}
