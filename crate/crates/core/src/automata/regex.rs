use std::fmt;

use super::{Alphabet, Dfa, Letter};
use crate::error::{Error, Result};

/// Regular expression syntax tree, extended with complement and
/// intersection.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RegexAst {
    Empty,
    Epsilon,
    Letter(Letter),
    Union(Box<RegexAst>, Box<RegexAst>),
    Concat(Box<RegexAst>, Box<RegexAst>),
    Star(Box<RegexAst>),
    Complement(Box<RegexAst>),
    Intersect(Box<RegexAst>, Box<RegexAst>),
}

impl RegexAst {
    pub fn union(l: RegexAst, r: RegexAst) -> Self {
        RegexAst::Union(Box::new(l), Box::new(r))
    }

    pub fn concat(l: RegexAst, r: RegexAst) -> Self {
        RegexAst::Concat(Box::new(l), Box::new(r))
    }

    pub fn intersect(l: RegexAst, r: RegexAst) -> Self {
        RegexAst::Intersect(Box::new(l), Box::new(r))
    }

    pub fn star(e: RegexAst) -> Self {
        RegexAst::Star(Box::new(e))
    }

    pub fn complement(e: RegexAst) -> Self {
        RegexAst::Complement(Box::new(e))
    }

    /// Letters occurring in the expression.
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        self.collect_letters(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_letters(&self, out: &mut Vec<Letter>) {
        match self {
            RegexAst::Empty | RegexAst::Epsilon => {}
            RegexAst::Letter(a) => out.push(*a),
            RegexAst::Star(e) | RegexAst::Complement(e) => e.collect_letters(out),
            RegexAst::Union(l, r) | RegexAst::Concat(l, r) | RegexAst::Intersect(l, r) => {
                l.collect_letters(out);
                r.collect_letters(out);
            }
        }
    }

    /// Direct membership test by structural recursion over split points. Only
    /// meant for short words; exponential in general.
    pub fn matches(&self, w: &[Letter]) -> bool {
        match self {
            RegexAst::Empty => false,
            RegexAst::Epsilon => w.is_empty(),
            RegexAst::Letter(a) => w == [*a],
            RegexAst::Union(l, r) => l.matches(w) || r.matches(w),
            RegexAst::Intersect(l, r) => l.matches(w) && r.matches(w),
            RegexAst::Complement(e) => !e.matches(w),
            RegexAst::Concat(l, r) => (0..=w.len()).any(|i| l.matches(&w[..i]) && r.matches(&w[i..])),
            RegexAst::Star(e) => {
                w.is_empty() || (1..=w.len()).any(|i| e.matches(&w[..i]) && self.matches(&w[i..]))
            }
        }
    }

    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        RegexDisplay { ast: self, alphabet }
    }
}

struct RegexDisplay<'a> {
    ast: &'a RegexAst,
    alphabet: &'a Alphabet,
}

impl RegexDisplay<'_> {
    // precedence: 0 union, 1 intersect, 2 concat, 3 unary
    fn write(&self, e: &RegexAst, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (own, open) = match e {
            RegexAst::Union(..) => (0, prec > 0),
            RegexAst::Intersect(..) => (1, prec > 1),
            RegexAst::Concat(..) => (2, prec > 2),
            _ => (3, false),
        };
        if open {
            write!(f, "(")?;
        }
        match e {
            RegexAst::Empty => write!(f, "0")?,
            RegexAst::Epsilon => write!(f, "1")?,
            RegexAst::Letter(a) => write!(f, "{}", self.alphabet.symbol(*a))?,
            RegexAst::Union(l, r) => {
                self.write(l, own, f)?;
                write!(f, "+")?;
                self.write(r, own + 1, f)?;
            }
            RegexAst::Intersect(l, r) => {
                self.write(l, own, f)?;
                write!(f, "&")?;
                self.write(r, own + 1, f)?;
            }
            RegexAst::Concat(l, r) => {
                self.write(l, own, f)?;
                self.write(r, own + 1, f)?;
            }
            RegexAst::Star(x) => {
                if matches!(**x, RegexAst::Complement(_)) {
                    write!(f, "(")?;
                    self.write(x, 0, f)?;
                    write!(f, ")")?;
                } else {
                    self.write(x, 4, f)?;
                }
                write!(f, "*")?;
            }
            RegexAst::Complement(x) => {
                write!(f, "~")?;
                self.write(x, 4, f)?;
            }
        }
        if open {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for RegexDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.ast, 0, f)
    }
}

/// Parses the ASCII regex grammar:
///
/// ```text
/// union   := inter ('+' inter)*
/// inter   := concat ('&' concat)*
/// concat  := unary unary*
/// unary   := '~' unary | atom '*'*
/// atom    := letter | '0' | '1' | '(' union ')'
/// ```
///
/// `0` is the empty language, `1` the empty word. Whitespace is ignored.
/// Error offsets are 1-based character columns; an unclosed parenthesis is
/// reported at the column of the opening parenthesis.
pub fn parse_regex(text: &str, alphabet: &Alphabet) -> Result<RegexAst> {
    let chars: Vec<(usize, char)> = text
        .chars()
        .enumerate()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(i, c)| (i + 1, c))
        .collect();
    let mut p = Parser {
        chars,
        pos: 0,
        alphabet,
        end: text.chars().count() + 1,
    };
    let ast = p.union()?;
    if let Some(&(col, c)) = p.chars.get(p.pos) {
        return Err(Error::Syntax {
            offset: col,
            message: format!("unexpected '{c}'"),
        });
    }
    Ok(ast)
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    pos: usize,
    alphabet: &'a Alphabet,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn col(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(c, _)| c)
    }

    fn union(&mut self) -> Result<RegexAst> {
        let mut e = self.inter()?;
        while self.peek() == Some('+') {
            self.pos += 1;
            e = RegexAst::union(e, self.inter()?);
        }
        Ok(e)
    }

    fn inter(&mut self) -> Result<RegexAst> {
        let mut e = self.concat()?;
        while self.peek() == Some('&') {
            self.pos += 1;
            e = RegexAst::intersect(e, self.concat()?);
        }
        Ok(e)
    }

    fn starts_unary(c: char) -> bool {
        c == '~' || c == '(' || c.is_ascii_lowercase() || c.is_ascii_digit()
    }

    fn concat(&mut self) -> Result<RegexAst> {
        let mut e = self.unary()?;
        while self.peek().is_some_and(Self::starts_unary) {
            e = RegexAst::concat(e, self.unary()?);
        }
        Ok(e)
    }

    fn unary(&mut self) -> Result<RegexAst> {
        if self.peek() == Some('~') {
            self.pos += 1;
            return Ok(RegexAst::complement(self.unary()?));
        }
        let mut e = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            e = RegexAst::star(e);
        }
        Ok(e)
    }

    fn atom(&mut self) -> Result<RegexAst> {
        let col = self.col();
        match self.peek() {
            None => Err(Error::Syntax {
                offset: col,
                message: "unexpected end of input".into(),
            }),
            Some('0') => {
                self.pos += 1;
                Ok(RegexAst::Empty)
            }
            Some('1') => {
                self.pos += 1;
                Ok(RegexAst::Epsilon)
            }
            Some('(') => {
                self.pos += 1;
                let e = self.union()?;
                if self.peek() == Some(')') {
                    self.pos += 1;
                    Ok(e)
                } else {
                    Err(Error::Syntax {
                        offset: col,
                        message: "unclosed parenthesis".into(),
                    })
                }
            }
            Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit() => {
                self.pos += 1;
                self.alphabet
                    .index_of(c)
                    .map(RegexAst::Letter)
                    .ok_or(Error::UnknownLetter(c))
            }
            Some(c) => Err(Error::Syntax {
                offset: col,
                message: format!("unexpected '{c}'"),
            }),
        }
    }
}

/// Compiles an AST bottom-up into its minimal DFA.
pub fn compile(ast: &RegexAst, alphabet: &Alphabet) -> Dfa {
    match ast {
        RegexAst::Empty => Dfa::empty(alphabet),
        RegexAst::Epsilon => Dfa::epsilon(alphabet),
        RegexAst::Letter(a) => Dfa::letter(alphabet, *a),
        RegexAst::Union(l, r) => compile(l, alphabet)
            .union(&compile(r, alphabet))
            .expect("same alphabet"),
        RegexAst::Intersect(l, r) => compile(l, alphabet)
            .intersect(&compile(r, alphabet))
            .expect("same alphabet"),
        RegexAst::Concat(l, r) => compile(l, alphabet)
            .concat(&compile(r, alphabet))
            .expect("same alphabet"),
        RegexAst::Star(e) => compile(e, alphabet).star(),
        RegexAst::Complement(e) => compile(e, alphabet).complement(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    #[test]
    fn parses_star_of_concat() {
        let ast = parse_regex("(ab)*", &ab()).unwrap();
        assert_eq!(
            ast,
            RegexAst::star(RegexAst::concat(RegexAst::Letter(0), RegexAst::Letter(1)))
        );
    }

    #[test]
    fn complement_of_empty_is_universal() {
        let ast = parse_regex("~(0)", &ab()).unwrap();
        assert_eq!(ast, RegexAst::complement(RegexAst::Empty));
        let d = compile(&ast, &ab());
        assert_eq!(d.num_states(), 1);
        assert!(d.is_accepting(0));
    }

    #[test]
    fn unbalanced_parenthesis_reports_column() {
        let err = parse_regex("(a(b", &ab()).unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                offset: 3,
                message: "unclosed parenthesis".into()
            }
        );
    }

    #[test]
    fn letter_outside_alphabet() {
        assert_eq!(parse_regex("abc", &ab()), Err(Error::UnknownLetter('c')));
    }

    #[test]
    fn compile_examples() {
        let a = Alphabet::parse("a").unwrap();
        let empty = compile(&RegexAst::Empty, &a);
        assert_eq!(empty.num_states(), 1);
        assert!(empty.accepting_states().is_empty());
        let even = compile(&parse_regex("(aa)*", &a).unwrap(), &a);
        assert_eq!(even.num_states(), 2);
        assert!(even.is_accepting(even.initial()));
        assert!(!even.accepts(&[0]));
    }

    #[test]
    fn precedence() {
        let a = ab();
        let e = parse_regex("a+b&ab*", &a).unwrap();
        // '+' binds loosest, then '&', then concatenation
        assert!(matches!(e, RegexAst::Union(..)));
        let shown = e.display(&a).to_string();
        assert_eq!(parse_regex(&shown, &a).unwrap(), e);
        assert!(parse_regex("~a*", &a).unwrap().matches(&[0, 1]));
    }
}
