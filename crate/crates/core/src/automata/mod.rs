//! Regular languages over a fixed finite alphabet: regex syntax, complete
//! DFAs with their Boolean and quotient algebra, and the DFA text format.

mod dfa;
mod format;
mod nfa;
mod regex;

pub use dfa::{BoolOp, Dfa, QuotientSide};
pub use format::{parse_dfa, render_dfa};
pub use regex::{compile, parse_regex, RegexAst};

use std::fmt;

use crate::error::{Error, Result};

/// Index of a letter inside its [`Alphabet`].
pub type Letter = usize;

/// A word as a sequence of letter indices.
pub type Word = Vec<Letter>;

/// Ordered, duplicate-free set of single-character letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alphabet {
    letters: Vec<char>,
}

impl Alphabet {
    pub fn new<I: IntoIterator<Item = char>>(letters: I) -> Result<Self> {
        let mut letters: Vec<char> = letters.into_iter().collect();
        letters.sort_unstable();
        letters.dedup();
        if letters.is_empty() {
            return Err(Error::InvalidAlphabet("alphabet must be non-empty".into()));
        }
        if let Some(&c) = letters
            .iter()
            .find(|c| !(c.is_ascii_lowercase() || c.is_ascii_digit()))
        {
            return Err(Error::InvalidAlphabet(format!(
                "letter '{c}' is not in [a-z0-9]"
            )));
        }
        Ok(Alphabet { letters })
    }

    /// Parses a compact alphabet such as `ab`.
    pub fn parse(text: &str) -> Result<Self> {
        Self::new(text.chars().filter(|c| !c.is_whitespace() && *c != ','))
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn symbol(&self, letter: Letter) -> char {
        self.letters[letter]
    }

    pub fn index_of(&self, c: char) -> Option<Letter> {
        self.letters.binary_search(&c).ok()
    }

    /// Converts a textual word into letter indices. `ε` and `1` denote the
    /// empty word.
    pub fn word(&self, text: &str) -> Result<Word> {
        if text == "ε" || text == "1" {
            return Ok(Vec::new());
        }
        text.chars()
            .map(|c| self.index_of(c).ok_or(Error::UnknownLetter(c)))
            .collect()
    }

    /// Renders a word, using `ε` for the empty word.
    pub fn render(&self, word: &[Letter]) -> String {
        if word.is_empty() {
            "ε".to_string()
        } else {
            word.iter().map(|&a| self.letters[a]).collect()
        }
    }

    pub(crate) fn ensure_same(&self, other: &Alphabet) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::AlphabetMismatch {
                left: self.to_string(),
                right: other.to_string(),
            })
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.letters {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_is_sorted_and_deduplicated() {
        let a = Alphabet::new("bab".chars()).unwrap();
        assert_eq!(a.letters(), &['a', 'b']);
        assert_eq!(a.index_of('b'), Some(1));
        assert_eq!(a.render(&[1, 0]), "ba");
        assert_eq!(a.render(&[]), "ε");
    }

    #[test]
    fn rejects_empty_and_bad_letters() {
        assert!(Alphabet::new("".chars()).is_err());
        assert!(Alphabet::new("aB".chars()).is_err());
        assert_eq!(
            Alphabet::parse("ab").unwrap().word("abc"),
            Err(Error::UnknownLetter('c'))
        );
    }
}
