use thiserror::Error;

/// Errors produced by parsing, decision procedures and synthesis.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("letter '{0}' is not in the alphabet")]
    UnknownLetter(char),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("alphabet mismatch: {left} vs {right}")]
    AlphabetMismatch { left: String, right: String },

    #[error("malformed input: {0}")]
    Format(String),

    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),

    #[error("budget exceeded: {what} has size {size}, budget is {budget}")]
    Budget {
        what: &'static str,
        size: usize,
        budget: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported base class: {0}")]
    UnsupportedBase(String),

    #[error("{rule} violated: {detail}")]
    Validation { rule: &'static str, detail: String },

    #[error("oracle failure: {0}")]
    Oracle(String),

    #[error("not C-aperiodic: element {element} is a stutter with s^w != s^(w+1)")]
    NotAperiodic { element: String },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
