pub mod algebra;
pub mod automata;
pub mod baseclass;
pub mod cli;
pub mod covering;
pub mod error;
pub mod imprint;
pub mod oracle;
pub mod sdlang;
pub mod semiring;
pub mod stutter;

pub use error::{Error, Result};
