//! Verbal length and commutator calculus in free groups: word arithmetic,
//! certified rewrites, exact W-length in finite groups and a rational bound
//! engine.

pub mod bound;
pub mod cover;
pub mod error;
pub mod experiments;
pub mod group;
pub mod identity;
pub mod magnus;
pub mod parse;
pub mod verbal;
pub mod word;

pub use error::{Error, Result};
pub use parse::Alphabet;
pub use word::{Letter, Substitution, Word};
