//! Arithmetic of `Z^n`-indexed infinite words, the universal `Z^n`-tree of
//! a group of such words, its metric compactification, and random walks
//! toward its boundary.

pub mod boundary;
pub mod error;
pub mod group;
pub mod lattice;
pub mod walk;
pub mod workspace;
pub mod output;
pub mod selftest;
pub mod word;

pub use error::{Error, Result};
pub use lattice::{Int, ZnVec};
pub use word::{Alphabet, Block, Letter, Word};
