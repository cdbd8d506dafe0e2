//! Script language and output formats on top of `stratifold`.
//!
//! The `strat` binary in this crate evaluates small scripts like
//!
//! ```text
//! let x = cone(rotsphere(4));
//! let y = quotient(x, <2>);
//! print depth(y);
//! emit dot y;
//! ```
//!
//! See [`parse`] for the grammar, [`eval`] for what each operation does, and
//! [`emit`] for the DOT and JSON renderings.

pub mod ast;
pub mod emit;
pub mod eval;
pub mod parse;
