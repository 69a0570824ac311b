//! Clifford algebra product kernel for `Cl(p,q)` with a diagonal quadratic
//! form.
//!
//! Basis monomials are bitmasks ([`blades`]), polynomials are sparse sorted
//! term lists ([`multivector`]), and [`engines`] holds the product
//! algorithms: a sequential double loop, a recursive fork-join product, a
//! flat thread-per-block product, a Chevalley recursion and a reference
//! oracle. [`bench`] times them on most-general polynomials.

pub mod bench;
pub mod blades;
pub mod cli;
pub mod engines;
pub mod multivector;
pub mod parse;
pub mod random;
pub mod scalar;
pub mod selftest;
pub mod verify;

pub use blades::{Blade, Sign, Signature};
pub use engines::{multiply, EngineConfig, EngineKind, SplitRule, Threads};
pub use multivector::{AlgebraError, Multivector, Term};
pub use parse::{parse, parse_lines, ParseError};
pub use scalar::{CoeffKind, Coefficient, Rational};
