//! Exact noncommutative polynomial algebra over operator atoms.

mod atom;
mod expr;
mod scalar;

pub use atom::{Atom, AtomKind, Axis, Families};
pub use expr::{Expr, Monomial, Term};
pub use scalar::{Gaussian, Scalar};
