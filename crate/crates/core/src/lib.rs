//! Exact operator algebra for position, momentum, velocity and energy
//! operators, a commutator rewriting engine, a small derivation language and
//! a finite-difference momentum-space laboratory to check results numerically.

pub mod algebra;
pub mod dsl;
pub mod engine;
pub mod numeric;
pub mod sample;
