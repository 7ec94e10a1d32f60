//! The `.oad` derivation script language: parser, printer and runner.

mod ast;
mod lexer;
mod lower;
mod parser;
mod printer;
mod runner;

use thiserror::Error;

pub use ast::{AssertStmt, AtomRef, AxiomRule, IndexRef, Node, ScalarFactor, ScalarLit, Script, Span, Statement};
pub use lower::{atom_value, lower, scalar_value, EvalError};
pub use parser::{parse, parse_expr};
pub use runner::{run, run_text, AssertOutcome, RunReport, ScriptError, Status};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: expected {expected}, found {found}")]
pub struct ParseError {
    pub span: Span,
    pub expected: String,
    pub found: String,
}

impl ParseError {
    pub(crate) fn new(span: Span, expected: impl Into<String>, found: impl Into<String>) -> Self {
        ParseError { span, expected: expected.into(), found: found.into() }
    }
}
