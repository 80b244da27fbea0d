//! Parser, AST, and canonical printer for the PDDL 2.1 fragment used by the
//! toolkit: `:typing`, numeric fluents, and `:durative-actions` with discrete
//! at-start/at-end effects and conjunctive conditions.
//!
//! Keywords are case-insensitive, identifiers keep their spelling, and `;`
//! starts a comment running to the end of the line. `(:requirements ...)`
//! blocks are accepted and ignored.

pub mod ast;
mod lexer;
mod parser;
mod printer;

pub use ast::*;
pub use parser::{parse_domain, parse_problem, validate_domain, validate_problem};
pub use printer::{print_domain, print_problem};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ParseError {
    #[error("{line}:{col}: syntax error: expected {expected}, found {found}")]
    Syntax { line: u32, col: u32, expected: String, found: String },
    #[error("semantic error: {message}")]
    Semantic { message: String },
}
