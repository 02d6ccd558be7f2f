//! LOLCODE 1.2 with SPMD/PGAS parallel extensions.
//!
//! The pipeline is [`lexer::tokenize`] → [`parser::parse_program`] →
//! [`runtime::spawn`], which runs the program on N processing elements
//! sharing one symmetric heap.
//!
//! ```
//! let program = frenz::compile("HAI 1.2\nVISIBLE \"PE \" ME\nKTHXBYE\n").unwrap();
//! let result = frenz::runtime::spawn(&program, 2, 0);
//! assert_eq!(result.outputs, vec![vec!["PE 0"], vec!["PE 1"]]);
//! ```

pub mod ast;
pub mod cli;
pub mod interp;
pub mod lexer;
pub mod parser;
pub mod pretty;
pub mod runtime;
pub mod value;

use thiserror::Error;

pub use ast::Program;
pub use runtime::{spawn, spawn_with, Outcome, RunOptions, RunResult};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("lex error at {0}")]
    Lex(#[from] lexer::LexError),
    #[error("parse error at {0}")]
    Parse(#[from] parser::ParseError),
}

impl CompileError {
    pub fn span(&self) -> lexer::Span {
        match self {
            CompileError::Lex(e) => e.span,
            CompileError::Parse(e) => e.span,
        }
    }
}

/// Lex and parse a whole program.
pub fn compile(source: &str) -> Result<Program, CompileError> {
    let tokens = lexer::tokenize(source)?;
    Ok(parser::parse_program(&tokens)?)
}
