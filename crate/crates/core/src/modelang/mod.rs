//! The `.gx` model language.
//!
//! ```text
//! # Euler line
//! let a = 3 in [0, 20]
//! point A, B, C = triangle(a, b, c)
//! point J = centroid(A, B, C)
//! line e = line(G, D)
//! prove collinear = zero(dist(J, e))
//! ```
//!
//! Every statement declares names that later statements may use; forward
//! references are rejected. See `docs/grammar.md` for the full grammar.

mod ast;
mod lexer;
mod parser;

use alloc::string::{String, ToString};
use core::fmt;

pub use ast::{Condition, EntityKind, Ident, ModelSource, QueryKind, Statement, StatementKind};
pub use lexer::{tokenize, Span, Tok, Token};
pub use parser::is_known_function;

use crate::cas::{q_to_f64, Expr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub line: u32,
    pub col: u32,
    /// Text of the offending token.
    pub token: String,
    pub span: Span,
}

impl ParseError {
    pub fn new(message: String, span: Span, token: &str) -> Self {
        ParseError {
            message,
            line: span.line,
            col: span.col,
            token: token.to_string(),
            span,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

impl core::error::Error for ParseError {}

/// Parses a whole model, checking names, arities and argument kinds.
pub fn parse_model(src: &str) -> Result<ModelSource, ParseError> {
    parse_named("model", src)
}

pub fn parse_named(name: &str, src: &str) -> Result<ModelSource, ParseError> {
    parser::Parser::new(src, true)?.model(name)
}

/// Parses a standalone expression; names are not resolved.
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = parser::Parser::new(src, false)?;
    let e = p.expression()?;
    p.finish()?;
    Ok(e)
}

/// Numeric value of a closed expression: literals, `pi`, arithmetic,
/// `sqrt`, `sin`, `cos`, `tan` and `deg` (degrees to radians).
pub fn eval_constant(e: &Expr) -> Option<f64> {
    let v = match e {
        Expr::Num(q) => q_to_f64(q),
        Expr::Sym(s) if s == "pi" => core::f64::consts::PI,
        Expr::Sym(_) => return None,
        Expr::Neg(a) => -eval_constant(a)?,
        Expr::Add(a, b) => eval_constant(a)? + eval_constant(b)?,
        Expr::Sub(a, b) => eval_constant(a)? - eval_constant(b)?,
        Expr::Mul(a, b) => eval_constant(a)? * eval_constant(b)?,
        Expr::Div(a, b) => eval_constant(a)? / eval_constant(b)?,
        Expr::Pow(a, b) => libm::pow(eval_constant(a)?, eval_constant(b)?),
        Expr::Call(f, args) if args.len() == 1 => {
            let x = eval_constant(&args[0])?;
            match f.as_str() {
                "sqrt" => libm::sqrt(x),
                "sin" => libm::sin(x),
                "cos" => libm::cos(x),
                "tan" => libm::tan(x),
                "abs" => libm::fabs(x),
                "deg" => x * core::f64::consts::PI / 180.0,
                _ => return None,
            }
        }
        Expr::Call(..) => return None,
    };
    v.is_finite().then_some(v)
}

#[cfg(test)]
mod tests;
