use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Pow;

use super::ParseError;
use crate::cas::Q;

/// Byte offsets plus the 1-based line and column of the first character.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub start: usize,
    pub end: usize,
    pub line: u32,
    pub col: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Let,
    In,
    Point,
    Line,
    Circle,
    Constrain,
    Measure,
    Prove,
    Locus,
    Envelope,
    Solve,
    Ident(String),
    Num(Q),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Eq,
    /// Statement separator: end of line (outside brackets) or `;`.
    Newline,
}

impl Tok {
    /// Keywords that double as constructor or query names after `=`.
    pub fn keyword_name(&self) -> Option<&'static str> {
        Some(match self {
            Tok::Point => "point",
            Tok::Line => "line",
            Tok::Circle => "circle",
            Tok::Locus => "locus",
            Tok::Envelope => "envelope",
            Tok::Solve => "solve",
            _ => return None,
        })
    }
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Let => "let",
            Tok::In => "in",
            Tok::Point => "point",
            Tok::Line => "line",
            Tok::Circle => "circle",
            Tok::Constrain => "constrain",
            Tok::Measure => "measure",
            Tok::Prove => "prove",
            Tok::Locus => "locus",
            Tok::Envelope => "envelope",
            Tok::Solve => "solve",
            Tok::Ident(s) => return f.write_str(s),
            Tok::Num(q) => return write!(f, "{q}"),
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBracket => "[",
            Tok::RBracket => "]",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Eq => "=",
            Tok::Newline => "end of line",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

fn keyword(s: &str) -> Option<Tok> {
    Some(match s {
        "let" => Tok::Let,
        "in" => Tok::In,
        "point" => Tok::Point,
        "line" => Tok::Line,
        "circle" => Tok::Circle,
        "constrain" => Tok::Constrain,
        "measure" => Tok::Measure,
        "prove" => Tok::Prove,
        "locus" => Tok::Locus,
        "envelope" => Tok::Envelope,
        "solve" => Tok::Solve,
        _ => return None,
    })
}

/// Exact value of a decimal literal such as `12`, `0.25` or `1.5e-3`.
fn decimal(text: &str) -> Option<Q> {
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = alloc::format!("{int}{frac}").parse().ok()?;
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let p = Pow::pow(&ten, scale.unsigned_abs());
    Some(if scale >= 0 {
        Q::from_integer(digits * p)
    } else {
        Q::new(digits, p)
    })
}

/// Splits source text into tokens. `#` starts a comment running to the end
/// of the line; line breaks inside brackets are ignored.
pub fn tokenize(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out: Vec<Token> = Vec::new();
    let bytes = src.as_bytes();
    let (mut i, mut line, mut line_start) = (0usize, 1u32, 0usize);
    let mut depth = 0i32;
    while i < bytes.len() {
        let c = bytes[i];
        let span_at = |start: usize, end: usize| Span {
            start,
            end,
            line,
            col: (src[line_start..start].chars().count() + 1) as u32,
        };
        match c {
            b'\n' => {
                if depth == 0 && out.last().is_some_and(|t| t.tok != Tok::Newline) {
                    out.push(Token {
                        tok: Tok::Newline,
                        span: span_at(i, i + 1),
                    });
                }
                i += 1;
                line += 1;
                line_start = i;
            }
            b' ' | b'\t' | b'\r' => i += 1,
            b'#' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'-' || bytes[j] == b'+') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let span = span_at(start, i);
                let q = decimal(text)
                    .ok_or_else(|| ParseError::new(alloc::format!("malformed number `{text}`"), span, text))?;
                out.push(Token { tok: Tok::Num(q), span });
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let text = &src[start..i];
                let tok = keyword(text).unwrap_or_else(|| Tok::Ident(text.to_string()));
                out.push(Token {
                    tok,
                    span: span_at(start, i),
                });
            }
            _ => {
                let tok = match c {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    b'[' => Tok::LBracket,
                    b']' => Tok::RBracket,
                    b',' => Tok::Comma,
                    b':' => Tok::Colon,
                    b'=' => Tok::Eq,
                    b';' => Tok::Newline,
                    _ => {
                        let ch = src[i..].chars().next().unwrap_or('?');
                        let span = span_at(i, i + ch.len_utf8());
                        return Err(ParseError::new(
                            alloc::format!("illegal character `{ch}`"),
                            span,
                            &ch.to_string(),
                        ));
                    }
                };
                match tok {
                    Tok::LParen | Tok::LBracket => depth += 1,
                    Tok::RParen | Tok::RBracket => depth -= 1,
                    _ => {}
                }
                out.push(Token {
                    tok,
                    span: span_at(i, i + 1),
                });
                i += 1;
            }
        }
    }
    while out.last().is_some_and(|t| t.tok == Tok::Newline) {
        out.pop();
    }
    Ok(out)
}
