//! Pratt parser for expressions and a statement parser that checks names
//! and call signatures as it goes, so every error carries a source span.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_traits::Zero;

use super::ast::{Condition, EntityKind, Ident, ModelSource, QueryKind, Statement, StatementKind};
use super::lexer::{tokenize, Span, Tok, Token};
use super::ParseError;
use crate::cas::Expr;

/// Static type of a name or subexpression.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ty {
    /// An indeterminate declared with `let` (also a scalar).
    Indeterminate,
    Scalar,
    Entity(EntityKind),
    /// Result of a query-only function such as `zero(...)`.
    Query(QueryKind),
}

impl Ty {
    fn is_scalar(self) -> bool {
        matches!(self, Ty::Scalar | Ty::Indeterminate)
    }

    fn describe(self) -> &'static str {
        match self {
            Ty::Indeterminate => "indeterminate",
            Ty::Scalar => "scalar",
            Ty::Entity(EntityKind::Point) => "point",
            Ty::Entity(EntityKind::Line) => "line",
            Ty::Entity(EntityKind::Circle) => "circle",
            Ty::Query(_) => "query",
        }
    }
}

/// Expected argument type in a signature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum A {
    S,
    I,
    P,
    L,
    C,
}

impl A {
    fn accepts(self, t: Ty) -> bool {
        match self {
            A::S => t.is_scalar(),
            A::I => t == Ty::Indeterminate,
            A::P => t == Ty::Entity(EntityKind::Point),
            A::L => t == Ty::Entity(EntityKind::Line),
            A::C => t == Ty::Entity(EntityKind::Circle),
        }
    }

    fn describe(self) -> &'static str {
        match self {
            A::S => "scalar",
            A::I => "indeterminate",
            A::P => "point",
            A::L => "line",
            A::C => "circle",
        }
    }
}

/// Result of a call: a scalar, `n` entities, or a query value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum R {
    Scalar,
    Entities(EntityKind, usize),
    Query(QueryKind),
}

use A::{C, I, L, P, S};

const SIGNATURES: &[(&str, &[A], R)] = &[
    // scalar functions
    ("sqrt", &[S], R::Scalar),
    ("abs", &[S], R::Scalar),
    ("sin", &[S], R::Scalar),
    ("cos", &[S], R::Scalar),
    ("tan", &[S], R::Scalar),
    ("deg", &[S], R::Scalar),
    ("dist", &[P, P], R::Scalar),
    ("dist", &[P, L], R::Scalar),
    ("dist", &[L, P], R::Scalar),
    ("area", &[P, P, P], R::Scalar),
    ("radius", &[C], R::Scalar),
    ("angle", &[L, L], R::Scalar),
    ("angle", &[L], R::Scalar),
    ("ratio", &[S, S], R::Scalar),
    ("x", &[P], R::Scalar),
    ("y", &[P], R::Scalar),
    // points
    ("triangle", &[S, S, S], R::Entities(EntityKind::Point, 3)),
    ("point", &[S, S], R::Entities(EntityKind::Point, 1)),
    ("centroid", &[P, P, P], R::Entities(EntityKind::Point, 1)),
    ("orthocenter", &[P, P, P], R::Entities(EntityKind::Point, 1)),
    ("circumcenter", &[P, P, P], R::Entities(EntityKind::Point, 1)),
    ("incenter", &[P, P, P], R::Entities(EntityKind::Point, 1)),
    ("excenter", &[P, P, P, P], R::Entities(EntityKind::Point, 1)),
    ("midpoint", &[P, P], R::Entities(EntityKind::Point, 1)),
    ("foot", &[P, L], R::Entities(EntityKind::Point, 1)),
    ("intersect", &[L, L], R::Entities(EntityKind::Point, 1)),
    ("intersect", &[L, C], R::Entities(EntityKind::Point, 2)),
    ("intersect", &[C, C], R::Entities(EntityKind::Point, 2)),
    ("on_circle", &[C, S], R::Entities(EntityKind::Point, 1)),
    ("reflect", &[P, L], R::Entities(EntityKind::Point, 1)),
    ("center", &[C], R::Entities(EntityKind::Point, 1)),
    // lines
    ("line", &[P, P], R::Entities(EntityKind::Line, 1)),
    ("coeffs", &[S, S, S], R::Entities(EntityKind::Line, 1)),
    ("perpendicular", &[L, P], R::Entities(EntityKind::Line, 1)),
    ("parallel", &[L, P], R::Entities(EntityKind::Line, 1)),
    ("bisector", &[P, P], R::Entities(EntityKind::Line, 1)),
    ("ray", &[P, S], R::Entities(EntityKind::Line, 1)),
    ("tangent", &[C, P], R::Entities(EntityKind::Line, 1)),
    ("reflect", &[L, L], R::Entities(EntityKind::Line, 1)),
    ("reflect_ray", &[L, L, P], R::Entities(EntityKind::Line, 1)),
    // circles
    ("circle", &[P, S], R::Entities(EntityKind::Circle, 1)),
    ("circumcircle", &[P, P, P], R::Entities(EntityKind::Circle, 1)),
    ("incircle", &[P, P, P], R::Entities(EntityKind::Circle, 1)),
    ("excircles", &[P, P, P], R::Entities(EntityKind::Circle, 3)),
    // queries
    ("zero", &[S], R::Query(QueryKind::Prove)),
    ("constant", &[S], R::Query(QueryKind::Prove)),
    ("locus", &[P, I], R::Query(QueryKind::Locus)),
    ("envelope", &[L, I], R::Query(QueryKind::Envelope)),
    ("solve", &[S, I], R::Query(QueryKind::Solve)),
    ("solar", &[I, S, S], R::Query(QueryKind::Solve)),
];

pub fn is_known_function(name: &str) -> bool {
    SIGNATURES.iter().any(|(n, _, _)| *n == name)
}

fn known_arities(name: &str) -> Vec<usize> {
    let mut v: Vec<usize> = SIGNATURES
        .iter()
        .filter(|(n, _, _)| *n == name)
        .map(|(_, a, _)| a.len())
        .collect();
    v.dedup();
    v
}

struct Typed {
    expr: Expr,
    ty: Ty,
    span: Span,
}

pub(super) struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
    names: BTreeMap<String, Ty>,
    /// Names are resolved only when checking is on (full models).
    check_names: bool,
}

fn join(a: Span, b: Span) -> Span {
    Span {
        start: a.start,
        end: b.end.max(a.end),
        line: a.line,
        col: a.col,
    }
}

impl<'a> Parser<'a> {
    pub(super) fn new(src: &'a str, check_names: bool) -> Result<Self, ParseError> {
        Ok(Parser {
            src,
            toks: tokenize(src)?,
            pos: 0,
            names: BTreeMap::new(),
            check_names,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|t| &t.tok)
    }

    /// Span of the current token, or an empty span at the end of input.
    fn here(&self) -> Span {
        match self.toks.get(self.pos) {
            Some(t) => t.span,
            None => self.end_span(),
        }
    }

    fn end_span(&self) -> Span {
        let end = self.src.len();
        let line = self.src.matches('\n').count() as u32 + 1;
        let last = self.src.rfind('\n').map_or(0, |i| i + 1);
        Span {
            start: end,
            end,
            line,
            col: self.src[last..].chars().count() as u32 + 1,
        }
    }

    fn error_here(&self, msg: String) -> ParseError {
        let span = self.here();
        let tok = match self.toks.get(self.pos) {
            Some(t) => t.tok.to_string(),
            None => String::from("end of input"),
        };
        ParseError::new(msg, span, &tok)
    }

    fn error_at(&self, msg: String, span: Span) -> ParseError {
        let text = self.src.get(span.start..span.end).unwrap_or("");
        ParseError::new(msg, span, text)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        self.pos += 1;
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, ParseError> {
        if self.peek() == Some(&tok) {
            Ok(self.bump().span)
        } else {
            Err(self.error_here(format!("expected `{tok}`")))
        }
    }

    fn ident(&mut self) -> Result<Ident, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => Err(self.error_here(String::from("expected a name"))),
        }
    }

    fn declare(&mut self, id: &Ident, ty: Ty) -> Result<(), ParseError> {
        if id.name == "pi" || is_known_function(&id.name) {
            return Err(self.error_at(format!("`{}` is reserved", id.name), id.span));
        }
        if self.names.contains_key(&id.name) {
            return Err(self.error_at(format!("duplicate name `{}`", id.name), id.span));
        }
        self.names.insert(id.name.clone(), ty);
        Ok(())
    }

    // ---- expressions ----

    pub(super) fn expression(&mut self) -> Result<Expr, ParseError> {
        Ok(self.expr_bp(0)?.expr)
    }

    pub(super) fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(tok) => Err(self.error_here(format!("unexpected `{tok}`"))),
        }
    }

    fn scalar(&mut self) -> Result<Expr, ParseError> {
        let t = self.expr_bp(0)?;
        self.require_scalar(&t)?;
        Ok(t.expr)
    }

    fn require_scalar(&self, t: &Typed) -> Result<(), ParseError> {
        if self.check_names && !t.ty.is_scalar() {
            return Err(self.error_at(
                format!("expected a scalar expression, found a {}", t.ty.describe()),
                t.span,
            ));
        }
        Ok(())
    }

    fn expr_bp(&mut self, min_bp: u8) -> Result<Typed, ParseError> {
        let mut lhs = self.prefix()?;
        loop {
            let (l_bp, r_bp) = match self.peek() {
                Some(Tok::Plus) | Some(Tok::Minus) => (1, 2),
                Some(Tok::Star) | Some(Tok::Slash) => (3, 4),
                Some(Tok::Caret) => (8, 7),
                _ => break,
            };
            if l_bp < min_bp {
                break;
            }
            let op = self.bump().tok;
            let rhs = self.expr_bp(r_bp)?;
            self.require_scalar(&lhs)?;
            self.require_scalar(&rhs)?;
            let span = join(lhs.span, rhs.span);
            let (a, b) = (Box::new(lhs.expr), Box::new(rhs.expr));
            let expr = match op {
                Tok::Plus => Expr::Add(a, b),
                Tok::Minus => Expr::Sub(a, b),
                Tok::Star => Expr::Mul(a, b),
                Tok::Caret => Expr::Pow(a, b),
                _ => match (*a, *b) {
                    // rational literal p/q
                    (Expr::Num(p), Expr::Num(q)) if p.is_integer() && q.is_integer() && !q.is_zero() => {
                        Expr::Num(p / q)
                    }
                    (a, b) => Expr::Div(Box::new(a), Box::new(b)),
                },
            };
            lhs = Typed {
                expr,
                ty: Ty::Scalar,
                span,
            };
        }
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Typed, ParseError> {
        let start = self.here();
        match self.peek().cloned() {
            Some(Tok::Num(q)) => {
                self.bump();
                Ok(Typed {
                    expr: Expr::Num(q),
                    ty: Ty::Scalar,
                    span: start,
                })
            }
            Some(Tok::Minus) => {
                self.bump();
                // binds looser than `^`, tighter than `*`
                let inner = self.expr_bp(5)?;
                self.require_scalar(&inner)?;
                Ok(Typed {
                    span: join(start, inner.span),
                    expr: Expr::Neg(Box::new(inner.expr)),
                    ty: Ty::Scalar,
                })
            }
            Some(Tok::LParen) => {
                self.bump();
                let inner = self.expr_bp(0)?;
                let close = self.expect(Tok::RParen)?;
                Ok(Typed {
                    span: join(start, close),
                    ..inner
                })
            }
            Some(tok) => {
                let name = match (&tok, tok.keyword_name()) {
                    (Tok::Ident(n), _) => n.clone(),
                    (_, Some(k)) if self.peek_at(1) == Some(&Tok::LParen) => k.to_string(),
                    _ => return Err(self.error_here(format!("unexpected `{tok}`"))),
                };
                self.bump();
                if self.peek() == Some(&Tok::LParen) {
                    return self.call(name, start);
                }
                let ty = if name == "pi" || !self.check_names {
                    Ty::Scalar
                } else {
                    *self
                        .names
                        .get(&name)
                        .ok_or_else(|| self.error_at(format!("undeclared name `{name}`"), start))?
                };
                Ok(Typed {
                    expr: Expr::Sym(name),
                    ty,
                    span: start,
                })
            }
            None => Err(self.error_here(String::from("unexpected end of input"))),
        }
    }

    fn call(&mut self, name: String, start: Span) -> Result<Typed, ParseError> {
        self.expect(Tok::LParen)?;
        let mut args: Vec<Typed> = Vec::new();
        if self.peek() != Some(&Tok::RParen) {
            loop {
                args.push(self.expr_bp(0)?);
                if self.peek() == Some(&Tok::Comma) {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        let close = self.expect(Tok::RParen)?;
        let span = join(start, close);
        let exprs = |args: Vec<Typed>| args.into_iter().map(|a| a.expr).collect::<Vec<_>>();
        if !self.check_names {
            return Ok(Typed {
                expr: Expr::Call(name, exprs(args)),
                ty: Ty::Scalar,
                span,
            });
        }
        let candidates: Vec<_> = SIGNATURES.iter().filter(|(n, _, _)| *n == name).collect();
        if candidates.is_empty() {
            return Err(self.error_at(format!("unknown function `{name}`"), start));
        }
        let same_arity: Vec<_> = candidates.iter().filter(|(_, a, _)| a.len() == args.len()).collect();
        if same_arity.is_empty() {
            let arities: Vec<String> = known_arities(&name).iter().map(|n| n.to_string()).collect();
            return Err(self.error_at(
                format!(
                    "`{name}` takes {} argument(s), found {}",
                    arities.join(" or "),
                    args.len()
                ),
                span,
            ));
        }
        let matching = same_arity
            .iter()
            .find(|(_, sig, _)| sig.iter().zip(&args).all(|(a, t)| a.accepts(t.ty)));
        let Some((_, _, result)) = matching else {
            // report the first argument that fits no overload
            let sig = same_arity[0].1;
            for (k, (a, t)) in sig.iter().zip(&args).enumerate() {
                if !same_arity.iter().any(|(_, s, _)| s[k].accepts(t.ty)) {
                    return Err(self.error_at(
                        format!(
                            "argument {} of `{name}` must be a {}, found a {}",
                            k + 1,
                            a.describe(),
                            t.ty.describe()
                        ),
                        t.span,
                    ));
                }
            }
            return Err(self.error_at(format!("no form of `{name}` takes these arguments"), span));
        };
        let ty = match result {
            R::Scalar => Ty::Scalar,
            R::Entities(k, _) => Ty::Entity(*k),
            R::Query(q) => Ty::Query(*q),
        };
        Ok(Typed {
            expr: Expr::Call(name, exprs(args)),
            ty,
            span,
        })
    }

    // ---- statements ----

    pub(super) fn model(&mut self, name: &str) -> Result<ModelSource, ParseError> {
        let mut statements = Vec::new();
        loop {
            while self.peek() == Some(&Tok::Newline) {
                self.bump();
            }
            if self.peek().is_none() {
                break;
            }
            let start = self.here();
            let kind = self.statement()?;
            let end = self.toks[self.pos - 1].span;
            if let Some(tok) = self.peek() {
                if *tok != Tok::Newline {
                    return Err(self.error_here(format!("unexpected `{tok}` after statement")));
                }
            }
            statements.push(Statement {
                kind,
                span: join(start, end),
            });
        }
        Ok(ModelSource {
            name: name.to_string(),
            statements,
        })
    }

    fn statement(&mut self) -> Result<StatementKind, ParseError> {
        let tok = self.peek().cloned();
        match tok {
            Some(Tok::Let) => {
                self.bump();
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let witness = self.constant()?;
                let range = if self.peek() == Some(&Tok::In) {
                    self.bump();
                    self.expect(Tok::LBracket)?;
                    let lo = self.constant()?;
                    self.expect(Tok::Comma)?;
                    let hi = self.constant()?;
                    self.expect(Tok::RBracket)?;
                    Some((lo, hi))
                } else {
                    None
                };
                self.declare(&name, Ty::Indeterminate)?;
                Ok(StatementKind::Let { name, witness, range })
            }
            Some(Tok::Point) | Some(Tok::Line) | Some(Tok::Circle) => {
                self.bump();
                let kind = entity_kind(tok.as_ref());
                let mut names = alloc::vec![self.ident()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.bump();
                    names.push(self.ident()?);
                }
                self.expect(Tok::Eq)?;
                let call_start = self.here();
                let call = self.expr_bp(0)?;
                let count = match (&call.expr, call.ty) {
                    (Expr::Call(f, args), Ty::Entity(k)) if k == kind => SIGNATURES
                        .iter()
                        .find_map(|(n, sig, r)| match r {
                            R::Entities(rk, c) if *n == f && *rk == k && sig.len() == args.len() => Some(*c),
                            _ => None,
                        })
                        .unwrap_or(1),
                    _ => {
                        return Err(self.error_at(
                            format!("expected a {} construction", kind.keyword()),
                            join(call_start, call.span),
                        ))
                    }
                };
                if count != names.len() {
                    return Err(self.error_at(
                        format!("construction yields {count} {}(s) but {} name(s) given", kind.keyword(), names.len()),
                        call.span,
                    ));
                }
                for n in &names {
                    self.declare(n, Ty::Entity(kind))?;
                }
                Ok(StatementKind::Construct {
                    kind,
                    names,
                    call: call.expr,
                })
            }
            Some(Tok::Constrain) => {
                self.bump();
                let kind_tok = self.peek().cloned();
                let kind = match kind_tok {
                    Some(Tok::Point) | Some(Tok::Line) => entity_kind(kind_tok.as_ref()),
                    _ => return Err(self.error_here(String::from("expected `point` or `line`"))),
                };
                self.bump();
                let name = self.ident()?;
                self.declare(&name, Ty::Entity(kind))?;
                self.expect(Tok::Colon)?;
                let mut conditions = Vec::new();
                loop {
                    let start = self.here();
                    let lhs = self.scalar()?;
                    self.expect(Tok::Eq)?;
                    let rhs = self.scalar()?;
                    let span = join(start, self.toks[self.pos - 1].span);
                    check_condition(&lhs, &name.name, kind).map_err(|m| self.error_at(m, span))?;
                    conditions.push(Condition { lhs, rhs });
                    if self.peek() == Some(&Tok::Comma) {
                        self.bump();
                    } else {
                        break;
                    }
                }
                check_conditions(&conditions, &name.name, kind).map_err(|m| self.error_at(m, name.span))?;
                Ok(StatementKind::Constrain {
                    kind,
                    name,
                    conditions,
                })
            }
            Some(Tok::Measure) | Some(Tok::Prove) | Some(Tok::Locus) | Some(Tok::Envelope) | Some(Tok::Solve) => {
                self.bump();
                let kind = match tok {
                    Some(Tok::Measure) => QueryKind::Measure,
                    Some(Tok::Prove) => QueryKind::Prove,
                    Some(Tok::Locus) => QueryKind::Locus,
                    Some(Tok::Envelope) => QueryKind::Envelope,
                    _ => QueryKind::Solve,
                };
                let name = self.ident()?;
                self.expect(Tok::Eq)?;
                let e = self.expr_bp(0)?;
                let ok = match kind {
                    QueryKind::Measure => e.ty.is_scalar(),
                    _ => e.ty == Ty::Query(kind),
                };
                if !ok {
                    let what = match kind {
                        QueryKind::Measure => "a scalar expression",
                        QueryKind::Prove => "`zero(...)` or `constant(...)`",
                        QueryKind::Locus => "`locus(point, parameter)`",
                        QueryKind::Envelope => "`envelope(line, parameter)`",
                        QueryKind::Solve => "`solve(equation, unknown)` or `solar(phi, lid, width)`",
                    };
                    return Err(self.error_at(format!("expected {what}"), e.span));
                }
                let ty = if kind == QueryKind::Measure || kind == QueryKind::Solve {
                    Ty::Scalar
                } else {
                    Ty::Query(kind)
                };
                self.declare(&name, ty)?;
                Ok(StatementKind::Query {
                    kind,
                    name,
                    expr: e.expr,
                })
            }
            _ => Err(self.error_here(String::from(
                "expected a statement (`let`, `point`, `line`, `circle`, `constrain`, `measure`, `prove`, `locus`, `envelope` or `solve`)",
            ))),
        }
    }

    /// A closed numeric expression (only `pi` and functions allowed).
    fn constant(&mut self) -> Result<Expr, ParseError> {
        let start = self.here();
        let saved = core::mem::take(&mut self.names);
        let r = self.expr_bp(0);
        self.names = saved;
        let t = r?;
        if super::eval_constant(&t.expr).is_none() {
            return Err(self.error_at(String::from("expected a numeric constant"), join(start, t.span)));
        }
        Ok(t.expr)
    }
}

fn entity_kind(t: Option<&Tok>) -> EntityKind {
    match t {
        Some(Tok::Line) => EntityKind::Line,
        Some(Tok::Circle) => EntityKind::Circle,
        _ => EntityKind::Point,
    }
}

fn is_sym(e: &Expr, name: &str) -> bool {
    matches!(e, Expr::Sym(s) if s == name)
}

/// Shapes allowed on the left of a constraint: `dist(N, X)`, `dist(X, N)`
/// and, for lines, `angle(N)`.
fn check_condition(lhs: &Expr, name: &str, kind: EntityKind) -> Result<(), String> {
    match lhs {
        Expr::Call(f, args) if f == "dist" && args.iter().any(|a| is_sym(a, name)) => Ok(()),
        Expr::Call(f, args)
            if f == "angle" && kind == EntityKind::Line && args.len() == 1 && is_sym(&args[0], name) =>
        {
            Ok(())
        }
        _ => Err(format!(
            "constraint must be `dist({name}, ...) = value`{}",
            if kind == EntityKind::Line {
                alloc::format!(" or `angle({name}) = value`")
            } else {
                String::new()
            }
        )),
    }
}

fn check_conditions(conds: &[Condition], name: &str, kind: EntityKind) -> Result<(), String> {
    if conds.len() != 2 {
        return Err(format!("`{name}` needs exactly two conditions"));
    }
    if kind == EntityKind::Line {
        for c in conds {
            let is_dist = matches!(&c.lhs, Expr::Call(f, _) if f == "dist");
            if is_dist && c.rhs.as_rational().is_none_or(|q| !q.is_zero()) {
                return Err(format!("a line is constrained by incidence: `dist({name}, P) = 0`"));
            }
        }
        let angles = conds
            .iter()
            .filter(|c| matches!(&c.lhs, Expr::Call(f, _) if f == "angle"))
            .count();
        if angles > 1 {
            return Err(format!("`{name}` has two angle conditions"));
        }
    }
    Ok(())
}
