//! Expression trees as written by users, and their normalization into
//! canonical rational functions.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::context::{Context, RatFun, Sign, SymbolKind};
use super::poly::Poly;
use super::{CasError, Q};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Q),
    Sym(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Num(Q::from_integer(n.into()))
    }

    pub fn sym(name: &str) -> Expr {
        Expr::Sym(name.to_string())
    }

    pub fn call(name: &str, args: Vec<Expr>) -> Expr {
        Expr::Call(name.to_string(), args)
    }

    /// Parses expression text (`+ - * / ^`, calls, `p/q` literals).
    pub fn parse(src: &str) -> Result<Expr, crate::modelang::ParseError> {
        crate::modelang::parse_expr(src)
    }

    /// Nesting depth; leaves have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Expr::Num(_) | Expr::Sym(_) => 0,
            Expr::Neg(a) => 1 + a.depth(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Expr::Call(_, args) => 1 + args.iter().map(Expr::depth).max().unwrap_or(0),
        }
    }

    /// Identifiers referenced, in order of first appearance.
    pub fn identifiers(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_identifiers(&mut out);
        out
    }

    fn collect_identifiers<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Expr::Num(_) => {}
            Expr::Sym(s) => {
                if !out.contains(&s.as_str()) {
                    out.push(s);
                }
            }
            Expr::Neg(a) => a.collect_identifiers(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) | Expr::Pow(a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
            Expr::Call(_, args) => args.iter().for_each(|a| a.collect_identifiers(out)),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Num(q) if !q.is_integer() => 2,
            Expr::Neg(_) => 3,
            Expr::Num(q) if q.is_negative() => 3,
            Expr::Pow(..) => 4,
            _ => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.precedence();
        match self {
            Expr::Num(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Expr::Sym(s) => f.write_str(s),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, a.precedence() < 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let op = match self {
                    Expr::Add(..) => " + ",
                    Expr::Sub(..) => " - ",
                    Expr::Mul(..) => "*",
                    _ => "/",
                };
                write_operand(f, a, a.precedence() < p)?;
                f.write_str(op)?;
                // left-associative: equal precedence on the right needs parens
                write_operand(f, b, b.precedence() <= p)
            }
            Expr::Pow(a, b) => {
                write_operand(f, a, a.precedence() <= 4)?;
                f.write_str("^")?;
                write_operand(f, b, b.precedence() < 4)
            }
            Expr::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl Context {
    /// Canonical rational-function form of `e`. Names resolve to declared
    /// symbols; `sqrt`, `abs`, `sin`, `cos` and `tan` are understood.
    pub fn normalize(&mut self, e: &Expr) -> Result<RatFun, CasError> {
        match e {
            Expr::Num(q) => Ok(RatFun::from_q(q.clone())),
            Expr::Sym(name) => Ok(RatFun::var(self.lookup(name)?)),
            Expr::Neg(a) => Ok(self.normalize(a)?.neg()),
            Expr::Add(a, b) => {
                let (x, y) = (self.normalize(a)?, self.normalize(b)?);
                self.add(&x, &y)
            }
            Expr::Sub(a, b) => {
                let (x, y) = (self.normalize(a)?, self.normalize(b)?);
                self.sub(&x, &y)
            }
            Expr::Mul(a, b) => {
                let (x, y) = (self.normalize(a)?, self.normalize(b)?);
                self.mul(&x, &y)
            }
            Expr::Div(a, b) => {
                let (x, y) = (self.normalize(a)?, self.normalize(b)?);
                self.div(&x, &y)
            }
            Expr::Pow(a, b) => {
                let k = b.as_rational().ok_or(CasError::NonIntegerPower)?;
                let x = self.normalize(a)?;
                if k == Q::new(1.into(), 2.into()) {
                    return self.sqrt(&x);
                }
                if !k.is_integer() {
                    return Err(CasError::NonIntegerPower);
                }
                let k = k.to_integer().to_i64().ok_or(CasError::NonIntegerPower)?;
                self.pow(&x, k)
            }
            Expr::Call(name, args) => self.normalize_call(name, args),
        }
    }

    fn normalize_call(&mut self, name: &str, args: &[Expr]) -> Result<RatFun, CasError> {
        let [arg] = args else {
            return Err(CasError::UnsupportedFunction(name.to_string()));
        };
        match name {
            "sqrt" => {
                let x = self.normalize(arg)?;
                self.sqrt(&x)
            }
            "abs" => {
                let x = self.normalize(arg)?;
                self.abs(&x)
            }
            "sin" | "cos" | "tan" => {
                let form = self.angle_form(arg)?;
                let (c, s) = self.cos_sin(&form)?;
                match name {
                    "sin" => Ok(s),
                    "cos" => Ok(c),
                    _ => self.div(&s, &c),
                }
            }
            _ => Err(CasError::UnsupportedFunction(name.to_string())),
        }
    }

    /// `|x|`, with the sign fixed at the witness and recorded.
    pub fn abs(&mut self, x: &RatFun) -> Result<RatFun, CasError> {
        match self.witness_sign(x)? {
            Sign::Negative => {
                self.record_side_condition(x.clone(), Sign::Negative);
                Ok(x.neg())
            }
            Sign::Positive => {
                self.record_side_condition(x.clone(), Sign::Positive);
                Ok(x.clone())
            }
            Sign::Zero => Ok(x.clone()),
        }
    }

    /// Display-oriented tree of a canonical value.
    pub fn to_expr(&self, e: &RatFun) -> Expr {
        let num = self.poly_expr(e.num());
        if e.den().is_one() {
            return num;
        }
        let den = self.poly_expr(e.den());
        match num {
            Expr::Neg(n) => Expr::Neg(Box::new(Expr::Div(n, Box::new(den)))),
            Expr::Num(q) if q.is_negative() => Expr::Neg(Box::new(Expr::Div(Box::new(Expr::Num(-q)), Box::new(den)))),
            n => Expr::Div(Box::new(n), Box::new(den)),
        }
    }

    fn symbol_expr(&self, v: super::SymbolId) -> Expr {
        match &self.symbol(v).kind {
            SymbolKind::Cos { angle } => Expr::call("cos", alloc::vec![Expr::sym(self.name(*angle))]),
            SymbolKind::Sin { angle, .. } => Expr::call("sin", alloc::vec![Expr::sym(self.name(*angle))]),
            SymbolKind::Root { radicand } => Expr::call("sqrt", alloc::vec![self.poly_expr(radicand)]),
            SymbolKind::Indeterminate { .. } => Expr::sym(self.name(v)),
        }
    }

    fn poly_expr(&self, p: &Poly) -> Expr {
        let mut terms: Vec<_> = p.terms().collect();
        terms.sort_by(|a, b| self.cmp_monomials(b.0, a.0));
        let mut acc: Option<Expr> = None;
        for (m, c) in terms {
            let mut factors: Option<Expr> = None;
            for (v, e) in m.iter() {
                let base = self.symbol_expr(v);
                let f = if e == 1 {
                    base
                } else {
                    Expr::Pow(Box::new(base), Box::new(Expr::int(e as i64)))
                };
                factors = Some(match factors {
                    None => f,
                    Some(g) => Expr::Mul(Box::new(g), Box::new(f)),
                });
            }
            let mag = c.abs();
            let term = match factors {
                None => Expr::Num(mag),
                Some(f) if mag.is_one() => f,
                Some(f) => Expr::Mul(Box::new(Expr::Num(mag)), Box::new(f)),
            };
            acc = Some(match acc {
                None if c.is_negative() => Expr::Neg(Box::new(term)),
                None => term,
                Some(a) if c.is_negative() => Expr::Sub(Box::new(a), Box::new(term)),
                Some(a) => Expr::Add(Box::new(a), Box::new(term)),
            });
        }
        acc.unwrap_or_else(|| Expr::Num(Q::zero()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx_ab() -> Context {
        let mut ctx = Context::new();
        ctx.declare("a", 2.0, None).unwrap();
        ctx.declare("b", 5.0, None).unwrap();
        ctx
    }

    fn norm(ctx: &mut Context, s: &str) -> RatFun {
        ctx.normalize(&Expr::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn expansion_identity() {
        let mut ctx = ctx_ab();
        assert!(norm(&mut ctx, "(a+b)^2 - (a^2 + 2*a*b + b^2)").is_zero());
    }

    #[test]
    fn root_relation() {
        let mut ctx = ctx_ab();
        assert!(norm(&mut ctx, "sqrt(2)*sqrt(2) - 2").is_zero());
    }

    #[test]
    fn factor_cancellation() {
        let mut ctx = ctx_ab();
        let e = norm(&mut ctx, "(a^2 - b^2)/(a - b)");
        assert_eq!(ctx.text(&e), "a + b");
    }

    #[test]
    fn division_by_zero_is_degenerate() {
        let mut ctx = ctx_ab();
        let r = ctx.normalize(&Expr::parse("a/(b - b)").unwrap());
        assert_eq!(r, Err(CasError::DegenerateExpression));
    }

    #[test]
    fn half_power_is_sqrt() {
        let mut ctx = ctx_ab();
        let e = norm(&mut ctx, "(a^2)^(1/2)");
        assert_eq!(ctx.text(&e), "a");
    }

    #[test]
    fn tan_of_angle() {
        let mut ctx = Context::new();
        ctx.declare("t", 0.3, None).unwrap();
        let e = norm(&mut ctx, "tan(t)*cos(t) - sin(t)");
        assert!(e.is_zero());
        let e = norm(&mut ctx, "sin(t)^2 + cos(t)^2");
        assert_eq!(e, RatFun::one());
    }

    #[test]
    fn display_tree_reparses_to_same_value() {
        let mut ctx = ctx_ab();
        let e = norm(&mut ctx, "(a - 3*b)/(2*a^2 + 1) - sqrt(a + b)");
        let shown = ctx.to_expr(&e).to_string();
        let again = norm(&mut ctx, &shown);
        assert_eq!(e, again);
    }

    #[test]
    fn printing_respects_precedence() {
        for src in [
            "a - (b - c)",
            "-(a + b)*c",
            "a^b^c",
            "(a^b)^c",
            "a/(b*c)",
            "-a^2",
            "(-a)^2",
            "1/2*x",
        ] {
            let e = Expr::parse(src).unwrap();
            let back = Expr::parse(&e.to_string()).unwrap();
            assert_eq!(e, back, "{src} printed as {e}");
        }
    }
}
