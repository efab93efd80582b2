use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use super::lexer::Span;
use crate::cas::Expr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EntityKind {
    Point,
    Line,
    Circle,
}

impl EntityKind {
    pub fn keyword(self) -> &'static str {
        match self {
            EntityKind::Point => "point",
            EntityKind::Line => "line",
            EntityKind::Circle => "circle",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum QueryKind {
    Measure,
    Prove,
    Locus,
    Envelope,
    Solve,
}

impl QueryKind {
    pub fn keyword(self) -> &'static str {
        match self {
            QueryKind::Measure => "measure",
            QueryKind::Prove => "prove",
            QueryKind::Locus => "locus",
            QueryKind::Envelope => "envelope",
            QueryKind::Solve => "solve",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

/// A `lhs = rhs` condition of a `constrain` statement.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub lhs: Expr,
    pub rhs: Expr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StatementKind {
    /// `let a = 3 in [0, 20]`
    Let {
        name: Ident,
        witness: Expr,
        range: Option<(Expr, Expr)>,
    },
    /// `point A, B, C = triangle(a, b, c)`
    Construct {
        kind: EntityKind,
        names: Vec<Ident>,
        call: Expr,
    },
    /// `constrain point P: dist(P, A) = b, dist(P, B) = a`
    Constrain {
        kind: EntityKind,
        name: Ident,
        conditions: Vec<Condition>,
    },
    /// `measure r = ratio(dist(J, G), dist(G, D))` and the other queries.
    Query { kind: QueryKind, name: Ident, expr: Expr },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Statement {
    pub kind: StatementKind,
    pub span: Span,
}

impl Statement {
    /// Names this statement declares.
    pub fn names(&self) -> Vec<&Ident> {
        match &self.kind {
            StatementKind::Let { name, .. }
            | StatementKind::Constrain { name, .. }
            | StatementKind::Query { name, .. } => alloc::vec![name],
            StatementKind::Construct { names, .. } => names.iter().collect(),
        }
    }

    /// Equality ignoring source positions.
    pub fn same_structure(&self, other: &Statement) -> bool {
        fn idents(a: &[&Ident], b: &[&Ident]) -> bool {
            a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.name == y.name)
        }
        use StatementKind::*;
        match (&self.kind, &other.kind) {
            (
                Let { name, witness, range },
                Let {
                    name: n2,
                    witness: w2,
                    range: r2,
                },
            ) => name.name == n2.name && witness == w2 && range == r2,
            (
                Construct { kind, names, call },
                Construct {
                    kind: k2,
                    names: n2,
                    call: c2,
                },
            ) => kind == k2 && call == c2 && idents(&names.iter().collect::<Vec<_>>(), &n2.iter().collect::<Vec<_>>()),
            (
                Constrain { kind, name, conditions },
                Constrain {
                    kind: k2,
                    name: n2,
                    conditions: c2,
                },
            ) => kind == k2 && name.name == n2.name && conditions == c2,
            (
                Query { kind, name, expr },
                Query {
                    kind: k2,
                    name: n2,
                    expr: e2,
                },
            ) => kind == k2 && name.name == n2.name && expr == e2,
            _ => false,
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            StatementKind::Let { name, witness, range } => {
                write!(f, "let {} = {witness}", name.name)?;
                if let Some((lo, hi)) = range {
                    write!(f, " in [{lo}, {hi}]")?;
                }
                Ok(())
            }
            StatementKind::Construct { kind, names, call } => {
                write!(f, "{} ", kind.keyword())?;
                for (i, n) in names.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(&n.name)?;
                }
                write!(f, " = {call}")
            }
            StatementKind::Constrain { kind, name, conditions } => {
                write!(f, "constrain {} {}: ", kind.keyword(), name.name)?;
                for (i, c) in conditions.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{} = {}", c.lhs, c.rhs)?;
                }
                Ok(())
            }
            StatementKind::Query { kind, name, expr } => {
                write!(f, "{} {} = {expr}", kind.keyword(), name.name)
            }
        }
    }
}

/// A parsed model: statements in construction order.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSource {
    pub name: String,
    pub statements: Vec<Statement>,
}

impl ModelSource {
    pub fn same_structure(&self, other: &ModelSource) -> bool {
        self.statements.len() == other.statements.len()
            && self
                .statements
                .iter()
                .zip(&other.statements)
                .all(|(a, b)| a.same_structure(b))
    }

    /// Names of all queries of the given kind, in order.
    pub fn queries(&self, kind: QueryKind) -> impl Iterator<Item = (&str, &Expr)> + '_ {
        self.statements.iter().filter_map(move |s| match &s.kind {
            StatementKind::Query { kind: k, name, expr } if *k == kind => Some((name.name.as_str(), expr)),
            _ => None,
        })
    }
}

impl fmt::Display for ModelSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
