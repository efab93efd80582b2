use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use super::gcd::gcd;
use super::poly::{Monomial, Poly, Var};
use super::{CasError, Q};

pub type SymbolId = Var;

#[derive(Clone, Debug, PartialEq)]
pub enum SymbolKind {
    /// Free quantity with a numeric witness and an optional admissible range.
    Indeterminate {
        witness: f64,
        range: Option<(f64, f64)>,
    },
    Cos {
        angle: SymbolId,
    },
    /// `sin^2 = relation`, where `relation = 1 - cos^2`.
    Sin {
        angle: SymbolId,
        relation: Poly,
    },
    /// Principal square root: `root^2 = radicand`, `root >= 0`.
    Root {
        radicand: Poly,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Symbol {
    pub name: String,
    pub kind: SymbolKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// A sign fixed at the witness when an absolute value or branch was resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct SideCondition {
    pub expr: RatFun,
    pub sign: Sign,
}

/// Canonical rational function: `num / den` with `den` free of quadratic
/// symbols, quadratic symbols of degree at most one in `num`, `gcd(num, den)
/// = 1`, integer coefficients with overall content one, and a positive
/// leading coefficient of `den` under graded-lex order with variables
/// ranked alphabetically by name.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFun {
    pub(super) num: Poly,
    pub(super) den: Poly,
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun::from_q(Q::one())
    }

    pub fn from_int(n: i64) -> Self {
        RatFun::from_q(Q::from_integer(n.into()))
    }

    pub fn from_q(q: Q) -> Self {
        RatFun {
            num: Poly::constant(q.numer().clone().into()),
            den: Poly::constant(q.denom().clone().into()),
        }
    }

    pub fn var(v: SymbolId) -> Self {
        RatFun {
            num: Poly::var(v),
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_q(&self) -> Option<Q> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn vars(&self) -> alloc::collections::BTreeSet<SymbolId> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn contains_var(&self, v: SymbolId) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Context {
    symbols: Vec<Symbol>,
    by_name: BTreeMap<String, SymbolId>,
    /// Alphabetical rank of each symbol, used for canonical ordering.
    ranks: Vec<usize>,
    pub(super) side_conditions: Vec<SideCondition>,
    pub(super) precision: super::Precision,
}

impl Context {
    pub fn new() -> Self {
        Context::default()
    }

    pub fn with_precision(precision: super::Precision) -> Self {
        Context {
            precision,
            ..Context::default()
        }
    }

    pub fn precision(&self) -> super::Precision {
        self.precision
    }

    pub fn set_precision(&mut self, p: super::Precision) {
        self.precision = p;
    }

    fn push(&mut self, name: String, kind: SymbolKind) -> SymbolId {
        let id = self.symbols.len() as SymbolId;
        self.by_name.insert(name.clone(), id);
        self.symbols.push(Symbol { name, kind });
        let mut order: Vec<usize> = (0..self.symbols.len()).collect();
        order.sort_by(|&a, &b| self.symbols[a].name.cmp(&self.symbols[b].name));
        self.ranks = alloc::vec![0; order.len()];
        for (r, &i) in order.iter().enumerate() {
            self.ranks[i] = r;
        }
        id
    }

    pub fn declare(&mut self, name: &str, witness: f64, range: Option<(f64, f64)>) -> Result<SymbolId, CasError> {
        if self.by_name.contains_key(name) {
            return Err(CasError::DuplicateSymbol(name.into()));
        }
        Ok(self.push(name.into(), SymbolKind::Indeterminate { witness, range }))
    }

    /// Declares an indeterminate with a name derived from `hint` that is not
    /// yet taken.
    pub fn fresh(&mut self, hint: &str, witness: f64) -> SymbolId {
        let mut name = String::from(hint);
        let mut k = 1;
        while self.by_name.contains_key(&name) {
            name = format!("{hint}_{k}");
            k += 1;
        }
        self.push(name, SymbolKind::Indeterminate { witness, range: None })
    }

    pub fn id(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn lookup(&self, name: &str) -> Result<SymbolId, CasError> {
        self.id(name).ok_or_else(|| CasError::UnknownSymbol(name.into()))
    }

    pub fn symbol(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id as usize]
    }

    pub fn symbols(&self) -> impl Iterator<Item = (SymbolId, &Symbol)> + '_ {
        self.symbols.iter().enumerate().map(|(i, s)| (i as SymbolId, s))
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id as usize].name
    }

    pub(super) fn rank(&self, id: SymbolId) -> usize {
        self.ranks[id as usize]
    }

    pub fn is_indeterminate(&self, id: SymbolId) -> bool {
        matches!(self.symbol(id).kind, SymbolKind::Indeterminate { .. })
    }

    pub fn witness(&self, id: SymbolId) -> Option<f64> {
        match self.symbol(id).kind {
            SymbolKind::Indeterminate { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn range(&self, id: SymbolId) -> Option<(f64, f64)> {
        match self.symbol(id).kind {
            SymbolKind::Indeterminate { range, .. } => range,
            _ => None,
        }
    }

    /// Moves the witness of an indeterminate. Range checks are the caller's.
    pub fn set_witness(&mut self, id: SymbolId, value: f64) {
        if let SymbolKind::Indeterminate { witness, .. } = &mut self.symbols[id as usize].kind {
            *witness = value;
        }
    }

    pub fn indeterminates(&self) -> impl Iterator<Item = SymbolId> + '_ {
        self.symbols()
            .filter(|(_, s)| matches!(s.kind, SymbolKind::Indeterminate { .. }))
            .map(|(i, _)| i)
    }

    pub fn cos_of(&mut self, angle: SymbolId) -> SymbolId {
        let name = format!("cos({})", self.name(angle));
        if let Some(id) = self.id(&name) {
            return id;
        }
        self.push(name, SymbolKind::Cos { angle })
    }

    pub fn sin_of(&mut self, angle: SymbolId) -> SymbolId {
        let name = format!("sin({})", self.name(angle));
        if let Some(id) = self.id(&name) {
            return id;
        }
        let c = self.cos_of(angle);
        let relation = &Poly::one() - &Poly::var(c).pow(2);
        self.push(name, SymbolKind::Sin { angle, relation })
    }

    pub(super) fn push_root(&mut self, radicand: Poly) -> SymbolId {
        let name = format!("sqrt({})", self.poly_text(&radicand));
        if let Some(id) = self.id(&name) {
            return id;
        }
        self.push(name, SymbolKind::Root { radicand })
    }

    /// Right-hand side of the quadratic relation of `id`, if it has one.
    pub fn relation(&self, id: SymbolId) -> Option<&Poly> {
        match &self.symbol(id).kind {
            SymbolKind::Sin { relation, .. } => Some(relation),
            SymbolKind::Root { radicand } => Some(radicand),
            _ => None,
        }
    }

    pub fn is_quadratic(&self, id: SymbolId) -> bool {
        self.relation(id).is_some()
    }

    /// True when the value of symbol `id` changes with `v`.
    pub fn depends_on(&self, id: SymbolId, v: SymbolId) -> bool {
        if id == v {
            return true;
        }
        match &self.symbol(id).kind {
            SymbolKind::Indeterminate { .. } => false,
            SymbolKind::Cos { angle } | SymbolKind::Sin { angle, .. } => *angle == v,
            SymbolKind::Root { radicand } => radicand.vars().iter().any(|&w| self.depends_on(w, v)),
        }
    }

    pub fn rf_depends_on(&self, e: &RatFun, v: SymbolId) -> bool {
        e.vars().iter().any(|&w| self.depends_on(w, v))
    }

    /// Symbols free of indeterminates: roots of constant radicands.
    pub fn is_constant_symbol(&self, id: SymbolId) -> bool {
        match &self.symbol(id).kind {
            SymbolKind::Root { radicand } => radicand.vars().iter().all(|&w| self.is_constant_symbol(w)),
            _ => false,
        }
    }

    /// True when `e` involves no indeterminate (directly or through roots).
    pub fn is_constant(&self, e: &RatFun) -> bool {
        e.vars().iter().all(|&v| self.is_constant_symbol(v))
    }

    /// Indeterminates `e` depends on.
    pub fn free_indeterminates(&self, e: &RatFun) -> alloc::collections::BTreeSet<SymbolId> {
        let mut out = alloc::collections::BTreeSet::new();
        let mut stack: Vec<SymbolId> = e.vars().into_iter().collect();
        while let Some(v) = stack.pop() {
            match &self.symbol(v).kind {
                SymbolKind::Indeterminate { .. } => {
                    out.insert(v);
                }
                SymbolKind::Cos { angle } | SymbolKind::Sin { angle, .. } => {
                    out.insert(*angle);
                }
                SymbolKind::Root { radicand } => stack.extend(radicand.vars()),
            }
        }
        out
    }

    /// Reduces every quadratic symbol to degree at most one.
    pub fn reduce(&self, p: &Poly) -> Poly {
        let mut quads: Vec<SymbolId> = p
            .vars()
            .into_iter()
            .filter(|&v| self.is_quadratic(v) && p.degree_in(v) >= 2)
            .collect();
        if quads.is_empty() {
            return p.clone();
        }
        let mut cur = p.clone();
        // Relations only mention lower ids, so one descending pass suffices
        // apart from lower symbols that reappear; loop until stable.
        loop {
            quads.sort_unstable();
            let Some(&q) = quads.last() else { break };
            cur = self.reduce_one(&cur, q);
            quads = cur
                .vars()
                .into_iter()
                .filter(|&v| self.is_quadratic(v) && cur.degree_in(v) >= 2)
                .collect();
        }
        cur
    }

    fn reduce_one(&self, p: &Poly, q: SymbolId) -> Poly {
        let rel = self.relation(q).expect("quadratic symbol");
        let coeffs = p.coeffs_in(q);
        let mut rel_pows: Vec<Poly> = alloc::vec![Poly::one()];
        let mut out = Poly::zero();
        let qv = Poly::var(q);
        for (e, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let half = e / 2;
            while rel_pows.len() <= half {
                let next = &rel_pows[rel_pows.len() - 1] * rel;
                rel_pows.push(next);
            }
            let mut t = c * &rel_pows[half];
            if e % 2 == 1 {
                t = &t * &qv;
            }
            out = &out + &t;
        }
        out
    }

    fn highest_quadratic(&self, p: &Poly) -> Option<SymbolId> {
        p.vars().into_iter().rev().find(|&v| self.is_quadratic(v))
    }

    /// Canonical form of `num / den`.
    pub fn make(&self, num: Poly, den: Poly) -> Result<RatFun, CasError> {
        if den.is_zero() {
            return Err(CasError::DegenerateExpression);
        }
        let mut num = self.reduce(&num);
        let mut den = self.reduce(&den);
        if den.is_zero() {
            return Err(CasError::DegenerateExpression);
        }
        while let Some(q) = self.highest_quadratic(&den) {
            let parts = den.coeffs_in(q);
            let d0 = parts[0].clone();
            let d1 = parts.get(1).cloned().unwrap_or_default();
            let conj = &d0 - &(&d1 * &Poly::var(q));
            num = self.reduce(&(&num * &conj));
            den = self.reduce(&(&den * &conj));
            if den.is_zero() {
                return Err(CasError::DegenerateExpression);
            }
        }
        if num.is_zero() {
            return Ok(RatFun::zero());
        }
        if !den.is_constant() {
            let g = gcd(&num, &den);
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides numerator");
                den = den.div_exact(&g).expect("gcd divides denominator");
            }
        }
        let (fn_, pn) = num.integer_primitive();
        let (fd, pd) = den.integer_primitive();
        let ratio = fn_ / fd;
        let mut num = pn.scale(&Q::from_integer(ratio.numer().clone()));
        let mut den = pd.scale(&Q::from_integer(ratio.denom().clone()));
        if self.canonical_lc(&den).is_negative() {
            num = -num;
            den = -den;
        }
        Ok(RatFun { num, den })
    }

    pub fn from_poly(&self, p: Poly) -> RatFun {
        self.make(p, Poly::one()).expect("unit denominator")
    }

    /// Leading coefficient under graded-lex with alphabetical variable ranks.
    pub(super) fn canonical_lc(&self, p: &Poly) -> Q {
        p.terms()
            .max_by(|a, b| self.cmp_monomials(a.0, b.0))
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Q::zero)
    }

    pub(super) fn cmp_monomials(&self, a: &Monomial, b: &Monomial) -> Ordering {
        a.cmp_grlex_by(b, |v| self.rank(v))
    }

    pub fn add(&self, a: &RatFun, b: &RatFun) -> Result<RatFun, CasError> {
        if a.is_zero() {
            return Ok(b.clone());
        }
        if b.is_zero() {
            return Ok(a.clone());
        }
        if a.den == b.den {
            return self.make(&a.num + &b.num, a.den.clone());
        }
        self.make(&(&a.num * &b.den) + &(&b.num * &a.den), &a.den * &b.den)
    }

    pub fn sub(&self, a: &RatFun, b: &RatFun) -> Result<RatFun, CasError> {
        self.add(a, &b.neg())
    }

    pub fn mul(&self, a: &RatFun, b: &RatFun) -> Result<RatFun, CasError> {
        if a.is_zero() || b.is_zero() {
            return Ok(RatFun::zero());
        }
        self.make(&a.num * &b.num, &a.den * &b.den)
    }

    pub fn div(&self, a: &RatFun, b: &RatFun) -> Result<RatFun, CasError> {
        if b.is_zero() {
            return Err(CasError::DegenerateExpression);
        }
        self.make(&a.num * &b.den, &a.den * &b.num)
    }

    pub fn recip(&self, a: &RatFun) -> Result<RatFun, CasError> {
        self.div(&RatFun::one(), a)
    }

    pub fn scale(&self, a: &RatFun, q: &Q) -> RatFun {
        if q.is_zero() {
            return RatFun::zero();
        }
        self.make(a.num.scale(q), a.den.clone()).expect("nonzero denominator")
    }

    pub fn pow(&self, a: &RatFun, k: i64) -> Result<RatFun, CasError> {
        if k == 0 {
            return Ok(RatFun::one());
        }
        let mut result = RatFun::one();
        let mut base = a.clone();
        let mut e = k.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        if k < 0 {
            self.recip(&result)
        } else {
            Ok(result)
        }
    }

    /// Sum of a list of values.
    pub fn sum<'a, I: IntoIterator<Item = &'a RatFun>>(&self, it: I) -> Result<RatFun, CasError> {
        it.into_iter().try_fold(RatFun::zero(), |acc, x| self.add(&acc, x))
    }

    pub fn side_conditions(&self) -> &[SideCondition] {
        &self.side_conditions
    }

    pub(super) fn record_side_condition(&mut self, expr: RatFun, sign: Sign) {
        if self.is_constant(&expr) {
            return;
        }
        let cond = SideCondition { expr, sign };
        if !self.side_conditions.contains(&cond) {
            self.side_conditions.push(cond);
        }
    }

    /// Records that `expr` has the given sign; the side condition is checked
    /// again whenever witnesses move.
    pub fn assume_sign(&mut self, expr: RatFun, sign: Sign) {
        self.record_side_condition(expr, sign);
    }
}
