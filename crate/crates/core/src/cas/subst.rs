//! Simultaneous substitution.

use alloc::collections::BTreeMap;

use super::context::{Context, RatFun, SymbolId, SymbolKind};
use super::poly::Poly;
use super::CasError;

pub type Bindings = BTreeMap<SymbolId, RatFun>;

impl Context {
    /// Replaces every bound symbol by its binding at once, then normalizes.
    /// Roots whose radicands mention bound symbols are re-derived; cosines
    /// and sines follow their angle when it is renamed or set to zero, and
    /// may also be bound directly (as in the half-angle substitution).
    pub fn substitute(&mut self, e: &RatFun, bindings: &Bindings) -> Result<RatFun, CasError> {
        let mut memo = BTreeMap::new();
        let n = self.subst_poly(e.num(), bindings, &mut memo)?;
        if e.den().is_one() {
            return Ok(n);
        }
        let d = self.subst_poly(e.den(), bindings, &mut memo)?;
        self.div(&n, &d)
    }

    fn subst_poly(
        &mut self,
        p: &Poly,
        bindings: &Bindings,
        memo: &mut BTreeMap<SymbolId, RatFun>,
    ) -> Result<RatFun, CasError> {
        let mut values = BTreeMap::new();
        for v in p.vars() {
            values.insert(v, self.subst_symbol(v, bindings, memo)?);
        }
        let mut acc = RatFun::zero();
        for (m, c) in p.terms() {
            let mut t = RatFun::from_q(c.clone());
            for (v, e) in m.iter() {
                let pv = self.pow(&values[&v], e as i64)?;
                t = self.mul(&t, &pv)?;
            }
            acc = self.add(&acc, &t)?;
        }
        Ok(acc)
    }

    fn subst_symbol(
        &mut self,
        v: SymbolId,
        bindings: &Bindings,
        memo: &mut BTreeMap<SymbolId, RatFun>,
    ) -> Result<RatFun, CasError> {
        if let Some(b) = bindings.get(&v) {
            return Ok(b.clone());
        }
        if let Some(r) = memo.get(&v) {
            return Ok(r.clone());
        }
        let value = match self.symbol(v).kind.clone() {
            SymbolKind::Indeterminate { .. } => RatFun::var(v),
            SymbolKind::Cos { angle } | SymbolKind::Sin { angle, .. } => match bindings.get(&angle) {
                None => RatFun::var(v),
                Some(b) => {
                    let is_cos = matches!(self.symbol(v).kind, SymbolKind::Cos { .. });
                    if b.is_zero() {
                        if is_cos {
                            RatFun::one()
                        } else {
                            RatFun::zero()
                        }
                    } else if let Some(w) = self.bare_indeterminate(b) {
                        RatFun::var(if is_cos { self.cos_of(w) } else { self.sin_of(w) })
                    } else {
                        return Err(CasError::UnsupportedSubstitution(self.name(v).into()));
                    }
                }
            },
            SymbolKind::Root { radicand } => {
                if radicand.vars().iter().any(|&w| self.touches(w, bindings)) {
                    let r = self.subst_poly(&radicand, bindings, memo)?;
                    self.sqrt(&r)?
                } else {
                    RatFun::var(v)
                }
            }
        };
        memo.insert(v, value.clone());
        Ok(value)
    }

    fn touches(&self, w: SymbolId, bindings: &Bindings) -> bool {
        bindings.keys().any(|&b| self.depends_on(w, b))
    }

    fn bare_indeterminate(&self, e: &RatFun) -> Option<SymbolId> {
        let vars = e.vars();
        let &w = vars.iter().next()?;
        (vars.len() == 1 && self.is_indeterminate(w) && *e == RatFun::var(w)).then_some(w)
    }

    /// Convenience: substitute rational constants.
    pub fn substitute_values(&mut self, e: &RatFun, values: &[(SymbolId, super::Q)]) -> Result<RatFun, CasError> {
        let b: Bindings = values.iter().map(|(v, q)| (*v, RatFun::from_q(q.clone()))).collect();
        self.substitute(e, &b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cas::{Expr, Q};

    fn norm(ctx: &mut Context, s: &str) -> RatFun {
        ctx.normalize(&Expr::parse(s).unwrap()).unwrap()
    }

    #[test]
    fn constants() {
        let mut ctx = Context::new();
        let a = ctx.declare("a", 1.0, None).unwrap();
        let b = ctx.declare("b", 1.0, None).unwrap();
        let e = norm(&mut ctx, "a + b");
        let r = ctx
            .substitute_values(&e, &[(a, Q::from_integer(1.into())), (b, Q::from_integer(2.into()))])
            .unwrap();
        assert_eq!(r, RatFun::from_int(3));
    }

    #[test]
    fn polynomial_binding() {
        let mut ctx = Context::new();
        let x = ctx.declare("x", 1.0, None).unwrap();
        let y = ctx.declare("y", 1.0, None).unwrap();
        let e = norm(&mut ctx, "x^2 - y");
        let mut b = Bindings::new();
        b.insert(y, norm(&mut ctx, "x^2"));
        assert!(ctx.substitute(&e, &b).unwrap().is_zero());
        let _ = x;
    }

    #[test]
    fn simultaneous_swap() {
        let mut ctx = Context::new();
        let x = ctx.declare("x", 1.0, None).unwrap();
        let y = ctx.declare("y", 2.0, None).unwrap();
        let e = norm(&mut ctx, "x - 2*y");
        let mut b = Bindings::new();
        b.insert(x, RatFun::var(y));
        b.insert(y, RatFun::var(x));
        assert_eq!(ctx.substitute(&e, &b).unwrap(), norm(&mut ctx, "y - 2*x"));
    }

    #[test]
    fn incircle_radius_arithmetic() {
        let mut ctx = Context::new();
        let k = ctx.declare("K", 6.0, None).unwrap();
        let s = ctx.declare("s", 6.0, None).unwrap();
        let r = norm(&mut ctx, "K/s");
        let six = Q::from_integer(6.into());
        let v = ctx.substitute_values(&r, &[(k, six.clone()), (s, six)]).unwrap();
        assert_eq!(v, RatFun::one());
    }

    #[test]
    fn roots_are_recomputed() {
        let mut ctx = Context::new();
        let a = ctx.declare("a", 1.0, None).unwrap();
        let e = norm(&mut ctx, "sqrt(a^2 + 7)");
        let v = ctx.substitute_values(&e, &[(a, Q::from_integer(3.into()))]).unwrap();
        assert_eq!(v, RatFun::from_int(4));
    }

    #[test]
    fn zero_denominator() {
        let mut ctx = Context::new();
        let a = ctx.declare("a", 1.0, None).unwrap();
        let e = norm(&mut ctx, "1/(a - 2)");
        let r = ctx.substitute_values(&e, &[(a, Q::from_integer(2.into()))]);
        assert_eq!(r, Err(CasError::DegenerateExpression));
    }
}
