//! Exact differentiation by the chain rule through adjoined symbols.

use alloc::collections::BTreeMap;

use super::context::{Context, RatFun, SymbolId, SymbolKind};
use super::poly::Poly;
use super::{CasError, Q};

impl Context {
    /// `d e / d v` for an indeterminate `v`.
    pub fn differentiate(&mut self, e: &RatFun, v: SymbolId) -> Result<RatFun, CasError> {
        let mut memo = BTreeMap::new();
        let dn = self.poly_derivative(e.num(), v, &mut memo)?;
        if e.den().is_one() {
            return Ok(dn);
        }
        let dd = self.poly_derivative(e.den(), v, &mut memo)?;
        let n = self.from_poly(e.num().clone());
        let d = self.from_poly(e.den().clone());
        let top = self.sub(&self.mul(&dn, &d)?, &self.mul(&n, &dd)?)?;
        self.div(&top, &self.mul(&d, &d)?)
    }

    fn poly_derivative(
        &mut self,
        p: &Poly,
        v: SymbolId,
        memo: &mut BTreeMap<SymbolId, RatFun>,
    ) -> Result<RatFun, CasError> {
        let mut acc = RatFun::zero();
        for w in p.vars() {
            if !self.depends_on(w, v) {
                continue;
            }
            let dw = self.symbol_derivative(w, v, memo)?;
            let partial = self.from_poly(p.derivative(w));
            acc = self.add(&acc, &self.mul(&partial, &dw)?)?;
        }
        Ok(acc)
    }

    fn symbol_derivative(
        &mut self,
        w: SymbolId,
        v: SymbolId,
        memo: &mut BTreeMap<SymbolId, RatFun>,
    ) -> Result<RatFun, CasError> {
        if let Some(d) = memo.get(&w) {
            return Ok(d.clone());
        }
        let d = match self.symbol(w).kind.clone() {
            SymbolKind::Indeterminate { .. } => {
                if w == v {
                    RatFun::one()
                } else {
                    RatFun::zero()
                }
            }
            SymbolKind::Cos { angle } => {
                let da = self.symbol_derivative(angle, v, memo)?;
                let s = RatFun::var(self.sin_of(angle));
                self.mul(&s, &da)?.neg()
            }
            SymbolKind::Sin { angle, .. } => {
                let da = self.symbol_derivative(angle, v, memo)?;
                let c = RatFun::var(self.cos_of(angle));
                self.mul(&c, &da)?
            }
            SymbolKind::Root { radicand } => {
                // 2 r r' = radicand'
                let dr = self.poly_derivative(&radicand, v, memo)?;
                let r = RatFun::var(w);
                let two_r = self.scale(&r, &Q::from_integer(2.into()));
                self.div(&dr, &two_r)?
            }
        };
        memo.insert(w, d.clone());
        Ok(d)
    }
}
