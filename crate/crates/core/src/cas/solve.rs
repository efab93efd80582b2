//! Solving equations of degree one or two in a single symbol.

use alloc::string::String;
use alloc::vec::Vec;

use super::context::{Context, RatFun, SideCondition, Sign, SymbolId};
use super::{CasError, Q};

#[derive(Clone, Debug, PartialEq)]
pub struct LinearSolution {
    pub root: RatFun,
    /// The leading coefficient, assumed nonzero.
    pub condition: SideCondition,
}

/// Roots ordered by their witness values (`low <= high`).
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticRoots {
    pub low: RatFun,
    pub high: RatFun,
    pub discriminant: RatFun,
}

impl Context {
    /// Coefficients of the numerator of `eq` in `v`, rejecting `v` hidden
    /// inside roots or trigonometric symbols.
    fn coefficients(&self, eq: &RatFun, v: SymbolId) -> Result<Vec<RatFun>, String> {
        let num = eq.num();
        for w in num.vars() {
            if w != v && self.depends_on(w, v) {
                return Err(self.name(w).into());
            }
        }
        Ok(num.coeffs_in(v).into_iter().map(|c| self.from_poly(c)).collect())
    }

    pub fn solve_linear(&mut self, eq: &RatFun, v: SymbolId) -> Result<LinearSolution, CasError> {
        let text = || self.text(eq);
        let coeffs = self.coefficients(eq, v).map_err(|_| CasError::NotLinear(text()))?;
        if coeffs.len() != 2 {
            return Err(CasError::NotLinear(text()));
        }
        let root = self.div(&coeffs[0], &coeffs[1])?.neg();
        let lead = coeffs[1].clone();
        let sign = self.witness_sign(&lead)?;
        self.record_side_condition(lead.clone(), sign);
        Ok(LinearSolution {
            root,
            condition: SideCondition { expr: lead, sign },
        })
    }

    pub fn solve_quadratic(&mut self, eq: &RatFun, v: SymbolId) -> Result<QuadraticRoots, CasError> {
        let text = || self.text(eq);
        let coeffs = self.coefficients(eq, v).map_err(|_| CasError::NotQuadratic(text()))?;
        if coeffs.len() != 3 {
            return Err(CasError::NotQuadratic(text()));
        }
        let (c, b, a) = (&coeffs[0], &coeffs[1], &coeffs[2]);
        let four_ac = self.scale(&self.mul(a, c)?, &Q::from_integer(4.into()));
        let disc = self.sub(&self.mul(b, b)?, &four_ac)?;
        if self.witness_sign(&disc)? == Sign::Negative {
            return Err(CasError::ComplexRoots);
        }
        let s = self.sqrt(&disc)?;
        let two_a = self.scale(a, &Q::from_integer(2.into()));
        let r1 = self.div(&self.sub(&b.neg(), &s)?, &two_a)?;
        let r2 = self.div(&self.add(&b.neg(), &s)?, &two_a)?;
        let v1 = self.eval_witness(&r1)?.value;
        let v2 = self.eval_witness(&r2)?.value;
        let (low, high) = if v1 <= v2 { (r1, r2) } else { (r2, r1) };
        Ok(QuadraticRoots {
            low,
            high,
            discriminant: disc,
        })
    }
}
