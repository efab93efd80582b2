//! Square roots: denesting of perfect squares, otherwise adjoining a root
//! symbol (or reusing one whose radicand differs by a square factor).

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::context::{Context, RatFun, Sign, SymbolId, SymbolKind};
use super::gcd::{gcd, integer_square_part, monomial_square_part, poly_sqrt, rational_sqrt};
use super::poly::Poly;
use super::{CasError, Q};

/// `p = sign * c * s^2` with `c` rational, if `p` is a signed rational
/// multiple of a perfect square.
fn scaled_square(p: &Poly) -> Option<(Q, Poly)> {
    let (c, pp) = p.integer_primitive();
    if let Some(s) = poly_sqrt(&pp) {
        return Some((c, s));
    }
    let neg = -&pp;
    poly_sqrt(&neg).map(|s| (-c, s))
}

impl Context {
    /// Nonnegative square root of `x` at the witness. Fails with
    /// `DomainError` when `x` is negative there.
    pub fn sqrt(&mut self, x: &RatFun) -> Result<RatFun, CasError> {
        if x.is_zero() {
            return Ok(RatFun::zero());
        }
        if self.witness_sign(x)? == Sign::Negative {
            return Err(CasError::DomainError(self.text(x)));
        }
        // Perfect square numerator and denominator: denest completely.
        if let (Some((cn, sn)), Some((cd, sd))) = (scaled_square(x.num()), scaled_square(x.den())) {
            if let Some(k) = rational_sqrt(&(&cn / &cd)) {
                let candidate = self.make(sn.scale(&k), sd)?;
                return self.resolve_nonnegative(candidate);
            }
        }
        // sqrt(n/d) = sqrt(n*d)/|d|, or sqrt(n*k)/|k*s| when d = k*s^2.
        let (radicand, outer) = match scaled_square(x.den()) {
            Some((k, s)) => (x.num().scale(&k), self.make(s.scale(&k), Poly::one())?),
            None => (x.num() * x.den(), self.from_poly(x.den().clone())),
        };
        let (c, mut p) = radicand.integer_primitive();
        let c = if c.is_negative() {
            p = -p;
            -c
        } else {
            c
        };
        let nd: BigInt = c.numer() * c.denom();
        let (s, m) = integer_square_part(&nd);
        let coeff = Q::new(s, c.denom().clone());
        let p = p.scale(&Q::from_integer(m));
        let (mono, rest) = monomial_square_part(&p);
        let mono_rf = self.from_poly(Poly::term(Q::one(), mono));
        let inner = match poly_sqrt(&rest) {
            Some(r) => self.from_poly(r),
            None if poly_sqrt(&-&rest).is_some() => {
                return Err(CasError::DomainError(self.poly_text(&rest)));
            }
            None => self.root_of(rest)?,
        };
        let lifted = self.mul(&self.scale(&mono_rf, &coeff), &inner)?;
        let candidate = self.div(&lifted, &outer)?;
        self.resolve_nonnegative(candidate)
    }

    /// Flips the sign of `candidate` if needed so it is nonnegative at the
    /// witness, recording the sign as a side condition.
    fn resolve_nonnegative(&mut self, candidate: RatFun) -> Result<RatFun, CasError> {
        match self.witness_sign(&candidate)? {
            Sign::Negative => {
                let flipped = candidate.neg();
                self.record_side_condition(flipped.clone(), Sign::Positive);
                Ok(flipped)
            }
            Sign::Positive => {
                self.record_side_condition(candidate.clone(), Sign::Positive);
                Ok(candidate)
            }
            Sign::Zero => Ok(candidate),
        }
    }

    /// Root symbol value for a primitive, square-free-content radicand,
    /// reusing an existing quadratic symbol when the radicands differ by a
    /// rational square.
    fn root_of(&mut self, radicand: Poly) -> Result<RatFun, CasError> {
        let existing: alloc::vec::Vec<(SymbolId, Poly)> = self
            .symbols()
            .filter_map(|(id, s)| match &s.kind {
                SymbolKind::Root { radicand } => Some((id, radicand.clone())),
                SymbolKind::Sin { relation, .. } => Some((id, relation.clone())),
                _ => None,
            })
            .collect();
        for (id, other) in existing {
            if other.total_degree() % 2 != radicand.total_degree() % 2 {
                continue;
            }
            if let Some(factor) = self.square_ratio(&radicand, &other)? {
                let candidate = self.mul(&factor, &RatFun::var(id))?;
                return Ok(candidate);
            }
        }
        let id = self.push_root(radicand);
        Ok(RatFun::var(id))
    }

    /// `sqrt(a / b)` as an exact rational function when `a / b` is the
    /// square of one (sign left to the caller).
    fn square_ratio(&self, a: &Poly, b: &Poly) -> Result<Option<RatFun>, CasError> {
        let g = gcd(a, b);
        let (Some(aa), Some(bb)) = (a.div_exact(&g), b.div_exact(&g)) else {
            return Ok(None);
        };
        let (Some((ca, sa)), Some((cb, sb))) = (scaled_square(&aa), scaled_square(&bb)) else {
            return Ok(None);
        };
        let Some(k) = rational_sqrt(&(&ca / &cb)) else {
            return Ok(None);
        };
        Ok(Some(self.make(sa.scale(&k), sb)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_squares_denest_with_witness_sign() {
        let mut ctx = Context::new();
        let a = RatFun::var(ctx.declare("a", 2.0, None).unwrap());
        let b = RatFun::var(ctx.declare("b", 5.0, None).unwrap());
        let d = ctx.sub(&a, &b).unwrap();
        let sq = ctx.mul(&d, &d).unwrap();
        // |a - b| with a < b at the witness
        assert_eq!(ctx.sqrt(&sq).unwrap(), ctx.sub(&b, &a).unwrap());
        assert_eq!(ctx.sqrt(&RatFun::from_int(9)).unwrap(), RatFun::from_int(3));
    }

    #[test]
    fn integer_squares_are_extracted() {
        let mut ctx = Context::new();
        let s8 = ctx.sqrt(&RatFun::from_int(8)).unwrap();
        let s2 = ctx.sqrt(&RatFun::from_int(2)).unwrap();
        assert_eq!(s8, ctx.scale(&s2, &Q::from_integer(2.into())));
    }

    #[test]
    fn related_radicands_share_a_root() {
        let mut ctx = Context::new();
        let a = RatFun::var(ctx.declare("a", 1.0, None).unwrap());
        let r = ctx.add(&ctx.mul(&a, &a).unwrap(), &RatFun::one()).unwrap();
        let s = ctx.sqrt(&r).unwrap();
        let four_r = ctx.scale(&r, &Q::from_integer(4.into()));
        let s4 = ctx.sqrt(&four_r).unwrap();
        assert_eq!(s4, ctx.scale(&s, &Q::from_integer(2.into())));
        // sqrt(1/r) = s / r
        let inv = ctx.recip(&r).unwrap();
        let si = ctx.sqrt(&inv).unwrap();
        assert_eq!(si, ctx.div(&s, &r).unwrap());
    }

    #[test]
    fn sin_is_reused_for_its_radicand() {
        let mut ctx = Context::new();
        let t = ctx.declare("t", 2.0, None).unwrap();
        let s = ctx.sin_of(t);
        let c = RatFun::var(ctx.cos_of(t));
        let r = ctx.sub(&RatFun::one(), &ctx.mul(&c, &c).unwrap()).unwrap();
        assert_eq!(ctx.sqrt(&r).unwrap(), RatFun::var(s));
    }

    #[test]
    fn negative_value_is_domain_error() {
        let mut ctx = Context::new();
        assert!(matches!(ctx.sqrt(&RatFun::from_int(-1)), Err(CasError::DomainError(_))));
    }
}
