//! Numeric shadows of symbolic values with rigorous error bounds.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::context::{Context, RatFun, Sign, SymbolId, SymbolKind};
use super::interval::{BigInterval, F64Interval, Interval};
use super::poly::Poly;
use super::{q_from_f64, CasError, Q};

/// Overrides of indeterminate values; anything absent uses its witness.
pub type Env = BTreeMap<SymbolId, f64>;

/// Evaluation precision policy: hardware doubles by default, escalating to
/// `escalate_bits` when a bound straddles zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Precision {
    pub base_bits: u32,
    pub escalate_bits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            base_bits: 64,
            escalate_bits: 256,
        }
    }
}

/// Midpoint value with a half-width error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub bound: f64,
}

impl Approx {
    fn from_interval<I: Interval>(i: &I) -> Approx {
        let (lo, hi) = (i.lo(), i.hi());
        let value = 0.5 * lo + 0.5 * hi;
        let bound = (hi - value).max(value - lo).next_up();
        Approx { value, bound }
    }

    pub fn contains_zero(&self) -> bool {
        self.value.abs() <= self.bound
    }

    pub fn contains(&self, x: f64, tol: f64) -> bool {
        (self.value - x).abs() <= self.bound + tol
    }
}

struct Evaluator<'a, I: Interval> {
    ctx: &'a Context,
    env: &'a Env,
    bits: u32,
    memo: Vec<Option<I>>,
}

impl<'a, I: Interval> Evaluator<'a, I> {
    fn new(ctx: &'a Context, env: &'a Env, bits: u32) -> Self {
        let n = ctx.symbols().count();
        Evaluator {
            ctx,
            env,
            bits,
            memo: alloc::vec![None; n],
        }
    }

    fn leaf(&self, v: SymbolId) -> Result<I, CasError> {
        let x = match self.env.get(&v) {
            Some(&x) => x,
            None => self.ctx.witness(v).unwrap_or(f64::NAN),
        };
        let q = q_from_f64(x).ok_or(CasError::EvalSingular)?;
        Ok(I::from_q(&q, self.bits))
    }

    fn symbol(&mut self, v: SymbolId) -> Result<I, CasError> {
        if let Some(x) = &self.memo[v as usize] {
            return Ok(x.clone());
        }
        let value = match &self.ctx.symbol(v).kind {
            SymbolKind::Indeterminate { .. } => self.leaf(v)?,
            SymbolKind::Cos { angle } => self.symbol(*angle)?.cos(),
            SymbolKind::Sin { angle, .. } => self.symbol(*angle)?.sin(),
            SymbolKind::Root { radicand } => {
                let r = self.poly(radicand)?;
                r.sqrt()
                    .ok_or_else(|| CasError::DomainError(self.ctx.poly_text(radicand)))?
            }
        };
        self.memo[v as usize] = Some(value.clone());
        Ok(value)
    }

    fn poly(&mut self, p: &Poly) -> Result<I, CasError> {
        let bits = self.bits;
        let one = I::from_q(&Q::from_integer(1.into()), bits);
        p.eval_with(
            |v| self.symbol(v),
            |c| I::from_q(c, bits),
            one,
            |a, b| a.add(b),
            |a, b| a.mul(b),
        )
    }

    fn ratfun(&mut self, e: &RatFun) -> Result<I, CasError> {
        let n = self.poly(e.num())?;
        if e.den().is_one() {
            return Ok(n);
        }
        let d = self.poly(e.den())?;
        n.div(&d).ok_or(CasError::EvalSingular)
    }
}

impl Context {
    /// Evaluates `e` at `env` (witness values elsewhere) with `bits` of
    /// precision; 64 or fewer selects hardware doubles.
    pub fn eval_numeric(&self, e: &RatFun, env: &Env, bits: u32) -> Result<Approx, CasError> {
        if bits <= 64 {
            let i: F64Interval = Evaluator::new(self, env, bits).ratfun(e)?;
            Ok(Approx::from_interval(&i))
        } else {
            let i: BigInterval = Evaluator::new(self, env, bits).ratfun(e)?;
            Ok(Approx::from_interval(&i))
        }
    }

    /// Evaluation under the context's precision policy: escalates when the
    /// base result straddles zero or the denominator cannot be separated
    /// from zero.
    pub fn eval_at(&self, e: &RatFun, env: &Env) -> Result<Approx, CasError> {
        let p = self.precision;
        match self.eval_numeric(e, env, p.base_bits) {
            Ok(a) if !a.contains_zero() || e.is_zero() => Ok(a),
            Ok(a) => match self.eval_numeric(e, env, p.escalate_bits) {
                Ok(b) => Ok(b),
                Err(_) => Ok(a),
            },
            Err(CasError::EvalSingular) | Err(CasError::DomainError(_)) => self.eval_numeric(e, env, p.escalate_bits),
            Err(err) => Err(err),
        }
    }

    pub fn eval_witness(&self, e: &RatFun) -> Result<Approx, CasError> {
        self.eval_at(e, &Env::new())
    }

    /// Plain double value at `env`, for sampling and plotting.
    pub fn eval_f64(&self, e: &RatFun, env: &Env) -> Result<f64, CasError> {
        Ok(self.eval_numeric(e, env, 64)?.value)
    }

    /// Sign at `env`, escalating precision when the base bound straddles
    /// zero. `Zero` means the value could not be separated from zero.
    pub fn sign_at(&self, e: &RatFun, env: &Env) -> Result<Sign, CasError> {
        if e.is_zero() {
            return Ok(Sign::Zero);
        }
        let a = self.eval_at(e, env)?;
        Ok(if a.contains_zero() {
            Sign::Zero
        } else if a.value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        })
    }

    pub fn witness_sign(&self, e: &RatFun) -> Result<Sign, CasError> {
        self.sign_at(e, &Env::new())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pythagoras_with_bound() {
        let mut ctx = Context::new();
        let a = RatFun::var(ctx.declare("a", 3.0, None).unwrap());
        let b = RatFun::var(ctx.declare("b", 4.0, None).unwrap());
        let r = ctx.add(&ctx.mul(&a, &a).unwrap(), &ctx.mul(&b, &b).unwrap()).unwrap();
        let h = ctx.sqrt(&r).unwrap();
        let v = ctx.eval_numeric(&h, &Env::new(), 64).unwrap();
        assert!(v.contains(5.0, 0.0));
        assert!(v.bound < 1e-12);
        let hv = ctx.eval_numeric(&h, &Env::new(), 256).unwrap();
        assert!(hv.contains(5.0, 0.0));
    }

    #[test]
    fn singular_denominator() {
        let mut ctx = Context::new();
        let a = RatFun::var(ctx.declare("a", 3.0, None).unwrap());
        let e = ctx.recip(&ctx.sub(&a, &RatFun::from_int(3)).unwrap()).unwrap();
        assert_eq!(ctx.eval_numeric(&e, &Env::new(), 64), Err(CasError::EvalSingular));
        assert_eq!(ctx.eval_at(&e, &Env::new()), Err(CasError::EvalSingular));
    }

    #[test]
    fn negative_radicand_is_domain_error() {
        let mut ctx = Context::new();
        let a = ctx.declare("a", 2.0, None).unwrap();
        let r = ctx.sqrt(&RatFun::var(a)).unwrap();
        let mut env = Env::new();
        env.insert(a, -1.0);
        assert!(matches!(ctx.eval_numeric(&r, &env, 64), Err(CasError::DomainError(_))));
    }

    #[test]
    fn escalation_resolves_tiny_values() {
        let mut ctx = Context::new();
        let w = 1.0 + libm::ldexp(1.0, -30);
        let a = RatFun::var(ctx.declare("a", w, None).unwrap());
        // (a - 1)^2 = 2^-60, lost to rounding in doubles.
        let d = ctx.pow(&ctx.sub(&a, &RatFun::one()).unwrap(), 2).unwrap();
        let coarse = ctx.eval_numeric(&d, &Env::new(), 64).unwrap();
        assert!(coarse.contains_zero());
        assert_eq!(ctx.witness_sign(&d).unwrap(), Sign::Positive);
    }
}
