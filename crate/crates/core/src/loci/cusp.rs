use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{env_at, mode, scan_roots, Mode, ParametricCurve, Result};
use crate::cas::gcd::{gcd, squarefree_in};
use crate::cas::{Bindings, Context, RatFun, Q};
use crate::geom::{GeomModel, Point};

#[derive(Clone, Debug, PartialEq)]
pub struct Cusp {
    pub t: f64,
    pub point: (f64, f64),
    /// Exact coordinates when the parameter value is exact (`t = 0` for
    /// trigonometric curves).
    pub exact: Option<Point>,
}

const CERTIFICATE: f64 = 1e-10;

fn velocity(ctx: &Context, dx: &RatFun, dy: &RatFun, c: &ParametricCurve, t: f64) -> Option<(f64, f64)> {
    let env = env_at(c.param, t);
    Some((ctx.eval_f64(dx, &env).ok()?, ctx.eval_f64(dy, &env).ok()?))
}

/// Stationary point where the velocity reverses.
fn certified(ctx: &Context, dx: &RatFun, dy: &RatFun, c: &ParametricCurve, t: f64) -> bool {
    let Some((vx, vy)) = velocity(ctx, dx, dy, c, t) else {
        return false;
    };
    if vx.abs() + vy.abs() >= CERTIFICATE {
        return false;
    }
    let h = 1e-4;
    match (velocity(ctx, dx, dy, c, t - h), velocity(ctx, dx, dy, c, t + h)) {
        (Some(a), Some(b)) => a.0 * b.0 + a.1 * b.1 < 0.0,
        _ => false,
    }
}

/// Parameter values where `x'` and `y'` vanish together: real roots of the
/// gcd of their numerators (in `u = tan(t/2)` for trigonometric curves),
/// bracketed and refined to 1e-12. `t = pi`, missed by the substitution,
/// is checked directly.
pub fn cusps(m: &GeomModel, c: &ParametricCurve) -> Result<Vec<Cusp>> {
    let t = c.param;
    let mut ctx = m.ctx.clone();
    let dx = ctx.differentiate(&c.x, t)?;
    let dy = ctx.differentiate(&c.y, t)?;
    let (lo, hi) = c.domain;
    let kind = mode(&ctx, &[&dx, &dy], t);
    let mut candidates: Vec<f64> = Vec::new();
    let mut exact_zero = false;
    match kind {
        Mode::Rational | Mode::Trig => {
            let (ex, ey, u) = if kind == Mode::Trig {
                let u = ctx.fresh("u", 0.0);
                let uu = RatFun::var(u);
                let u2 = ctx.mul(&uu, &uu)?;
                let one_plus = ctx.add(&RatFun::one(), &u2)?;
                let cos = ctx.div(&ctx.sub(&RatFun::one(), &u2)?, &one_plus)?;
                let sin = ctx.div(&ctx.scale(&uu, &Q::from_integer(2.into())), &one_plus)?;
                let mut b = Bindings::new();
                b.insert(ctx.cos_of(t), cos);
                b.insert(ctx.sin_of(t), sin);
                (ctx.substitute(&dx, &b)?, ctx.substitute(&dy, &b)?, u)
            } else {
                (dx.clone(), dy.clone(), t)
            };
            let g = if ex.is_zero() {
                ey.num().clone()
            } else if ey.is_zero() {
                ex.num().clone()
            } else {
                gcd(ex.num(), ey.num())
            };
            if g.degree_in(u) > 0 {
                let g = squarefree_in(&g, u);
                exact_zero = g.terms().all(|(m, _)| m.exp(u) > 0);
                let ge = ctx.from_poly(g);
                let to_u = |s: f64| if kind == Mode::Trig { libm::tan(s / 2.0) } else { s };
                let f = |s: f64| ctx.eval_f64(&ge, &env_at(u, to_u(s))).ok();
                // keep clear of u = infinity
                let (a, b) = if kind == Mode::Trig {
                    (lo.max(-PI + 1e-9), hi.min(PI - 1e-9))
                } else {
                    (lo, hi)
                };
                candidates.extend(scan_roots(f, a, b, 4096, 1e-13));
            }
            if kind == Mode::Trig {
                for s in [-PI, PI] {
                    if (lo..=hi).contains(&s) {
                        candidates.push(s);
                    }
                }
            }
        }
        Mode::Other => {
            // no common numerator: bracket x' and test y' at its roots
            let f = |s: f64| ctx.eval_f64(&dx, &env_at(t, s)).ok();
            candidates.extend(scan_roots(f, lo, hi, 4096, 1e-13));
        }
    }
    let mut out: Vec<Cusp> = Vec::new();
    for s in candidates {
        if !certified(&ctx, &dx, &dy, c, s) || out.iter().any(|k| (k.t - s).abs() < 1e-9) {
            continue;
        }
        let Some(point) = c.eval(&m.ctx, s) else { continue };
        let exact = if s == 0.0 && (exact_zero || kind == Mode::Rational) {
            let mut b = Bindings::new();
            b.insert(t, RatFun::zero());
            let mut scratch = m.ctx.clone();
            match (scratch.substitute(&c.x, &b), scratch.substitute(&c.y, &b)) {
                (Ok(x), Ok(y)) if x.as_q().is_some() && y.as_q().is_some() => Some(Point { x, y }),
                _ => None,
            }
        } else {
            None
        };
        out.push(Cusp { t: s, point, exact });
    }
    Ok(out)
}
