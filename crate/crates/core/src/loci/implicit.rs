use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{env_at, mode, LociError, Mode, ParametricCurve, Result};
use crate::cas::gcd::{content_in, gcd};
use crate::cas::{resultant, Bindings, Context, Env, Monomial, Poly, RatFun, SymbolId, Q};
use crate::geom::GeomModel;

/// `F(x, y) = 0`; coefficients may involve other indeterminates.
#[derive(Clone, Debug)]
pub struct ImplicitCurve {
    pub poly: Poly,
    pub x: SymbolId,
    pub y: SymbolId,
    pub degree: u32,
    /// Factors of the raw resultant that vanish on no sampled curve point.
    pub dropped: Vec<Poly>,
    ctx: Context,
}

impl ImplicitCurve {
    pub fn text(&self) -> String {
        self.ctx.poly_text(&self.poly)
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn eval(&self, x: f64, y: f64) -> Option<f64> {
        let mut env = Env::new();
        env.insert(self.x, x);
        env.insert(self.y, y);
        self.ctx.eval_f64(&self.ctx.from_poly(self.poly.clone()), &env).ok()
    }

    /// Sum of the absolute values of the coefficients of `F` as a
    /// polynomial in `x` and `y`, other indeterminates at their witness.
    pub fn coefficient_norm(&self) -> f64 {
        coefficient_norm(&self.ctx, &self.poly, self.x, self.y)
    }

    /// `|F(x, y)|` relative to `sum |c_ij x^i y^j|`, the coefficient norm
    /// weighted by the size of each monomial at the point; for points in
    /// the unit box this is at least the plain coefficient-norm scaling.
    pub fn residual(&self, x: f64, y: f64) -> Option<f64> {
        let (mut value, mut scale) = (0.0, 0.0);
        for ((i, j), c) in xy_coeffs(&self.poly, self.x, self.y) {
            let c = self.ctx.eval_f64(&self.ctx.from_poly(c), &Env::new()).ok()?;
            let term = c * libm::pow(x, i as f64) * libm::pow(y, j as f64);
            value += term;
            scale += term.abs();
        }
        if scale == 0.0 {
            return Some(0.0);
        }
        Some(value.abs() / scale)
    }
}

/// Coefficients of `p` grouped by their `(x, y)` monomial.
fn xy_coeffs(p: &Poly, x: SymbolId, y: SymbolId) -> BTreeMap<(u32, u32), Poly> {
    let mut out: BTreeMap<(u32, u32), Poly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let key = (m.exp(x), m.exp(y));
        let rest: Vec<_> = m.iter().filter(|&(v, _)| v != x && v != y).collect();
        out.entry(key)
            .or_insert_with(Poly::zero)
            .add_term(Monomial::from_pairs(rest), c.clone());
    }
    out
}

fn coefficient_norm(ctx: &Context, p: &Poly, x: SymbolId, y: SymbolId) -> f64 {
    xy_coeffs(p, x, y)
        .values()
        .map(|c| {
            ctx.eval_f64(&ctx.from_poly(c.clone()), &Env::new())
                .map_or(0.0, f64::abs)
        })
        .sum()
}

/// Removes the factor common to all `(x, y)` coefficients.
fn xy_primitive(p: &Poly, x: SymbolId, y: SymbolId) -> Poly {
    let mut g = Poly::zero();
    for c in xy_coeffs(p, x, y).values() {
        g = gcd(&g, c);
        if g.is_one() {
            return p.normalized();
        }
    }
    p.div_exact(&g).map_or_else(|| p.clone(), |q| q.normalized())
}

/// Yun's square-free decomposition in `v`: `p = c * prod f_i^i` with `c`
/// free of `v`; returns `c` and the nonconstant `f_i`.
fn yun(p: &Poly, v: SymbolId) -> (Poly, Vec<Poly>) {
    if p.degree_in(v) == 0 {
        return (p.clone(), Vec::new());
    }
    let c = content_in(p, v);
    let a = p.div_exact(&c).expect("content divides");
    let b = a.derivative(v);
    let g = gcd(&a, &b);
    let mut w = a.div_exact(&g).expect("gcd divides");
    let mut z = &b.div_exact(&g).expect("gcd divides") - &w.derivative(v);
    let mut out = Vec::new();
    while w.degree_in(v) > 0 {
        let f = gcd(&w, &z);
        if f.degree_in(v) > 0 {
            out.push(f.normalized());
        }
        w = w.div_exact(&f).expect("gcd divides");
        let y = z.div_exact(&f).expect("gcd divides");
        z = &y - &w.derivative(v);
    }
    (c, out)
}

/// Candidate factors of `p`: square-free parts in `x`, then the
/// `x`-free content split in `y`.
fn components(p: &Poly, x: SymbolId, y: SymbolId) -> Vec<Poly> {
    let (content, mut out) = yun(p, x);
    let (_, ys) = yun(&content, y);
    out.extend(ys);
    out
}

/// `F` with `F(x(t), y(t)) = 0`, by the resultant of the numerators of
/// `x - x(u)` and `y - y(u)`, `u = tan(t/2)` for trigonometric curves.
pub fn implicitize(m: &GeomModel, c: &ParametricCurve) -> Result<ImplicitCurve> {
    let t = c.param;
    let mut ctx = m.ctx.clone();
    let (xu, yu, u) = match mode(&ctx, &[&c.x, &c.y], t) {
        Mode::Other => {
            return Err(LociError::NotImplicitizable(
                "coordinates are not rational in the parameter or in its cosine and sine".to_string(),
            ))
        }
        Mode::Rational => (c.x.clone(), c.y.clone(), t),
        Mode::Trig => {
            let w = ctx.witness(t).unwrap_or(0.0);
            let u = ctx.fresh("u", libm::tan(w / 2.0));
            let uu = RatFun::var(u);
            let u2 = ctx.mul(&uu, &uu)?;
            let one_plus = ctx.add(&RatFun::one(), &u2)?;
            let cos = ctx.div(&ctx.sub(&RatFun::one(), &u2)?, &one_plus)?;
            let sin = ctx.div(&ctx.scale(&uu, &Q::from_integer(2.into())), &one_plus)?;
            let mut b = Bindings::new();
            b.insert(ctx.cos_of(t), cos);
            b.insert(ctx.sin_of(t), sin);
            (ctx.substitute(&c.x, &b)?, ctx.substitute(&c.y, &b)?, u)
        }
    };
    let xs = ctx.fresh("x", 0.0);
    let ys = ctx.fresh("y", 0.0);
    let eq = |v: SymbolId, e: &RatFun| &(&Poly::var(v) * e.den()) - e.num();
    let (p1, p2) = (eq(xs, &xu), eq(ys, &yu));
    let raw = resultant(&p1, &p2, u).map_err(|e| LociError::NotImplicitizable(e.to_string()))?;
    if raw.is_zero() {
        return Err(LociError::NotImplicitizable(
            "the resultant vanishes identically".to_string(),
        ));
    }
    let raw = xy_primitive(&raw, xs, ys);

    // sampled curve points, away from singular parameter values
    let (lo, hi) = c.domain;
    let pts: Vec<(f64, f64)> = (1..=24)
        .filter_map(|i| c.eval(&m.ctx, lo + (hi - lo) * (i as f64 - 0.37) / 24.0))
        .collect();
    if pts.is_empty() {
        return Err(LociError::NotImplicitizable(
            "no finite curve points to check".to_string(),
        ));
    }
    let on_curve = |f: &Poly| {
        let norm = coefficient_norm(&ctx, f, xs, ys).max(f64::MIN_POSITIVE);
        let e = ctx.from_poly(f.clone());
        let hits = pts
            .iter()
            .filter(|&&(px, py)| {
                let mut env = env_at(xs, px);
                env.insert(ys, py);
                ctx.eval_f64(&e, &env).is_ok_and(|v| v.abs() / norm < 1e-6)
            })
            .count();
        2 * hits > pts.len()
    };
    let mut poly = Poly::one();
    let mut dropped = Vec::new();
    for f in components(&raw, xs, ys) {
        if on_curve(&f) {
            poly = &poly * &f;
        } else {
            dropped.push(f);
        }
    }
    if poly.is_constant() {
        return Err(LociError::NotImplicitizable(
            "no factor of the resultant vanishes on the curve".to_string(),
        ));
    }
    let poly = xy_primitive(&poly, xs, ys);
    let degree = poly.terms().map(|(m, _)| m.exp(xs) + m.exp(ys)).max().unwrap_or(0);
    Ok(ImplicitCurve {
        poly,
        x: xs,
        y: ys,
        degree,
        dropped,
        ctx,
    })
}
