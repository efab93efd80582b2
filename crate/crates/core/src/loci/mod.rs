//! Loci and envelopes over one varying indeterminate: parametric curves,
//! implicit equations by elimination, cusps, and the solar-cooker driver.

mod cusp;
mod implicit;
mod solar;

use alloc::vec::Vec;
use core::f64::consts::PI;

pub use cusp::{cusps, Cusp};
pub use implicit::{implicitize, ImplicitCurve};
pub use solar::{solar_optimal_angle, trace_solar, SolarAngle, SolarSolution};

use crate::cas::{Approx, CasError, Context, Env, Poly, RatFun, SymbolId, SymbolKind};
use crate::geom::{GeomError, GeomModel, Line, Point};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LociError {
    #[error("the point does not depend on the parameter")]
    ConstantLocus(Point),
    #[error("degenerate line family: all lines are parallel or pass through one point")]
    DegenerateFamily,
    #[error("cannot implicitize: {0}")]
    NotImplicitizable(alloc::string::String),
    #[error("no opening angle in (0, pi/2) sends the reflected ray to the rim")]
    NoOpeningAngle,
    #[error("the curve's parameter domain is empty")]
    EmptyCurve,
    #[error("at least 2 samples are needed, got {0}")]
    TooFewSamples(usize),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl From<CasError> for LociError {
    fn from(e: CasError) -> Self {
        LociError::Geom(e.into())
    }
}

pub type Result<T> = core::result::Result<T, LociError>;

/// `(x(t), y(t))`, other indeterminates kept symbolic.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricCurve {
    pub x: RatFun,
    pub y: RatFun,
    pub param: SymbolId,
    pub domain: (f64, f64),
    /// The domain covers a full turn of a trigonometric parametrization.
    pub periodic: bool,
    /// Parameter values where a coordinate's denominator vanishes (at the
    /// witness of the other indeterminates).
    pub singular: Vec<f64>,
}

/// `a(t) x + b(t) y + c(t) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct LineFamily {
    pub line: Line,
    pub param: SymbolId,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplePoint {
    pub t: f64,
    pub x: Approx,
    pub y: Approx,
}

/// How a set of expressions depends on the parameter `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Mode {
    Rational,
    Trig,
    /// Through a square root, or both `t` and `cos t`/`sin t`.
    Other,
}

pub(crate) fn mode(ctx: &Context, es: &[&RatFun], t: SymbolId) -> Mode {
    let (mut bare, mut trig, mut other) = (false, false, false);
    for e in es {
        for v in e.vars() {
            if v == t {
                bare = true;
                continue;
            }
            match &ctx.symbol(v).kind {
                SymbolKind::Cos { angle } | SymbolKind::Sin { angle, .. } if *angle == t => trig = true,
                SymbolKind::Root { .. } if ctx.depends_on(v, t) => other = true,
                _ => {}
            }
        }
    }
    match (bare, trig, other) {
        (_, _, true) | (true, true, _) => Mode::Other,
        (false, true, _) => Mode::Trig,
        _ => Mode::Rational,
    }
}

fn default_domain(ctx: &Context, t: SymbolId, trig: bool) -> (f64, f64) {
    if let Some(r) = ctx.range(t) {
        return r;
    }
    if trig {
        return (-PI, PI);
    }
    let w = ctx.witness(t).unwrap_or(0.0);
    let s = w.abs().max(1.0);
    (w - s, w + s)
}

pub(crate) fn env_at(t: SymbolId, value: f64) -> Env {
    let mut env = Env::new();
    env.insert(t, value);
    env
}

/// Roots of `f` on `[lo, hi]`: sign changes refined by bisection, exact
/// zeros on the grid, and near-zero local minima of `|f|` (double roots).
pub(crate) fn scan_roots(f: impl Fn(f64) -> Option<f64>, lo: f64, hi: f64, n: usize, tol: f64) -> Vec<f64> {
    let grid: Vec<(f64, Option<f64>)> = (0..=n)
        .map(|i| {
            let t = lo + (hi - lo) * i as f64 / n as f64;
            (t, f(t))
        })
        .collect();
    let scale = grid
        .iter()
        .filter_map(|(_, v)| *v)
        .filter(|v| v.is_finite())
        .fold(0.0f64, |m, v| m.max(v.abs()));
    let mut roots = Vec::new();
    let push = |r: f64, roots: &mut Vec<f64>| {
        if !roots.iter().any(|&x: &f64| (x - r).abs() < 1e3 * tol) {
            roots.push(r);
        }
    };
    for i in 0..grid.len() {
        let (t, v) = grid[i];
        match v {
            None => push(t, &mut roots),
            Some(0.0) => push(t, &mut roots),
            Some(v) => {
                if let Some(&(t1, Some(v1))) = grid.get(i + 1) {
                    if v1 != 0.0 && v.signum() != v1.signum() {
                        push(bisect(&f, t, t1, v, tol), &mut roots);
                    }
                }
                if i > 0 && i < n {
                    if let (Some(a), Some(b)) = (grid[i - 1].1, grid[i + 1].1) {
                        if v.abs() < a.abs()
                            && v.abs() < b.abs()
                            && a.signum() == v.signum()
                            && b.signum() == v.signum()
                        {
                            let m = golden_min(&f, grid[i - 1].0, grid[i + 1].0, tol);
                            if let Some(fm) = f(m) {
                                if fm.abs() <= 1e-12 * scale.max(1e-300) {
                                    push(m, &mut roots);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn bisect(f: &impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, fa: f64, tol: f64) -> f64 {
    let sa = fa.signum();
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        match f(m) {
            Some(0.0) => return m,
            Some(v) if v.signum() == sa => a = m,
            Some(_) => b = m,
            None => return m,
        }
    }
    0.5 * (a + b)
}

fn golden_min(f: &impl Fn(f64) -> Option<f64>, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = 0.5 * (libm::sqrt(5.0) - 1.0);
    let val = |x: f64| f(x).map_or(0.0, f64::abs);
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if val(c) < val(d) {
            b = d;
        } else {
            a = c;
        }
    }
    0.5 * (a + b)
}

fn singular_values(ctx: &Context, dens: &[&Poly], t: SymbolId, domain: (f64, f64)) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::new();
    for d in dens {
        if !d.vars().iter().any(|&v| ctx.depends_on(v, t)) {
            continue;
        }
        let e = ctx.from_poly((*d).clone());
        let f = |x: f64| ctx.eval_f64(&e, &env_at(t, x)).ok();
        for r in scan_roots(f, domain.0, domain.1, 512, 1e-13) {
            if !out.iter().any(|&s| (s - r).abs() < 1e-9) {
                out.push(r);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Double value, re-evaluated at 128 bits when the hardware enclosure is
/// loose (cancellation near singular parameters).
fn accurate(ctx: &Context, e: &RatFun, env: &Env) -> Option<f64> {
    let a = ctx.eval_numeric(e, env, 64).ok();
    match a {
        Some(a) if a.bound <= 1e-14 * a.value.abs().max(1.0) => Some(a.value),
        _ => ctx.eval_numeric(e, env, 128).ok().map(|b| b.value),
    }
}

impl ParametricCurve {
    pub fn new(ctx: &Context, x: RatFun, y: RatFun, t: SymbolId) -> Self {
        let trig = mode(ctx, &[&x, &y], t) == Mode::Trig;
        let domain = default_domain(ctx, t, trig);
        Self::with_domain(ctx, x, y, t, domain)
    }

    pub fn with_domain(ctx: &Context, x: RatFun, y: RatFun, t: SymbolId, domain: (f64, f64)) -> Self {
        let trig = mode(ctx, &[&x, &y], t) == Mode::Trig;
        let singular = singular_values(ctx, &[x.den(), y.den()], t, domain);
        ParametricCurve {
            periodic: trig && domain.1 - domain.0 >= 2.0 * PI - 1e-6,
            x,
            y,
            param: t,
            domain,
            singular,
        }
    }

    /// Coordinates at parameter value `t` (other indeterminates at their
    /// witness).
    pub fn eval(&self, ctx: &Context, t: f64) -> Option<(f64, f64)> {
        let env = env_at(self.param, t);
        let x = accurate(ctx, &self.x, &env)?;
        let y = accurate(ctx, &self.y, &env)?;
        (x.is_finite() && y.is_finite()).then_some((x, y))
    }
}

impl LineFamily {
    pub fn new(line: Line, param: SymbolId) -> Self {
        LineFamily { line, param }
    }

    /// `a(t) x + b(t) y + c(t)`.
    pub fn residual(&self, ctx: &Context, t: f64, x: f64, y: f64) -> Option<f64> {
        let env = env_at(self.param, t);
        let l = &self.line;
        let [a, b, c] = [&l.a, &l.b, &l.c].map(|e| ctx.eval_f64(e, &env).ok());
        Some(a? * x + b? * y + c?)
    }
}

/// The path of `p` as `t` varies.
pub fn locus(m: &GeomModel, p: &Point, t: SymbolId) -> Result<ParametricCurve> {
    let ctx = &m.ctx;
    if !ctx.rf_depends_on(&p.x, t) && !ctx.rf_depends_on(&p.y, t) {
        return Err(LociError::ConstantLocus(p.clone()));
    }
    Ok(ParametricCurve::new(ctx, p.x.clone(), p.y.clone(), t))
}

/// Solves `F = 0`, `dF/dt = 0` for the envelope point of a line family.
pub fn envelope(m: &mut GeomModel, f: &LineFamily) -> Result<ParametricCurve> {
    let t = f.param;
    let Line { a, b, c } = &f.line;
    let ctx = &mut m.ctx;
    let da = ctx.differentiate(a, t)?;
    let db = ctx.differentiate(b, t)?;
    let dc = ctx.differentiate(c, t)?;
    let det = ctx.sub(&ctx.mul(a, &db)?, &ctx.mul(&da, b)?)?;
    if det.is_zero() {
        return Err(LociError::DegenerateFamily);
    }
    let x = ctx.div(&ctx.sub(&ctx.mul(b, &dc)?, &ctx.mul(&db, c)?)?, &det)?;
    let y = ctx.div(&ctx.sub(&ctx.mul(c, &da)?, &ctx.mul(&dc, a)?)?, &det)?;
    if !ctx.rf_depends_on(&x, t) && !ctx.rf_depends_on(&y, t) {
        // every line passes through one point
        return Err(LociError::DegenerateFamily);
    }
    let mut curve = ParametricCurve::new(ctx, x, y, t);
    let extra = singular_values(ctx, &[det.num()], t, curve.domain);
    for s in extra {
        if !curve.singular.iter().any(|&u| (u - s).abs() < 1e-9) {
            curve.singular.push(s);
        }
    }
    curve.singular.sort_by(f64::total_cmp);
    Ok(curve)
}

/// `n` points along the curve. Parameters landing on or next to a singular
/// value are nudged off it.
/// Base precision, escalated when cancellation (near a pole, say) leaves
/// the result with fewer than about 12 correct digits.
fn coordinate(ctx: &Context, e: &RatFun, env: &Env) -> Option<Approx> {
    let p = ctx.precision();
    let a = ctx.eval_numeric(e, env, p.base_bits).ok();
    match a {
        Some(a) if a.bound <= 1e-12 * (1.0 + a.value.abs()) => Some(a),
        _ => ctx.eval_numeric(e, env, p.escalate_bits).ok().or(a),
    }
}

pub fn sample(m: &GeomModel, c: &ParametricCurve, n: usize) -> Result<Vec<SamplePoint>> {
    if n < 2 {
        return Err(LociError::TooFewSamples(n));
    }
    let (lo, hi) = c.domain;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(LociError::EmptyCurve);
    }
    let step = if c.periodic {
        (hi - lo) / n as f64
    } else {
        (hi - lo) / (n - 1) as f64
    };
    let ctx = &m.ctx;
    let at = |t: f64| -> Option<SamplePoint> {
        if c.singular.iter().any(|&s| (s - t).abs() <= 1e-9 * step) {
            return None;
        }
        let env = env_at(c.param, t);
        let x = coordinate(ctx, &c.x, &env)?;
        let y = coordinate(ctx, &c.y, &env)?;
        (x.value.is_finite() && y.value.is_finite()).then_some(SamplePoint { t, x, y })
    };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let t = lo + step * i as f64;
        let p = at(t).or_else(|| {
            [1e-3, 1e-2, 0.1, 0.25].iter().find_map(|&d| {
                let fwd = (t + d * step).min(hi);
                let back = (t - d * step).max(lo);
                at(fwd).or_else(|| at(back))
            })
        });
        out.extend(p);
    }
    if out.is_empty() {
        return Err(LociError::EmptyCurve);
    }
    Ok(out)
}
