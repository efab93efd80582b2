//! Box cooker with a reflecting lid: hinge at the origin, rim from `(0, 0)`
//! to `(w, 0)`, lid tip `T = (-L cos theta, L sin theta)`, sunlight arriving
//! at angle `-phi`. The best opening angle sends the ray reflected at the
//! lid tip to the far rim `W = (w, 0)`.

use alloc::string::String;
use core::f64::consts::FRAC_PI_2;

use super::{LociError, Result};
use crate::cas::{AngleForm, Bindings, RatFun, Sign, SymbolId, VerdictStatus, Q};
use crate::geom::{GeomModel, Point};

#[derive(Clone, Debug, PartialEq)]
pub enum SolarAngle {
    /// Closed form in `phi`.
    Exact(RatFun),
    Numeric(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolarSolution {
    pub angle: SolarAngle,
    /// Value at the witness.
    pub value: f64,
    /// The linear equation solved, when exact.
    pub equation: Option<String>,
}

/// Numeric ray trace: the outgoing direction after reflection at the lid
/// tip, and the signed miss distance of that ray from `W` (negative when
/// `W` lies behind the ray start).
pub fn trace_solar(phi: f64, theta: f64, l: f64, w: f64) -> (f64, f64) {
    let (tx, ty) = (-l * libm::cos(theta), l * libm::sin(theta));
    let d = (libm::cos(phi), -libm::sin(phi));
    let u = (-libm::cos(theta), libm::sin(theta));
    let k = 2.0 * (d.0 * u.0 + d.1 * u.1);
    let out = (k * u.0 - d.0, k * u.1 - d.1);
    let to_w = (w - tx, -ty);
    let ahead = out.0 * to_w.0 + out.1 * to_w.1;
    let miss = (out.0 * to_w.1 - out.1 * to_w.0) / libm::hypot(out.0, out.1);
    (miss, ahead)
}

fn unit(m: &mut GeomModel, f: &AngleForm) -> Result<Point> {
    let (x, y) = m.ctx.cos_sin(f)?;
    Ok(Point { x, y })
}

fn parallel(m: &GeomModel, a: &Point, b: &Point) -> Result<bool> {
    let c = m.ctx.sub(&m.ctx.mul(&a.x, &b.y)?, &m.ctx.mul(&a.y, &b.x)?)?;
    let d = m.ctx.add(&m.ctx.mul(&a.x, &b.x)?, &m.ctx.mul(&a.y, &b.y)?)?;
    Ok(m.ctx.is_zero(&c).status == VerdictStatus::ProvedZero && m.ctx.witness_sign(&d)? == Sign::Positive)
}

/// Exact derivation for `L = w`. With `theta = 2 psi`, the reflected ray
/// leaves the tip at angle `phi - 4 psi` and the tip sees the rim at angle
/// `-psi`; both facts are checked as identities before equating the angles.
fn exact(m: &GeomModel, phi: SymbolId, w: &RatFun) -> Result<Option<(RatFun, String)>> {
    let mut s = m.clone();
    let psi = s.ctx.fresh("psi", 0.25);
    let two_psi = AngleForm::symbol(psi).scale(2);
    let (c2, s2) = s.ctx.cos_sin(&two_psi)?;
    let origin = Point {
        x: RatFun::zero(),
        y: RatFun::zero(),
    };
    let tip = Point {
        x: s.ctx.mul(w, &c2)?.neg(),
        y: s.ctx.mul(w, &s2)?,
    };
    let rim = Point {
        x: w.clone(),
        y: RatFun::zero(),
    };
    let lid = s.line_through(&origin, &tip)?;
    let sun = s.ray(&tip, &AngleForm::symbol(phi).neg())?;
    let out = s.reflect_ray(&sun, &lid, &tip)?;
    let out_dir = Point {
        x: out.b.clone(),
        y: out.a.neg(),
    };
    let out_form = AngleForm::symbol(phi).add(&AngleForm::symbol(psi).scale(-4));
    let predicted = unit(&mut s, &out_form)?;
    let to_rim = Point {
        x: s.ctx.sub(&rim.x, &tip.x)?,
        y: s.ctx.sub(&rim.y, &tip.y)?,
    };
    let rim_form = AngleForm::symbol(psi).neg();
    let seen = unit(&mut s, &rim_form)?;
    if !parallel(&s, &out_dir, &predicted)? || !parallel(&s, &to_rim, &seen)? {
        return Ok(None);
    }
    let lhs = s
        .ctx
        .sub(&out_form.linear_part(&s.ctx)?, &rim_form.linear_part(&s.ctx)?)?;
    let theta = s.ctx.fresh("theta", 0.5);
    let mut b = Bindings::new();
    b.insert(psi, s.ctx.scale(&RatFun::var(theta), &Q::new(1.into(), 2.into())));
    let eq = s.ctx.substitute(&lhs, &b)?;
    let text = alloc::format!("{} = 0", s.ctx.text(&eq));
    let sol = s.ctx.solve_linear(&eq, theta)?;
    if !sol.root.vars().iter().all(|&v| v == phi) {
        return Ok(None);
    }
    Ok(Some((sol.root, text)))
}

fn numeric(phi: f64, l: f64, w: f64) -> Result<f64> {
    let f = |th: f64| {
        let (miss, ahead) = trace_solar(phi, th, l, w);
        (ahead > 0.0).then_some(miss)
    };
    let eps = 1e-9;
    super::scan_roots(f, eps, FRAC_PI_2 - eps, 2000, 1e-15)
        .into_iter()
        .find(|&th| f(th).is_some_and(|v| v.abs() < 1e-9))
        .ok_or(LociError::NoOpeningAngle)
}

/// Opening angle of the lid that reflects sunlight at angle `phi` from the
/// lid tip to the far rim.
pub fn solar_optimal_angle(m: &GeomModel, phi: SymbolId, l: &RatFun, w: &RatFun) -> Result<SolarSolution> {
    let ctx = &m.ctx;
    let p = ctx.witness(phi).unwrap_or(f64::NAN);
    let lv = ctx.eval_witness(l)?.value;
    let wv = ctx.eval_witness(w)?.value;
    if !(p > 0.0 && p < FRAC_PI_2) || lv <= 0.0 || wv <= 0.0 {
        return Err(LociError::NoOpeningAngle);
    }
    if ctx.sub(l, w)?.is_zero() {
        if let Some((root, text)) = exact(m, phi, w)? {
            let value = ctx.eval_witness(&root)?.value;
            if value > 0.0 && value < FRAC_PI_2 {
                return Ok(SolarSolution {
                    angle: SolarAngle::Exact(root),
                    value,
                    equation: Some(text),
                });
            }
            return Err(LociError::NoOpeningAngle);
        }
    }
    let value = numeric(p, lv, wv)?;
    Ok(SolarSolution {
        angle: SolarAngle::Numeric(value),
        value,
        equation: None,
    })
}
