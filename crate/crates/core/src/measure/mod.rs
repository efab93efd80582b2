//! Measurements over a [`GeomModel`] and theorem checks by exact zero and
//! constant detection.

use alloc::string::{String, ToString};

use crate::cas::{Approx, CasError, ProofVerdict, RatFun, Sign, VerdictStatus};
use crate::geom::{GeomError, GeomModel, Line, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeasureKind {
    DistancePP,
    DistancePL,
    Angle,
    Area,
    Radius,
    Ratio,
    Scalar,
}

impl MeasureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::DistancePP => "distance-pp",
            MeasureKind::DistancePL => "distance-pl",
            MeasureKind::Angle => "angle",
            MeasureKind::Area => "area",
            MeasureKind::Radius => "radius",
            MeasureKind::Ratio => "ratio",
            MeasureKind::Scalar => "scalar",
        }
    }
}

/// A symbolic value with its numeric shadow at the model's witness.
/// Angles are stored as their tangent.
#[derive(Clone, Debug, PartialEq)]
pub struct Measurement {
    pub name: String,
    pub kind: MeasureKind,
    pub value: RatFun,
    pub shadow: Approx,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum MeasureError {
    #[error("division by a measurement that is identically zero")]
    DivisionByZeroMeasure,
    /// The lines are perpendicular: the tangent is undefined, the angle is pi/2.
    #[error("the lines are perpendicular (angle pi/2)")]
    RightAngle,
    #[error(transparent)]
    Geom(#[from] GeomError),
}

impl From<CasError> for MeasureError {
    fn from(e: CasError) -> Self {
        MeasureError::Geom(e.into())
    }
}

pub type Result<T> = core::result::Result<T, MeasureError>;

impl Measurement {
    pub fn new(m: &GeomModel, name: &str, kind: MeasureKind, value: RatFun) -> Result<Self> {
        let shadow = m.ctx.eval_witness(&value)?;
        Ok(Measurement {
            name: name.to_string(),
            kind,
            value,
            shadow,
        })
    }

    pub fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn text(&self, m: &GeomModel) -> String {
        m.ctx.text(&self.value)
    }
}

pub fn distance_pp(m: &mut GeomModel, p: &Point, q: &Point) -> Result<Measurement> {
    let d = m.distance(p, q)?;
    Measurement::new(m, "", MeasureKind::DistancePP, d)
}

/// `|a Px + b Py + c| / sqrt(a^2 + b^2)`, the sign of the numerator fixed
/// at the witness.
pub fn distance_p_line(m: &mut GeomModel, p: &Point, l: &Line) -> Result<Measurement> {
    let v = m.line_value(l, p)?;
    let n = m.normal_norm(l)?;
    if n.is_zero() {
        return Err(CasError::DegenerateExpression.into());
    }
    let num = m.ctx.abs(&v)?;
    let den = m.ctx.sqrt(&n)?;
    let d = m.ctx.div(&num, &den)?;
    Measurement::new(m, "", MeasureKind::DistancePL, d)
}

pub fn ratio(m: &GeomModel, a: &Measurement, b: &Measurement) -> Result<Measurement> {
    if b.value.is_zero() {
        return Err(MeasureError::DivisionByZeroMeasure);
    }
    let r = m.ctx.div(&a.value, &b.value)?;
    Measurement::new(m, "", MeasureKind::Ratio, r)
}

/// `|cross| / 2`, sign fixed at the witness.
pub fn area_triangle(m: &mut GeomModel, a: &Point, b: &Point, c: &Point) -> Result<Measurement> {
    let s = m.cross(a, b, c)?;
    let s = m.ctx.abs(&s)?;
    let half = m.ctx.scale(&s, &crate::cas::Q::new(1.into(), 2.into()));
    Measurement::new(m, "", MeasureKind::Area, half)
}

pub fn radius(m: &GeomModel, k: &crate::geom::Circle) -> Result<Measurement> {
    Measurement::new(m, "", MeasureKind::Radius, k.radius.clone())
}

/// Tangent of the angle from `l1` to `l2`.
pub fn angle_between(m: &GeomModel, l1: &Line, l2: &Line) -> Result<Measurement> {
    let ctx = &m.ctx;
    let num = ctx.sub(&ctx.mul(&l1.a, &l2.b)?, &ctx.mul(&l2.a, &l1.b)?)?;
    let den = ctx.add(&ctx.mul(&l1.a, &l2.a)?, &ctx.mul(&l1.b, &l2.b)?)?;
    if den.is_zero() || ctx.witness_sign(&den)? == Sign::Zero {
        return Err(MeasureError::RightAngle);
    }
    let t = ctx.div(&num, &den)?;
    Measurement::new(m, "", MeasureKind::Angle, t)
}

/// Angle in `(-pi/2, pi/2]` between two lines at the witness, in radians;
/// lines are unoriented here.
pub fn angle_radians(m: &GeomModel, l1: &Line, l2: &Line) -> Result<f64> {
    match angle_between(m, l1, l2) {
        Ok(t) => Ok(libm::atan(t.shadow.value)),
        Err(MeasureError::RightAngle) => Ok(core::f64::consts::FRAC_PI_2),
        Err(e) => Err(e),
    }
}

pub fn is_zero(m: &GeomModel, x: &Measurement) -> ProofVerdict {
    m.ctx.is_zero(&x.value)
}

pub fn is_constant(m: &GeomModel, x: &Measurement) -> ProofVerdict {
    m.ctx.constant_verdict(&x.value)
}

pub fn verdict_label(v: &VerdictStatus) -> &'static str {
    match v {
        VerdictStatus::ProvedZero => "ProvedZero",
        VerdictStatus::ProvedNonzero => "ProvedNonzero",
        VerdictStatus::ProvedConstant(_) => "ProvedConstant",
        VerdictStatus::NumericEvidence => "NumericEvidence",
    }
}
