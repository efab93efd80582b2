use alloc::vec::Vec;

use super::{Circle, GeomError, GeomModel, Line, Point, Requirement};
use crate::cas::{AngleForm, CasError, RatFun, Sign, VerdictStatus, Q};

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

impl GeomModel {
    fn add2(&self, a: &RatFun, b: &RatFun) -> Result<RatFun, CasError> {
        self.ctx.add(a, b)
    }

    /// `a*b + c*d`
    fn dot2(&self, a: &RatFun, b: &RatFun, c: &RatFun, d: &RatFun) -> Result<RatFun, CasError> {
        let ctx = &self.ctx;
        ctx.add(&ctx.mul(a, b)?, &ctx.mul(c, d)?)
    }

    /// `a*b - c*d`
    fn cross2(&self, a: &RatFun, b: &RatFun, c: &RatFun, d: &RatFun) -> Result<RatFun, CasError> {
        let ctx = &self.ctx;
        ctx.sub(&ctx.mul(a, b)?, &ctx.mul(c, d)?)
    }

    pub fn point_at(&self, x: RatFun, y: RatFun) -> Point {
        Point { x, y }
    }

    pub fn squared_distance(&self, p: &Point, q: &Point) -> Result<RatFun, CasError> {
        let dx = self.ctx.sub(&p.x, &q.x)?;
        let dy = self.ctx.sub(&p.y, &q.y)?;
        self.dot2(&dx, &dx, &dy, &dy)
    }

    pub fn distance(&mut self, p: &Point, q: &Point) -> Result<RatFun, CasError> {
        let d2 = self.squared_distance(p, q)?;
        self.ctx.sqrt(&d2)
    }

    /// `A = (0, 0)`, `B = (c, 0)` and `C` above the x-axis with `|BC| = a`,
    /// `|CA| = b`; the height is an adjoined root.
    pub fn triangle_from_sides(&mut self, a: &RatFun, b: &RatFun, c: &RatFun) -> Result<[Point; 3], GeomError> {
        let ctx = &self.ctx;
        let (a2, b2, c2) = (ctx.mul(a, a)?, ctx.mul(b, b)?, ctx.mul(c, c)?);
        if ctx.witness_sign(c)? != Sign::Positive {
            return Err(GeomError::DegenerateTriangle);
        }
        let xc = ctx.div(&ctx.sub(&ctx.add(&b2, &c2)?, &a2)?, &ctx.scale(c, &q(2)))?;
        let h2 = ctx.sub(&b2, &ctx.mul(&xc, &xc)?)?;
        if h2.is_zero() || ctx.witness_sign(&h2)? != Sign::Positive {
            return Err(GeomError::DegenerateTriangle);
        }
        self.guard(h2.clone(), Requirement::Positive, "triangle inequality");
        self.guard(c.clone(), Requirement::Positive, "side c must be positive");
        let h = self.ctx.sqrt(&h2)?;
        Ok([
            Point {
                x: RatFun::zero(),
                y: RatFun::zero(),
            },
            Point {
                x: c.clone(),
                y: RatFun::zero(),
            },
            Point { x: xc, y: h },
        ])
    }

    pub fn midpoint(&self, p: &Point, q: &Point) -> Result<Point, GeomError> {
        let half = Q::new(1.into(), 2.into());
        Ok(Point {
            x: self.ctx.scale(&self.add2(&p.x, &q.x)?, &half),
            y: self.ctx.scale(&self.add2(&p.y, &q.y)?, &half),
        })
    }

    pub fn centroid(&self, a: &Point, b: &Point, c: &Point) -> Result<Point, GeomError> {
        self.check_triangle(a, b, c)?;
        let third = Q::new(1.into(), 3.into());
        let ctx = &self.ctx;
        Ok(Point {
            x: ctx.scale(&ctx.sum([&a.x, &b.x, &c.x])?, &third),
            y: ctx.scale(&ctx.sum([&a.y, &b.y, &c.y])?, &third),
        })
    }

    /// Twice the signed area of `abc`.
    pub fn cross(&self, a: &Point, b: &Point, c: &Point) -> Result<RatFun, CasError> {
        let ctx = &self.ctx;
        let (ux, uy) = (ctx.sub(&b.x, &a.x)?, ctx.sub(&b.y, &a.y)?);
        let (vx, vy) = (ctx.sub(&c.x, &a.x)?, ctx.sub(&c.y, &a.y)?);
        self.cross2(&ux, &vy, &uy, &vx)
    }

    fn check_triangle(&self, a: &Point, b: &Point, c: &Point) -> Result<(), GeomError> {
        let s = self.cross(a, b, c)?;
        if s.is_zero() || self.ctx.witness_sign(&s)? == Sign::Zero {
            return Err(GeomError::DegenerateTriangle);
        }
        Ok(())
    }

    pub fn line_through(&self, p: &Point, q: &Point) -> Result<Line, GeomError> {
        let ctx = &self.ctx;
        let a = ctx.sub(&p.y, &q.y)?;
        let b = ctx.sub(&q.x, &p.x)?;
        if a.is_zero() && b.is_zero() {
            return Err(GeomError::CoincidentPoints);
        }
        let c = self.cross2(&p.x, &q.y, &q.x, &p.y)?;
        Ok(Line { a, b, c })
    }

    /// Line through `p` with normal `(a, b)`.
    fn line_with_normal(&self, a: RatFun, b: RatFun, p: &Point) -> Result<Line, GeomError> {
        let c = self.dot2(&a, &p.x, &b, &p.y)?.neg();
        Ok(Line { a, b, c })
    }

    pub fn coeffs(&self, a: RatFun, b: RatFun, c: RatFun) -> Result<Line, GeomError> {
        if a.is_zero() && b.is_zero() {
            return Err(CasError::DegenerateExpression.into());
        }
        Ok(Line { a, b, c })
    }

    pub fn perpendicular(&self, l: &Line, p: &Point) -> Result<Line, GeomError> {
        self.line_with_normal(l.b.neg(), l.a.clone(), p)
    }

    pub fn parallel(&self, l: &Line, p: &Point) -> Result<Line, GeomError> {
        self.line_with_normal(l.a.clone(), l.b.clone(), p)
    }

    pub fn bisector(&self, p: &Point, q: &Point) -> Result<Line, GeomError> {
        let l = self.line_through(p, q)?;
        let m = self.midpoint(p, q)?;
        self.perpendicular(&l, &m)
    }

    /// Line through `p` with direction angle `angle`.
    pub fn ray(&mut self, p: &Point, angle: &AngleForm) -> Result<Line, GeomError> {
        let (c, s) = self.ctx.cos_sin(angle)?;
        self.line_with_normal(s.neg(), c, p)
    }

    pub fn intersect_lines(&self, l1: &Line, l2: &Line) -> Result<Point, GeomError> {
        let det = self.cross2(&l1.a, &l2.b, &l2.a, &l1.b)?;
        if det.is_zero() {
            return Err(GeomError::NoIntersection);
        }
        if self.ctx.witness_sign(&det)? == Sign::Zero {
            return Err(GeomError::WitnessSingular("lines are parallel at the witness".into()));
        }
        let ctx = &self.ctx;
        let x = ctx.div(&self.cross2(&l1.b, &l2.c, &l2.b, &l1.c)?, &det)?;
        let y = ctx.div(&self.cross2(&l1.c, &l2.a, &l2.c, &l1.a)?, &det)?;
        Ok(Point { x, y })
    }

    /// Same as [`intersect_lines`](Self::intersect_lines), registering the
    /// determinant as a witness guard.
    pub fn intersect_lines_guarded(&mut self, l1: &Line, l2: &Line) -> Result<Point, GeomError> {
        let p = self.intersect_lines(l1, l2)?;
        let det = self.cross2(&l1.a, &l2.b, &l2.a, &l1.b)?;
        self.guard(det, Requirement::NonZero, "intersecting lines become parallel");
        Ok(p)
    }

    pub fn circumcenter(&mut self, a: &Point, b: &Point, c: &Point) -> Result<Point, GeomError> {
        self.check_triangle(a, b, c)?;
        let l1 = self.bisector(a, b)?;
        let l2 = self.bisector(a, c)?;
        self.intersect_lines_guarded(&l1, &l2)
    }

    pub fn orthocenter(&mut self, a: &Point, b: &Point, c: &Point) -> Result<Point, GeomError> {
        self.check_triangle(a, b, c)?;
        let bc = self.line_through(b, c)?;
        let ca = self.line_through(c, a)?;
        let alt_a = self.perpendicular(&bc, a)?;
        let alt_b = self.perpendicular(&ca, b)?;
        self.intersect_lines_guarded(&alt_a, &alt_b)
    }

    /// Side lengths `(|BC|, |CA|, |AB|)`.
    pub fn side_lengths(&mut self, a: &Point, b: &Point, c: &Point) -> Result<[RatFun; 3], GeomError> {
        Ok([self.distance(b, c)?, self.distance(c, a)?, self.distance(a, b)?])
    }

    /// Weighted vertex average `(wa A + wb B + wc C) / (wa + wb + wc)`.
    fn weighted(&self, pts: [&Point; 3], w: [&RatFun; 3]) -> Result<Point, GeomError> {
        let ctx = &self.ctx;
        let total = ctx.sum(w)?;
        let mut x = RatFun::zero();
        let mut y = RatFun::zero();
        for (p, wi) in pts.iter().zip(w) {
            x = ctx.add(&x, &ctx.mul(wi, &p.x)?)?;
            y = ctx.add(&y, &ctx.mul(wi, &p.y)?)?;
        }
        Ok(Point {
            x: ctx.div(&x, &total)?,
            y: ctx.div(&y, &total)?,
        })
    }

    pub fn incenter(&mut self, a: &Point, b: &Point, c: &Point) -> Result<Point, GeomError> {
        self.check_triangle(a, b, c)?;
        let [la, lb, lc] = self.side_lengths(a, b, c)?;
        self.weighted([a, b, c], [&la, &lb, &lc])
    }

    /// Center of the excircle opposite vertex `which` (0, 1 or 2).
    pub fn excenter(&mut self, a: &Point, b: &Point, c: &Point, which: usize) -> Result<Point, GeomError> {
        self.check_triangle(a, b, c)?;
        let mut sides = self.side_lengths(a, b, c)?;
        sides[which] = sides[which].neg();
        let [la, lb, lc] = sides;
        self.weighted([a, b, c], [&la, &lb, &lc])
    }

    /// Heron area and semiperimeter.
    pub fn heron(&mut self, a: &Point, b: &Point, c: &Point) -> Result<(RatFun, RatFun, [RatFun; 3]), GeomError> {
        let sides = self.side_lengths(a, b, c)?;
        let ctx = &self.ctx;
        let s = ctx.scale(&ctx.sum(&sides)?, &Q::new(1.into(), 2.into()));
        let mut prod = s.clone();
        for side in &sides {
            prod = ctx.mul(&prod, &ctx.sub(&s, side)?)?;
        }
        let k = self.ctx.sqrt(&prod)?;
        Ok((k, s, sides))
    }

    pub fn incircle(&mut self, a: &Point, b: &Point, c: &Point) -> Result<Circle, GeomError> {
        let center = self.incenter(a, b, c)?;
        let (k, s, _) = self.heron(a, b, c)?;
        Ok(Circle {
            center,
            radius: self.ctx.div(&k, &s)?,
        })
    }

    /// Excircles opposite `A`, `B` and `C`, with radii `K/(s - a)` etc.
    pub fn excircles(&mut self, a: &Point, b: &Point, c: &Point) -> Result<[Circle; 3], GeomError> {
        let (k, s, sides) = self.heron(a, b, c)?;
        let mut out = Vec::with_capacity(3);
        for (i, side) in sides.iter().enumerate() {
            let center = self.excenter(a, b, c, i)?;
            let radius = self.ctx.div(&k, &self.ctx.sub(&s, side)?)?;
            out.push(Circle { center, radius });
        }
        Ok(out.try_into().expect("three excircles"))
    }

    pub fn circumcircle(&mut self, a: &Point, b: &Point, c: &Point) -> Result<Circle, GeomError> {
        let center = self.circumcenter(a, b, c)?;
        let radius = self.distance(&center, a)?;
        Ok(Circle { center, radius })
    }

    pub fn make_circle(&mut self, center: &Point, radius: &RatFun) -> Result<Circle, GeomError> {
        if self.ctx.witness_sign(radius)? == Sign::Negative {
            return Err(CasError::DomainError(self.ctx.text(radius)).into());
        }
        self.guard(
            radius.clone(),
            Requirement::NonNegative,
            "circle radius must be nonnegative",
        );
        Ok(Circle {
            center: center.clone(),
            radius: radius.clone(),
        })
    }

    /// `center + r (cos t, sin t)`.
    pub fn on_circle(&mut self, k: &Circle, angle: &AngleForm) -> Result<Point, GeomError> {
        let (c, s) = self.ctx.cos_sin(angle)?;
        let ctx = &self.ctx;
        Ok(Point {
            x: ctx.add(&k.center.x, &ctx.mul(&k.radius, &c)?)?,
            y: ctx.add(&k.center.y, &ctx.mul(&k.radius, &s)?)?,
        })
    }

    /// `a x + b y + c` at `p`.
    pub fn line_value(&self, l: &Line, p: &Point) -> Result<RatFun, CasError> {
        self.ctx.add(&self.dot2(&l.a, &p.x, &l.b, &p.y)?, &l.c)
    }

    /// `a^2 + b^2`.
    pub fn normal_norm(&self, l: &Line) -> Result<RatFun, CasError> {
        self.dot2(&l.a, &l.a, &l.b, &l.b)
    }

    /// Fails with `NotIncident` when `value` is provably (or at the witness
    /// clearly) nonzero.
    fn require_incidence(&self, value: &RatFun) -> Result<(), GeomError> {
        let v = self.ctx.is_zero(value);
        match v.status {
            VerdictStatus::ProvedZero => Ok(()),
            VerdictStatus::ProvedNonzero | VerdictStatus::ProvedConstant(_) => Err(GeomError::NotIncident),
            VerdictStatus::NumericEvidence => {
                if self.ctx.witness_sign(value)? == Sign::Zero {
                    Ok(())
                } else {
                    Err(GeomError::NotIncident)
                }
            }
        }
    }

    pub fn tangent(&mut self, k: &Circle, p: &Point) -> Result<Line, GeomError> {
        let d2 = self.squared_distance(p, &k.center)?;
        let r2 = self.ctx.mul(&k.radius, &k.radius)?;
        self.require_incidence(&self.ctx.sub(&d2, &r2)?)?;
        let a = self.ctx.sub(&p.x, &k.center.x)?;
        let b = self.ctx.sub(&p.y, &k.center.y)?;
        self.line_with_normal(a, b, p)
    }

    /// Mirror image of `p` in `m`.
    pub fn reflect_point(&self, p: &Point, m: &Line) -> Result<Point, GeomError> {
        let ctx = &self.ctx;
        let n = self.normal_norm(m)?;
        let f = ctx.div(&ctx.scale(&self.line_value(m, p)?, &q(2)), &n)?;
        Ok(Point {
            x: ctx.sub(&p.x, &ctx.mul(&f, &m.a)?)?,
            y: ctx.sub(&p.y, &ctx.mul(&f, &m.b)?)?,
        })
    }

    /// Foot of the perpendicular from `p` to `l`.
    pub fn foot(&self, p: &Point, l: &Line) -> Result<Point, GeomError> {
        let ctx = &self.ctx;
        let n = self.normal_norm(l)?;
        let f = ctx.div(&self.line_value(l, p)?, &n)?;
        Ok(Point {
            x: ctx.sub(&p.x, &ctx.mul(&f, &l.a)?)?,
            y: ctx.sub(&p.y, &ctx.mul(&f, &l.b)?)?,
        })
    }

    /// Mirror image of `l` in `m`: `l - (2 k / N) m` with `k = n_l . n_m`
    /// and `N = |n_m|^2`. Orientation is reflected with the line, and
    /// reflecting twice gives back `l` exactly.
    pub fn reflect_line(&self, l: &Line, m: &Line) -> Result<Line, GeomError> {
        let ctx = &self.ctx;
        let n = self.normal_norm(m)?;
        if n.is_zero() {
            return Err(CasError::DegenerateExpression.into());
        }
        let k = self.dot2(&l.a, &m.a, &l.b, &m.b)?;
        let f = ctx.div(&ctx.scale(&k, &q(2)), &n)?;
        Ok(Line {
            a: ctx.sub(&l.a, &ctx.mul(&f, &m.a)?)?,
            b: ctx.sub(&l.b, &ctx.mul(&f, &m.b)?)?,
            c: ctx.sub(&l.c, &ctx.mul(&f, &m.c)?)?,
        })
    }

    /// Reflected ray leaving `at` on the mirror, for light travelling along
    /// `incident`; oriented along the outgoing light.
    pub fn reflect_ray(&self, incident: &Line, m: &Line, at: &Point) -> Result<Line, GeomError> {
        self.require_incidence(&self.line_value(m, at)?)?;
        let r = self.reflect_line(incident, m)?;
        self.line_with_normal(r.a.neg(), r.b.neg(), at)
    }

    /// Both intersections, ordered along the line's direction; equal when
    /// the line is tangent.
    pub fn intersect_line_circle(&mut self, l: &Line, k: &Circle, name: &str) -> Result<[Point; 2], GeomError> {
        let n = self.normal_norm(l)?;
        let v = self.line_value(l, &k.center)?;
        let ctx = &self.ctx;
        let r2 = ctx.mul(&k.radius, &k.radius)?;
        let disc = ctx.sub(&ctx.mul(&r2, &n)?, &ctx.mul(&v, &v)?)?;
        if ctx.witness_sign(&disc)? == Sign::Negative {
            return Err(GeomError::NoRealIntersection);
        }
        let foot = self.foot(&k.center, l)?;
        let root = self.ctx.sqrt(&disc)?;
        let ctx = &self.ctx;
        let s = ctx.div(&root, &n)?;
        // direction (b, -a)
        let dx = ctx.mul(&s, &l.b)?;
        let dy = ctx.mul(&s, &l.a)?.neg();
        let p0 = Point {
            x: ctx.sub(&foot.x, &dx)?,
            y: ctx.sub(&foot.y, &dy)?,
        };
        let p1 = Point {
            x: ctx.add(&foot.x, &dx)?,
            y: ctx.add(&foot.y, &dy)?,
        };
        self.guard(
            disc.clone(),
            Requirement::NonNegative,
            "line no longer meets the circle",
        );
        self.record_branch(name, 0, disc)?;
        Ok([p0, p1])
    }

    pub fn intersect_circles(&mut self, k1: &Circle, k2: &Circle, name: &str) -> Result<[Point; 2], GeomError> {
        let radical = self.radical_axis(k1, k2)?;
        self.intersect_line_circle(&radical, k1, name)
    }

    fn radical_axis(&self, k1: &Circle, k2: &Circle) -> Result<Line, GeomError> {
        let ctx = &self.ctx;
        let (c1, c2) = (&k1.center, &k2.center);
        let a = ctx.scale(&ctx.sub(&c2.x, &c1.x)?, &q(2));
        let b = ctx.scale(&ctx.sub(&c2.y, &c1.y)?, &q(2));
        if a.is_zero() && b.is_zero() {
            return Err(GeomError::NoIntersection);
        }
        let p1 = ctx.sub(
            &self.dot2(&c1.x, &c1.x, &c1.y, &c1.y)?,
            &ctx.mul(&k1.radius, &k1.radius)?,
        )?;
        let p2 = ctx.sub(
            &self.dot2(&c2.x, &c2.x, &c2.y, &c2.y)?,
            &ctx.mul(&k2.radius, &k2.radius)?,
        )?;
        Ok(Line {
            a,
            b,
            c: ctx.sub(&p1, &p2)?,
        })
    }

    /// Of two candidate points, the one to the left of `from -> to` at the
    /// witness (counterclockwise orientation).
    pub fn left_of(&self, from: &Point, to: &Point, candidates: [Point; 2]) -> Result<(usize, Point), GeomError> {
        for (i, p) in candidates.iter().enumerate() {
            let s = self.cross(from, to, p)?;
            if self.ctx.witness_sign(&s)? == Sign::Positive {
                return Ok((i, p.clone()));
            }
        }
        let [p, _] = candidates;
        Ok((0, p))
    }
}
