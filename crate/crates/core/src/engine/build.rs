use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{Curve, EngineError, Model, Outcome, Proof, ProofTest, QueryResult, Result, Solution, SolveSpec};
use crate::cas::{AngleForm, CasError, Expr, RatFun, SymbolId, Q};
use crate::geom::{Circle, Entity, Line, Point};
use crate::loci::{self, LineFamily, LociError, SolarAngle};
use crate::measure::{self, MeasureKind, Measurement};
use crate::modelang::{eval_constant, Condition, EntityKind, QueryKind, Statement, StatementKind};

fn unsupported(msg: impl Into<String>) -> EngineError {
    EngineError::Unsupported(msg.into())
}

impl Model {
    pub(super) fn run(&mut self, st: &Statement) -> Result<()> {
        match &st.kind {
            StatementKind::Let { name, witness, range } => {
                let w = eval_constant(witness).ok_or_else(|| unsupported("witness must be a closed constant"))?;
                let range = match range {
                    Some((lo, hi)) => Some((
                        eval_constant(lo).ok_or_else(|| unsupported("range bounds must be constants"))?,
                        eval_constant(hi).ok_or_else(|| unsupported("range bounds must be constants"))?,
                    )),
                    None => None,
                };
                self.geom.declare(&name.name, w, range)?;
            }
            StatementKind::Construct { names, call, .. } => {
                let label: Vec<&str> = names.iter().map(|n| n.name.as_str()).collect();
                let made = self.construct(call, &label.join(","))?;
                if made.len() != names.len() {
                    return Err(unsupported(alloc::format!(
                        "construction yields {} entities",
                        made.len()
                    )));
                }
                for (n, e) in names.iter().zip(made) {
                    self.geom.add(&n.name, e);
                }
            }
            StatementKind::Constrain { kind, name, conditions } => {
                let e = match kind {
                    EntityKind::Point => Entity::Point(self.constrain_point(&name.name, conditions)?),
                    EntityKind::Line => Entity::Line(self.constrain_line(&name.name, conditions)?),
                    EntityKind::Circle => return Err(unsupported("circles cannot be constrained")),
                };
                self.geom.add(&name.name, e);
            }
            StatementKind::Query { kind, name, expr } => {
                let outcome = self.query(*kind, &name.name, expr);
                match &outcome {
                    Ok(Outcome::Measurement(m)) => {
                        self.scalars.insert(name.name.clone(), m.value.clone());
                    }
                    Ok(Outcome::Proof(p)) => {
                        self.scalars.insert(name.name.clone(), p.value.clone());
                    }
                    _ => {}
                }
                self.results.push(QueryResult {
                    name: name.name.clone(),
                    kind: *kind,
                    span: st.span,
                    outcome,
                });
            }
        }
        Ok(())
    }

    fn name_of(e: &Expr) -> Result<&str> {
        match e {
            Expr::Sym(s) => Ok(s),
            _ => Err(unsupported(alloc::format!("expected a name, found `{e}`"))),
        }
    }

    fn point(&self, e: &Expr) -> Result<Point> {
        Ok(self.geom.point(Self::name_of(e)?)?.clone())
    }

    fn line(&self, e: &Expr) -> Result<Line> {
        Ok(self.geom.line(Self::name_of(e)?)?.clone())
    }

    fn circle(&self, e: &Expr) -> Result<Circle> {
        Ok(self.geom.circle(Self::name_of(e)?)?.clone())
    }

    fn indeterminate(&self, e: &Expr) -> Result<SymbolId> {
        let n = Self::name_of(e)?;
        self.geom
            .ctx
            .id(n)
            .filter(|&v| self.geom.ctx.is_indeterminate(v))
            .ok_or_else(|| unsupported(alloc::format!("`{n}` is not an indeterminate")))
    }

    fn is_kind(&self, e: &Expr, kind: &str) -> bool {
        matches!(e, Expr::Sym(s) if self.geom.get(s).is_ok_and(|x| x.kind() == kind))
    }

    fn angle(&self, e: &Expr) -> Result<AngleForm> {
        Ok(self.geom.ctx.angle_form(e)?)
    }

    fn construct(&mut self, call: &Expr, label: &str) -> Result<Vec<Entity>> {
        let Expr::Call(f, args) = call else {
            return Err(unsupported(alloc::format!("expected a construction, found `{call}`")));
        };
        let a = args.as_slice();
        macro_rules! p {
            ($i:expr) => {
                self.point(&a[$i])
            };
        }
        macro_rules! pts3 {
            () => {
                (|| -> Result<[Point; 3]> { Ok([p!(0)?, p!(1)?, p!(2)?]) })()
            };
        }
        let one = |e: Entity| Ok(alloc::vec![e]);
        let first_line = a.first().is_some_and(|x| self.is_kind(x, "line"));
        let first_point = a.first().is_some_and(|x| self.is_kind(x, "point"));
        let second_line = a.get(1).is_some_and(|x| self.is_kind(x, "line"));
        match (f.as_str(), a.len()) {
            ("triangle", 3) => {
                let s = [self.scalar(&a[0])?, self.scalar(&a[1])?, self.scalar(&a[2])?];
                let pts = self.geom.triangle_from_sides(&s[0], &s[1], &s[2])?;
                Ok(pts.into_iter().map(Entity::Point).collect())
            }
            ("point", 2) => {
                let (x, y) = (self.scalar(&a[0])?, self.scalar(&a[1])?);
                one(Entity::Point(Point { x, y }))
            }
            ("centroid", 3) => {
                let [pa, pb, pc] = pts3!()?;
                one(Entity::Point(self.geom.centroid(&pa, &pb, &pc)?))
            }
            ("orthocenter", 3) => {
                let [pa, pb, pc] = pts3!()?;
                one(Entity::Point(self.geom.orthocenter(&pa, &pb, &pc)?))
            }
            ("circumcenter", 3) => {
                let [pa, pb, pc] = pts3!()?;
                one(Entity::Point(self.geom.circumcenter(&pa, &pb, &pc)?))
            }
            ("incenter", 3) => {
                let [pa, pb, pc] = pts3!()?;
                one(Entity::Point(self.geom.incenter(&pa, &pb, &pc)?))
            }
            ("excenter", 4) => {
                let [pa, pb, pc] = pts3!()?;
                let opposite = Self::name_of(&a[3])?;
                let which = a[..3]
                    .iter()
                    .position(|v| matches!(v, Expr::Sym(s) if s == opposite))
                    .ok_or_else(|| unsupported("the fourth argument of excenter must be one of the vertices"))?;
                one(Entity::Point(self.geom.excenter(&pa, &pb, &pc, which)?))
            }
            ("midpoint", 2) => one(Entity::Point(self.geom.midpoint(&p!(0)?, &p!(1)?)?)),
            ("foot", 2) => one(Entity::Point(self.geom.foot(&p!(0)?, &self.line(&a[1])?)?)),
            ("intersect", 2) if first_line && second_line => {
                let (l1, l2) = (self.line(&a[0])?, self.line(&a[1])?);
                one(Entity::Point(self.geom.intersect_lines_guarded(&l1, &l2)?))
            }
            ("intersect", 2) if first_line => {
                let (l, k) = (self.line(&a[0])?, self.circle(&a[1])?);
                let pts = self.geom.intersect_line_circle(&l, &k, label)?;
                Ok(pts.into_iter().map(Entity::Point).collect())
            }
            ("intersect", 2) => {
                let (k1, k2) = (self.circle(&a[0])?, self.circle(&a[1])?);
                let pts = self.geom.intersect_circles(&k1, &k2, label)?;
                Ok(pts.into_iter().map(Entity::Point).collect())
            }
            ("on_circle", 2) => {
                let (k, t) = (self.circle(&a[0])?, self.angle(&a[1])?);
                one(Entity::Point(self.geom.on_circle(&k, &t)?))
            }
            ("reflect", 2) if first_point => one(Entity::Point(self.geom.reflect_point(&p!(0)?, &self.line(&a[1])?)?)),
            ("reflect", 2) => one(Entity::Line(
                self.geom.reflect_line(&self.line(&a[0])?, &self.line(&a[1])?)?,
            )),
            ("center", 1) => one(Entity::Point(self.circle(&a[0])?.center)),
            ("line", 2) => one(Entity::Line(self.geom.line_through(&p!(0)?, &p!(1)?)?)),
            ("coeffs", 3) => {
                let s = [self.scalar(&a[0])?, self.scalar(&a[1])?, self.scalar(&a[2])?];
                let [x, y, z] = s;
                one(Entity::Line(self.geom.coeffs(x, y, z)?))
            }
            ("perpendicular", 2) => one(Entity::Line(self.geom.perpendicular(&self.line(&a[0])?, &p!(1)?)?)),
            ("parallel", 2) => one(Entity::Line(self.geom.parallel(&self.line(&a[0])?, &p!(1)?)?)),
            ("bisector", 2) => one(Entity::Line(self.geom.bisector(&p!(0)?, &p!(1)?)?)),
            ("ray", 2) => {
                let (at, t) = (p!(0)?, self.angle(&a[1])?);
                one(Entity::Line(self.geom.ray(&at, &t)?))
            }
            ("tangent", 2) => {
                let (k, at) = (self.circle(&a[0])?, p!(1)?);
                one(Entity::Line(self.geom.tangent(&k, &at)?))
            }
            ("reflect_ray", 3) => {
                let (inc, mirror, at) = (self.line(&a[0])?, self.line(&a[1])?, p!(2)?);
                one(Entity::Line(self.geom.reflect_ray(&inc, &mirror, &at)?))
            }
            ("circle", 2) => {
                let (c, r) = (p!(0)?, self.scalar(&a[1])?);
                one(Entity::Circle(self.geom.make_circle(&c, &r)?))
            }
            ("circumcircle", 3) => {
                let [pa, pb, pc] = pts3!()?;
                one(Entity::Circle(self.geom.circumcircle(&pa, &pb, &pc)?))
            }
            ("incircle", 3) => {
                let [pa, pb, pc] = pts3!()?;
                one(Entity::Circle(self.geom.incircle(&pa, &pb, &pc)?))
            }
            ("excircles", 3) => {
                let [pa, pb, pc] = pts3!()?;
                Ok(self
                    .geom
                    .excircles(&pa, &pb, &pc)?
                    .into_iter()
                    .map(Entity::Circle)
                    .collect())
            }
            _ => Err(unsupported(alloc::format!("`{call}` is not a construction"))),
        }
    }

    /// Which entity a `dist(N, X)` condition refers to, and its value.
    fn condition<'a>(&mut self, name: &str, c: &'a Condition) -> Result<(&'a Expr, RatFun)> {
        let Expr::Call(_, args) = &c.lhs else {
            return Err(unsupported("malformed condition"));
        };
        let other = args
            .iter()
            .find(|a| !matches!(a, Expr::Sym(s) if s == name))
            .ok_or_else(|| unsupported("condition needs a second entity"))?;
        Ok((other, self.scalar(&c.rhs)?))
    }

    /// Locus of points at signed distance `d` from `l` (on its positive side).
    fn offset_line(&mut self, l: &Line, d: &RatFun) -> Result<Line> {
        if d.is_zero() {
            return Ok(l.clone());
        }
        let n = self.geom.normal_norm(l)?;
        let len = self.geom.ctx.sqrt(&n)?;
        let shift = self.geom.ctx.mul(d, &len)?;
        Ok(Line {
            a: l.a.clone(),
            b: l.b.clone(),
            c: self.geom.ctx.sub(&l.c, &shift)?,
        })
    }

    /// `dist(P, X) = r` twice: circle-circle, circle-line or line-line.
    fn constrain_point(&mut self, name: &str, conds: &[Condition]) -> Result<Point> {
        enum Place {
            Circle(Circle),
            Line(Line),
        }
        let mut places = Vec::new();
        for c in conds {
            let (other, r) = self.condition(name, c)?;
            if self.is_kind(other, "point") {
                let center = self.point(other)?;
                places.push(Place::Circle(self.geom.make_circle(&center, &r)?));
            } else {
                let l = self.line(other)?;
                places.push(Place::Line(self.offset_line(&l, &r)?));
            }
        }
        let [p1, p2]: [Place; 2] = places
            .try_into()
            .map_err(|_| unsupported("two conditions are required"))?;
        match (p1, p2) {
            (Place::Circle(k1), Place::Circle(k2)) => {
                let pts = self.geom.intersect_circles(&k1, &k2, name)?;
                // counterclockwise from the first center to the second
                let (_, p) = self.geom.left_of(&k1.center, &k2.center, pts)?;
                Ok(p)
            }
            (Place::Circle(k), Place::Line(l)) | (Place::Line(l), Place::Circle(k)) => {
                let [_, ahead] = self.geom.intersect_line_circle(&l, &k, name)?;
                Ok(ahead)
            }
            (Place::Line(l1), Place::Line(l2)) => Ok(self.geom.intersect_lines_guarded(&l1, &l2)?),
        }
    }

    /// Two incidences, or an incidence and a direction angle.
    fn constrain_line(&mut self, name: &str, conds: &[Condition]) -> Result<Line> {
        let mut through = Vec::new();
        let mut angle = None;
        for c in conds {
            match &c.lhs {
                Expr::Call(f, args) if f == "angle" && args.len() == 1 => angle = Some(self.angle(&c.rhs)?),
                _ => {
                    let (other, _) = self.condition(name, c)?;
                    through.push(self.point(other)?);
                }
            }
        }
        match (through.as_slice(), angle) {
            ([p, q], None) => Ok(self.geom.line_through(p, q)?),
            ([p], Some(t)) => Ok(self.geom.ray(p, &t)?),
            _ => Err(unsupported("a line needs two points or a point and an angle")),
        }
    }

    /// Value of a scalar expression; geometric functions are measured.
    pub(super) fn scalar(&mut self, e: &Expr) -> Result<RatFun> {
        Ok(self.measure_expr(e)?.1)
    }

    fn measure_expr(&mut self, e: &Expr) -> Result<(MeasureKind, RatFun)> {
        use MeasureKind as K;
        let ctx = &self.geom.ctx;
        let scalar = |v| Ok((K::Scalar, v));
        match e {
            Expr::Num(q) => scalar(RatFun::from_q(q.clone())),
            Expr::Sym(s) => {
                if let Some(v) = self.scalars.get(s) {
                    return scalar(v.clone());
                }
                match ctx.id(s).filter(|&v| ctx.is_indeterminate(v)) {
                    Some(v) => scalar(RatFun::var(v)),
                    None if s == "pi" => Err(unsupported("pi is only available inside angles")),
                    None => Err(unsupported(alloc::format!("`{s}` is not a scalar"))),
                }
            }
            Expr::Neg(a) => scalar(self.scalar(a)?.neg()),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let (x, y) = (self.scalar(a)?, self.scalar(b)?);
                let ctx = &self.geom.ctx;
                scalar(match e {
                    Expr::Add(..) => ctx.add(&x, &y)?,
                    Expr::Sub(..) => ctx.sub(&x, &y)?,
                    Expr::Mul(..) => ctx.mul(&x, &y)?,
                    _ => {
                        if y.is_zero() {
                            return Err(measure::MeasureError::DivisionByZeroMeasure.into());
                        }
                        ctx.div(&x, &y)?
                    }
                })
            }
            Expr::Pow(a, b) => {
                let k = b.as_rational().ok_or(CasError::NonIntegerPower)?;
                let x = self.scalar(a)?;
                let twice = &k * Q::from_integer(2.into());
                if !twice.is_integer() {
                    return Err(CasError::NonIntegerPower.into());
                }
                let n: i64 = num_traits::ToPrimitive::to_i64(&twice.to_integer()).ok_or(CasError::NonIntegerPower)?;
                if n % 2 == 0 {
                    return scalar(self.geom.ctx.pow(&x, n / 2)?);
                }
                let r = self.geom.ctx.sqrt(&x)?;
                scalar(self.geom.ctx.pow(&r, n)?)
            }
            Expr::Call(f, args) => self.measure_call(f, args, e),
        }
    }

    fn measure_call(&mut self, f: &str, a: &[Expr], whole: &Expr) -> Result<(MeasureKind, RatFun)> {
        use MeasureKind as K;
        match (f, a.len()) {
            ("sqrt", 1) => {
                let x = self.scalar(&a[0])?;
                Ok((K::Scalar, self.geom.ctx.sqrt(&x)?))
            }
            ("deg", 1) => Err(unsupported("deg() needs pi: use it in constants and angles only")),
            ("abs", 1) => {
                let x = self.scalar(&a[0])?;
                Ok((K::Scalar, self.geom.ctx.abs(&x)?))
            }
            ("sin" | "cos" | "tan", 1) => {
                let t = self.angle(&a[0])?;
                let (c, s) = self.geom.ctx.cos_sin(&t)?;
                let v = match f {
                    "sin" => s,
                    "cos" => c,
                    _ => self.geom.ctx.div(&s, &c)?,
                };
                Ok((K::Scalar, v))
            }
            ("dist", 2) if self.is_kind(&a[0], "point") && self.is_kind(&a[1], "point") => {
                let (p, q) = (self.point(&a[0])?, self.point(&a[1])?);
                Ok((K::DistancePP, measure::distance_pp(&mut self.geom, &p, &q)?.value))
            }
            ("dist", 2) => {
                let (p, l) = if self.is_kind(&a[0], "point") {
                    (self.point(&a[0])?, self.line(&a[1])?)
                } else {
                    (self.point(&a[1])?, self.line(&a[0])?)
                };
                Ok((K::DistancePL, measure::distance_p_line(&mut self.geom, &p, &l)?.value))
            }
            ("area", 3) => {
                let (p, q, r) = (self.point(&a[0])?, self.point(&a[1])?, self.point(&a[2])?);
                Ok((K::Area, measure::area_triangle(&mut self.geom, &p, &q, &r)?.value))
            }
            ("radius", 1) => Ok((K::Radius, self.circle(&a[0])?.radius)),
            ("angle", 2) => {
                let (l1, l2) = (self.line(&a[0])?, self.line(&a[1])?);
                Ok((K::Angle, measure::angle_between(&self.geom, &l1, &l2)?.value))
            }
            ("angle", 1) => {
                let x_axis = self.geom.coeffs(RatFun::zero(), RatFun::one(), RatFun::zero())?;
                let l = self.line(&a[0])?;
                Ok((K::Angle, measure::angle_between(&self.geom, &x_axis, &l)?.value))
            }
            ("ratio", 2) => {
                let (x, y) = (self.scalar(&a[0])?, self.scalar(&a[1])?);
                if y.is_zero() {
                    return Err(measure::MeasureError::DivisionByZeroMeasure.into());
                }
                Ok((K::Ratio, self.geom.ctx.div(&x, &y)?))
            }
            ("x", 1) => Ok((K::Scalar, self.point(&a[0])?.x)),
            ("y", 1) => Ok((K::Scalar, self.point(&a[0])?.y)),
            _ => Err(unsupported(alloc::format!("`{whole}` is not a scalar"))),
        }
    }

    fn query(&mut self, kind: QueryKind, name: &str, e: &Expr) -> core::result::Result<Outcome, EngineError> {
        match kind {
            QueryKind::Measure => {
                let (k, v) = self.measure_expr(e)?;
                Ok(Outcome::Measurement(Measurement::new(&self.geom, name, k, v)?))
            }
            QueryKind::Prove => {
                let Expr::Call(f, args) = e else {
                    return Err(unsupported("prove needs zero(...) or constant(...)"));
                };
                let value = self.scalar(&args[0])?;
                let ctx = &self.geom.ctx;
                let (test, verdict) = match f.as_str() {
                    "zero" => (ProofTest::Zero, ctx.is_zero(&value)),
                    _ => (ProofTest::Constant, ctx.constant_verdict(&value)),
                };
                Ok(Outcome::Proof(Proof {
                    test,
                    shadow: ctx.eval_witness(&value)?,
                    value,
                    verdict,
                }))
            }
            QueryKind::Locus | QueryKind::Envelope => {
                let Expr::Call(_, args) = e else {
                    return Err(unsupported("malformed query"));
                };
                let t = self.indeterminate(&args[1])?;
                if kind == QueryKind::Locus {
                    let p = self.point(&args[0])?;
                    match loci::locus(&self.geom, &p, t) {
                        Ok(curve) => Ok(Outcome::Curve(Curve { curve, family: None })),
                        Err(LociError::ConstantLocus(p)) => Ok(Outcome::ConstantPoint(p)),
                        Err(e) => Err(e.into()),
                    }
                } else {
                    let family = LineFamily::new(self.line(&args[0])?, t);
                    let curve = loci::envelope(&mut self.geom, &family)?;
                    Ok(Outcome::Curve(Curve {
                        curve,
                        family: Some(family),
                    }))
                }
            }
            QueryKind::Solve => self.solve(e),
        }
    }

    fn solve(&mut self, e: &Expr) -> core::result::Result<Outcome, EngineError> {
        let Expr::Call(f, args) = e else {
            return Err(unsupported("malformed solve"));
        };
        if f == "solar" {
            let phi = self.indeterminate(&args[0])?;
            let (lid, width) = (self.scalar(&args[1])?, self.scalar(&args[2])?);
            let sol = loci::solar_optimal_angle(&self.geom, phi, &lid, &width)?;
            return Ok(Outcome::Solution(Solution {
                variable: "theta".to_string(),
                exact: match sol.angle {
                    SolarAngle::Exact(e) => Some(e),
                    SolarAngle::Numeric(_) => None,
                },
                value: sol.value,
                equation: sol.equation,
                spec: SolveSpec::Solar { phi, lid, width },
            }));
        }
        let eq = self.scalar(&args[0])?;
        let v = self.indeterminate(&args[1])?;
        let equation = Some(alloc::format!("{} = 0", self.geom.ctx.text(&eq)));
        let root = match self.geom.ctx.solve_linear(&eq, v) {
            Ok(s) => s.root,
            Err(CasError::NotLinear(_)) => {
                let roots = self.geom.ctx.solve_quadratic(&eq, v)?;
                // the root nearer the current witness
                let w = self.geom.ctx.witness(v).unwrap_or(0.0);
                let lo = self.geom.ctx.eval_witness(&roots.low)?.value;
                let hi = self.geom.ctx.eval_witness(&roots.high)?.value;
                if (lo - w).abs() <= (hi - w).abs() {
                    roots.low
                } else {
                    roots.high
                }
            }
            Err(e) => return Err(e.into()),
        };
        let value = self.geom.ctx.eval_witness(&root)?.value;
        Ok(Outcome::Solution(Solution {
            variable: self.geom.ctx.name(v).to_string(),
            exact: Some(root),
            value,
            equation,
            spec: SolveSpec::Equation,
        }))
    }
}
