//! Constructive geometry over the symbolic kernel. Every entity carries
//! exact coordinates; its numeric position is the evaluation of those
//! coordinates at the current witness values.

mod construct;
mod scene;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use scene::{Scene, SceneEntity, SceneIndeterminate};

use crate::cas::{CasError, Context, Env, RatFun, Sign, SymbolId};

#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub x: RatFun,
    pub y: RatFun,
}

/// `a x + b y + c = 0`, oriented along the direction `(b, -a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    pub a: RatFun,
    pub b: RatFun,
    pub c: RatFun,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: RatFun,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entity {
    Point(Point),
    Line(Line),
    Circle(Circle),
}

impl Entity {
    pub fn kind(&self) -> &'static str {
        match self {
            Entity::Point(_) => "point",
            Entity::Line(_) => "line",
            Entity::Circle(_) => "circle",
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum GeomError {
    #[error("degenerate triangle: the side lengths violate the triangle inequality at the witness")]
    DegenerateTriangle,
    #[error("the lines are parallel for all values of the indeterminates")]
    NoIntersection,
    #[error("construction is singular at the witness: {0}")]
    WitnessSingular(String),
    #[error("no real intersection at the witness")]
    NoRealIntersection,
    #[error("point does not lie on the mirror")]
    NotIncident,
    #[error("the two points coincide; no line through them")]
    CoincidentPoints,
    #[error("{name} = {value} is outside its range [{lo}, {hi}]")]
    RangeError { name: String, value: f64, lo: f64, hi: f64 },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("`{0}` is a {1}")]
    WrongKind(String, &'static str),
    #[error(transparent)]
    Cas(#[from] CasError),
}

/// A condition the witness must satisfy for the figure to exist.
#[derive(Clone, Debug, PartialEq)]
pub struct Guard {
    pub expr: RatFun,
    pub require: Requirement,
    pub what: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Requirement {
    Positive,
    NonNegative,
    NonZero,
}

/// The root chosen for a two-valued construction, kept when witnesses move.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchChoice {
    pub entity: String,
    pub branch: usize,
    pub discriminant: RatFun,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Warning {
    /// A recorded sign (absolute value or branch discriminant) changed.
    BranchFlip { what: String, from: Sign, to: Sign },
}

#[derive(Clone, Debug, Default)]
pub struct GeomModel {
    pub ctx: Context,
    entities: Vec<(String, Entity)>,
    index: BTreeMap<String, usize>,
    guards: Vec<Guard>,
    branches: Vec<BranchChoice>,
}

impl GeomModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_context(ctx: Context) -> Self {
        GeomModel { ctx, ..Self::default() }
    }

    pub fn declare(&mut self, name: &str, witness: f64, range: Option<(f64, f64)>) -> Result<SymbolId, GeomError> {
        if let Some((lo, hi)) = range {
            if !(lo..=hi).contains(&witness) {
                return Err(GeomError::RangeError {
                    name: name.to_string(),
                    value: witness,
                    lo,
                    hi,
                });
            }
        }
        Ok(self.ctx.declare(name, witness, range)?)
    }

    pub fn add(&mut self, name: &str, e: Entity) {
        self.index.insert(name.to_string(), self.entities.len());
        self.entities.push((name.to_string(), e));
    }

    pub fn get(&self, name: &str) -> Result<&Entity, GeomError> {
        self.index
            .get(name)
            .map(|&i| &self.entities[i].1)
            .ok_or_else(|| GeomError::UnknownName(name.to_string()))
    }

    pub fn point(&self, name: &str) -> Result<&Point, GeomError> {
        match self.get(name)? {
            Entity::Point(p) => Ok(p),
            e => Err(GeomError::WrongKind(name.to_string(), e.kind())),
        }
    }

    pub fn line(&self, name: &str) -> Result<&Line, GeomError> {
        match self.get(name)? {
            Entity::Line(l) => Ok(l),
            e => Err(GeomError::WrongKind(name.to_string(), e.kind())),
        }
    }

    pub fn circle(&self, name: &str) -> Result<&Circle, GeomError> {
        match self.get(name)? {
            Entity::Circle(c) => Ok(c),
            e => Err(GeomError::WrongKind(name.to_string(), e.kind())),
        }
    }

    pub fn entities(&self) -> impl Iterator<Item = (&str, &Entity)> + '_ {
        self.entities.iter().map(|(n, e)| (n.as_str(), e))
    }

    pub fn guards(&self) -> &[Guard] {
        &self.guards
    }

    pub fn branches(&self) -> &[BranchChoice] {
        &self.branches
    }

    pub(crate) fn guard(&mut self, expr: RatFun, require: Requirement, what: &str) {
        if self.ctx.is_constant(&expr) {
            return;
        }
        self.guards.push(Guard {
            expr,
            require,
            what: what.to_string(),
        });
    }

    pub(crate) fn record_branch(&mut self, entity: &str, branch: usize, discriminant: RatFun) -> Result<(), GeomError> {
        let sign = self.ctx.witness_sign(&discriminant)?;
        self.branches.push(BranchChoice {
            entity: entity.to_string(),
            branch,
            discriminant,
            sign,
        });
        Ok(())
    }

    /// Numeric coordinates of an entity at `env` (witness elsewhere):
    /// `[x, y]`, `[a, b, c]` or `[cx, cy, r]`.
    pub fn entity_values(&self, e: &Entity, env: &Env) -> Result<Vec<f64>, CasError> {
        let vals: Vec<&RatFun> = match e {
            Entity::Point(p) => alloc::vec![&p.x, &p.y],
            Entity::Line(l) => alloc::vec![&l.a, &l.b, &l.c],
            Entity::Circle(c) => alloc::vec![&c.center.x, &c.center.y, &c.radius],
        };
        vals.into_iter()
            .map(|v| self.ctx.eval_at(v, env).map(|a| a.value))
            .collect()
    }

    /// Checks guards and that every entity evaluates at `env`.
    pub fn check_witness(&self, env: &Env) -> Result<(), GeomError> {
        for g in &self.guards {
            let s = self.ctx.sign_at(&g.expr, env)?;
            let ok = match g.require {
                Requirement::Positive => s == Sign::Positive,
                Requirement::NonNegative => s != Sign::Negative,
                Requirement::NonZero => s != Sign::Zero,
            };
            if !ok {
                return Err(GeomError::WitnessSingular(g.what.clone()));
            }
        }
        for (name, e) in &self.entities {
            match self.entity_values(e, env) {
                Ok(v) if v.iter().all(|x| x.is_finite()) => {}
                _ => {
                    return Err(GeomError::WitnessSingular(alloc::format!(
                        "`{name}` cannot be evaluated"
                    )))
                }
            }
        }
        Ok(())
    }

    /// Moves the witness of `name`. The model is unchanged on error.
    pub fn set_witness(&mut self, name: &str, value: f64) -> Result<Vec<Warning>, GeomError> {
        self.set_witnesses(&[(name, value)])
    }

    /// Moves several witnesses at once; all or nothing.
    pub fn set_witnesses(&mut self, values: &[(&str, f64)]) -> Result<Vec<Warning>, GeomError> {
        let mut env = Env::new();
        for &(name, value) in values {
            let id = self.ctx.id(name).filter(|&v| self.ctx.is_indeterminate(v));
            let id = id.ok_or_else(|| GeomError::UnknownName(name.to_string()))?;
            if let Some((lo, hi)) = self.ctx.range(id) {
                if !(lo..=hi).contains(&value) || !value.is_finite() {
                    return Err(GeomError::RangeError {
                        name: name.to_string(),
                        value,
                        lo,
                        hi,
                    });
                }
            }
            env.insert(id, value);
        }
        self.check_witness(&env)?;
        let warnings = self.sign_changes(&env)?;
        for (id, v) in env {
            self.ctx.set_witness(id, v);
        }
        for b in &mut self.branches {
            b.sign = self.ctx.witness_sign(&b.discriminant)?;
        }
        Ok(warnings)
    }

    fn sign_changes(&self, env: &Env) -> Result<Vec<Warning>, GeomError> {
        let mut out = Vec::new();
        for sc in self.ctx.side_conditions() {
            let now = self.ctx.sign_at(&sc.expr, env)?;
            if now != sc.sign {
                out.push(Warning::BranchFlip {
                    what: self.ctx.text(&sc.expr),
                    from: sc.sign,
                    to: now,
                });
            }
        }
        for b in &self.branches {
            let now = self.ctx.sign_at(&b.discriminant, env)?;
            if now != b.sign {
                out.push(Warning::BranchFlip {
                    what: alloc::format!("discriminant of `{}`", b.entity),
                    from: b.sign,
                    to: now,
                });
            }
        }
        Ok(out)
    }

    pub fn scene(&self) -> Scene {
        scene::build(self)
    }
}
