//! Runs a parsed model: declares indeterminates, performs constructions and
//! constraints, and evaluates queries. Query results stay symbolic; moving a
//! witness refreshes only their numeric side.

mod build;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::cas::{Approx, CasError, Env, Expr, Precision, ProofVerdict, RatFun, SymbolId, VerdictStatus};
use crate::geom::{GeomError, GeomModel, Point, Scene, Warning};
use crate::loci::{self, LineFamily, LociError, ParametricCurve, SolarAngle};
use crate::measure::{MeasureError, MeasureKind, Measurement};
use crate::modelang::{parse_named, ModelSource, ParseError, QueryKind, Span};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{error}")]
    Geom { error: GeomError, span: Option<Span> },
    #[error(transparent)]
    Measure(MeasureError),
    #[error(transparent)]
    Loci(LociError),
    #[error("{0}")]
    Unsupported(String),
    #[error("no query named `{0}`")]
    UnknownQuery(String),
}

impl From<GeomError> for EngineError {
    fn from(error: GeomError) -> Self {
        EngineError::Geom { error, span: None }
    }
}

impl From<CasError> for EngineError {
    fn from(e: CasError) -> Self {
        GeomError::from(e).into()
    }
}

impl From<MeasureError> for EngineError {
    fn from(e: MeasureError) -> Self {
        match e {
            MeasureError::Geom(g) => g.into(),
            e => EngineError::Measure(e),
        }
    }
}

impl From<LociError> for EngineError {
    fn from(e: LociError) -> Self {
        match e {
            LociError::Geom(g) => g.into(),
            e => EngineError::Loci(e),
        }
    }
}

impl EngineError {
    /// Short machine-readable name of the error.
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::Parse(_) => "ParseError",
            EngineError::Geom { error, .. } => match error {
                GeomError::DegenerateTriangle => "DegenerateTriangle",
                GeomError::NoIntersection => "NoIntersection",
                GeomError::WitnessSingular(_) => "WitnessSingular",
                GeomError::NoRealIntersection => "NoRealIntersection",
                GeomError::NotIncident => "NotIncident",
                GeomError::CoincidentPoints => "CoincidentPoints",
                GeomError::RangeError { .. } => "RangeError",
                GeomError::UnknownName(_) => "UnknownName",
                GeomError::WrongKind(..) => "WrongKind",
                GeomError::Cas(c) => match c {
                    CasError::DomainError(_) => "DomainError",
                    CasError::DegenerateExpression => "DegenerateExpression",
                    CasError::NonLinearAngle(_) => "NonLinearAngle",
                    _ => "AlgebraError",
                },
            },
            EngineError::Measure(MeasureError::DivisionByZeroMeasure) => "DivisionByZeroMeasure",
            EngineError::Measure(MeasureError::RightAngle) => "RightAngle",
            EngineError::Measure(MeasureError::Geom(_)) => "GeometryError",
            EngineError::Loci(e) => match e {
                LociError::ConstantLocus(_) => "ConstantLocus",
                LociError::DegenerateFamily => "DegenerateFamily",
                LociError::NotImplicitizable(_) => "NotImplicitizable",
                LociError::NoOpeningAngle => "NoOpeningAngle",
                LociError::EmptyCurve => "EmptyCurve",
                LociError::TooFewSamples(_) => "TooFewSamples",
                LociError::Geom(_) => "GeometryError",
            },
            EngineError::Unsupported(_) => "Unsupported",
            EngineError::UnknownQuery(_) => "UnknownQuery",
        }
    }

    pub fn span(&self) -> Option<Span> {
        match self {
            EngineError::Parse(p) => Some(p.span),
            EngineError::Geom { span, .. } => *span,
            _ => None,
        }
    }

    fn at(self, span: Span) -> Self {
        match self {
            EngineError::Geom { error, span: None } => EngineError::Geom {
                error,
                span: Some(span),
            },
            e => e,
        }
    }
}

pub type Result<T> = core::result::Result<T, EngineError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProofTest {
    Zero,
    Constant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Proof {
    pub test: ProofTest,
    pub value: RatFun,
    pub verdict: ProofVerdict,
    pub shadow: Approx,
}

impl Proof {
    /// The verdict is the proof the statement asked for.
    pub fn holds(&self) -> bool {
        match self.test {
            ProofTest::Zero => self.verdict.status == VerdictStatus::ProvedZero,
            ProofTest::Constant => matches!(self.verdict.status, VerdictStatus::ProvedConstant(_)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub curve: ParametricCurve,
    /// The line family, for envelopes.
    pub family: Option<LineFamily>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolveSpec {
    Equation,
    Solar { phi: SymbolId, lid: RatFun, width: RatFun },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub variable: String,
    pub exact: Option<RatFun>,
    pub value: f64,
    pub equation: Option<String>,
    pub spec: SolveSpec,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Measurement(Measurement),
    Proof(Proof),
    Curve(Curve),
    /// A locus of a point that does not move.
    ConstantPoint(Point),
    Solution(Solution),
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryResult {
    pub name: String,
    pub kind: QueryKind,
    pub span: Span,
    pub outcome: core::result::Result<Outcome, EngineError>,
}

/// Symbolic panel entry: canonical text, verdict and numeric shadow.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolicReport {
    pub text: String,
    pub tree: Expr,
    pub verdict: ProofVerdict,
    pub shadow: Approx,
}

#[derive(Clone, Debug)]
pub struct Model {
    pub source: ModelSource,
    pub geom: GeomModel,
    results: Vec<QueryResult>,
    /// Values of measure and prove queries, usable by later statements.
    scalars: BTreeMap<String, RatFun>,
}

impl Model {
    pub fn build(name: &str, src: &str) -> Result<Model> {
        Self::build_with(name, src, Precision::default())
    }

    pub fn build_with(name: &str, src: &str, precision: Precision) -> Result<Model> {
        let source = parse_named(name, src)?;
        Self::from_source(source, precision)
    }

    pub fn from_source(source: ModelSource, precision: Precision) -> Result<Model> {
        let mut geom = GeomModel::new();
        geom.ctx.set_precision(precision);
        let mut model = Model {
            source: ModelSource {
                name: source.name.clone(),
                statements: Vec::new(),
            },
            geom,
            results: Vec::new(),
            scalars: BTreeMap::new(),
        };
        for st in &source.statements {
            model.run(st).map_err(|e| e.at(st.span))?;
        }
        model.source = source;
        Ok(model)
    }

    pub fn name(&self) -> &str {
        &self.source.name
    }

    pub fn results(&self) -> &[QueryResult] {
        &self.results
    }

    pub fn result(&self, name: &str) -> Result<&QueryResult> {
        self.results
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| EngineError::UnknownQuery(name.to_string()))
    }

    pub fn scene(&self) -> Scene {
        self.geom.scene()
    }

    /// Indeterminate ids by name, in declaration order.
    pub fn indeterminates(&self) -> Vec<(String, SymbolId)> {
        self.geom
            .ctx
            .indeterminates()
            .map(|id| (self.geom.ctx.name(id).to_string(), id))
            .collect()
    }

    /// Every `prove` query holds.
    pub fn all_proofs_hold(&self) -> bool {
        self.results.iter().all(|r| match &r.outcome {
            Ok(Outcome::Proof(p)) => p.holds(),
            Err(_) => r.kind != QueryKind::Prove,
            _ => true,
        })
    }

    /// Moves witnesses; on any error the model is unchanged.
    pub fn set_witnesses(&mut self, values: &[(&str, f64)]) -> Result<Vec<Warning>> {
        let mut next = self.clone();
        let warnings = next.geom.set_witnesses(values)?;
        next.refresh()?;
        *self = next;
        Ok(warnings)
    }

    /// Re-derives numeric shadows, evidence and numeric solutions at the
    /// current witness.
    fn refresh(&mut self) -> Result<()> {
        let env = Env::new();
        for r in &mut self.results {
            let Ok(outcome) = &mut r.outcome else { continue };
            let ctx = &self.geom.ctx;
            match outcome {
                Outcome::Measurement(m) => {
                    m.shadow = ctx.eval_at(&m.value, &env)?;
                }
                Outcome::Proof(p) => {
                    p.shadow = ctx.eval_at(&p.value, &env)?;
                    p.verdict = match p.test {
                        ProofTest::Zero => ctx.is_zero(&p.value),
                        ProofTest::Constant => ctx.constant_verdict(&p.value),
                    };
                }
                Outcome::Curve(c) => {
                    let k = &c.curve;
                    c.curve = ParametricCurve::with_domain(ctx, k.x.clone(), k.y.clone(), k.param, k.domain);
                }
                Outcome::ConstantPoint(_) => {}
                Outcome::Solution(s) => match (&s.exact, &s.spec) {
                    (Some(e), _) => s.value = ctx.eval_at(e, &env)?.value,
                    (None, SolveSpec::Solar { phi, lid, width }) => {
                        let sol = loci::solar_optimal_angle(&self.geom, *phi, lid, width)?;
                        s.value = sol.value;
                        if let SolarAngle::Exact(e) = sol.angle {
                            s.exact = Some(e);
                        }
                    }
                    (None, SolveSpec::Equation) => {}
                },
            }
        }
        Ok(())
    }

    /// Canonical text, verdict and shadow of a measure or prove query.
    pub fn symbolic(&self, name: &str) -> Result<SymbolicReport> {
        let r = self.result(name)?;
        let ctx = &self.geom.ctx;
        let (value, verdict, shadow) = match r.outcome.as_ref().map_err(Clone::clone)? {
            Outcome::Measurement(m) => {
                let v = ctx.is_zero(&m.value);
                let verdict = if v.status == VerdictStatus::ProvedZero {
                    v
                } else {
                    ctx.constant_verdict(&m.value)
                };
                (m.value.clone(), verdict, m.shadow)
            }
            Outcome::Proof(p) => (p.value.clone(), p.verdict.clone(), p.shadow),
            Outcome::Solution(Solution { exact: Some(e), .. }) => {
                let shadow = ctx.eval_witness(e)?;
                (e.clone(), ctx.constant_verdict(e), shadow)
            }
            _ => return Err(EngineError::Unsupported(alloc::format!("`{name}` has no scalar value"))),
        };
        Ok(SymbolicReport {
            text: ctx.text(&value),
            tree: ctx.to_expr(&value),
            verdict,
            shadow,
        })
    }

    /// The curve of a locus or envelope query.
    pub fn curve(&self, name: &str) -> Result<&Curve> {
        let r = self.result(name)?;
        match r.outcome.as_ref().map_err(Clone::clone)? {
            Outcome::Curve(c) => Ok(c),
            Outcome::ConstantPoint(p) => Err(LociError::ConstantLocus(p.clone()).into()),
            _ => Err(EngineError::Unsupported(alloc::format!(
                "`{name}` is not a locus or envelope"
            ))),
        }
    }

    pub fn measurement_kind(&self, name: &str) -> Option<MeasureKind> {
        match &self.result(name).ok()?.outcome {
            Ok(Outcome::Measurement(m)) => Some(m.kind),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests;
