//! JSON documents shared by the CLI and the HTTP API.

use serde::Serialize;
use serde_json::{json, Value};
use symgeo_core::cas::{Expr, VerdictStatus};
use symgeo_core::engine::{EngineError, Model, Outcome, QueryResult};
use symgeo_core::geom::{Scene, Warning};
use symgeo_core::measure::verdict_label;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SceneDoc {
    pub entities: Vec<EntityDoc>,
    pub indeterminates: Vec<IndeterminateDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntityDoc {
    pub name: String,
    pub kind: &'static str,
    /// `[x, y]`, `[a, b, c]` or `[cx, cy, r]`; null where not evaluable.
    pub values: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndeterminateDoc {
    pub name: String,
    pub value: f64,
    pub range: Option<[f64; 2]>,
}

impl From<Scene> for SceneDoc {
    fn from(s: Scene) -> Self {
        SceneDoc {
            entities: s
                .entities
                .into_iter()
                .map(|e| EntityDoc {
                    name: e.name,
                    kind: e.kind,
                    values: e.values.into_iter().map(|v| v.is_finite().then_some(v)).collect(),
                })
                .collect(),
            indeterminates: s
                .indeterminates
                .into_iter()
                .map(|i| IndeterminateDoc {
                    name: i.name,
                    value: i.value,
                    range: i.range.map(|(lo, hi)| [lo, hi]),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorDoc {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub col: Option<u32>,
}

impl From<&EngineError> for ErrorDoc {
    fn from(e: &EngineError) -> Self {
        let span = e.span();
        ErrorDoc {
            error: e.code(),
            message: e.to_string(),
            line: span.map(|s| s.line),
            col: span.map(|s| s.col),
        }
    }
}

/// One query result as listed next to the scene.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResultDoc {
    pub name: String,
    pub query: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorDoc>,
}

pub fn result_doc(m: &Model, r: &QueryResult) -> ResultDoc {
    let ctx = &m.geom.ctx;
    let mut d = ResultDoc {
        name: r.name.clone(),
        query: r.kind.keyword(),
        kind: None,
        text: None,
        value: None,
        bound: None,
        verdict: None,
        holds: None,
        error: None,
    };
    match &r.outcome {
        Err(e) => d.error = Some(e.into()),
        Ok(Outcome::Measurement(x)) => {
            d.kind = Some(x.kind.as_str());
            d.text = Some(ctx.text(&x.value));
            d.value = Some(x.shadow.value);
            d.bound = Some(x.shadow.bound);
            d.verdict = m.symbolic(&r.name).ok().map(|s| verdict_label(&s.verdict.status));
        }
        Ok(Outcome::Proof(p)) => {
            d.text = Some(ctx.text(&p.value));
            d.value = Some(p.shadow.value);
            d.bound = Some(p.shadow.bound);
            d.verdict = Some(verdict_label(&p.verdict.status));
            d.holds = Some(p.holds());
        }
        Ok(Outcome::Solution(s)) => {
            d.text = s.exact.as_ref().map(|e| ctx.text(e));
            d.value = Some(s.value);
        }
        Ok(Outcome::Curve(c)) => {
            d.text = Some(format!("({}, {})", ctx.text(&c.curve.x), ctx.text(&c.curve.y)));
        }
        Ok(Outcome::ConstantPoint(p)) => {
            d.text = Some(format!("({}, {})", ctx.text(&p.x), ctx.text(&p.y)));
        }
    }
    d
}

pub fn results_doc(m: &Model) -> Vec<ResultDoc> {
    m.results().iter().map(|r| result_doc(m, r)).collect()
}

/// `POST /models` body and `symgeo query --json` output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub id: Option<String>,
    pub name: String,
    pub scene: SceneDoc,
    pub measurements: Vec<ResultDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warnings: Option<Vec<String>>,
}

impl ModelDoc {
    pub fn new(m: &Model) -> Self {
        ModelDoc {
            id: None,
            name: m.name().to_string(),
            scene: m.scene().into(),
            measurements: results_doc(m),
            warnings: None,
        }
    }
}

pub fn warning_text(w: &Warning) -> String {
    match w {
        Warning::BranchFlip { what, from, to } => format!("BranchFlip: {what} changed sign from {from:?} to {to:?}"),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SymbolicDoc {
    pub canonical_text: String,
    pub tree: Value,
    pub verdict: &'static str,
    /// Exact value for `ProvedConstant`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constant: Option<String>,
    pub numeric_shadow: f64,
    pub bound: f64,
}

pub fn symbolic_doc(m: &Model, query: &str) -> Result<SymbolicDoc, EngineError> {
    let r = m.symbolic(query)?;
    let constant = match &r.verdict.status {
        VerdictStatus::ProvedConstant(v) => Some(m.geom.ctx.text(v)),
        VerdictStatus::ProvedZero => Some("0".to_string()),
        _ => None,
    };
    Ok(SymbolicDoc {
        canonical_text: r.text,
        tree: tree(&r.tree),
        verdict: verdict_label(&r.verdict.status),
        constant,
        numeric_shadow: r.shadow.value,
        bound: r.shadow.bound,
    })
}

/// Display tree: `{"num": "2/3"}`, `{"sym": "a"}` or `{"op": ..., "args": [...]}`.
pub fn tree(e: &Expr) -> Value {
    let node = |op: &str, args: &[&Expr]| json!({"op": op, "args": args.iter().map(|a| tree(a)).collect::<Vec<_>>()});
    match e {
        Expr::Num(q) => json!({ "num": q.to_string() }),
        Expr::Sym(s) => json!({ "sym": s }),
        Expr::Neg(a) => node("neg", &[a]),
        Expr::Add(a, b) => node("add", &[a, b]),
        Expr::Sub(a, b) => node("sub", &[a, b]),
        Expr::Mul(a, b) => node("mul", &[a, b]),
        Expr::Div(a, b) => node("div", &[a, b]),
        Expr::Pow(a, b) => node("pow", &[a, b]),
        Expr::Call(f, args) => json!({"op": f, "args": args.iter().map(tree).collect::<Vec<_>>()}),
    }
}
