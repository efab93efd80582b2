//! Curve documents and their CSV and SVG renderings.

use std::fmt::Write as _;

use serde::Serialize;
use symgeo_core::engine::{EngineError, Model, Outcome};
use symgeo_core::loci::{self, LociError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuspDoc {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    /// Exact coordinates as canonical text, when known.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveDoc {
    pub query: String,
    pub param: String,
    /// Canonical text of `x(t)` and `y(t)`.
    pub parametric: [String; 2],
    pub domain: [f64; 2],
    /// `[t, x, y]` triples.
    pub points: Vec<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub implicit: Option<String>,
    pub cusps: Vec<CuspDoc>,
    /// The point does not move with the parameter.
    pub constant: bool,
}

/// Samples a locus or envelope query. The implicit equation is attempted
/// only when `implicit` is set; failure to implicitize leaves it absent.
pub fn curve_doc(m: &Model, query: &str, samples: usize, implicit: bool) -> Result<CurveDoc, EngineError> {
    let r = m.result(query)?;
    let ctx = &m.geom.ctx;
    if let Ok(Outcome::ConstantPoint(p)) = &r.outcome {
        let x = ctx.eval_witness(&p.x)?.value;
        let y = ctx.eval_witness(&p.y)?.value;
        return Ok(CurveDoc {
            query: query.to_string(),
            param: String::new(),
            parametric: [ctx.text(&p.x), ctx.text(&p.y)],
            domain: [0.0, 0.0],
            points: vec![[0.0, x, y]],
            implicit: None,
            cusps: Vec::new(),
            constant: true,
        });
    }
    let c = &m.curve(query)?.curve;
    if samples < 2 {
        return Err(LociError::TooFewSamples(samples).into());
    }
    let points = loci::sample(&m.geom, c, samples)?
        .into_iter()
        .map(|p| [p.t, p.x.value, p.y.value])
        .collect();
    let cusps = loci::cusps(&m.geom, c)?
        .into_iter()
        .map(|k| CuspDoc {
            t: k.t,
            x: k.point.0,
            y: k.point.1,
            exact: k.exact.map(|p| [ctx.text(&p.x), ctx.text(&p.y)]),
        })
        .collect();
    let implicit = if implicit {
        loci::implicitize(&m.geom, c).ok().map(|f| format!("{} = 0", f.text()))
    } else {
        None
    };
    Ok(CurveDoc {
        query: query.to_string(),
        param: ctx.name(c.param).to_string(),
        parametric: [ctx.text(&c.x), ctx.text(&c.y)],
        domain: [c.domain.0, c.domain.1],
        points,
        implicit,
        cusps,
        constant: false,
    })
}

/// The implicit equation alone.
pub fn implicit_text(m: &Model, query: &str) -> Result<String, EngineError> {
    let c = &m.curve(query)?.curve;
    let f = loci::implicitize(&m.geom, c)?;
    Ok(format!("{} = 0", f.text()))
}

pub fn csv(doc: &CurveDoc) -> String {
    let mut out = String::from("t,x,y\n");
    for [t, x, y] in &doc.points {
        let _ = writeln!(out, "{t},{x},{y}");
    }
    out
}

/// Half-width of the drawing window: generous around the scene, so branches
/// running off to infinity are cut rather than flattening the picture.
fn window(doc: &CurveDoc, scene_extent: f64) -> f64 {
    let mut r: Vec<f64> = doc.points.iter().map(|p| p[1].abs().max(p[2].abs())).collect();
    r.sort_by(f64::total_cmp);
    let median = r.get(r.len() / 2).copied().unwrap_or(1.0);
    let base = scene_extent.max(median).max(1e-6);
    1.25 * r.iter().copied().filter(|&v| v <= 4.0 * base).fold(base, f64::max)
}

/// SVG with one path per connected run of samples and a marker per cusp.
/// `scene_extent` is the largest coordinate magnitude in the figure.
pub fn svg(doc: &CurveDoc, scene_extent: f64) -> String {
    let w = window(doc, scene_extent);
    let inside = |p: &[f64; 3]| p[1].abs() <= w && p[2].abs() <= w;
    let jump = w / 2.0;
    let mut paths = Vec::new();
    let mut current = String::new();
    let mut last: Option<[f64; 3]> = None;
    for p in &doc.points {
        let connected = last.is_some_and(|q| inside(&q) && (p[1] - q[1]).hypot(p[2] - q[2]) < jump);
        if !inside(p) {
            last = Some(*p);
            continue;
        }
        if !connected && !current.is_empty() {
            paths.push(std::mem::take(&mut current));
        }
        let cmd = if current.is_empty() { 'M' } else { 'L' };
        let _ = write!(current, "{cmd}{:.6} {:.6} ", p[1], -p[2]);
        last = Some(*p);
    }
    if !current.is_empty() {
        paths.push(current);
    }
    let stroke = w / 300.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{:.6} {:.6} {:.6} {:.6}" width="600" height="600">"#,
        -w,
        -w,
        2.0 * w,
        2.0 * w
    );
    let _ = writeln!(out, "<title>{}</title>", doc.query);
    for d in paths {
        let _ = writeln!(
            out,
            r#"<path d="{}" fill="none" stroke="black" stroke-width="{stroke:.6}"/>"#,
            d.trim_end()
        );
    }
    for c in &doc.cusps {
        let _ = writeln!(
            out,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="red"/>"#,
            c.x,
            -c.y,
            3.0 * stroke
        );
    }
    out.push_str("</svg>\n");
    out
}
