//! Stepping one indeterminate across an interval and tabulating every
//! scalar query.

use std::fmt::Write as _;

use symgeo_core::cas::VerdictStatus;
use symgeo_core::engine::{EngineError, Model, Outcome};
use symgeo_core::geom::GeomError;
use symgeo_core::measure::MeasureKind;

use crate::json::warning_text;

/// Spread above which a value proved constant is reported as varying.
pub const CONSTANT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    pub value: f64,
    /// One cell per column; `None` where the query failed at this step.
    pub cells: Vec<Option<f64>>,
    pub flags: Vec<String>,
    /// The witness could not be moved here; the model stayed put.
    pub failed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub variable: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    /// Columns proved constant whose numeric values spread by more than
    /// the tolerance, with the spread.
    pub non_constant: Vec<(String, f64)>,
}

fn cells(m: &Model) -> Vec<(String, Option<f64>)> {
    m.results()
        .iter()
        .filter_map(|r| {
            let v = match &r.outcome {
                Ok(Outcome::Measurement(x)) => Some(x.shadow.value),
                Ok(Outcome::Proof(p)) => Some(p.shadow.value),
                Ok(Outcome::Solution(s)) => Some(s.value),
                Ok(_) => return None,
                Err(_) => None,
            };
            Some((r.name.clone(), v))
        })
        .collect()
}

/// Columns whose symbolic value is an exact constant.
fn proved_constant(m: &Model) -> Vec<String> {
    m.results()
        .iter()
        .filter(|r| match &r.outcome {
            Ok(Outcome::Proof(p)) => matches!(
                p.verdict.status,
                VerdictStatus::ProvedZero | VerdictStatus::ProvedConstant(_)
            ),
            Ok(Outcome::Measurement(_)) => m.symbolic(&r.name).is_ok_and(|s| {
                matches!(
                    s.verdict.status,
                    VerdictStatus::ProvedZero | VerdictStatus::ProvedConstant(_)
                )
            }),
            _ => false,
        })
        .map(|r| r.name.clone())
        .collect()
}

fn is_integer(v: f64) -> bool {
    (v - v.round()).abs() < 1e-9
}

/// `steps` evenly spaced values from `from` to `to`, both included.
pub fn sweep(base: &Model, name: &str, from: f64, to: f64, steps: usize) -> Result<Sweep, EngineError> {
    let ctx = &base.geom.ctx;
    let id = ctx
        .id(name)
        .filter(|&v| ctx.is_indeterminate(v))
        .ok_or_else(|| GeomError::UnknownName(name.to_string()))?;
    if let Some((lo, hi)) = ctx.range(id) {
        for v in [from, to] {
            if !(lo..=hi).contains(&v) {
                return Err(GeomError::RangeError {
                    name: name.to_string(),
                    value: v,
                    lo,
                    hi,
                }
                .into());
            }
        }
    }
    if steps == 0 {
        return Err(EngineError::Unsupported("a sweep needs at least one step".into()));
    }
    let columns: Vec<String> = cells(base).into_iter().map(|(n, _)| n).collect();
    let radii: Vec<usize> = columns
        .iter()
        .enumerate()
        .filter(|(_, n)| base.measurement_kind(n) == Some(MeasureKind::Radius))
        .map(|(i, _)| i)
        .collect();
    let mut model = base.clone();
    let mut rows = Vec::with_capacity(steps);
    for i in 0..steps {
        let value = if steps == 1 {
            from
        } else {
            from + (to - from) * i as f64 / (steps - 1) as f64
        };
        let mut flags = Vec::new();
        let mut failed = false;
        let cells = match model.set_witnesses(&[(name, value)]) {
            Ok(warnings) => {
                flags.extend(warnings.iter().map(warning_text));
                let mut by_name = self::cells(&model).into_iter();
                columns
                    .iter()
                    .map(|c| by_name.find(|(n, _)| n == c).and_then(|(_, v)| v))
                    .collect()
            }
            Err(e) => {
                flags.push(format!("{}: {}", e.code(), e));
                failed = true;
                vec![None; columns.len()]
            }
        };
        if !radii.is_empty() && radii.iter().all(|&i| cells[i].is_some_and(is_integer)) {
            flags.push("integer radii".to_string());
        }
        rows.push(Row {
            value,
            cells,
            flags,
            failed,
        });
    }
    let non_constant = proved_constant(base)
        .into_iter()
        .filter_map(|name| {
            let i = columns.iter().position(|c| *c == name)?;
            let vals: Vec<f64> = rows.iter().filter_map(|r| r.cells[i]).collect();
            let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (hi - lo > CONSTANT_TOLERANCE).then_some((name, hi - lo))
        })
        .collect();
    Ok(Sweep {
        variable: name.to_string(),
        columns,
        rows,
        non_constant,
    })
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Sweep {
    /// Values are printed with `digits` decimals.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::new();
        let _ = write!(out, "step,{}", quote(&self.variable));
        for c in &self.columns {
            let _ = write!(out, ",{}", quote(c));
        }
        out.push_str(",flags\n");
        for (i, r) in self.rows.iter().enumerate() {
            let _ = write!(out, "{i},{:.digits$}", r.value);
            for c in &r.cells {
                match c {
                    Some(v) => {
                        let _ = write!(out, ",{v:.digits$}");
                    }
                    None => out.push(','),
                }
            }
            let _ = writeln!(out, ",{}", quote(&r.flags.join("; ")));
        }
        for (name, spread) in &self.non_constant {
            let _ = writeln!(out, "# non-constant: {name} proved constant but varies by {spread:e}");
        }
        out
    }

    pub fn failed_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.failed).count()
    }
}
