use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::GeomModel;
use crate::cas::Env;

/// Numeric snapshot of a model at its current witness.
#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub entities: Vec<SceneEntity>,
    pub indeterminates: Vec<SceneIndeterminate>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneEntity {
    pub name: String,
    pub kind: &'static str,
    /// `[x, y]`, `[a, b, c]` or `[cx, cy, r]`; NaN where evaluation failed.
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SceneIndeterminate {
    pub name: String,
    pub value: f64,
    pub range: Option<(f64, f64)>,
}

pub(super) fn build(m: &GeomModel) -> Scene {
    let env = Env::new();
    let entities = m
        .entities()
        .map(|(name, e)| {
            let n = if matches!(e, super::Entity::Point(_)) { 2 } else { 3 };
            SceneEntity {
                name: name.to_string(),
                kind: e.kind(),
                values: m.entity_values(e, &env).unwrap_or_else(|_| alloc::vec![f64::NAN; n]),
            }
        })
        .collect();
    let indeterminates = m
        .ctx
        .indeterminates()
        .map(|id| SceneIndeterminate {
            name: m.ctx.name(id).to_string(),
            value: m.ctx.witness(id).unwrap_or(f64::NAN),
            range: m.ctx.range(id),
        })
        .collect();
    Scene {
        entities,
        indeterminates,
    }
}
