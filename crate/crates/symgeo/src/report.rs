//! Plain-text run reports and command-line value parsing.

use std::fmt::Write as _;

use symgeo_core::cas::{Precision, VerdictStatus};
use symgeo_core::engine::{Model, Outcome, QueryResult};
use symgeo_core::measure::verdict_label;
use symgeo_core::modelang::{eval_constant, parse_expr};

pub fn verdict_text(m: &Model, v: &VerdictStatus) -> String {
    match v {
        VerdictStatus::ProvedConstant(c) => format!("ProvedConstant({})", m.geom.ctx.text(c)),
        v => verdict_label(v).to_string(),
    }
}

fn number(v: f64) -> String {
    format!("{v:.12}")
        .trim_end_matches('0')
        .trim_end_matches('.')
        .to_string()
}

pub fn result_line(m: &Model, r: &QueryResult) -> String {
    let ctx = &m.geom.ctx;
    let kind = r.kind.keyword();
    match &r.outcome {
        Err(e) => format!("{} ({kind}): error {}: {e}", r.name, e.code()),
        Ok(Outcome::Measurement(x)) => {
            let verdict = m
                .symbolic(&r.name)
                .map(|s| verdict_text(m, &s.verdict.status))
                .unwrap_or_default();
            format!(
                "{} ({kind} {}): {} = {} [{verdict}]",
                r.name,
                x.kind.as_str(),
                ctx.text(&x.value),
                number(x.shadow.value)
            )
        }
        Ok(Outcome::Proof(p)) => format!(
            "{} ({kind}): {} {} = {}",
            r.name,
            verdict_text(m, &p.verdict.status),
            ctx.text(&p.value),
            number(p.shadow.value)
        ),
        Ok(Outcome::Solution(s)) => match &s.exact {
            Some(e) => format!(
                "{} ({kind}): {} = {} = {}",
                r.name,
                s.variable,
                ctx.text(e),
                number(s.value)
            ),
            None => format!("{} ({kind}): {} = {} (numeric)", r.name, s.variable, number(s.value)),
        },
        Ok(Outcome::Curve(c)) => format!(
            "{} ({kind}): x({t}) = {}, y({t}) = {}",
            r.name,
            ctx.text(&c.curve.x),
            ctx.text(&c.curve.y),
            t = ctx.name(c.curve.param)
        ),
        Ok(Outcome::ConstantPoint(p)) => {
            format!(
                "{} ({kind}): constant point ({}, {})",
                r.name,
                ctx.text(&p.x),
                ctx.text(&p.y)
            )
        }
    }
}

pub fn report(m: &Model) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "model {}", m.name());
    for r in m.results() {
        let _ = writeln!(out, "{}", result_line(m, r));
    }
    out
}

/// `name=value` where the value is a closed constant such as `3.5`,
/// `pi/4` or `deg(30)`.
pub fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    Ok((name.trim().to_string(), parse_value(value)?))
}

pub fn parse_value(s: &str) -> Result<f64, String> {
    let e = parse_expr(s.trim()).map_err(|e| format!("`{s}`: {e}"))?;
    eval_constant(&e).ok_or_else(|| format!("`{s}` is not a finite constant"))
}

/// `SYMGEO_PRECISION_BITS`: either `escalate` or `base/escalate` bits.
pub fn parse_precision(s: &str) -> Result<Precision, String> {
    let bits = |t: &str| -> Result<u32, String> {
        let b: u32 = t.trim().parse().map_err(|_| format!("bad precision `{s}`"))?;
        if (53..=4096).contains(&b) {
            Ok(b)
        } else {
            Err(format!("precision must be between 53 and 4096 bits, got {b}"))
        }
    };
    let default = Precision::default();
    let (base_bits, escalate_bits) = match s.split_once('/') {
        Some((b, e)) => (bits(b)?, bits(e)?),
        None => (default.base_bits.min(bits(s)?), bits(s)?),
    };
    if escalate_bits < base_bits {
        return Err(format!(
            "escalation precision {escalate_bits} is below the base {base_bits}"
        ));
    }
    Ok(Precision {
        base_bits,
        escalate_bits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(parse_value("3.5"), Ok(3.5));
        assert!((parse_value("deg(90)").unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert!((parse_value("pi/4").unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-15);
        assert!(parse_value("a + 1").is_err());
        assert_eq!(parse_assignment("a = 10"), Ok(("a".into(), 10.0)));
        assert!(parse_assignment("a").is_err());
    }

    #[test]
    fn precision() {
        assert_eq!(parse_precision("128").unwrap().escalate_bits, 128);
        assert_eq!(parse_precision("128").unwrap().base_bits, 64);
        let p = parse_precision("80/512").unwrap();
        assert_eq!((p.base_bits, p.escalate_bits), (80, 512));
        assert!(parse_precision("12").is_err());
        assert!(parse_precision("512/128").is_err());
        assert!(parse_precision("lots").is_err());
    }
}
