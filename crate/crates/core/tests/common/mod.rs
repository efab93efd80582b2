//! Property suites shared by the `properties` and `acceptance` targets.

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use symgeo_core::cas::{Context, Env, Expr, RatFun, VerdictStatus};
use symgeo_core::engine::{Model, Outcome};
use symgeo_core::geom::GeomModel;
use symgeo_core::modelang::parse_expr;

pub struct Suite {
    pub name: &'static str,
    pub cases: u32,
    pub run: fn(u32) -> Result<(), String>,
}

pub fn suites() -> Vec<Suite> {
    vec![
        Suite {
            name: "normalize idempotence",
            cases: 300,
            run: normalize_idempotence,
        },
        Suite {
            name: "zero-test soundness",
            cases: 300,
            run: zero_test_soundness,
        },
        Suite {
            name: "reflection involution",
            cases: 200,
            run: reflection_involution,
        },
        Suite {
            name: "placement invariance",
            cases: 150,
            run: placement_invariance,
        },
        Suite {
            name: "branch stability",
            cases: 40,
            run: branch_stability,
        },
        Suite {
            name: "numeric coherence",
            cases: 60,
            run: numeric_coherence,
        },
    ]
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        max_shrink_iters: 256,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn report<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

/// Random expressions in `a`, `b`, `c` with small integers, the four
/// operations, squares and square roots of positive quantities.
pub fn expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (-5i64..=5).prop_map(|n| format!("({n})")),
        Just("a".to_string()),
        Just("b".to_string()),
        Just("c".to_string()),
        Just("sqrt(a^2 + 1)".to_string()),
        Just("sqrt(b^2 + c^2)".to_string()),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x} + {y})")),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x} - {y})")),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x} * {y})")),
            (inner.clone(), inner.clone()).prop_map(|(x, y)| format!("({x} / {y})")),
            inner.prop_map(|x| format!("({x})^2")),
        ]
    })
}

fn abc() -> (Context, [symgeo_core::cas::SymbolId; 3]) {
    let mut ctx = Context::new();
    let a = ctx.declare("a", 3.0, None).unwrap();
    let b = ctx.declare("b", 4.0, None).unwrap();
    let c = ctx.declare("c", 5.0, None).unwrap();
    (ctx, [a, b, c])
}

/// Direct floating-point evaluation of an expression tree: the oracle the
/// canonical forms are checked against.
pub fn eval(e: &Expr, vars: &BTreeMap<&str, f64>) -> f64 {
    match e {
        Expr::Num(q) => q.numer().to_string().parse::<f64>().unwrap() / q.denom().to_string().parse::<f64>().unwrap(),
        Expr::Sym(s) => vars[s.as_str()],
        Expr::Neg(a) => -eval(a, vars),
        Expr::Add(a, b) => eval(a, vars) + eval(b, vars),
        Expr::Sub(a, b) => eval(a, vars) - eval(b, vars),
        Expr::Mul(a, b) => eval(a, vars) * eval(b, vars),
        Expr::Div(a, b) => eval(a, vars) / eval(b, vars),
        Expr::Pow(a, b) => eval(a, vars).powf(eval(b, vars)),
        Expr::Call(f, args) if f == "sqrt" => eval(&args[0], vars).sqrt(),
        Expr::Call(f, _) => panic!("unexpected function {f}"),
    }
}

/// Bound on the size of the intermediate terms met by [`eval`], so that
/// comparisons against it can allow for cancellation.
pub fn magnitude(e: &Expr, vars: &BTreeMap<&str, f64>) -> f64 {
    match e {
        Expr::Num(_) | Expr::Sym(_) => eval(e, vars).abs(),
        Expr::Neg(a) => magnitude(a, vars),
        Expr::Add(a, b) | Expr::Sub(a, b) => magnitude(a, vars) + magnitude(b, vars),
        Expr::Mul(a, b) => magnitude(a, vars) * magnitude(b, vars),
        Expr::Div(a, b) => magnitude(a, vars) / eval(b, vars).abs(),
        Expr::Pow(a, b) => magnitude(a, vars).powf(eval(b, vars)),
        Expr::Call(_, args) => eval(&args[0], vars).abs().sqrt(),
    }
}

fn normalize_idempotence(cases: u32) -> Result<(), String> {
    report(runner(cases).run(&expr(), |s| {
        let (mut ctx, _) = abc();
        let e = parse_expr(&s).unwrap();
        let Ok(r) = ctx.normalize(&e) else {
            return Ok(());
        };
        let again = ctx
            .normalize(&ctx.to_expr(&r))
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&again, &r, "to_expr round trip of {}", s);
        let text = ctx.text(&r);
        let reparsed = ctx
            .normalize(&parse_expr(&text).unwrap())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&reparsed, &r, "text round trip of {} via {}", s, text);
        Ok(())
    }))
}

fn zero_test_soundness(cases: u32) -> Result<(), String> {
    let point = (1.0f64..10.0, 1.0f64..10.0, 1.0f64..10.0);
    let shape = 0usize..4;
    report(
        runner(cases).run(&(expr(), expr(), shape, point), |(x, y, shape, (pa, pb, pc))| {
            let (mut ctx, [a, b, c]) = abc();
            // identities first, then arbitrary expressions
            let src = match shape {
                0 => format!("({x}) * ({y}) - ({y}) * ({x})"),
                1 => format!("(({x}) + ({y}))^2 - ({x})^2 - 2*({x})*({y}) - ({y})^2"),
                2 => format!("({x}) - ({y})"),
                _ => x.clone(),
            };
            let e = parse_expr(&src).unwrap();
            let Ok(r) = ctx.normalize(&e) else {
                return Ok(());
            };
            let verdict = ctx.is_zero(&r);
            let vars = BTreeMap::from([("a", pa), ("b", pb), ("c", pc)]);
            let direct = eval(&e, &vars);
            let tol = 1e-9 * (1.0 + magnitude(&e, &vars));
            if shape < 2 {
                prop_assert_eq!(&verdict.status, &VerdictStatus::ProvedZero, "identity {}", src);
            }
            let env = Env::from([(a, pa), (b, pb), (c, pc)]);
            match &verdict.status {
                VerdictStatus::ProvedZero => {
                    if direct.is_finite() {
                        prop_assert!(direct.abs() <= tol, "{} proved zero but is {}", src, direct);
                    }
                }
                VerdictStatus::ProvedNonzero | VerdictStatus::ProvedConstant(_) => {
                    prop_assert!(ctx.free_indeterminates(&r).is_empty(), "{} is not constant", src);
                }
                VerdictStatus::NumericEvidence => {}
            }
            if verdict.status == VerdictStatus::ProvedNonzero && direct.is_finite() {
                prop_assert!(direct.abs() > 0.0);
            }
            // the canonical form agrees with the tree wherever both are defined
            if let Ok(v) = ctx.eval_f64(&r, &env) {
                if direct.is_finite() && tol.is_finite() {
                    prop_assert!((v - direct).abs() <= tol, "{}: {} vs {}", src, v, direct);
                }
            }
            Ok(())
        }),
    )
}

fn poly_in_t() -> impl Strategy<Value = String> {
    prop::collection::vec(-4i64..=4, 1..4).prop_map(|cs| {
        cs.iter()
            .enumerate()
            .map(|(i, c)| format!("({c})*t^{i}"))
            .collect::<Vec<_>>()
            .join(" + ")
    })
}

fn reflection_involution(cases: u32) -> Result<(), String> {
    let line = || (poly_in_t(), poly_in_t(), poly_in_t());
    report(runner(cases).run(&(line(), line()), |((la, lb, lc), (ma, mb, mc))| {
        let mut g = GeomModel::new();
        g.declare("t", 0.7, None).unwrap();
        let mut n = |s: &str| g.ctx.normalize(&parse_expr(s).unwrap()).unwrap();
        let (la, lb, lc, ma, mb, mc) = (n(&la), n(&lb), n(&lc), n(&ma), n(&mb), n(&mc));
        let (Ok(l), Ok(m)) = (g.coeffs(la, lb, lc), g.coeffs(ma, mb, mc)) else {
            return Ok(());
        };
        let Ok(once) = g.reflect_line(&l, &m) else {
            return Ok(());
        };
        let twice = g
            .reflect_line(&once, &m)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        for (x, y) in [(&twice.a, &l.a), (&twice.b, &l.b), (&twice.c, &l.c)] {
            let d = g.ctx.sub(x, y).unwrap();
            prop_assert_eq!(g.ctx.is_zero(&d).status, VerdictStatus::ProvedZero);
        }
        Ok(())
    }))
}

fn measured(m: &Model, name: &str) -> f64 {
    match &m.result(name).unwrap().outcome {
        Ok(Outcome::Measurement(x)) => x.shadow.value,
        other => panic!("{name}: {other:?}"),
    }
}

const MEASURES: &str = "point J = centroid(A, B, C)\npoint G = orthocenter(A, B, C)\n\
    point D = circumcenter(A, B, C)\npoint I = incenter(A, B, C)\ncircle k = incircle(A, B, C)\nline ab = line(A, B)\nline ac = line(A, C)\n\
    measure jg = dist(J, G)\nmeasure gd = dist(G, D)\nmeasure ai = dist(A, I)\n\
    measure ar = area(A, B, C)\nmeasure r = radius(k)\nmeasure ang = angle(ab, ac)\n";

/// Sides in the fixed placement versus the same triangle moved by a
/// rational rotation and a translation.
fn placement_invariance(cases: u32) -> Result<(), String> {
    let sides = (1i64..20, 1i64..20).prop_flat_map(|(a, b)| (Just(a), Just(b), ((a - b).abs() + 1)..(a + b)));
    let motion = (-9i64..=9, 1i64..=9, -20i64..=20, -20i64..=20);
    report(runner(cases).run(&(sides, motion), |((a, b, c), (p, q, tx, ty))| {
        let placed = format!("point A, B, C = triangle({a}, {b}, {c})\n{MEASURES}");
        // rotation by the angle with tangent 2pq / (q^2 - p^2)
        let (den, cs, sn) = (p * p + q * q, q * q - p * p, 2 * p * q);
        let (cs, sn) = (format!("({cs}/{den})"), format!("({sn}/{den})"));
        let xc = format!("(({b}^2 + {c}^2 - {a}^2)/(2*{c}))");
        let h = format!("sqrt({b}^2 - {xc}^2)");
        let moved = format!(
            "point A = point({tx}, {ty})\npoint B = point({tx} + {c}*{cs}, {ty} + {c}*{sn})\n\
             point C = point({tx} + {xc}*{cs} - {h}*{sn}, {ty} + {xc}*{sn} + {h}*{cs})\n{MEASURES}"
        );
        let m1 = Model::build("placed", &placed).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let m2 = Model::build("moved", &moved).map_err(|e| TestCaseError::fail(e.to_string()))?;
        for name in ["jg", "gd", "ai", "ar", "r", "ang"] {
            let (v1, v2) = (measured(&m1, name), measured(&m2, name));
            prop_assert!((v1 - v2).abs() <= 1e-9 * (1.0 + v1.abs()), "{}: {} vs {}", name, v1, v2);
        }
        Ok(())
    }))
}

/// A point fixed by two distances, swept monotonically through witnesses
/// where both circles still meet.
fn branch_stability(cases: u32) -> Result<(), String> {
    let setup = (2.0f64..8.0, 2.0f64..8.0, 0.05f64..0.45, 0.55f64..0.95);
    report(runner(cases).run(&setup, |(a, b, f0, f1)| {
        let (lo, hi) = ((a - b).abs() + 0.05, a + b - 0.05);
        let (c0, c1) = (lo + f0 * (hi - lo), lo + f1 * (hi - lo));
        let src = format!(
            "let a = {a} in [0, 20]\nlet b = {b} in [0, 20]\nlet c = {c0} in [0, 20]\n\
             point A = point(0, 0)\npoint B = point(c, 0)\n\
             constrain point P: dist(P, A) = b, dist(P, B) = a\nmeasure px = x(P)\nmeasure py = y(P)\n"
        );
        let mut m = Model::build("branch", &src).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let steps = 100;
        let dc = (c1 - c0) / steps as f64;
        let at = |m: &Model| (measured(m, "px"), measured(m, "py"));
        let mut prev = at(&m);
        let sign = prev.1.signum();
        let mut moves = Vec::new();
        let mut lipschitz: f64 = 0.0;
        for i in 1..=steps {
            let c = c0 + dc * i as f64;
            // local rate of change, from a quarter step ahead
            let mut probe = m.clone();
            probe.set_witnesses(&[("c", c - 0.75 * dc)]).unwrap();
            let q = at(&probe);
            lipschitz = lipschitz.max((q.0 - prev.0).hypot(q.1 - prev.1) / (0.25 * dc));
            let warnings = m
                .set_witnesses(&[("c", c)])
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            prop_assert!(warnings.is_empty(), "step {}: {:?}", i, warnings);
            let p = at(&m);
            prop_assert_eq!(p.1.signum(), sign, "branch changed at step {}", i);
            moves.push((p.0 - prev.0).hypot(p.1 - prev.1));
            prev = p;
        }
        let worst = moves.iter().copied().fold(0.0, f64::max);
        prop_assert!(
            worst <= 2.0 * lipschitz * dc + 1e-12,
            "step {} exceeds {}",
            worst,
            lipschitz * dc
        );
        Ok(())
    }))
}

/// Every entity's coordinates agree between the base and the escalated
/// precision, within the reported bound.
fn numeric_coherence(cases: u32) -> Result<(), String> {
    let base = Model::build("euler", crate_model("euler.gx")).unwrap();
    let sides =
        (2.0f64..9.0, 2.0f64..9.0).prop_flat_map(|(a, b)| (Just(a), Just(b), ((a - b).abs() + 0.1)..(a + b - 0.1)));
    report(runner(cases).run(&sides, |(a, b, c)| {
        let mut m = base.clone();
        m.set_witnesses(&[("a", a), ("b", b), ("c", c)])
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let ctx = &m.geom.ctx;
        for (name, e) in m.geom.entities() {
            let low = m.geom.entity_values(e, &Env::new()).unwrap();
            let parts: Vec<RatFun> = match e {
                symgeo_core::geom::Entity::Point(p) => vec![p.x.clone(), p.y.clone()],
                symgeo_core::geom::Entity::Line(l) => vec![l.a.clone(), l.b.clone(), l.c.clone()],
                symgeo_core::geom::Entity::Circle(k) => vec![k.center.x.clone(), k.center.y.clone(), k.radius.clone()],
            };
            for (v, part) in low.iter().zip(&parts) {
                let hi = ctx.eval_numeric(part, &Env::new(), 256).unwrap();
                prop_assert!(
                    (v - hi.value).abs() <= 1e-12 * (1.0 + hi.value.abs()),
                    "{}: {} vs {}",
                    name,
                    v,
                    hi.value
                );
            }
        }
        Ok(())
    }))
}

pub fn crate_model(name: &str) -> &'static str {
    match name {
        "euler.gx" => include_str!("../../../../models/euler.gx"),
        "excircles.gx" => include_str!("../../../../models/excircles.gx"),
        "solar.gx" => include_str!("../../../../models/solar.gx"),
        "caustic.gx" => include_str!("../../../../models/caustic.gx"),
        "cardioid.gx" => include_str!("../../../../models/cardioid.gx"),
        "parallel.gx" => include_str!("../../../../models/parallel.gx"),
        _ => panic!("no model {name}"),
    }
}
