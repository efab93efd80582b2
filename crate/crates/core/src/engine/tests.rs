use super::*;
use crate::cas::Q;
use crate::geom::GeomError;

const EULER: &str = include_str!("../../../../models/euler.gx");
const EXCIRCLES: &str = include_str!("../../../../models/excircles.gx");
const SOLAR: &str = include_str!("../../../../models/solar.gx");
const PARALLEL: &str = include_str!("../../../../models/parallel.gx");

fn measured(m: &Model, name: &str) -> f64 {
    match &m.result(name).unwrap().outcome {
        Ok(Outcome::Measurement(x)) => x.shadow.value,
        other => panic!("{name}: {other:?}"),
    }
}

fn proof<'a>(m: &'a Model, name: &str) -> &'a Proof {
    match &m.result(name).unwrap().outcome {
        Ok(Outcome::Proof(p)) => p,
        other => panic!("{name}: {other:?}"),
    }
}

#[test]
fn euler_line() {
    let m = Model::build("euler", EULER).unwrap();
    assert_eq!(proof(&m, "collinear").verdict.status, VerdictStatus::ProvedZero);
    let c = proof(&m, "r_const");
    assert_eq!(
        c.verdict.status,
        VerdictStatus::ProvedConstant(RatFun::from_q(Q::new(2.into(), 3.into())))
    );
    assert!((measured(&m, "r") - 2.0 / 3.0).abs() < 1e-12);
    assert!(m.all_proofs_hold());
    assert_eq!(m.measurement_kind("r"), Some(MeasureKind::Ratio));
}

#[test]
fn radii_of_a_right_triangle() {
    let m = Model::build("excircles", EXCIRCLES).unwrap();
    for (name, want) in [
        ("r", 1.0),
        ("ra", 2.0),
        ("rb", 3.0),
        ("rc", 6.0),
        ("K", 6.0),
        ("product", 36.0),
    ] {
        assert!((measured(&m, name) - want).abs() < 1e-12, "{name}");
    }
    assert!(m.all_proofs_hold());
}

#[test]
fn moving_witnesses_keeps_results_symbolic() {
    let mut m = Model::build("excircles", EXCIRCLES).unwrap();
    let before = m.symbolic("r").unwrap().text;
    m.set_witnesses(&[("a", 5.0), ("b", 12.0), ("c", 13.0)]).unwrap();
    assert_eq!(m.symbolic("r").unwrap().text, before);
    assert!((measured(&m, "r") - 2.0).abs() < 1e-12);
    assert!((measured(&m, "rc") - 15.0).abs() < 1e-12);
}

#[test]
fn singular_witness_leaves_model_unchanged() {
    let mut m = Model::build("euler", EULER).unwrap();
    let err = m.set_witnesses(&[("a", 10.0)]).unwrap_err();
    assert!(matches!(
        err,
        EngineError::Geom {
            error: GeomError::WitnessSingular(_),
            ..
        }
    ));
    assert_eq!(m.geom.ctx.witness(m.geom.ctx.id("a").unwrap()), Some(3.0));
    assert!((measured(&m, "r") - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn out_of_range_witness() {
    let mut m = Model::build("euler", EULER).unwrap();
    let err = m.set_witnesses(&[("a", 25.0)]).unwrap_err();
    assert_eq!(err.code(), "RangeError");
}

#[test]
fn solar_optimum_is_two_thirds_of_elevation() {
    let m = Model::build("solar", SOLAR).unwrap();
    match &m.result("best").unwrap().outcome {
        Ok(Outcome::Solution(s)) => {
            assert!(s.exact.is_some());
            assert!((s.value - 0.6).abs() < 1e-12, "{}", s.value);
        }
        other => panic!("{other:?}"),
    }
    let report = m.symbolic("best").unwrap();
    assert_eq!(report.text, "2*phi/3");
}

#[test]
fn envelope_query_yields_a_curve() {
    let m = Model::build("parallel", PARALLEL).unwrap();
    let c = m.curve("caustic").unwrap();
    assert!(c.family.is_some());
    let (x, y) = c.curve.eval(&m.geom.ctx, 0.0).unwrap();
    assert!((x - 0.5).abs() < 1e-9 && y.abs() < 1e-9);
}

#[test]
fn query_errors_stay_local() {
    let src = "let a = 1 in [0, 5]\npoint P = point(a, 0)\npoint Q = point(a, 1)\n\
               measure bad = ratio(1, dist(P, P))\nmeasure good = dist(P, Q)\n";
    let m = Model::build("local", src).unwrap();
    assert_eq!(
        m.result("bad").unwrap().outcome.as_ref().unwrap_err().code(),
        "DivisionByZeroMeasure"
    );
    assert!((measured(&m, "good") - 1.0).abs() < 1e-12);
}

#[test]
fn constant_locus_is_reported() {
    let src = "let t = 1 in [0, 3]\npoint O = point(0, 0)\npoint M = point(t, 0)\nlocus l = locus(O, t)\n";
    let m = Model::build("still", src).unwrap();
    assert!(matches!(m.result("l").unwrap().outcome, Ok(Outcome::ConstantPoint(_))));
}

#[test]
fn constrained_point_from_two_distances() {
    let src = "let a = 3 in [1, 10]\nlet b = 4 in [1, 10]\nlet c = 5 in [1, 10]\n\
               point A = point(0, 0)\npoint B = point(c, 0)\n\
               constrain point P: dist(P, A) = b, dist(P, B) = a\n\
               measure h = y(P)\n";
    let m = Model::build("constrain", src).unwrap();
    assert!((measured(&m, "h") - 2.4).abs() < 1e-12);
}

#[test]
fn solve_linear_equation() {
    let src = "let a = 1 in [0, 10]\nsolve s = solve(2*a - 6, a)\n";
    let m = Model::build("solve", src).unwrap();
    match &m.result("s").unwrap().outcome {
        Ok(Outcome::Solution(s)) => assert_eq!(s.value, 3.0),
        other => panic!("{other:?}"),
    }
}

#[test]
fn errors_carry_spans() {
    let src = "let a = 1 in [0, 10]\npoint A = point(0, 0)\npoint B = point(0, 0)\nline l = line(A, B)\n";
    let err = Model::build("bad", src).unwrap_err();
    assert_eq!(err.code(), "CoincidentPoints");
    assert_eq!(err.span().unwrap().line, 4);
}

#[test]
fn degrees_in_witnesses_and_angles() {
    let src = "let phi = deg(45) in [0, deg(90)]\npoint O = point(0, 0)\nline l = ray(O, deg(90))\n\
               measure m = angle(l)\nmeasure bad = deg(phi)\n";
    let m = Model::build("deg", src).unwrap();
    let (phi, _) = m.indeterminates().into_iter().next().unwrap();
    assert_eq!(phi, "phi");
    assert!((m.geom.ctx.witness(m.indeterminates()[0].1).unwrap() - core::f64::consts::FRAC_PI_4).abs() < 1e-15);
    assert_eq!(
        m.result("bad").unwrap().outcome.as_ref().unwrap_err().code(),
        "Unsupported"
    );
}
