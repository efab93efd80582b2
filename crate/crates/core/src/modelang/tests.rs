use super::*;
use crate::cas::Expr;

const EULER: &str = include_str!("../../../../models/euler.gx");

#[test]
fn euler_model_has_eleven_statements() {
    let m = parse_named("euler", EULER).unwrap();
    assert_eq!(m.statements.len(), 11);
    assert_eq!(m.name, "euler");
}

#[test]
fn ratio_measure_has_depth_two() {
    let m = parse_model(EULER).unwrap();
    let (_, e) = m.queries(QueryKind::Measure).find(|(n, _)| *n == "r").unwrap();
    assert_eq!(e.depth(), 2);
    assert_eq!(e.to_string(), "ratio(dist(J, G), dist(G, D))");
}

#[test]
fn forward_reference_is_rejected() {
    let src = "let a = 1\npoint P = intersect(l1, l2)\n";
    let e = parse_model(src).unwrap_err();
    assert_eq!((e.line, e.col), (2, 21));
    assert!(e.message.contains("undeclared"), "{e}");
}

#[test]
fn duplicate_names_are_rejected() {
    let e = parse_model("let a = 1\nlet a = 2").unwrap_err();
    assert_eq!((e.line, e.col), (2, 5));
    assert!(e.message.contains("duplicate"));
}

#[test]
fn arity_and_kind_errors() {
    let base = "let a = 3\nlet b = 4\nlet c = 5\npoint A, B, C = triangle(a, b, c)\n";
    let e = parse_model(&alloc::format!("{base}point J = centroid(A, B)")).unwrap_err();
    assert!(e.message.contains("takes 3"), "{e}");
    let e = parse_model(&alloc::format!("{base}point J = centroid(A, B, a)")).unwrap_err();
    assert!(e.message.contains("must be a point"), "{e}");
    assert_eq!((e.line, e.col), (5, 26));
    let e = parse_model(&alloc::format!("{base}point J, K = centroid(A, B, C)")).unwrap_err();
    assert!(e.message.contains("yields 1"), "{e}");
    let e = parse_model(&alloc::format!("{base}measure m = A + 1")).unwrap_err();
    assert!(e.message.contains("scalar"), "{e}");
}

#[test]
fn let_needs_a_constant_witness() {
    assert!(parse_model("let a = 1\nlet b = a").is_err());
    assert!(parse_model("let b").is_err());
    let m = parse_model("let t = pi/4 in [-pi, pi]").unwrap();
    assert_eq!(m.statements.len(), 1);
}

#[test]
fn constrain_statement() {
    let src = "let a = 3\nlet b = 4\npoint A = point(0, 0)\npoint B = point(5, 0)\n\
               constrain point C: dist(C, A) = b, dist(C, B) = a\n";
    let m = parse_model(src).unwrap();
    assert!(matches!(m.statements[4].kind, StatementKind::Constrain { .. }));
    let bad = "point A = point(0, 0)\nconstrain point C: dist(C, A) = 1";
    assert!(parse_model(bad).is_err());
}

#[test]
fn precedence() {
    let e = parse_expr("1 + 2*a^b^c - -d/e").unwrap();
    assert_eq!(e.to_string(), "1 + 2*a^b^c - -d/e");
    let e = parse_expr("-a^2").unwrap();
    assert!(matches!(e, Expr::Neg(_)));
    let e = parse_expr("2/3").unwrap();
    assert_eq!(e, Expr::Num(crate::cas::Q::new(2.into(), 3.into())));
}

#[test]
fn crlf_is_accepted() {
    let src = EULER.replace('\n', "\r\n");
    assert_eq!(parse_model(&src).unwrap().statements.len(), 11);
}

#[test]
fn round_trip_of_bundled_models() {
    for src in [
        EULER,
        include_str!("../../../../models/excircles.gx"),
        include_str!("../../../../models/solar.gx"),
        include_str!("../../../../models/caustic.gx"),
        include_str!("../../../../models/cardioid.gx"),
        include_str!("../../../../models/parallel.gx"),
    ] {
        let m = parse_model(src).unwrap();
        let printed = m.to_string();
        let again = parse_model(&printed).unwrap();
        assert!(m.same_structure(&again), "{printed}");
    }
}

#[test]
fn unexpected_end() {
    let e = parse_model("let a =").unwrap_err();
    assert_eq!((e.line, e.col), (1, 8));
    assert_eq!(e.span.start, 7);
}

#[test]
fn constants_and_degrees() {
    let v = eval_constant(&parse_expr("deg(90)").unwrap()).unwrap();
    assert!((v - core::f64::consts::FRAC_PI_2).abs() < 1e-15);
    assert_eq!(eval_constant(&parse_expr("x + 1").unwrap()), None);
}

#[test]
fn degrees_in_let_statements() {
    let m = parse_model("let phi = deg(45) in [0, deg(90)]\npoint O = point(0, 0)\nline l = ray(O, deg(90))\n");
    assert!(m.is_ok(), "{m:?}");
}
