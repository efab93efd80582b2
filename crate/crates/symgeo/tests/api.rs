use std::sync::Arc;
use std::time::Duration;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use symgeo::api::{router, AppState};
use symgeo::core::cas::Precision;
use tower::ServiceExt;

const EULER: &str = include_str!("../../../models/euler.gx");
const CAUSTIC: &str = include_str!("../../../models/caustic.gx");
const PARALLEL: &str = include_str!("../../../models/parallel.gx");

fn app() -> (Router, Arc<AppState>) {
    let st = AppState::new(64, Duration::from_secs(1800), Precision::default());
    (router(st.clone()), st)
}

async fn send(app: &Router, method: &str, uri: &str, body: &str) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() {
        Value::Null
    } else {
        serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()))
    };
    (status, v)
}

async fn create(app: &Router, src: &str) -> String {
    let (s, v) = send(app, "POST", "/models", src).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    v["id"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn health() {
    let (app, _) = app();
    let (s, v) = send(&app, "GET", "/health", "").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["status"], "ok");
}

#[tokio::test]
async fn post_euler() {
    let (app, _) = app();
    let (s, v) = send(&app, "POST", "/models", EULER).await;
    assert_eq!(s, StatusCode::CREATED);
    assert!(v["scene"]["entities"].as_array().unwrap().len() >= 6);
    let r = v["measurements"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["name"] == "r")
        .unwrap();
    assert_eq!(r["text"], "2/3");
    assert_eq!(
        v["scene"]["indeterminates"][0],
        json!({"name": "a", "value": 3.0, "range": [0.0, 20.0]})
    );
}

#[tokio::test]
async fn post_errors() {
    let (app, _) = app();
    let (s, v) = send(&app, "POST", "/models", "let a = 1 in [0, 2]\npoint P = point(a 0)\n").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(v["error"], "ParseError");
    assert_eq!((v["line"].as_u64(), v["col"].as_u64().is_some()), (Some(2), true));
    let (s, _) = send(&app, "POST", "/models", "  \n").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, v) = send(&app, "POST", "/models", "point A, B, C = triangle(1, 1, 5)\n").await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "DegenerateTriangle");
}

#[tokio::test]
async fn patch_keeps_symbolic_ratio() {
    let (app, _) = app();
    let id = create(&app, EULER).await;
    let (s, v) = send(&app, "PATCH", &format!("/models/{id}/indeterminates"), r#"{"a": 3.5}"#).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["scene"]["indeterminates"][0]["value"], 3.5);
    let (s, v) = send(&app, "GET", &format!("/models/{id}/symbolic/r"), "").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["canonicalText"], "2/3");
    assert_eq!(v["verdict"], "ProvedConstant");
    assert!((v["numericShadow"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[tokio::test]
async fn failed_patch_is_atomic() {
    let (app, _) = app();
    let id = create(&app, EULER).await;
    let (_, before) = send(&app, "GET", &format!("/models/{id}"), "").await;
    let uri = format!("/models/{id}/indeterminates");
    for (body, status, code) in [
        (r#"{"a": 30}"#, StatusCode::CONFLICT, "RangeError"),
        (r#"{"b": 3.9, "a": 10}"#, StatusCode::CONFLICT, "WitnessSingular"),
        (r#"{"zz": 1}"#, StatusCode::BAD_REQUEST, "UnknownName"),
        (r#"{"a": "x"}"#, StatusCode::BAD_REQUEST, "BadValue"),
        ("[1]", StatusCode::BAD_REQUEST, "BadJson"),
    ] {
        let (s, v) = send(&app, "PATCH", &uri, body).await;
        assert_eq!((s, v["error"].as_str().unwrap()), (status, code), "{body}");
        let (_, after) = send(&app, "GET", &format!("/models/{id}"), "").await;
        assert_eq!(after, before, "{body}");
    }
}

#[tokio::test]
async fn patch_is_idempotent() {
    let (app, _) = app();
    let id = create(&app, EULER).await;
    let uri = format!("/models/{id}/indeterminates");
    let (_, first) = send(&app, "PATCH", &uri, r#"{"a": 3.25, "c": 4.5}"#).await;
    let (_, second) = send(&app, "PATCH", &uri, r#"{"a": 3.25, "c": 4.5}"#).await;
    assert_eq!(first, second);
}

#[tokio::test]
async fn symbolic_collinearity() {
    let (app, _) = app();
    let id = create(&app, EULER).await;
    let (s, v) = send(&app, "GET", &format!("/models/{id}/symbolic/collinear"), "").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["canonicalText"], "0");
    assert_eq!(v["verdict"], "ProvedZero");
    assert_eq!(v["numericShadow"], 0.0);
    let (s, _) = send(&app, "GET", &format!("/models/{id}/symbolic/nope"), "").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn unknown_session() {
    let (app, _) = app();
    let (s, _) = send(&app, "PATCH", "/models/nope/indeterminates", r#"{"a": 1}"#).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    let (s, _) = send(&app, "GET", "/models/nope/symbolic/r", "").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn caustic_curve() {
    let (app, _) = app();
    let id = create(&app, CAUSTIC).await;
    let (s, v) = send(&app, "GET", &format!("/models/{id}/curves/caustic?samples=200"), "").await;
    assert_eq!(s, StatusCode::OK, "{v}");
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 200);
    assert!(pts.iter().all(|p| p
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c.as_f64().is_some_and(f64::is_finite))));
    assert!(v["implicit"].as_str().unwrap().ends_with("= 0"));
    assert!(v["cusps"].is_array());
}

#[tokio::test]
async fn parallel_cusp_is_the_focus() {
    let (app, _) = app();
    let id = create(&app, PARALLEL).await;
    let (s, v) = send(
        &app,
        "GET",
        &format!("/models/{id}/curves/caustic?samples=50&implicit=false"),
        "",
    )
    .await;
    assert_eq!(s, StatusCode::OK);
    assert!(v.get("implicit").is_none());
    let cusps = v["cusps"].as_array().unwrap();
    let focus = cusps.iter().find(|c| c["t"] == 0.0).unwrap();
    assert_eq!(focus["exact"], json!(["1/2", "0"]));
}

#[tokio::test]
async fn constant_locus_and_degenerate_family() {
    let (app, _) = app();
    let src = "let t = 1 in [-3.14159265, 3.14159265]\npoint O = point(0, 0)\ncircle k = circle(O, 1)\n\
               point P = on_circle(k, t)\nline mirror = tangent(k, P)\nline incident = line(O, P)\n\
               line reflected = reflect(incident, mirror)\nenvelope caustic = envelope(reflected, t)\n\
               locus still = locus(O, t)\n";
    let id = create(&app, src).await;
    let (s, v) = send(&app, "GET", &format!("/models/{id}/curves/still"), "").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["constant"], true);
    assert_eq!(v["points"], json!([[0.0, 0.0, 0.0]]));
    let (s, v) = send(&app, "GET", &format!("/models/{id}/curves/caustic"), "").await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"], "DegenerateFamily");
    let (s, _) = send(&app, "GET", &format!("/models/{id}/curves/still?samples=1"), "").await;
    assert_eq!(s, StatusCode::OK);
}

#[tokio::test]
async fn sessions_are_evicted() {
    let st = AppState::new(2, Duration::from_secs(1800), Precision::default());
    let app = router(st.clone());
    let first = create(&app, EULER).await;
    create(&app, EULER).await;
    create(&app, EULER).await;
    assert_eq!(st.len(), 2);
    let (s, _) = send(&app, "GET", &format!("/models/{first}"), "").await;
    assert_eq!(s, StatusCode::NOT_FOUND);

    let st = AppState::new(8, Duration::from_millis(50), Precision::default());
    let app = router(st.clone());
    let id = create(&app, EULER).await;
    tokio::time::sleep(Duration::from_millis(120)).await;
    let (s, _) = send(&app, "GET", &format!("/models/{id}"), "").await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert!(st.is_empty());
}

#[tokio::test]
async fn cors_preflight() {
    let (app, _) = app();
    let req = Request::builder()
        .method("OPTIONS")
        .uri("/models")
        .header("origin", "http://localhost:5173")
        .header("access-control-request-method", "POST")
        .body(Body::empty())
        .unwrap();
    let resp = app.oneshot(req).await.unwrap();
    assert!(resp.status().is_success());
    assert_eq!(resp.headers()["access-control-allow-origin"], "*");
}
