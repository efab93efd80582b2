//! API and CLI documents validate against the schemas shipped in docs/.

use std::path::PathBuf;
use std::process::Command;
use std::time::Duration;

use axum::body::Body;
use axum::http::Request;
use http_body_util::BodyExt;
use jsonschema::{Retrieve, Uri, Validator};
use serde_json::Value;
use symgeo::api::{router, AppState};
use symgeo::core::cas::Precision;
use tower::ServiceExt;

const NAMES: [&str; 6] = ["error", "scene", "measurement", "model", "symbolic", "curve"];

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn schema(name: &str) -> Value {
    let path = root().join(format!("docs/schemas/{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Resolves `urn:symgeo:schema:<name>` to the file in docs/schemas.
struct Local;

impl Retrieve for Local {
    fn retrieve(&self, uri: &Uri<String>) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri
            .as_str()
            .strip_prefix("urn:symgeo:schema:")
            .ok_or("not a symgeo schema")?;
        let name = name.split('#').next().unwrap_or(name);
        NAMES
            .contains(&name)
            .then(|| schema(name))
            .ok_or_else(|| format!("no schema {name}").into())
    }
}

fn validator(name: &str) -> Validator {
    jsonschema::options()
        .with_retriever(Local)
        .build(&schema(name))
        .unwrap()
}

fn check(name: &str, doc: &Value) {
    let v = validator(name);
    let errors: Vec<String> = v
        .iter_errors(doc)
        .map(|e| format!("{} at {}", e, e.instance_path()))
        .collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}\n{doc}");
}

async fn send(app: &axum::Router, method: &str, uri: &str, body: &str) -> Value {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .body(Body::from(body.to_string()))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    serde_json::from_slice(&resp.into_body().collect().await.unwrap().to_bytes()).unwrap()
}

fn model(name: &str) -> String {
    std::fs::read_to_string(root().join("models").join(name)).unwrap()
}

#[test]
fn schemas_are_valid() {
    for name in NAMES {
        validator(name);
    }
    let bad = serde_json::json!({"scene": {"entities": [{"name": "A", "kind": "blob", "values": [0, 0]}], "indeterminates": []}, "measurements": []});
    assert!(!validator("model").is_valid(&bad));
    let bad = serde_json::json!({"name": "r", "query": "measure", "verdict": "Maybe"});
    assert!(!validator("measurement").is_valid(&bad));
}

#[tokio::test]
async fn api_documents_match_their_schemas() {
    let app = router(AppState::new(8, Duration::from_secs(60), Precision::default()));
    let created = send(&app, "POST", "/models", &model("euler.gx")).await;
    check("model", &created);
    let id = created["id"].as_str().unwrap();
    check("model", &send(&app, "GET", &format!("/models/{id}"), "").await);
    check(
        "model",
        &send(&app, "PATCH", &format!("/models/{id}/indeterminates"), r#"{"a": 3.5}"#).await,
    );
    check(
        "error",
        &send(&app, "PATCH", &format!("/models/{id}/indeterminates"), r#"{"a": 99}"#).await,
    );
    for q in ["r", "collinear", "r_const"] {
        check(
            "symbolic",
            &send(&app, "GET", &format!("/models/{id}/symbolic/{q}"), "").await,
        );
    }
    check("error", &send(&app, "POST", "/models", "point P = point(1 2)\n").await);

    let created = send(&app, "POST", "/models", &model("caustic.gx")).await;
    check("model", &created);
    let id = created["id"].as_str().unwrap();
    for q in ["caustic", "contact"] {
        check(
            "curve",
            &send(&app, "GET", &format!("/models/{id}/curves/{q}?samples=40"), "").await,
        );
    }
    let created = send(&app, "POST", "/models", &model("parallel.gx")).await;
    let id = created["id"].as_str().unwrap();
    check(
        "curve",
        &send(&app, "GET", &format!("/models/{id}/curves/caustic?samples=40"), "").await,
    );

    // failed queries carry an error object inside the measurement list
    let src = "let t = 1 in [-3, 3]\npoint O = point(0, 0)\nlocus still = locus(O, t)\nmeasure bad = 1/(t - t)\n";
    let created = send(&app, "POST", "/models", src).await;
    check("model", &created);
    let id = created["id"].as_str().unwrap();
    check(
        "curve",
        &send(&app, "GET", &format!("/models/{id}/curves/still"), "").await,
    );
}

#[test]
fn cli_documents_match_their_schemas() {
    let run = |args: &[&str]| -> Value {
        let out = Command::new(env!("CARGO_BIN_EXE_symgeo")).args(args).output().unwrap();
        serde_json::from_slice(&out.stdout).unwrap()
    };
    for m in ["euler.gx", "excircles.gx", "solar.gx", "caustic.gx"] {
        let path = root().join("models").join(m);
        check("model", &run(&["query", path.to_str().unwrap(), "--json"]));
    }
    let path = root().join("models/cardioid.gx");
    check(
        "curve",
        &run(&[
            "curve",
            path.to_str().unwrap(),
            "caustic",
            "--format",
            "json",
            "--samples",
            "30",
        ]),
    );
}
