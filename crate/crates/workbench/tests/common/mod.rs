#![allow(dead_code)]

use std::path::PathBuf;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use tower::ServiceExt;

pub fn sample(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples").join(name)
}

pub fn sample_text(name: &str) -> String {
    std::fs::read_to_string(sample(name)).unwrap()
}

pub fn sample_json(name: &str) -> serde_json::Value {
    serde_json::from_str(&sample_text(name)).unwrap()
}

pub async fn send(app: &Router, method: Method, uri: &str, body: Option<&serde_json::Value>) -> (StatusCode, String) {
    let request = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(match body {
            Some(v) => Body::from(v.to_string()),
            None => Body::empty(),
        })
        .unwrap();
    let response = app.clone().oneshot(request).await.unwrap();
    let status = response.status();
    let bytes = response.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

pub async fn send_json(
    app: &Router,
    method: Method,
    uri: &str,
    body: Option<&serde_json::Value>,
) -> (StatusCode, serde_json::Value) {
    let (status, text) = send(app, method, uri, body).await;
    (status, serde_json::from_str(&text).unwrap_or(serde_json::Value::Null))
}

pub fn bow_tie() -> serde_json::Value {
    let mut room = sample_json("rectangle.json");
    room["outline"] = serde_json::json!([[0.0, 0.0], [4.0, 3.0], [4.0, 0.0], [0.0, 3.0]]);
    room
}

pub fn corridor() -> serde_json::Value {
    let mut room = sample_json("rectangle.json");
    room["function"] = serde_json::json!("corridor");
    room
}
