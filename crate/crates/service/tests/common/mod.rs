#![allow(dead_code)]

use std::path::Path;
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use relim_problems::Limits;
use relim_service::{router, AppState, Config, DEFAULT_DEADLINE};
use serde_json::Value;
use tower::ServiceExt;

pub const MIS: &str = "nodes: M^3 | P U^2 ; edges: M [U P] | U U";
pub const SINKLESS: &str = "nodes: O [O I]^2 ; edges: O I";

pub fn open(dir: &Path) -> (Arc<AppState>, Router) {
    let state = AppState::open(Config { store: dir.to_path_buf(), limits: Limits::default(), deadline: DEFAULT_DEADLINE })
        .unwrap();
    let app = router(state.clone());
    (state, app)
}

pub struct Reply {
    pub status: StatusCode,
    pub text: String,
}

impl Reply {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.text).unwrap_or_else(|e| panic!("{e}: {}", self.text))
    }
}

pub async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> Reply {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    Reply { status, text: String::from_utf8(bytes.to_vec()).unwrap() }
}

pub async fn create(app: &Router, initial: Value) -> String {
    let r = call(app, Method::POST, "/sessions", Some(serde_json::json!({ "initial": initial }))).await;
    assert_eq!(r.status, StatusCode::CREATED, "{}", r.text);
    r.json()["id"].as_str().unwrap().to_string()
}

pub async fn act(app: &Router, id: &str, action: Value) -> Reply {
    call(app, Method::POST, &format!("/sessions/{id}/actions"), Some(action)).await
}

pub fn text(problem: &str) -> Value {
    serde_json::json!({ "kind": "text", "text": problem })
}
