#![allow(dead_code)]

use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use axum::body::Body;
use axum::http::{Method, Request};
use axum::Router;
use http_body_util::BodyExt;
use relim_problems::Limits;
use relim_service::{router, AppState, Config, DEFAULT_DEADLINE};
use serde_json::Value;
use tower::ServiceExt;

pub const MIS: &str = "nodes: M^3 | P U^2 ; edges: M [U P] | U U";
pub const SINKLESS: &str = "nodes: O [O I]^2 ; edges: O I";

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn relim(args: &[&str]) -> Output {
    relim_with_input(args, None)
}

pub fn relim_with_input(args: &[&str], input: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_relim"))
        .args(args)
        .env_remove("RELIM_CAPS")
        .env_remove("RELIM_STORE")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("the binary runs");
    {
        let mut stdin = child.stdin.take().unwrap();
        if let Some(text) = input {
            stdin.write_all(text.as_bytes()).unwrap();
        }
    }
    let out = child.wait_with_output().unwrap();
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn service(dir: &Path) -> Router {
    let state = AppState::open(Config { store: dir.to_path_buf(), limits: Limits::default(), deadline: DEFAULT_DEADLINE })
        .unwrap();
    router(state)
}

/// Status and body of one in-process request.
pub async fn request(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (u16, String) {
    let req = Request::builder().method(method).uri(uri).header("content-type", "application/json");
    let req = match body {
        Some(b) => req.body(Body::from(b.to_string())).unwrap(),
        None => req.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status().as_u16();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

pub fn text(problem: &str) -> Value {
    serde_json::json!({ "kind": "text", "text": problem })
}
