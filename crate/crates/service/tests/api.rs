mod common;

use std::time::Duration;

use axum::http::{Method, StatusCode};
use common::{act, call, create, open, text, MIS, SINKLESS};
use relim_family::{build_family_problem, FamilyVector};
use relim_problems::{format_problem, is_problem_relaxation, parse_problem, Label, Limits, Problem};
use relim_service::{router, AppState, Config};
use serde_json::json;

fn snapshot(v: &serde_json::Value) -> Problem {
    parse_problem(v.as_str().unwrap()).unwrap()
}

#[tokio::test]
async fn mis_session_has_three_labels() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, text(MIS)).await;
    let view = call(&app, Method::GET, &format!("/sessions/{id}"), None).await.json();
    let p = snapshot(&view["snapshot"]);
    assert_eq!(p.labels(), &[Label::plain("M"), Label::plain("P"), Label::plain("U")]);
    assert_eq!(view["length"], 1);
    assert_eq!(view["cursor"], 0);
    assert!(dir.path().join(format!("{id}.json")).exists());
}

#[tokio::test]
async fn stepping_pi3_returns_pi3() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, json!({ "kind": "family", "delta": 3, "z": [3] })).await;
    let pi3 = build_family_problem(3, &FamilyVector::new(vec![3]).unwrap()).unwrap();
    let r = act(&app, &id, json!({ "op": "step", "first": { "kind": "union" }, "second": { "kind": "intersection" } })).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text);
    let body = r.json();
    assert_eq!(body["index"], 1);
    assert_eq!(body["result"]["summary"]["fixed_point"], true);
    assert!(snapshot(&body["result"]["snapshot"]).same_concrete(&pi3, &Limits::default()).unwrap());
    let check = act(&app, &id, json!({ "op": "fixed-point-check", "first": { "kind": "union" }, "second": { "kind": "intersection" } })).await;
    assert_eq!(check.json()["result"]["summary"]["is_fixed_point"], true);
}

#[tokio::test]
async fn malformed_text_is_unprocessable() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let r = call(&app, Method::POST, "/sessions", Some(json!({ "initial": text("nodes: A^3 ; edges: A [") }))).await;
    assert_eq!(r.status, StatusCode::UNPROCESSABLE_ENTITY);
    let body = r.json();
    assert_eq!(body["code"], "parse_error");
    assert!(body["details"]["line"].is_u64());
    assert!(body["details"]["column"].is_u64());
    assert!(body["message"].as_str().unwrap().len() > 5);
    let bad_json = call(&app, Method::POST, "/sessions", Some(json!({ "initial": 5 }))).await;
    assert_eq!(bad_json.status, StatusCode::BAD_REQUEST);
    assert_eq!(bad_json.json()["code"], "bad_request");
}

#[tokio::test]
async fn unknown_sessions_are_not_found() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    for uri in ["/sessions/00000000-0000-0000-0000-000000000000", "/sessions/nope", "/sessions/nope/export"] {
        let r = call(&app, Method::GET, uri, None).await;
        assert_eq!(r.status, StatusCode::NOT_FOUND);
        assert_eq!(r.json()["code"], "not_found");
    }
    let r = act(&app, "00000000-0000-0000-0000-000000000000", json!({ "op": "re" })).await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn merges_produce_relaxations() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, text(MIS)).await;
    let r = act(&app, &id, json!({ "op": "relax", "actions": [{ "action": "merge", "from": "P", "into": "U" }] })).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text);
    let after = snapshot(&r.json()["result"]["snapshot"]);
    let before = parse_problem(MIS).unwrap();
    let map = |l: &Label| if *l == Label::plain("P") { Label::plain("U") } else { l.clone() };
    assert!(is_problem_relaxation(&before, &after, map, &Limits::default()).unwrap());
    // Merging an unknown label is an invalid action.
    let bad = act(&app, &id, json!({ "op": "relax", "actions": [{ "action": "merge", "from": "Q", "into": "U" }] })).await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST, "{}", bad.text);
}

#[tokio::test]
async fn simulations_attach_solution_and_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, text(MIS)).await;
    let instance = json!({
        "graph": { "kind": "random-tree", "delta": 4, "n": 60 },
        "coloring": { "kind": "proper", "m": 5 },
        "seed": 3
    });
    let r = act(&app, &id, json!({ "op": "simulate", "instance": instance, "algorithm": "greedy-arbdefective", "defects": [1, 1, 0] })).await;
    assert_eq!(r.status, StatusCode::OK, "{}", r.text);
    let s = &r.json()["result"]["summary"];
    assert_eq!(s["verdict"]["ok"], true);
    assert_eq!(s["solution"]["colors"].as_array().unwrap().len(), 60);
    assert!(s["rounds"].as_u64().unwrap() <= 5);
    // The snapshot is unchanged.
    assert_eq!(snapshot(&r.json()["result"]["snapshot"]), parse_problem(MIS).unwrap());

    let mis = act(&app, &id, json!({ "op": "simulate", "instance": instance, "algorithm": "mis", "reduce": 4 })).await;
    let s = &mis.json()["result"]["summary"];
    assert_eq!(s["verdict"]["ok"], true);
    assert_eq!(s["reduction"]["verdict"]["ok"], true);
    assert_eq!(s["reduction"]["family"]["z"], json!([1, 0]));

    let solution = s["solution"].clone();
    let v = act(&app, &id, json!({ "op": "verify", "instance": instance, "check": { "kind": "ruling", "alpha": 0, "c": 1, "beta": 1 }, "solution": solution })).await;
    assert_eq!(v.json()["result"]["summary"]["ok"], true);
    let labeling = s["reduction"]["family"]["labeling"].clone();
    let v = act(&app, &id, json!({ "op": "verify", "instance": instance, "check": { "kind": "family-labeling", "delta": 4, "z": [1, 0] }, "solution": labeling })).await;
    assert_eq!(v.json()["result"]["summary"]["ok"], true, "{}", v.text);

    let bad = act(&app, &id, json!({ "op": "simulate", "instance": instance, "algorithm": "greedy-arbdefective", "defects": [0, 0] })).await;
    assert_eq!(bad.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn list_is_sorted_by_update_time() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let mut ids = Vec::new();
    for name in ["a", "b", "c"] {
        let r = call(&app, Method::POST, "/sessions", Some(json!({ "initial": text(MIS), "name": name }))).await;
        ids.push(r.json()["id"].as_str().unwrap().to_string());
        tokio::time::sleep(Duration::from_millis(5)).await;
    }
    let list = call(&app, Method::GET, "/sessions", None).await.json();
    let names: Vec<&str> = list.as_array().unwrap().iter().map(|s| s["name"].as_str().unwrap()).collect();
    assert_eq!(names, vec!["c", "b", "a"]);
    act(&app, &ids[0], json!({ "op": "zero-round" })).await;
    let list = call(&app, Method::GET, "/sessions", None).await.json();
    assert_eq!(list[0]["name"], "a");
}

#[tokio::test]
async fn seek_and_branch_on_edit() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, text(SINKLESS)).await;
    act(&app, &id, json!({ "op": "re" })).await;
    act(&app, &id, json!({ "op": "rere" })).await;
    let view = call(&app, Method::GET, &format!("/sessions/{id}"), None).await.json();
    assert_eq!(view["length"], 3);
    let r = call(&app, Method::POST, &format!("/sessions/{id}/seek"), Some(json!({ "cursor": 0 }))).await.json();
    assert_eq!(r["cursor"], 0);
    assert_eq!(r["length"], 3);
    assert_eq!(snapshot(&r["snapshot"]), parse_problem(SINKLESS).unwrap());
    let exported = call(&app, Method::GET, &format!("/sessions/{id}/export"), None).await;
    assert_eq!(exported.text, format_problem(&parse_problem(SINKLESS).unwrap()));
    let first = call(&app, Method::GET, &format!("/sessions/{id}/export?cursor=1"), None).await;
    assert!(first.text.contains("nodes:"));
    // A new action at cursor 0 replaces the two later entries.
    act(&app, &id, json!({ "op": "diagram", "side": "edge" })).await;
    let view = call(&app, Method::GET, &format!("/sessions/{id}"), None).await.json();
    assert_eq!(view["length"], 2);
    assert_eq!(view["history"][1]["op"], "diagram");
    let out = call(&app, Method::POST, &format!("/sessions/{id}/seek"), Some(json!({ "cursor": 9 }))).await;
    assert_eq!(out.status, StatusCode::BAD_REQUEST);
    let replay = call(&app, Method::GET, &format!("/sessions/{id}/replay"), None).await.json();
    assert_eq!(replay["ok"], true);
    assert_eq!(replay["entries"], 2);
}

#[tokio::test]
async fn sessions_survive_a_restart() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, text(MIS)).await;
    act(&app, &id, json!({ "op": "re" })).await;
    let before = call(&app, Method::GET, &format!("/sessions/{id}"), None).await.text;
    drop(app);
    let (_, again) = open(dir.path());
    let after = call(&again, Method::GET, &format!("/sessions/{id}"), None).await.text;
    assert_eq!(before, after);
}

#[tokio::test]
async fn corrupt_files_are_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let good = create(&app, text(MIS)).await;
    let other = create(&app, text(SINKLESS)).await;
    drop(app);
    std::fs::write(dir.path().join(format!("{other}.json")), b"{\"id\": truncated").unwrap();
    std::fs::write(dir.path().join("notes.txt"), b"ignored").unwrap();
    let (state, app) = open(dir.path());
    assert_eq!(state.load_warnings().len(), 1);
    assert!(state.load_warnings()[0].contains(&other));
    assert_eq!(call(&app, Method::GET, &format!("/sessions/{good}"), None).await.status, StatusCode::OK);
    assert_eq!(call(&app, Method::GET, &format!("/sessions/{other}"), None).await.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn unknown_fields_are_tolerated() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, text(MIS)).await;
    act(&app, &id, json!({ "op": "zero-round" })).await;
    drop(app);
    let path = dir.path().join(format!("{id}.json"));
    let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    v["future_field"] = json!({ "x": 1 });
    v["history"][1]["annotation"] = json!("later");
    std::fs::write(&path, v.to_string()).unwrap();
    let (state, app) = open(dir.path());
    assert!(state.load_warnings().is_empty());
    let view = call(&app, Method::GET, &format!("/sessions/{id}"), None).await.json();
    assert_eq!(view["length"], 2);
}

#[tokio::test]
async fn caps_are_conflicts_with_partial_stats() {
    let dir = tempfile::tempdir().unwrap();
    let limits: Limits = "re_arity=1".parse().unwrap();
    let state = AppState::open(Config { store: dir.path().into(), limits, deadline: Duration::from_secs(60) }).unwrap();
    let app = router(state);
    let id = create(&app, text(SINKLESS)).await;
    let r = act(&app, &id, json!({ "op": "re" })).await;
    assert_eq!(r.status, StatusCode::CONFLICT, "{}", r.text);
    let body = r.json();
    assert_eq!(body["code"], "cap_exceeded");
    assert!(body["details"]["partial"].is_string());
    // The failed action leaves the history unchanged.
    let view = call(&app, Method::GET, &format!("/sessions/{id}"), None).await.json();
    assert_eq!(view["length"], 1);
}

#[tokio::test]
async fn deadlines_are_conflicts() {
    let dir = tempfile::tempdir().unwrap();
    let state = AppState::open(Config { store: dir.path().into(), limits: Limits::default(), deadline: Duration::ZERO }).unwrap();
    let app = router(state);
    let id = create(&app, json!({ "kind": "family", "delta": 3, "z": [1, 1] })).await;
    let r = act(&app, &id, json!({ "op": "simulate", "instance": { "graph": { "kind": "random-tree", "delta": 3, "n": 5 }, "coloring": { "kind": "proper", "m": 3 } }, "algorithm": "mis" })).await;
    assert_eq!(r.status, StatusCode::CONFLICT, "{}", r.text);
    assert_eq!(r.json()["code"], "deadline_exceeded");
}

#[tokio::test]
async fn invalid_actions_are_bad_requests() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, text(MIS)).await;
    let r = act(&app, &id, json!({ "op": "rename", "policy": { "kind": "union" } })).await;
    // MIS has no set-labels, so renaming leaves it unchanged.
    assert_eq!(r.status, StatusCode::OK);
    let re = act(&app, &id, json!({ "op": "re" })).await;
    assert_eq!(re.status, StatusCode::OK);
    let r = act(&app, &id, json!({ "op": "rename", "policy": { "kind": "union" } })).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["code"], "invalid");
    let r = act(&app, &id, json!({ "op": "teleport" })).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let r = act(&app, &id, json!({ "op": "sequence", "k": 0, "policy": { "kind": "rename" } })).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn calculators_and_sequences() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, json!({ "kind": "family", "delta": 3, "z": [1, 0] })).await;
    let r = act(&app, &id, json!({ "op": "calculate", "calc": "lower-bound", "delta": 10, "z": [1, 1] })).await;
    assert_eq!(r.json()["result"]["summary"]["display"], "7", "{}", r.text);
    let r = act(&app, &id, json!({ "op": "calculate", "calc": "ruling-set", "delta": 16, "alpha": 0, "c": 1, "beta": 2 })).await;
    assert_eq!(r.json()["result"]["summary"]["display"], "4");
    let r = act(&app, &id, json!({ "op": "calculate", "calc": "lifting", "which": "multi-step", "delta": 3, "f": 4.0, "p": 0.5, "j": 0 })).await;
    assert_eq!(r.json()["result"]["summary"]["value"], 0.5, "{}", r.text);
    let r = act(&app, &id, json!({ "op": "calculate", "calc": "prefix", "z": [1, 0, 0], "j": 2 })).await;
    assert_eq!(r.json()["result"]["summary"]["prefix"], json!(["1", "2", "3"]));
    let r = act(&app, &id, json!({ "op": "sequence", "k": 3, "policy": { "kind": "family", "delta": 3, "z": [1, 0] } })).await;
    let s = &r.json()["result"]["summary"];
    assert_eq!(s["completed"], 2, "{}", r.text);
    assert_eq!(s["error"]["code"], "invalid");
    let want = build_family_problem(3, &FamilyVector::new(vec![1, 2]).unwrap()).unwrap();
    assert!(snapshot(&r.json()["result"]["snapshot"]).same_concrete(&want, &Limits::default()).unwrap());
}

#[tokio::test]
async fn stateless_run_matches_the_session_result() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, text(SINKLESS)).await;
    let action = json!({ "op": "diagram", "side": "node" });
    let in_session = act(&app, &id, action.clone()).await.json();
    let run = call(&app, Method::POST, "/run", Some(json!({ "initial": text(SINKLESS), "action": action }))).await;
    assert_eq!(run.status, StatusCode::OK);
    assert_eq!(run.json(), in_session["result"]);
    assert!(run.text.ends_with("}\n"));
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_actions_on_one_session_are_serialized() {
    let dir = tempfile::tempdir().unwrap();
    let (_, app) = open(dir.path());
    let id = create(&app, text(MIS)).await;
    let mut tasks = Vec::new();
    for _ in 0..12 {
        let app = app.clone();
        let id = id.clone();
        tasks.push(tokio::spawn(async move { act(&app, &id, json!({ "op": "zero-round" })).await.json()["index"].as_u64().unwrap() }));
    }
    let mut indices = Vec::new();
    for t in tasks {
        indices.push(t.await.unwrap());
    }
    indices.sort_unstable();
    assert_eq!(indices, (1..=12).collect::<Vec<u64>>());
    let view = call(&app, Method::GET, &format!("/sessions/{id}"), None).await.json();
    assert_eq!(view["length"], 13);
}
