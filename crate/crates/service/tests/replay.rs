mod common;

use axum::http::{Method, StatusCode};
use common::{act, call, create, open, text, MIS, SINKLESS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn random_initial(rng: &mut ChaCha8Rng) -> Value {
    match rng.gen_range(0..5) {
        0 => text(MIS),
        1 => text(SINKLESS),
        2 => json!({ "kind": "family", "delta": 3, "z": [1, 0] }),
        3 => json!({ "kind": "family", "delta": 3, "z": [3] }),
        _ => json!({ "kind": "variant", "delta": 3 }),
    }
}

fn random_action(rng: &mut ChaCha8Rng) -> Value {
    let policies = ["keep", "union", "intersection"];
    match rng.gen_range(0..9) {
        0 => json!({ "op": "re" }),
        1 => json!({ "op": "rere" }),
        2 => json!({
            "op": "step",
            "first": { "kind": policies[rng.gen_range(0..3)] },
            "second": { "kind": policies[rng.gen_range(0..3)] }
        }),
        3 => json!({ "op": "rename", "policy": { "kind": policies[rng.gen_range(0..3)] } }),
        4 => json!({ "op": "diagram", "side": if rng.gen_bool(0.5) { "node" } else { "edge" } }),
        5 => json!({ "op": "zero-round" }),
        6 => json!({ "op": "calculate", "calc": "lower-bound", "delta": rng.gen_range(3..12), "z": [rng.gen_range(1..3), 0] }),
        7 => json!({ "op": "family-build", "delta": 3, "z": [rng.gen_range(0..3), rng.gen_range(0..2)] }),
        _ => json!({
            "op": "simulate",
            "instance": {
                "graph": { "kind": "random-tree", "delta": 3, "n": rng.gen_range(2..20) },
                "coloring": { "kind": "proper", "m": 4 },
                "seed": rng.gen::<u32>()
            },
            "algorithm": "mis",
            "reduce": 3
        }),
    }
}

#[tokio::test]
async fn randomized_sessions_replay_identically_after_reload() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut views = Vec::new();
    {
        let (_, app) = open(dir.path());
        for _ in 0..50 {
            let id = create(&app, random_initial(&mut rng)).await;
            for _ in 0..rng.gen_range(1..6) {
                if rng.gen_bool(0.15) {
                    let length = call(&app, Method::GET, &format!("/sessions/{id}"), None).await.json()["length"]
                        .as_u64()
                        .unwrap();
                    let cursor = rng.gen_range(0..length);
                    call(&app, Method::POST, &format!("/sessions/{id}/seek"), Some(json!({ "cursor": cursor }))).await;
                }
                let r = act(&app, &id, random_action(&mut rng)).await;
                assert!(r.status == StatusCode::OK || r.status.is_client_error(), "{}", r.text);
            }
            let view = call(&app, Method::GET, &format!("/sessions/{id}"), None).await.text;
            let export = call(&app, Method::GET, &format!("/sessions/{id}/export"), None).await.text;
            views.push((id, view, export));
        }
    }
    let (state, app) = open(dir.path());
    assert!(state.load_warnings().is_empty());
    for (id, view, export) in views {
        assert_eq!(call(&app, Method::GET, &format!("/sessions/{id}"), None).await.text, view);
        assert_eq!(call(&app, Method::GET, &format!("/sessions/{id}/export"), None).await.text, export);
        let replay = call(&app, Method::GET, &format!("/sessions/{id}/replay"), None).await.json();
        assert_eq!(replay["ok"], true, "{replay}");
        assert_eq!(replay["diffs"], json!([]));
        // Replaying each recorded action through the stateless endpoint gives the same snapshots.
        let stored: Value = serde_json::from_str(&view).unwrap();
        let full: Value =
            serde_json::from_slice(&std::fs::read(dir.path().join(format!("{id}.json"))).unwrap()).unwrap();
        let history = full["history"].as_array().unwrap();
        for k in 1..history.len() {
            let run = call(
                &app,
                Method::POST,
                "/run",
                Some(json!({ "initial": { "kind": "text", "text": history[k - 1]["snapshot"] }, "action": history[k]["action"] })),
            )
            .await
            .json();
            assert_eq!(run["snapshot"], history[k]["snapshot"]);
            assert_eq!(run["summary"], history[k]["summary"]);
        }
        assert_eq!(stored["length"].as_u64().unwrap() as usize, history.len());
    }
}
