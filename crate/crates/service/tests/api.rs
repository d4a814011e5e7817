use std::sync::Arc;

use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use axum::Router;
use evidiff_core::fixtures::{asia8, chain3};
use evidiff_core::model::serialize_network;
use evidiff_service::{router, SessionStore};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

struct Reply {
    status: StatusCode,
    content_type: Option<String>,
    body: Vec<u8>,
}

impl Reply {
    fn json(&self) -> Value {
        serde_json::from_slice(&self.body).expect("JSON body")
    }
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<String>) -> Reply {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header(header::CONTENT_TYPE, "application/json");
    }
    let req = req.body(body.map_or_else(Body::empty, Body::from)).unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let content_type = res
        .headers()
        .get(header::CONTENT_TYPE)
        .map(|v| v.to_str().unwrap().to_owned());
    let body = res.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply {
        status,
        content_type,
        body,
    }
}

fn app(caching: bool) -> Router {
    router(Arc::new(SessionStore::new(caching)))
}

async fn session(app: &Router, doc: String) -> String {
    let r = call(app, "POST", "/sessions", Some(doc)).await;
    assert_eq!(r.status, StatusCode::CREATED);
    r.json()["id"].as_str().unwrap().to_owned()
}

#[tokio::test]
async fn network_round_trips() {
    let app = app(true);
    let doc = serialize_network(&asia8());
    let id = session(&app, doc.clone()).await;
    let r = call(&app, "GET", &format!("/sessions/{id}/network"), None).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(String::from_utf8(r.body).unwrap(), doc);
}

#[tokio::test]
async fn unknown_session_is_404() {
    let app = app(true);
    for uri in [
        "/sessions/nope/diff",
        "/sessions/00000000-0000-0000-0000-000000000000/scene",
    ] {
        assert_eq!(call(&app, "GET", uri, None).await.status, StatusCode::NOT_FOUND);
    }
    let r = call(
        &app,
        "PUT",
        "/sessions/00000000-0000-0000-0000-000000000000/threshold",
        Some(r#"{"percent": 20}"#.into()),
    )
    .await;
    assert_eq!(r.status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn bad_evidence_is_400_with_the_name() {
    let app = app(true);
    let id = session(&app, serialize_network(&asia8())).await;
    let r = call(
        &app,
        "PUT",
        &format!("/sessions/{id}/evidence/2"),
        Some(r#"{"Smoking": "sometimes"}"#.into()),
    )
    .await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["name"], "Smoking");

    let r = call(
        &app,
        "PUT",
        &format!("/sessions/{id}/evidence/1"),
        Some(r#"{"Age": "Ancient"}"#.into()),
    )
    .await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["name"], "Age");

    let r = call(&app, "PUT", &format!("/sessions/{id}/evidence/3"), Some("{}".into())).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    let r = call(&app, "PUT", &format!("/sessions/{id}/threshold"), Some(r#"{"percent": 140}"#.into())).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn impossible_evidence_is_409_and_changes_nothing() {
    let app = app(true);
    let id = session(&app, serialize_network(&asia8())).await;
    let before = call(&app, "GET", &format!("/sessions/{id}/diff"), None).await.body;
    let r = call(
        &app,
        "PUT",
        &format!("/sessions/{id}/evidence/2"),
        Some(r#"{"Tuberculosis": "yes", "TbOrCancer": "no"}"#.into()),
    )
    .await;
    assert_eq!(r.status, StatusCode::CONFLICT);
    assert_eq!(r.json()["set"], 2);
    let after = call(&app, "GET", &format!("/sessions/{id}/diff"), None).await.body;
    assert_eq!(before, after);
}

#[tokio::test]
async fn equal_sets_have_zero_relevance() {
    let app = app(true);
    let id = session(&app, serialize_network(&asia8())).await;
    for side in [1, 2] {
        let r = call(
            &app,
            "PUT",
            &format!("/sessions/{id}/evidence/{side}"),
            Some(r#"{"Smoking": "yes"}"#.into()),
        )
        .await;
        assert_eq!(r.status, StatusCode::OK);
    }
    let report = call(&app, "GET", &format!("/sessions/{id}/diff"), None).await.json();
    for v in report["perVariable"].as_array().unwrap() {
        assert_eq!(v["relevance"], 0.0);
        assert_eq!(v["p1"], v["p2"]);
    }
}

#[tokio::test]
async fn second_set_evidence_and_threshold_shape_the_scene() {
    let app = app(true);
    let id = session(&app, serialize_network(&asia8())).await;
    let r = call(
        &app,
        "PUT",
        &format!("/sessions/{id}/evidence/2"),
        Some(r#"{"Xray": "yes"}"#.into()),
    )
    .await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["e2"], json!({"Xray": "yes"}));
    assert_eq!(r.json()["eligible"], 7);

    let r = call(&app, "PUT", &format!("/sessions/{id}/threshold"), Some(r#"{"percent": 20}"#.into())).await;
    assert_eq!(r.status, StatusCode::OK);
    let summary = r.json();
    // floor(0.2 · 7) = 1, plus the evidence variable
    assert_eq!(summary["retained"].as_array().unwrap().len(), 2);

    let scene = call(&app, "GET", &format!("/sessions/{id}/scene"), None).await.json();
    let glyphs = scene["glyphs"].as_array().unwrap();
    assert_eq!(glyphs.len(), 2);
    assert_eq!(scene["collapsed"].as_array().unwrap().len(), 6);
    assert!(glyphs.iter().all(|g| !g["ring"].is_null()));
    let xray = glyphs.iter().find(|g| g["name"] == "Xray").unwrap();
    assert_eq!(xray["ringStroke"], true);
    assert_eq!(xray["innerStroke"], false);
    assert_eq!(scene["legend"].as_array().unwrap().len(), 2);

    let svg = call(&app, "GET", &format!("/sessions/{id}/scene.svg"), None).await;
    assert_eq!(svg.status, StatusCode::OK);
    assert_eq!(svg.content_type.as_deref(), Some("image/svg+xml"));
    let text = String::from_utf8(svg.body).unwrap();
    assert!(text.starts_with("<?xml"));
    assert_eq!(text.matches("class=\"variable\"").count(), 2);
    assert_eq!(text.matches("class=\"variable collapsed\"").count(), 6);
}

#[tokio::test]
async fn cpt_panels() {
    let app = app(true);
    let id = session(&app, serialize_network(&asia8())).await;
    let r = call(&app, "GET", &format!("/sessions/{id}/cpt/TbOrCancer"), None).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["blocks"].as_array().unwrap().len(), 4);
    let r = call(&app, "GET", &format!("/sessions/{id}/cpt/Nothing"), None).await;
    assert_eq!(r.status, StatusCode::BAD_REQUEST);
    assert_eq!(r.json()["name"], "Nothing");
}

async fn script(app: &Router) -> Vec<Vec<u8>> {
    let id = session(app, serialize_network(&asia8())).await;
    let steps: [(&str, String, Option<&str>); 8] = [
        ("PUT", format!("/sessions/{id}/evidence/2"), Some(r#"{"Dyspnoea": "yes"}"#)),
        ("GET", format!("/sessions/{id}/scene"), None),
        ("PUT", format!("/sessions/{id}/threshold"), Some(r#"{"percent": 50}"#)),
        ("GET", format!("/sessions/{id}/scene.svg"), None),
        ("PUT", format!("/sessions/{id}/evidence/1"), Some(r#"{"Smoking": "no"}"#)),
        ("GET", format!("/sessions/{id}/diff"), None),
        ("PUT", format!("/sessions/{id}/evidence/1"), Some("{}")),
        ("GET", format!("/sessions/{id}/scene"), None),
    ];
    let mut out = Vec::new();
    for (method, uri, body) in steps {
        let r = call(app, method, &uri, body.map(str::to_owned)).await;
        assert_eq!(r.status, StatusCode::OK, "{method} {uri}");
        out.push(r.body);
    }
    out
}

#[tokio::test]
async fn caching_does_not_change_responses() {
    let cached = script(&app(true)).await;
    let uncached = script(&app(false)).await;
    assert_eq!(cached, uncached);
}

#[tokio::test]
async fn repeated_puts_are_idempotent() {
    let app = app(true);
    let id = session(&app, serialize_network(&chain3())).await;
    let mut scenes = Vec::new();
    for _ in 0..3 {
        let r = call(&app, "PUT", &format!("/sessions/{id}/evidence/2"), Some(r#"{"Z": "z"}"#.into())).await;
        assert_eq!(r.status, StatusCode::OK);
        scenes.push(call(&app, "GET", &format!("/sessions/{id}/scene"), None).await.body);
    }
    assert!(scenes.windows(2).all(|w| w[0] == w[1]));
}

#[tokio::test]
async fn sessions_can_be_learned_from_data() {
    let mut csv = String::from("A,B\n");
    for i in 0..200 {
        let a = if i % 3 == 0 { "hi" } else { "lo" };
        let b = if i % 10 == 0 { "off" } else if a == "hi" { "on" } else { "off" };
        csv.push_str(&format!("{a},{b}\n"));
    }
    let body = json!({ "dataset": csv, "config": { "maxIndegree": 1 }, "sampleN": 150, "seed": 3 });
    let app = app(true);
    let r = call(&app, "POST", "/sessions", Some(body.to_string())).await;
    assert_eq!(r.status, StatusCode::CREATED);
    assert_eq!(r.json()["variables"], 2);
    let id = r.json()["id"].as_str().unwrap().to_owned();
    let net = call(&app, "GET", &format!("/sessions/{id}/network"), None).await.json();
    assert_eq!(net["edges"].as_array().unwrap().len(), 1);

    let bad = json!({ "dataset": "A\nx\n", "config": { "maxIndegree": 0 } });
    assert_eq!(
        call(&app, "POST", "/sessions", Some(bad.to_string())).await.status,
        StatusCode::BAD_REQUEST
    );
    assert_eq!(
        call(&app, "POST", "/sessions", Some("not json".into())).await.status,
        StatusCode::BAD_REQUEST
    );
}

/// Ten ordered variables A1..A10, each depending on the one or two before it.
fn graded_network() -> String {
    use evidiff_core::model::{CptDecl, EventSpace, NetworkParts, VariableDecl};
    use evidiff_core::BayesianNetwork;
    let n = 10usize;
    let mut edges = Vec::new();
    let mut cpts = Vec::new();
    for i in 0..n {
        let parents: Vec<usize> = (i.saturating_sub(2)..i).collect();
        edges.extend(parents.iter().map(|&p| (p, i)));
        let rows = (0..3usize.pow(parents.len() as u32))
            .map(|r| {
                let w: Vec<f64> = (0..3).map(|k| 1.0 + ((i * 7 + r * 3 + k * 5) % 4) as f64).collect();
                let t: f64 = w.iter().sum();
                w.iter().map(|x| x / t).collect()
            })
            .collect();
        cpts.push(Some(CptDecl { parents, rows }));
    }
    let net = BayesianNetwork::from_parts(NetworkParts {
        spaces: vec![EventSpace::ordered("grade", &["low", "medium", "high"])],
        variables: (1..=n)
            .map(|i| VariableDecl {
                name: format!("A{i}"),
                space: 0,
            })
            .collect(),
        edges,
        cpts,
    })
    .unwrap();
    serialize_network(&net)
}

#[tokio::test]
async fn medium_evidence_on_a4_at_twenty_percent() {
    let app = app(true);
    let id = session(&app, graded_network()).await;
    let r = call(&app, "PUT", &format!("/sessions/{id}/evidence/2"), Some(r#"{"A4": "medium"}"#.into())).await;
    assert_eq!(r.status, StatusCode::OK);
    let r = call(&app, "PUT", &format!("/sessions/{id}/threshold"), Some(r#"{"percent": 20}"#.into())).await;
    let summary = r.json();
    // 9 eligible, floor(0.2 · 9) = 1, plus A4
    let retained: Vec<&str> = summary["retained"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(retained.len(), 2);
    assert_eq!(retained[1], "A4");

    let scene = call(&app, "GET", &format!("/sessions/{id}/scene"), None).await.json();
    let glyphs = scene["glyphs"].as_array().unwrap();
    let names: Vec<&str> = glyphs.iter().map(|g| g["name"].as_str().unwrap()).collect();
    assert_eq!(names.len(), 2);
    assert!(names.contains(&retained[0]) && names.contains(&"A4"));
    assert!(glyphs.iter().all(|g| !g["ring"].is_null()));
    assert_eq!(scene["collapsed"].as_array().unwrap().len(), 8);

    let report = call(&app, "GET", &format!("/sessions/{id}/diff"), None).await.json();
    let ranking = report["ranking"].as_array().unwrap();
    assert_eq!(ranking[0], retained[0]);
    assert!(!ranking.iter().any(|v| v == "A4"));
}
