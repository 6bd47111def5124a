use std::time::{Duration, Instant};

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use infodd::catalog::cars;
use infodd::service::{router, AppState, CreatedResponse, StateResponse};
use infodd_core::{info_greedy, DiagramBuilder, DiagramKind, InductionConfig, Leaf};
use serde_json::Value;
use tower::ServiceExt;

fn app_state() -> AppState {
    let diagram = info_greedy(&cars().table, &InductionConfig::greedy(DiagramKind::Reduced)).unwrap();
    AppState::new("cars", diagram)
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<&str>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if body.is_some() {
        req = req.header("content-type", "application/json");
    }
    let req = req.body(body.map_or_else(Body::empty, |b| Body::from(b.to_owned()))).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = axum::body::to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    let value = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, value)
}

async fn create(app: &Router) -> String {
    let (status, body) = call(app, "POST", "/api/sessions", None).await;
    assert_eq!(status, StatusCode::CREATED);
    let created: CreatedResponse = serde_json::from_value(body).unwrap();
    created.session_id
}

fn state(body: Value) -> infodd::service::StateDoc {
    serde_json::from_value::<StateResponse>(body).unwrap().state
}

#[tokio::test]
async fn primera_dialogue_with_undo() {
    let app = router(app_state(), None);
    let (status, body) = call(&app, "POST", "/api/sessions", Some(r#"{"catalog":"cars","extra":1}"#)).await;
    assert_eq!(status, StatusCode::CREATED);
    let created: CreatedResponse = serde_json::from_value(body.clone()).unwrap();
    assert_eq!(created.session_id.len(), 32);
    assert_eq!(created.state.status, "question");
    assert_eq!(created.state.question.as_ref().unwrap().variable, "price");
    assert_eq!(body["state"].as_object().unwrap().keys().collect::<Vec<_>>(), ["question", "status", "trail"]);
    let id = created.session_id;

    let (_, b) = call(&app, "POST", &format!("/api/sessions/{id}/answer"), Some(r#"{"value":0}"#)).await;
    let s = state(b);
    assert_eq!(s.question.as_ref().unwrap().variable, "gear");
    assert_eq!(s.trail.len(), 1);
    assert_eq!(s.trail[0].label, "less than 20,000");

    let (status, b) = call(&app, "POST", &format!("/api/sessions/{id}/answer"), Some(r#"{"value":1}"#)).await;
    assert_eq!(status, StatusCode::OK);
    let s = state(b);
    assert_eq!(s.status, "resolved");
    let result = s.result.unwrap();
    assert_eq!((result.product_id, result.label.as_str()), (7, "Nissan Primera 2.0SLX"));
    assert!(s.trail.len() <= 3);

    // reload reproduces the state
    let (status, again) = call(&app, "GET", &format!("/api/sessions/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(state(again).status, "resolved");

    let (status, _) = call(&app, "POST", &format!("/api/sessions/{id}/answer"), Some(r#"{"value":0}"#)).await;
    assert_eq!(status, StatusCode::CONFLICT);

    let (status, b) = call(&app, "POST", &format!("/api/sessions/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::OK);
    let s = state(b);
    assert_eq!(s.status, "question");
    assert_eq!(s.question.unwrap().variable, "gear");

    let (_, b) = call(&app, "POST", &format!("/api/sessions/{id}/restart"), None).await;
    assert!(state(b).trail.is_empty());
    let (status, e) = call(&app, "POST", &format!("/api/sessions/{id}/undo"), None).await;
    assert_eq!(status, StatusCode::CONFLICT);
    assert!(e["error"].is_string());
}

#[tokio::test]
async fn invalid_requests() {
    let app = router(app_state(), None);
    let id = create(&app).await;
    let answer = format!("/api/sessions/{id}/answer");
    for body in [r#"{"value":4}"#, r#"{"value":-1}"#, r#"{"value":"a"}"#, r#"{}"#, "not json"] {
        let (status, _) = call(&app, "POST", &answer, Some(body)).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
    }
    let (_, b) = call(&app, "GET", &format!("/api/sessions/{id}"), None).await;
    assert!(state(b).trail.is_empty());

    let (status, _) = call(&app, "GET", "/api/sessions/nope", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    let (status, _) = call(&app, "POST", "/api/sessions", Some(r#"{"catalog":"boats"}"#)).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn no_match_state() {
    let app = router(app_state(), None);
    let id = create(&app).await;
    // 20,000 to 25,000 then the first color: nothing in the catalog
    call(&app, "POST", &format!("/api/sessions/{id}/answer"), Some(r#"{"value":1}"#)).await;
    let (_, b) = call(&app, "POST", &format!("/api/sessions/{id}/answer"), Some(r#"{"value":0}"#)).await;
    assert_eq!(b["state"]["status"], "no_match");
    assert!(b["state"].get("result").is_none());
    assert!(b["state"].get("question").is_none());
    assert_eq!(b["state"]["trail"].as_array().unwrap().len(), 2);
}

#[tokio::test]
async fn sessions_are_isolated() {
    let app = router(app_state(), None);
    let a = create(&app).await;
    let b = create(&app).await;
    assert_ne!(a, b);
    call(&app, "POST", &format!("/api/sessions/{a}/answer"), Some(r#"{"value":3}"#)).await;
    let (_, sb) = call(&app, "GET", &format!("/api/sessions/{b}"), None).await;
    assert!(state(sb).trail.is_empty());
    let (_, sa) = call(&app, "GET", &format!("/api/sessions/{a}"), None).await;
    assert_eq!(state(sa).status, "resolved");
}

#[tokio::test]
async fn concurrent_answers_on_one_session_are_serialized() {
    let app = router(app_state(), None);
    let id = create(&app).await;
    let uri = format!("/api/sessions/{id}/answer");
    let tasks: Vec<_> = (0..8)
        .map(|_| {
            let app = app.clone();
            let uri = uri.clone();
            tokio::spawn(async move { call(&app, "POST", &uri, Some(r#"{"value":0}"#)).await.0 })
        })
        .collect();
    let mut statuses = Vec::new();
    for t in tasks {
        statuses.push(t.await.unwrap());
    }
    // price 0 then gear 0 resolves; later answers conflict
    assert_eq!(statuses.iter().filter(|s| **s == StatusCode::OK).count(), 2);
    assert_eq!(statuses.iter().filter(|s| **s == StatusCode::CONFLICT).count(), 6);
    let (_, b) = call(&app, "GET", &format!("/api/sessions/{id}"), None).await;
    let s = state(b);
    assert_eq!(s.trail.len(), 2);
    assert_eq!(s.result.unwrap().label, "Ford Escort 1.8l");
}

#[tokio::test]
async fn catalog_endpoint() {
    let app = router(app_state(), None);
    let (status, body) = call(&app, "GET", "/api/catalog", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body["name"], "cars");
    assert_eq!(body["variables"].as_array().unwrap().len(), 8);
    assert_eq!(body["variables"][6]["name"], "price");
    assert_eq!(body["products"][7]["label"], "Nissan Primera 2.0SLX");
}

#[tokio::test]
async fn single_terminal_diagram_resolves_at_creation() {
    let schema = cars().schema;
    let mut b = DiagramBuilder::new(schema, DiagramKind::Reduced);
    let t = b.terminal(5).unwrap();
    let d = b.finish(t).unwrap();
    assert_eq!(d.evaluate(&[0; 8]).unwrap(), Leaf::Value(5));
    let app = router(AppState::new("one", d), None);
    let (_, body) = call(&app, "POST", "/api/sessions", None).await;
    assert_eq!(body["state"]["status"], "resolved");
    assert_eq!(body["state"]["result"]["product_id"], 5);
}

#[tokio::test]
async fn idle_sessions_expire() {
    let state = app_state().with_idle_timeout(Duration::from_millis(20));
    let app = router(state.clone(), None);
    let a = create(&app).await;
    create(&app).await;
    assert_eq!(state.session_count(), 2);
    tokio::time::sleep(Duration::from_millis(40)).await;
    let (status, _) = call(&app, "GET", &format!("/api/sessions/{a}"), None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(state.sweep(Instant::now()), 1);
    assert_eq!(state.session_count(), 0);
}

#[tokio::test]
async fn static_assets_are_served() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("index.html"), "<h1>shop</h1>").unwrap();
    let app = router(app_state(), Some(dir.path().to_owned()));
    let req = Request::builder().uri("/index.html").body(Body::empty()).unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    assert_eq!(resp.status(), StatusCode::OK);
    let (status, _) = call(&app, "GET", "/api/catalog", None).await;
    assert_eq!(status, StatusCode::OK);
}
