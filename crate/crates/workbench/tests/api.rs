mod common;

use axum::http::{Method, StatusCode};
use common::{bow_tie, corridor, sample_json, send, send_json};
use luxforge_core::control::SavingsReport;
use luxforge_core::generator::LightingDesign;
use luxforge_core::geometry::RoomModel;
use luxforge_core::patterns::PatternLibrary;
use luxforge_core::workspace::Workspace;
use luxforge_workbench::api::{router, AppState};
use luxforge_workbench::documents::{Created, IlluminanceResponse, Ranking, SimulateResponse};
use serde_json::json;

async fn with_room(app: &axum::Router, name: &str) -> String {
    let (status, body) = send_json(app, Method::POST, "/api/rooms", Some(&sample_json(name))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    serde_json::from_value::<Created>(body).unwrap().id
}

#[tokio::test]
async fn room_round_trip_and_errors() {
    let app = router(AppState::ephemeral());
    let id = with_room(&app, "bedroom/room.json").await;
    let (status, body) = send(&app, Method::GET, &format!("/api/rooms/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    let expected = RoomModel::from_json(&common::sample_text("bedroom/room.json")).unwrap();
    assert_eq!(RoomModel::from_json(&body).unwrap(), expected);

    let (status, body) = send_json(&app, Method::POST, "/api/rooms", Some(&bow_tie())).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "SelfIntersectingOutline");

    let (status, body) = send_json(&app, Method::POST, "/api/rooms", Some(&json!({"outline": 3}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "MalformedDocument");

    let (status, body) = send_json(&app, Method::GET, "/api/rooms/room-999999", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert_eq!(body["error"], "UnknownRoom");
}

#[tokio::test]
async fn patterns_endpoint_serves_the_default_library() {
    let app = router(AppState::ephemeral());
    let (status, body) = send(&app, Method::GET, "/api/patterns", None).await;
    assert_eq!(status, StatusCode::OK);
    let library: PatternLibrary = serde_json::from_str(&body).unwrap();
    assert_eq!(library, PatternLibrary::default_library());
}

#[tokio::test]
async fn generation_stores_ranked_designs() {
    let app = router(AppState::ephemeral());
    let id = with_room(&app, "bedroom/room.json").await;
    let (status, body) = send(&app, Method::POST, &format!("/api/rooms/{id}/designs"), Some(&json!({"seed": 3}))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let ranking: Ranking = serde_json::from_str(&body).unwrap();
    assert_eq!(ranking.designs.len(), 6);
    let scores: Vec<f64> = ranking.designs.iter().map(|d| d.score.scalar_score).collect();
    assert!(scores.windows(2).all(|w| w[0] >= w[1]));
    for entry in &ranking.designs {
        let (status, text) = send(&app, Method::GET, &format!("/api/designs/{}", entry.design.id), None).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(LightingDesign::from_json(&text).unwrap(), entry.design);
        assert_eq!(entry.design.room, id);
    }

    let corridor_id = {
        let (_, body) = send_json(&app, Method::POST, "/api/rooms", Some(&corridor())).await;
        body["id"].as_str().unwrap().to_string()
    };
    let (status, body) =
        send_json(&app, Method::POST, &format!("/api/rooms/{corridor_id}/designs"), Some(&json!({"seed": 0}))).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(body["error"], "NoApplicablePattern");
}

#[tokio::test]
async fn patch_revalidates_and_rejects_escaping_fixtures() {
    let app = router(AppState::ephemeral());
    let bedroom = with_room(&app, "bedroom/room.json").await;
    let (_, body) = send(&app, Method::POST, &format!("/api/rooms/{bedroom}/designs"), Some(&json!({"seed": 1}))).await;
    let ranking: Ranking = serde_json::from_str(&body).unwrap();
    let target = &ranking.designs[0].design;
    let uri = format!("/api/designs/{}", target.id);

    let (status, body) = send_json(
        &app,
        Method::PATCH,
        &uri,
        Some(&json!({"fixtures": [{"index": 0, "level": 0.4, "position": [2.0, 2.0, 2.5]}]})),
    )
    .await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let edited: LightingDesign = serde_json::from_value(body).unwrap();
    assert_eq!(edited.fixtures[0].level, 0.4);
    assert_eq!(edited.id, target.id);

    let (status, body) = send_json(
        &app,
        Method::PATCH,
        &uri,
        Some(&json!({"fixtures": [{"index": 0, "position": [9.0, 2.0, 2.5]}]})),
    )
    .await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "FixtureOutsideRoom");
    let (_, text) = send(&app, Method::GET, &uri, None).await;
    assert_eq!(LightingDesign::from_json(&text).unwrap(), edited);

    let (status, body) =
        send_json(&app, Method::PATCH, &uri, Some(&json!({"fixtures": [{"index": 40, "level": 0.1}]}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "InvalidFixture");
}

#[tokio::test]
async fn illuminance_simulate_and_compare() {
    let app = router(AppState::ephemeral());
    let id = with_room(&app, "bedroom/room.json").await;
    let (_, body) = send(&app, Method::POST, &format!("/api/rooms/{id}/designs"), Some(&json!({"seed": 1}))).await;
    let ranking: Ranking = serde_json::from_str(&body).unwrap();
    let design = ranking
        .designs
        .iter()
        .find(|d| d.design.pattern_id == "guideline_bedroom")
        .unwrap()
        .design
        .clone();

    let uri = format!("/api/designs/{}/illuminance", design.id);
    let (status, first) = send(&app, Method::POST, &uri, Some(&json!({"spacing": 0.5}))).await;
    assert_eq!(status, StatusCode::OK);
    let (_, second) = send(&app, Method::POST, &uri, Some(&json!({"spacing": 0.5}))).await;
    assert_eq!(first, second);
    let field: IlluminanceResponse = serde_json::from_str(&first).unwrap();
    assert_eq!(field.field.lux.len(), field.field.grid.points.len());
    let (status, _) = send(&app, Method::POST, &uri, None).await;
    assert_eq!(status, StatusCode::OK);
    let (status, body) = send_json(&app, Method::POST, &uri, Some(&json!({"spacing": -1.0}))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "InvalidParameter");

    let request = json!({
        "policy": sample_json("bedroom/policy.json"),
        "schedule": sample_json("bedroom/schedule.json"),
    });
    let (status, body) =
        send(&app, Method::POST, &format!("/api/designs/{}/simulate", design.id), Some(&request)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let sim: SimulateResponse = serde_json::from_str(&body).unwrap();
    assert_eq!(sim.summary.ticks, 288);
    let (status, csv) = send(&app, Method::GET, &format!("/api/traces/{}.csv", sim.trace_id), None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(csv.starts_with("tick,time,fixture_id,dim,blind_angle,sensor_lux,occupied,event\n"));
    let (status, _) = send(&app, Method::GET, "/api/traces/trace-424242.csv", None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);

    let mut bad = request.clone();
    bad["policy"]["rules"][1]["zone"] = json!("attic");
    let (status, body) =
        send_json(&app, Method::POST, &format!("/api/designs/{}/simulate", design.id), Some(&bad)).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(body["error"], "UnknownZone");

    let compare = json!({
        "policies": [
            {"name": "always", "policy": {"sensor_point": [2.1, 1.2, 0.8], "rules": [
                {"priority": 0, "kind": "timing", "zone": "ambient", "on_time": "00:00", "off_time": "24:00"},
                {"priority": 0, "kind": "timing", "zone": "task", "on_time": "00:00", "off_time": "24:00"}
            ]}},
            {"name": "smart", "policy": sample_json("bedroom/policy.json")}
        ],
        "schedule": sample_json("bedroom/schedule.json"),
    });
    let (status, body) =
        send(&app, Method::POST, &format!("/api/designs/{}/compare", design.id), Some(&compare)).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let report: SavingsReport = serde_json::from_str(&body).unwrap();
    assert_eq!(report.baseline, "always");
    assert!(report.entries[1].savings_percent > 30.0);
}

#[tokio::test]
async fn service_persists_through_restart() {
    let dir = tempfile::tempdir().unwrap();
    let state = AppState::open(dir.path().to_path_buf()).unwrap();
    let app = router(state.clone());
    let id = with_room(&app, "bedroom/room.json").await;
    send(&app, Method::POST, &format!("/api/rooms/{id}/designs"), Some(&json!({"seed": 5}))).await;
    let saved = state.snapshot();
    assert_eq!(Workspace::restore(dir.path()).unwrap(), saved);

    let reopened = router(AppState::open(dir.path().to_path_buf()).unwrap());
    let (status, _) = send(&reopened, Method::GET, &format!("/api/rooms/{id}"), None).await;
    assert_eq!(status, StatusCode::OK);
    let fresh = with_room(&reopened, "rectangle.json").await;
    assert!(!saved.rooms().contains_key(&fresh) && !saved.designs().contains_key(&fresh));
}
