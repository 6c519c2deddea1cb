//! Stateless HTTP boundary replicating the computational-node interface:
//! submit a flowsheet, get a simulation result; submit a binary pair, get a
//! VLE analysis. Non-convergence is a 200 (failures must be scorable), bad
//! documents are 400, invariant violations 422.

mod client;

use std::net::SocketAddr;
use std::time::Instant;

use axum::extract::Json;
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::Router;
use serde_json::{json, Value};

use flowsheet_core::{component, io, PropertyMethod};
use thermo_sim::{analyze_binary_vle, run_simulation, SimError};

pub use client::HttpSimClient;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

async fn health() -> Json<Value> {
    Json(json!({ "status": "ok", "version": VERSION }))
}

/// Request body: the flowsheet document itself, plus optional top-level
/// `tol` and `max_iter` solver settings.
async fn simulate(Json(body): Json<Value>) -> (StatusCode, Json<Value>) {
    let tol = body.get("tol").and_then(Value::as_f64).unwrap_or(1e-6);
    let max_iter = body
        .get("max_iter")
        .and_then(Value::as_u64)
        .unwrap_or(200) as u32;

    let fs = match io::parse_flowsheet_value(&body) {
        Ok(fs) => fs,
        Err(e) => {
            return (
                StatusCode::BAD_REQUEST,
                Json(json!({ "error": "schema", "location": e.location, "message": e.message })),
            );
        }
    };
    if let Err(e) = fs.check_invariants() {
        let schema = io::invariant_to_schema_error(&fs, &e);
        return (
            StatusCode::UNPROCESSABLE_ENTITY,
            Json(json!({
                "error": "invariant",
                "location": schema.location,
                "message": schema.message,
            })),
        );
    }

    let started = Instant::now();
    let result = run_simulation(&fs, tol, max_iter);
    let elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    (
        StatusCode::OK,
        Json(json!({
            "flowsheet_id": fs.id,
            "result": result,
            "elapsed_ms": elapsed_ms,
        })),
    )
}

async fn vle(Json(body): Json<Value>) -> (StatusCode, Json<Value>) {
    let bad_request = |message: String| {
        (
            StatusCode::BAD_REQUEST,
            Json(json!({ "error": "request", "message": message })),
        )
    };
    let names: Vec<String> = match body.get("components").and_then(Value::as_array) {
        Some(list) => list
            .iter()
            .filter_map(Value::as_str)
            .map(str::to_string)
            .collect(),
        None => return bad_request("missing 'components' array".to_string()),
    };
    if names.len() != 2 {
        return bad_request(format!("expected exactly 2 components, got {}", names.len()));
    }
    let mut comps = Vec::new();
    for name in &names {
        match component::lookup(name) {
            Some(c) => comps.push(c),
            None => return bad_request(format!("unknown component '{name}'")),
        }
    }
    let pressure = match body.get("pressure").and_then(Value::as_f64) {
        Some(p) if p > 0.0 => p,
        _ => return bad_request("missing or non-positive 'pressure'".to_string()),
    };
    let method = match body.get("method").and_then(Value::as_str) {
        None | Some("margules") => {
            match body.get("a12").and_then(Value::as_f64) {
                Some(a12) => PropertyMethod::margules(&[(&comps[0].id, &comps[1].id, a12)]),
                None => PropertyMethod::margules_with_defaults(&[
                    comps[0].id.clone(),
                    comps[1].id.clone(),
                ]),
            }
        }
        Some("ideal_raoult") | Some("ideal") => PropertyMethod::IdealRaoult,
        Some(other) => return bad_request(format!("unknown method '{other}'")),
    };

    match analyze_binary_vle(comps[0], comps[1], pressure, &method) {
        Ok(result) => (
            StatusCode::OK,
            Json(serde_json::to_value(result).expect("vle result serializes")),
        ),
        Err(e @ SimError::PropertyRangeExceeded { .. }) => bad_request(e.to_string()),
        Err(e) => (
            StatusCode::INTERNAL_SERVER_ERROR,
            Json(json!({ "error": "internal", "message": e.to_string() })),
        ),
    }
}

pub fn app() -> Router {
    Router::new()
        .route("/health", get(health))
        .route("/simulate", post(simulate))
        .route("/vle", post(vle))
}

/// Bind and serve until the process exits.
pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("simulation service listening on {}", listener.local_addr()?);
    axum::serve(listener, app()).await
}

/// Serve on a background thread with its own runtime; returns the bound
/// address once the listener is live. Port 0 picks a free port.
pub fn spawn_background(port: u16) -> std::io::Result<SocketAddr> {
    let (tx, rx) = std::sync::mpsc::channel();
    std::thread::spawn(move || {
        let runtime = tokio::runtime::Builder::new_multi_thread()
            .worker_threads(2)
            .enable_all()
            .build()
            .expect("runtime builds");
        runtime.block_on(async move {
            let addr = SocketAddr::from(([127, 0, 0, 1], port));
            let listener = tokio::net::TcpListener::bind(addr).await.expect("bind");
            tx.send(listener.local_addr().expect("local addr")).expect("receiver alive");
            axum::serve(listener, app()).await.expect("serve");
        });
    });
    rx.recv()
        .map_err(|e| std::io::Error::other(format!("server thread died: {e}")))
}

/// Serve on the current thread (CLI entry point).
pub fn serve_blocking(bind: &str, port: u16) -> std::io::Result<()> {
    let ip: std::net::IpAddr = bind
        .parse()
        .map_err(|e| std::io::Error::other(format!("bad bind address '{bind}': {e}")))?;
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?;
    runtime.block_on(serve(SocketAddr::from((ip, port))))
}
