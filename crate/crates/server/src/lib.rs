//! HTTP API over an immutable corpus snapshot.
//!
//! Handlers are thin adapters around `mpoxdash-core`: they decode query
//! parameters, call one core operation and encode its output, adding the
//! `snapshot_id` of the snapshot that answered. The snapshot only changes on
//! `POST /api/reload`.

mod error;
mod handlers;
mod state;

use std::future::Future;
use std::sync::Arc;

use axum::http::{HeaderValue, Method};
use axum::routing::{get, post};
use axum::Router;
use tokio::net::TcpListener;
use tower_http::cors::CorsLayer;
use tower_http::services::{ServeDir, ServeFile};

pub use error::ApiError;
pub use state::{AppState, Loaded};

/// The full application: `/api/*` plus optional static files for the dashboard.
pub fn router(state: Arc<AppState>) -> Router {
    let api = Router::new()
        .route("/health", get(handlers::health))
        .route("/stats", get(handlers::stats))
        .route("/search", get(handlers::search))
        .route("/tweets/{id}", get(handlers::tweet))
        .route("/clusters/timeseries", get(handlers::cluster_timeseries))
        .route("/trends", get(handlers::trends))
        .route("/locations", get(handlers::locations))
        .route("/volume", get(handlers::volume))
        .route("/reload", post(handlers::reload))
        .method_not_allowed_fallback(handlers::method_not_allowed)
        .fallback(handlers::not_found);

    let mut app = Router::new().nest("/api", api);
    app = match &state.config().static_dir {
        Some(dir) => {
            let files = ServeDir::new(dir).fallback(ServeFile::new(dir.join("index.html")));
            app.fallback_service(files)
        }
        None => app.fallback(handlers::not_found),
    };
    let app = app.with_state(state.clone());

    match cors_layer(&state.config().cors_origins) {
        Some(layer) => app.layer(layer),
        None => app,
    }
}

fn cors_layer(origins: &[String]) -> Option<CorsLayer> {
    let origins: Vec<HeaderValue> = origins
        .iter()
        .filter_map(|o| match HeaderValue::from_str(o) {
            Ok(v) => Some(v),
            Err(_) => {
                tracing::warn!(origin = %o, "ignoring unusable CORS origin");
                None
            }
        })
        .collect();
    if origins.is_empty() {
        return None;
    }
    Some(
        CorsLayer::new()
            .allow_origin(origins)
            .allow_methods([Method::GET, Method::POST]),
    )
}

/// Serves until `shutdown` resolves; in-flight requests are allowed to finish.
pub async fn serve<F>(listener: TcpListener, state: Arc<AppState>, shutdown: F) -> std::io::Result<()>
where
    F: Future<Output = ()> + Send + 'static,
{
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
}

/// Resolves on Ctrl-C or, on Unix, SIGTERM.
pub async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {}
        _ = term => {}
    }
}
