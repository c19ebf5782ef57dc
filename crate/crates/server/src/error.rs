use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use mpoxdash_core::ValidationErrors;

/// Every non-2xx answer: a status plus `{"errors":[{"field","message"}]}`.
#[derive(Debug)]
pub enum ApiError {
    BadRequest(ValidationErrors),
    NotFound(ValidationErrors),
    MethodNotAllowed,
    Internal(String),
}

impl From<ValidationErrors> for ApiError {
    fn from(e: ValidationErrors) -> Self {
        ApiError::BadRequest(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::BadRequest(e) => (StatusCode::BAD_REQUEST, e),
            ApiError::NotFound(e) => (StatusCode::NOT_FOUND, e),
            ApiError::MethodNotAllowed => (
                StatusCode::METHOD_NOT_ALLOWED,
                ValidationErrors::single("method", "not allowed on this route"),
            ),
            ApiError::Internal(msg) => {
                tracing::error!(%msg, "internal error");
                (
                    StatusCode::INTERNAL_SERVER_ERROR,
                    ValidationErrors::single("server", msg),
                )
            }
        };
        (status, Json(body)).into_response()
    }
}
