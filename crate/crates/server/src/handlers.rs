use std::num::NonZeroUsize;
use std::sync::Arc;

use axum::extract::{Path, RawQuery, State};
use axum::Json;
use chrono::NaiveDate;
use mpoxdash_core::analytics::{keyword_trend, location_breakdown, volume_comparison, TrendPoint};
use mpoxdash_core::model::parse_day;
use mpoxdash_core::search::parse_range;
use mpoxdash_core::{
    daily_cluster_proportions, validate_query, ClusterLabel, CorpusStats, DailyClusterPoint,
    DayRange, SearchRequest, SentimentScore, Tweet, ValidationErrors,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::ApiError;
use crate::state::{AppState, Loaded};

type ApiResult<T> = Result<Json<T>, ApiError>;

/// A core output tagged with the snapshot that produced it.
#[derive(Serialize)]
pub(crate) struct Stamped<T> {
    snapshot_id: String,
    #[serde(flatten)]
    body: T,
}

fn stamp<T>(loaded: &Loaded, body: T) -> Json<Stamped<T>> {
    Json(Stamped {
        snapshot_id: loaded.snapshot_id.clone(),
        body,
    })
}

/// A tweet plus its labels, so the dashboard needs no analytics of its own.
#[derive(Serialize)]
pub(crate) struct LabeledTweet {
    #[serde(flatten)]
    tweet: Tweet,
    cluster_label: ClusterLabel,
    sentiment: SentimentScore,
}

fn labeled(state: &AppState, tweet: Tweet) -> LabeledTweet {
    let cfg = state.config();
    LabeledTweet {
        cluster_label: cfg.topics.label_text(&tweet.text),
        sentiment: cfg.sentiment.score_text(&tweet.text),
        tweet,
    }
}

struct Params(Vec<(String, String)>);

impl Params {
    fn new(raw: Option<String>) -> Self {
        let raw = raw.unwrap_or_default();
        Params(form_urlencoded::parse(raw.as_bytes()).into_owned().collect())
    }

    fn last(&self, name: &str) -> Option<&str> {
        self.0
            .iter()
            .rev()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
    }

    fn all(&self, name: &str) -> Vec<&str> {
        self.0
            .iter()
            .filter(|(k, _)| k == name)
            .map(|(_, v)| v.as_str())
            .collect()
    }
}

fn required_day(params: &Params, field: &str, errors: &mut ValidationErrors) -> Option<NaiveDate> {
    match params.last(field).map(str::trim) {
        None | Some("") => {
            errors.push(field, "required");
            None
        }
        Some(v) => parse_day(v)
            .map_err(|_| errors.push(field, "expected a YYYY-MM-DD date"))
            .ok(),
    }
}

fn period(
    params: &Params,
    from: &str,
    to: &str,
    errors: &mut ValidationErrors,
) -> Option<DayRange> {
    let f = required_day(params, from, errors);
    let t = required_day(params, to, errors);
    DayRange::new(f?, t?)
        .map_err(|_| errors.push(from, format!("must not be after `{to}`")))
        .ok()
}

pub(crate) async fn health(State(state): State<Arc<AppState>>) -> Json<Value> {
    let loaded = state.current();
    Json(json!({
        "status": "ok",
        "corpus_total": loaded.snapshot.stats().total,
        "snapshot_id": loaded.snapshot_id,
    }))
}

pub(crate) async fn stats(State(state): State<Arc<AppState>>) -> Json<Stamped<CorpusStats>> {
    let loaded = state.current();
    stamp(&loaded, loaded.snapshot.stats().clone())
}

#[derive(Serialize)]
pub(crate) struct SearchBody {
    total_matches: u64,
    page: u32,
    per_page: u32,
    items: Vec<LabeledTweet>,
}

pub(crate) async fn search(
    State(state): State<Arc<AppState>>,
    RawQuery(raw): RawQuery,
) -> ApiResult<Stamped<SearchBody>> {
    let params = Params::new(raw);
    let req = SearchRequest::from_pairs(params.0.iter().map(|(k, v)| (k.as_str(), v.clone())));
    let query = validate_query(&req, state.config().per_page_max)?;
    let loaded = state.current();
    let page = loaded.index.execute(&query);
    let body = SearchBody {
        total_matches: page.total_matches,
        page: page.page,
        per_page: page.per_page,
        items: page.items.into_iter().map(|t| labeled(&state, t)).collect(),
    };
    Ok(stamp(&loaded, body))
}

pub(crate) async fn tweet(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Stamped<LabeledTweet>> {
    let loaded = state.current();
    match loaded.snapshot.get(&id) {
        Some(t) => Ok(stamp(&loaded, labeled(&state, t.clone()))),
        None => Err(ApiError::NotFound(ValidationErrors::single(
            "id",
            format!("no tweet with id `{id}`"),
        ))),
    }
}

#[derive(Serialize)]
pub(crate) struct Points<T> {
    points: Vec<T>,
}

pub(crate) async fn cluster_timeseries(
    State(state): State<Arc<AppState>>,
    RawQuery(raw): RawQuery,
) -> ApiResult<Stamped<Points<DailyClusterPoint>>> {
    let params = Params::new(raw);
    let mut errors = ValidationErrors::default();
    let range = parse_range(params.last("from"), params.last("to"), &mut errors);
    errors.into_result(|| ())?;
    let loaded = state.current();
    let points = daily_cluster_proportions(
        &loaded.snapshot,
        &state.config().topics,
        &range.unwrap_or_else(DayRange::all),
    );
    Ok(stamp(&loaded, Points { points }))
}

#[derive(Serialize)]
pub(crate) struct TrendBody {
    keyword: String,
    points: Vec<TrendPoint>,
}

/// Missing bounds are clamped to the corpus date span so the dense series
/// stays finite; an empty corpus with no bounds gives no points.
pub(crate) async fn trends(
    State(state): State<Arc<AppState>>,
    RawQuery(raw): RawQuery,
) -> ApiResult<Stamped<TrendBody>> {
    let params = Params::new(raw);
    let mut errors = ValidationErrors::default();
    let keywords = params.all("k");
    if keywords.len() != 1 {
        errors.push("keywords", "exactly 1 required");
    }
    let range = parse_range(params.last("from"), params.last("to"), &mut errors);
    errors.into_result(|| ())?;

    let loaded = state.current();
    let keyword = keywords[0].to_string();
    let span = loaded.snapshot.stats().span();
    let explicit = |name: &str| params.last(name).is_some_and(|v| !v.trim().is_empty());
    let range = match (range, span) {
        (Some(r), _) if explicit("from") && explicit("to") => Some(r),
        (Some(r), Some(span)) => DayRange::new(
            if explicit("from") { r.from() } else { span.from() },
            if explicit("to") { r.to() } else { span.to() },
        )
        .ok(),
        (None, Some(span)) => Some(span),
        (_, None) => None,
    };
    let points = match range {
        Some(r) => keyword_trend(&loaded.snapshot, &keyword, &r)?,
        None => {
            // Still reject a bad keyword on an empty corpus.
            keyword_trend(&loaded.snapshot, &keyword, &DayRange::single(NaiveDate::MIN))?;
            Vec::new()
        }
    };
    Ok(stamp(&loaded, TrendBody { keyword, points }))
}

pub(crate) const DEFAULT_TOP_N: usize = 10;

pub(crate) async fn locations(
    State(state): State<Arc<AppState>>,
    RawQuery(raw): RawQuery,
) -> ApiResult<Stamped<mpoxdash_core::analytics::LocationBreakdown>> {
    let params = Params::new(raw);
    let mut errors = ValidationErrors::default();
    let range = parse_range(params.last("from"), params.last("to"), &mut errors);
    let top_n = match params.last("top_n").map(str::trim) {
        None | Some("") => NonZeroUsize::new(DEFAULT_TOP_N),
        Some(v) => {
            let n = v.parse::<usize>().ok().and_then(NonZeroUsize::new);
            if n.is_none() {
                errors.push("top_n", "must be a positive integer");
            }
            n
        }
    };
    let top_n = errors.into_result(|| top_n.expect("checked"))?;
    let loaded = state.current();
    let body = location_breakdown(&loaded.snapshot, &range.unwrap_or_else(DayRange::all), top_n);
    Ok(stamp(&loaded, body))
}

pub(crate) async fn volume(
    State(state): State<Arc<AppState>>,
    RawQuery(raw): RawQuery,
) -> ApiResult<Stamped<mpoxdash_core::VolumeComparison>> {
    let params = Params::new(raw);
    let mut errors = ValidationErrors::default();
    let a = period(&params, "a_from", "a_to", &mut errors);
    let b = period(&params, "b_from", "b_to", &mut errors);
    let (a, b) = errors.into_result(|| (a.expect("checked"), b.expect("checked")))?;
    let loaded = state.current();
    Ok(stamp(&loaded, volume_comparison(&loaded.snapshot, a, b)))
}

pub(crate) async fn reload(State(state): State<Arc<AppState>>) -> ApiResult<Value> {
    let worker = state.clone();
    let (old, fresh) = tokio::task::spawn_blocking(move || worker.reload())
        .await
        .map_err(|e| ApiError::Internal(format!("reload task failed: {e}")))?
        .map_err(|e| ApiError::Internal(format!("reload failed, previous snapshot kept: {e}")))?;
    tracing::info!(snapshot_id = %fresh.snapshot_id, total = fresh.snapshot.len(), "reloaded corpus");
    Ok(Json(json!({
        "snapshot_id": fresh.snapshot_id,
        "previous_snapshot_id": old.snapshot_id,
        "corpus_total": fresh.snapshot.stats().total,
        "changed": old.snapshot_id != fresh.snapshot_id,
    })))
}

pub(crate) async fn not_found(uri: axum::http::Uri) -> ApiError {
    ApiError::NotFound(ValidationErrors::single(
        "path",
        format!("no route for `{}`", uri.path()),
    ))
}

pub(crate) async fn method_not_allowed() -> ApiError {
    ApiError::MethodNotAllowed
}
