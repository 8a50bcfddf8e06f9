//! Stateless HTTP facade over `west-core` for the interactive UI.
//!
//! Every endpoint speaks JSON. Successful responses carry the fields the UI
//! reads; every other response body is a single [`ApiError`]. Heavy work runs
//! on the blocking pool under a per-request [`Guard`] whose cancel flag is
//! raised if the client goes away before the answer is ready.

use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::{Method, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;
use west_core::{
    formula_equivalence, parse_formula, parse_trace, pretty, random_formulas, regex_to_text, satisfies,
    simp_pad_west_reg_guarded, west_reg_guarded, BudgetLimit, EquivError, EquivVerdict, ExpansionBudget, Formula,
    FormulaGenParams, Guard, Interrupted, ParseError, ParseErrorKind, WestError,
};

pub const DEFAULT_BIND: &str = "127.0.0.1:8080";
pub const DEFAULT_TIME_BUDGET: Duration = Duration::from_secs(5);
pub const DEFAULT_EXPANSION_BUDGET: u64 = 1 << 24;

/// Upper limits on `/api/random` query parameters.
pub const MAX_NVARS: usize = 64;
pub const MAX_DEPTH: usize = 8;
pub const MAX_BOUND: usize = 64;
pub const MAX_COUNT: usize = 1000;

/// Server configuration, read once at startup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    /// Wall-clock budget for one request's computation.
    pub time_budget: Duration,
    /// Cap on alternatives in any intermediate regex and on the bit strings
    /// an equivalence check may enumerate.
    pub expansion_budget: u64,
    /// Directory holding the built UI bundle, served for non-API paths.
    pub ui_dir: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config { time_budget: DEFAULT_TIME_BUDGET, expansion_budget: DEFAULT_EXPANSION_BUDGET, ui_dir: None }
    }
}

impl Config {
    /// Reads `WEST_TIME_BUDGET_MS`, `WEST_EXPANSION_BUDGET` and `WEST_UI_DIR`.
    pub fn from_env() -> Result<Self, String> {
        Self::from_lookup(|key| std::env::var(key).ok())
    }

    pub fn from_lookup(lookup: impl Fn(&str) -> Option<String>) -> Result<Self, String> {
        let mut config = Config::default();
        if let Some(ms) = lookup("WEST_TIME_BUDGET_MS") {
            let ms: u64 = ms.trim().parse().map_err(|_| format!("WEST_TIME_BUDGET_MS: not a number: {ms:?}"))?;
            config.time_budget = Duration::from_millis(ms);
        }
        if let Some(n) = lookup("WEST_EXPANSION_BUDGET") {
            config.expansion_budget = match n.trim().parse() {
                Ok(n) if n > 0 => n,
                _ => return Err(format!("WEST_EXPANSION_BUDGET: not a positive number: {n:?}")),
            };
        }
        config.ui_dir = lookup("WEST_UI_DIR").filter(|d| !d.is_empty()).map(PathBuf::from);
        Ok(config)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    ParseError,
    IntervalError,
    BudgetExceeded,
    Internal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

/// The body of every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub position: Option<Position>,
    #[serde(skip)]
    status: u16,
}

impl ApiError {
    fn new(status: StatusCode, code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError { code, message: message.into(), position: None, status: status.as_u16() }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, ErrorCode::ParseError, message)
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, ErrorCode::Internal, message)
    }

    fn budget(message: impl Into<String>) -> Self {
        Self::new(StatusCode::UNPROCESSABLE_ENTITY, ErrorCode::BudgetExceeded, message)
    }

    /// A diagnostic for the named request field. `field` prefixes the
    /// message when the request has more than one text field.
    fn parse(e: ParseError, field: Option<&str>) -> Self {
        let code = match e.kind {
            ParseErrorKind::Interval => ErrorCode::IntervalError,
            ParseErrorKind::Syntax | ParseErrorKind::Width => ErrorCode::ParseError,
        };
        let message = match field {
            Some(field) => format!("{field}: {}", e.message),
            None => e.message,
        };
        ApiError {
            position: Some(Position { line: e.line, column: e.column }),
            ..Self::new(StatusCode::BAD_REQUEST, code, message)
        }
    }

    fn interrupted(e: Interrupted) -> Self {
        match e {
            Interrupted::Timeout => Self::budget("time budget exhausted"),
            Interrupted::TooManyAlternatives { limit } => {
                Self::budget(format!("an intermediate regex exceeded {limit} alternatives"))
            }
            Interrupted::Cancelled => Self::budget("request cancelled"),
        }
    }

    fn west(e: WestError) -> Self {
        match e {
            WestError::Interrupted(i) => Self::interrupted(i),
            other => Self::internal(other.to_string()),
        }
    }

    pub fn status(&self) -> StatusCode {
        StatusCode::from_u16(self.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status(), Json(&self)).into_response()
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl From<QueryRejection> for ApiError {
    fn from(e: QueryRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegexRequest {
    pub formula: String,
    #[serde(default)]
    pub pad: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegexResponse {
    pub regex: String,
    pub nvars: usize,
    pub complen: usize,
    pub alternatives: usize,
    pub ms: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchRequest {
    pub formula: String,
    pub trace: String,
    #[serde(default)]
    pub pad: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResponse {
    #[serde(rename = "match")]
    pub matched: bool,
    pub satisfies: bool,
    pub complen: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivRequest {
    pub formula1: String,
    pub formula2: String,
    /// Most free (`S`) positions any one padded alternative may carry.
    #[serde(default)]
    pub budget: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Equivalent,
    Inequivalent,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivResponse {
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RandomQuery {
    #[serde(default = "defaults::nvars")]
    pub nvars: usize,
    #[serde(default = "defaults::depth")]
    pub depth: usize,
    #[serde(default = "defaults::bound")]
    pub bound: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "defaults::count")]
    pub count: usize,
}

mod defaults {
    pub fn nvars() -> usize {
        3
    }
    pub fn depth() -> usize {
        2
    }
    pub fn bound() -> usize {
        3
    }
    pub fn count() -> usize {
        10
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RandomResponse {
    pub formulas: Vec<String>,
}

pub fn router(config: Config) -> Router {
    let ui_dir = config.ui_dir.clone();
    let api = Router::new()
        .route("/api/regex", post(regex_handler))
        .route("/api/match", post(match_handler))
        .route("/api/equiv", post(equiv_handler))
        .route("/api/random", get(random_handler))
        .method_not_allowed_fallback(method_not_allowed)
        .with_state(Arc::new(config));
    match ui_dir {
        Some(dir) => api.fallback_service(ServeDir::new(dir).not_found_service(get(not_found).post(not_found))),
        None => api.fallback(not_found),
    }
}

async fn not_found(method: Method, uri: Uri) -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, ErrorCode::ParseError, format!("no route for {method} {}", uri.path()))
}

async fn method_not_allowed(method: Method, uri: Uri) -> ApiError {
    ApiError::new(
        StatusCode::METHOD_NOT_ALLOWED,
        ErrorCode::ParseError,
        format!("{method} is not allowed on {}", uri.path()),
    )
}

/// Raises the cancel flag when dropped, which happens early if the
/// connection closes while the blocking work is still running.
struct CancelOnDrop(Arc<AtomicBool>);

impl Drop for CancelOnDrop {
    fn drop(&mut self) {
        self.0.store(true, Ordering::Relaxed);
    }
}

/// Runs `work` on the blocking pool under the configured time and
/// alternative budgets.
async fn guarded<T: Send + 'static>(
    config: &Config,
    work: impl FnOnce(Guard) -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    let flag = Arc::new(AtomicBool::new(false));
    let _cancel = CancelOnDrop(flag.clone());
    let guard = Guard::unlimited()
        .with_timeout(config.time_budget)
        .with_cancel_flag(flag)
        .with_max_alternatives(usize::try_from(config.expansion_budget).unwrap_or(usize::MAX));
    tokio::task::spawn_blocking(move || work(guard))
        .await
        .map_err(|e| ApiError::internal(format!("worker failed: {e}")))?
}

fn formula(text: &str, field: Option<&str>) -> Result<Formula, ApiError> {
    parse_formula(text).map_err(|e| ApiError::parse(e, field))
}

fn transform(f: &Formula, pad: bool, guard: &Guard) -> Result<west_core::WestRegex, ApiError> {
    if pad { simp_pad_west_reg_guarded(f, guard) } else { west_reg_guarded(f, guard) }.map_err(ApiError::west)
}

async fn regex_handler(
    State(config): State<Arc<Config>>,
    body: Result<Json<RegexRequest>, JsonRejection>,
) -> ApiResult<RegexResponse> {
    let Json(req) = body?;
    let f = formula(&req.formula, None)?;
    let response = guarded(&config, move |guard| {
        let start = Instant::now();
        let regex = transform(&f, req.pad, &guard)?;
        let ms = (start.elapsed().as_secs_f64() * 1e6).round() / 1e3;
        Ok(RegexResponse {
            regex: regex_to_text(&regex),
            nvars: f.num_vars(),
            complen: f.complen(),
            alternatives: regex.len(),
            ms,
        })
    })
    .await?;
    Ok(Json(response))
}

async fn match_handler(
    State(config): State<Arc<Config>>,
    body: Result<Json<MatchRequest>, JsonRejection>,
) -> ApiResult<MatchResponse> {
    let Json(req) = body?;
    let f = formula(&req.formula, Some("formula"))?;
    let trace = parse_trace(&req.trace, f.num_vars()).map_err(|e| ApiError::parse(e, Some("trace")))?;
    let response = guarded(&config, move |guard| {
        let regex = transform(&f, req.pad, &guard)?;
        let states = trace.states();
        let matched = regex.matches(states);
        let sat = satisfies(states, &f);
        let complen = f.complen();
        if matched != sat && states.len() >= complen {
            return Err(ApiError::internal(format!(
                "regex and semantics disagree on {:?} for {}: match {matched}, satisfies {sat}",
                req.trace,
                pretty(&f)
            )));
        }
        Ok(MatchResponse { matched, satisfies: sat, complen })
    })
    .await?;
    Ok(Json(response))
}

async fn equiv_handler(
    State(config): State<Arc<Config>>,
    body: Result<Json<EquivRequest>, JsonRejection>,
) -> ApiResult<EquivResponse> {
    let Json(req) = body?;
    let f1 = formula(&req.formula1, Some("formula1"))?;
    let f2 = formula(&req.formula2, Some("formula2"))?;
    let budget = ExpansionBudget::with_free_bits(req.budget.unwrap_or(ExpansionBudget::DEFAULT_FREE_BITS))
        .with_max_expansions(config.expansion_budget);
    let response = guarded(&config, move |guard| {
        let verdict = formula_equivalence(&f1, &f2, &budget, &guard).map_err(|e| match e {
            EquivError::West(e) => ApiError::west(e),
            other => ApiError::internal(other.to_string()),
        })?;
        Ok(match verdict {
            EquivVerdict::Equivalent => EquivResponse { verdict: Verdict::Equivalent, witness: None },
            EquivVerdict::Inequivalent { witness } => EquivResponse {
                verdict: Verdict::Inequivalent,
                witness: Some(west_core::syntax::concrete_to_text(&witness)),
            },
            // The caller's own free-bit budget is an answer; the server's
            // expansion cap is a refusal.
            EquivVerdict::LimitExceeded { limit: BudgetLimit::FreeBits, .. } => {
                EquivResponse { verdict: Verdict::Limit, witness: None }
            }
            EquivVerdict::LimitExceeded { limit: BudgetLimit::Expansions, reason } => {
                return Err(ApiError::budget(reason));
            }
        })
    })
    .await?;
    Ok(Json(response))
}

async fn random_handler(query: Result<Query<RandomQuery>, QueryRejection>) -> ApiResult<RandomResponse> {
    let Query(q) = query?;
    let check = |name: &str, value: usize, lo: usize, hi: usize| {
        if (lo..=hi).contains(&value) {
            Ok(())
        } else {
            Err(ApiError::bad_request(format!("{name} must be in {lo}..={hi}, got {value}")))
        }
    };
    check("nvars", q.nvars, 1, MAX_NVARS)?;
    check("depth", q.depth, 0, MAX_DEPTH)?;
    check("bound", q.bound, 0, MAX_BOUND)?;
    check("count", q.count, 0, MAX_COUNT)?;
    let params = FormulaGenParams::new(q.nvars, q.depth, q.bound, q.seed, q.count);
    let formulas = tokio::task::spawn_blocking(move || random_formulas(&params).iter().map(pretty).collect())
        .await
        .map_err(|e| ApiError::internal(format!("worker failed: {e}")))?;
    Ok(Json(RandomResponse { formulas }))
}
