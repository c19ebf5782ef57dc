use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tokenize::single_token;
use crate::model::{parse_day, DayRange, Tweet};
use crate::validation::ValidationErrors;

pub const MAX_KEYWORDS: usize = 3;
pub const DEFAULT_PER_PAGE: u32 = 50;
pub const MAX_PER_PAGE: u32 = 200;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Combine {
    /// Every keyword must appear.
    #[default]
    All,
    /// At least one keyword must appear.
    Any,
}

impl FromStr for Combine {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "all" => Ok(Combine::All),
            "any" => Ok(Combine::Any),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SortOrder {
    #[default]
    RecencyDesc,
    LikesDesc,
    RetweetsDesc,
}

impl SortOrder {
    pub fn as_str(self) -> &'static str {
        match self {
            SortOrder::RecencyDesc => "recency_desc",
            SortOrder::LikesDesc => "likes_desc",
            SortOrder::RetweetsDesc => "retweets_desc",
        }
    }

    /// Result ordering; ties always fall back to ascending id.
    pub fn compare(self, a: &Tweet, b: &Tweet) -> std::cmp::Ordering {
        let primary = match self {
            SortOrder::RecencyDesc => b.created_at.cmp(&a.created_at),
            SortOrder::LikesDesc => b.engagement.like_count.cmp(&a.engagement.like_count),
            SortOrder::RetweetsDesc => b.engagement.retweet_count.cmp(&a.engagement.retweet_count),
        };
        primary.then_with(|| a.id.cmp(&b.id))
    }
}

impl fmt::Display for SortOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SortOrder {
    type Err = ();
    fn from_str(s: &str) -> Result<Self, ()> {
        [SortOrder::RecencyDesc, SortOrder::LikesDesc, SortOrder::RetweetsDesc]
            .into_iter()
            .find(|o| o.as_str() == s)
            .ok_or(())
    }
}

/// A validated search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Query {
    keywords: Vec<String>,
    combine: Combine,
    min_likes: u64,
    min_replies: u64,
    min_retweets: u64,
    date_range: Option<DayRange>,
    sort: SortOrder,
    page: u32,
    per_page: u32,
}

impl Query {
    /// A query with default filters, sort and paging.
    pub fn new<S: AsRef<str>>(keywords: &[S]) -> Result<Self, ValidationErrors> {
        let mut errors = ValidationErrors::default();
        let keywords = check_keywords(keywords.iter().map(AsRef::as_ref), &mut errors);
        errors.into_result(|| Query {
            keywords,
            combine: Combine::All,
            min_likes: 0,
            min_replies: 0,
            min_retweets: 0,
            date_range: None,
            sort: SortOrder::RecencyDesc,
            page: 1,
            per_page: DEFAULT_PER_PAGE,
        })
    }

    pub fn with_combine(mut self, combine: Combine) -> Self {
        self.combine = combine;
        self
    }

    pub fn with_min_likes(mut self, n: u64) -> Self {
        self.min_likes = n;
        self
    }

    pub fn with_min_replies(mut self, n: u64) -> Self {
        self.min_replies = n;
        self
    }

    pub fn with_min_retweets(mut self, n: u64) -> Self {
        self.min_retweets = n;
        self
    }

    pub fn with_range(mut self, range: Option<DayRange>) -> Self {
        self.date_range = range;
        self
    }

    pub fn with_sort(mut self, sort: SortOrder) -> Self {
        self.sort = sort;
        self
    }

    pub fn with_page(mut self, page: u32, per_page: u32) -> Result<Self, ValidationErrors> {
        let mut errors = ValidationErrors::default();
        if page == 0 {
            errors.push("page", "must be a positive integer");
        }
        if !(1..=MAX_PER_PAGE).contains(&per_page) {
            errors.push("per_page", format!("must be between 1 and {MAX_PER_PAGE}"));
        }
        errors.into_result(|| {
            self.page = page;
            self.per_page = per_page;
            self
        })
    }

    pub fn keywords(&self) -> &[String] {
        &self.keywords
    }

    pub fn combine(&self) -> Combine {
        self.combine
    }

    pub fn min_likes(&self) -> u64 {
        self.min_likes
    }

    pub fn min_replies(&self) -> u64 {
        self.min_replies
    }

    pub fn min_retweets(&self) -> u64 {
        self.min_retweets
    }

    pub fn date_range(&self) -> Option<DayRange> {
        self.date_range
    }

    pub fn sort(&self) -> SortOrder {
        self.sort
    }

    pub fn page(&self) -> u32 {
        self.page
    }

    pub fn per_page(&self) -> u32 {
        self.per_page
    }
}

/// A search request as received, before validation.
///
/// Field values are the raw parameter strings; `None` means not supplied.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SearchRequest {
    pub keywords: Vec<String>,
    pub combine: Option<String>,
    pub min_likes: Option<String>,
    pub min_replies: Option<String>,
    pub min_retweets: Option<String>,
    pub from: Option<String>,
    pub to: Option<String>,
    pub sort: Option<String>,
    pub page: Option<String>,
    pub per_page: Option<String>,
}

impl SearchRequest {
    /// Collects wire parameters: `k` (repeatable), `combine`, `min_likes`,
    /// `min_replies`, `min_retweets`, `from`, `to`, `sort`, `page`, `per_page`.
    /// Unknown names are ignored; for single-valued names the last one wins.
    pub fn from_pairs<I, K, V>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (K, V)>,
        K: AsRef<str>,
        V: Into<String>,
    {
        let mut req = SearchRequest::default();
        for (k, v) in pairs {
            let v = v.into();
            let slot = match k.as_ref() {
                "k" => {
                    req.keywords.push(v);
                    continue;
                }
                "combine" => &mut req.combine,
                "min_likes" => &mut req.min_likes,
                "min_replies" => &mut req.min_replies,
                "min_retweets" => &mut req.min_retweets,
                "from" => &mut req.from,
                "to" => &mut req.to,
                "sort" => &mut req.sort,
                "page" => &mut req.page,
                "per_page" => &mut req.per_page,
                _ => continue,
            };
            *slot = Some(v);
        }
        req
    }
}

fn check_keywords<'a>(
    raw: impl ExactSizeIterator<Item = &'a str>,
    errors: &mut ValidationErrors,
) -> Vec<String> {
    let n = raw.len();
    if n == 0 {
        errors.push("keywords", "at least 1 required");
    } else if n > MAX_KEYWORDS {
        errors.push("keywords", format!("at most {MAX_KEYWORDS}"));
    }
    let mut out = Vec::with_capacity(n);
    let mut bad = false;
    for kw in raw {
        match single_token(kw) {
            Some(t) => out.push(t),
            None => bad = true,
        }
    }
    if bad {
        errors.push("keywords", "single token required");
    }
    out
}

fn parse_u64(field: &str, raw: Option<&str>, errors: &mut ValidationErrors) -> u64 {
    match raw.map(str::trim) {
        None | Some("") => 0,
        Some(v) => v.parse::<u64>().unwrap_or_else(|_| {
            errors.push(field, "must be a non-negative integer");
            0
        }),
    }
}

/// Parses an optional inclusive `from`/`to` day pair; a missing bound is open.
/// Errors go under the `from` and `to` field names.
pub fn parse_range(
    from: Option<&str>,
    to: Option<&str>,
    errors: &mut ValidationErrors,
) -> Option<DayRange> {
    let mut day = |field: &str, raw: Option<&str>| match raw.map(str::trim) {
        None | Some("") => Ok(None),
        Some(v) => parse_day(v).map(Some).map_err(|_| {
            errors.push(field, "expected a YYYY-MM-DD date");
        }),
    };
    let from = day("from", from);
    let to = day("to", to);
    match (from, to) {
        (Ok(None), Ok(None)) => None,
        (Ok(f), Ok(t)) => {
            let all = DayRange::all();
            match DayRange::new(f.unwrap_or(all.from()), t.unwrap_or(all.to())) {
                Ok(r) => Some(r),
                Err(_) => {
                    errors.push("from", "must not be after `to`");
                    None
                }
            }
        }
        _ => None,
    }
}

/// Validates and normalizes a raw search request, collecting every error.
///
/// `per_page_limit` narrows the upper bound of `per_page` below [`MAX_PER_PAGE`].
pub fn validate_query(req: &SearchRequest, per_page_limit: u32) -> Result<Query, ValidationErrors> {
    let mut errors = ValidationErrors::default();
    let keywords = check_keywords(req.keywords.iter().map(String::as_str), &mut errors);

    let combine = match req.combine.as_deref().map(str::trim) {
        None | Some("") => Combine::All,
        Some(v) => v.parse().unwrap_or_else(|_| {
            errors.push("combine", "expected `all` or `any`");
            Combine::All
        }),
    };
    let min_likes = parse_u64("min_likes", req.min_likes.as_deref(), &mut errors);
    let min_replies = parse_u64("min_replies", req.min_replies.as_deref(), &mut errors);
    let min_retweets = parse_u64("min_retweets", req.min_retweets.as_deref(), &mut errors);
    let date_range = parse_range(req.from.as_deref(), req.to.as_deref(), &mut errors);
    let sort = match req.sort.as_deref().map(str::trim) {
        None | Some("") => SortOrder::RecencyDesc,
        Some(v) => v.parse().unwrap_or_else(|_| {
            errors.push("sort", "expected `recency_desc`, `likes_desc` or `retweets_desc`");
            SortOrder::RecencyDesc
        }),
    };

    let page = match req.page.as_deref().map(str::trim) {
        None | Some("") => 1,
        Some(v) => match v.parse::<u32>() {
            Ok(p) if p >= 1 => p,
            _ => {
                errors.push("page", "must be a positive integer");
                1
            }
        },
    };
    let limit = per_page_limit.clamp(1, MAX_PER_PAGE);
    let per_page = match req.per_page.as_deref().map(str::trim) {
        None | Some("") => DEFAULT_PER_PAGE.min(limit),
        Some(v) => match v.parse::<u32>() {
            Ok(n) if (1..=limit).contains(&n) => n,
            _ => {
                errors.push("per_page", format!("must be between 1 and {limit}"));
                DEFAULT_PER_PAGE
            }
        },
    };

    errors.into_result(|| Query {
        keywords,
        combine,
        min_likes,
        min_replies,
        min_retweets,
        date_range,
        sort,
        page,
        per_page,
    })
}
