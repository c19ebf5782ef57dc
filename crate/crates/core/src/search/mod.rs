//! Tokenizer, inverted index and the keyword + engagement search.

mod index;
mod query;
mod tokenize;

pub use index::{execute, Index, ResultPage};
pub use query::{
    parse_range, validate_query, Combine, Query, SearchRequest, SortOrder, DEFAULT_PER_PAGE,
    MAX_KEYWORDS, MAX_PER_PAGE,
};
pub use tokenize::{single_token, tokenize};
