use std::borrow::Cow;

use unicode_normalization::{is_nfc_quick, IsNormalized, UnicodeNormalization};

/// Splits text into lowercase tokens.
///
/// A token is a maximal run of Unicode alphanumeric characters of the NFC form
/// of `text`. Everything else, including `#` and `@`, separates tokens, so
/// `"#mpox"` yields `"mpox"`. This is the only matching definition used for
/// relevance filtering, search and lexicon lookup.
pub fn tokenize(text: &str) -> Vec<String> {
    let text: Cow<'_, str> = match is_nfc_quick(text.chars()) {
        IsNormalized::Yes => Cow::Borrowed(text),
        _ => Cow::Owned(text.nfc().collect()),
    };
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|run| !run.is_empty())
        .map(|run| run.to_lowercase())
        .collect()
}

/// Normalizes a user-supplied keyword; `None` unless it is exactly one token.
pub fn single_token(keyword: &str) -> Option<String> {
    let mut tokens = tokenize(keyword);
    if tokens.len() == 1 {
        tokens.pop()
    } else {
        None
    }
}
