//! Term normalization: lowercase, split on non-alphanumerics, drop numbers
//! and stopwords, Porter-stem the rest.

use std::collections::HashSet;

const DEFAULT_STOPWORDS: &str = include_str!("stopwords_en.txt");

/// A set of words that are never indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    pub fn english() -> Self {
        Self::from_lines(DEFAULT_STOPWORDS)
    }

    pub fn empty() -> Self {
        Stopwords(HashSet::new())
    }

    /// One word per line; blank lines and `#` comments are skipped.
    pub fn from_lines(text: &str) -> Self {
        Stopwords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for Stopwords {
    fn default() -> Self {
        Self::english()
    }
}

/// Splits `text` into lowercase alphanumeric words without any filtering.
pub fn words(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .map(str::to_lowercase)
}

/// Normalizes one lowercase word, returning `None` when it must not be indexed.
pub(crate) fn normalize_word(word: &str, stopwords: &Stopwords, index_numbers: bool) -> Option<String> {
    if !index_numbers && word.chars().all(|c| c.is_numeric()) {
        return None;
    }
    if stopwords.contains(word) {
        return None;
    }
    let stem = porter_stemmer::stem(word);
    if stem.is_empty() || stopwords.contains(&stem) {
        return None;
    }
    Some(stem)
}

/// Runs the full normalization pipeline over a run of character data.
pub fn stems(text: &str, stopwords: &Stopwords, index_numbers: bool) -> Vec<String> {
    words(text)
        .filter_map(|w| normalize_word(&w, stopwords, index_numbers))
        .collect()
}
