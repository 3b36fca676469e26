//! Tokenization of titles, abstracts and questions.
//!
//! Pipeline: lowercase → split on every character that is not a letter or a
//! digit → drop stop words → drop single-digit tokens. No stemming.

use std::collections::{BTreeMap, HashSet};
use std::io::{self, BufRead};

const DEFAULT_STOPWORDS: &str = include_str!("../resources/stopwords.txt");

/// A set of lowercase stop words.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StopWords {
    words: HashSet<String>,
}

impl StopWords {
    /// An empty list; nothing is filtered.
    pub fn none() -> Self {
        Self::default()
    }

    /// The bundled English list.
    pub fn english() -> Self {
        Self::parse(DEFAULT_STOPWORDS)
    }

    /// Parses the stop-word file format: one word per line, `#` lines and
    /// blank lines ignored.
    pub fn parse(contents: &str) -> Self {
        contents.lines().collect()
    }

    pub fn from_reader<R: BufRead>(reader: R) -> io::Result<Self> {
        let mut words = HashSet::new();
        for line in reader.lines() {
            let line = line?;
            if let Some(word) = normalize_entry(&line) {
                words.insert(word);
            }
        }
        Ok(Self { words })
    }

    pub fn contains(&self, token: &str) -> bool {
        self.words.contains(token)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

fn normalize_entry(line: &str) -> Option<String> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        None
    } else {
        Some(trimmed.to_lowercase())
    }
}

impl<'a> FromIterator<&'a str> for StopWords {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        Self {
            words: iter.into_iter().filter_map(normalize_entry).collect(),
        }
    }
}

/// Token sequence of a text together with its term frequencies.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenizedText {
    tokens: Vec<String>,
    tf: BTreeMap<String, u32>,
}

impl TokenizedText {
    pub fn from_tokens(tokens: Vec<String>) -> Self {
        let mut tf = BTreeMap::new();
        for token in &tokens {
            *tf.entry(token.clone()).or_insert(0) += 1;
        }
        Self { tokens, tf }
    }

    /// Tokens in their original order, duplicates preserved.
    pub fn tokens(&self) -> &[String] {
        &self.tokens
    }

    /// Term frequencies, iterated in lexicographic token order.
    pub fn tf(&self) -> &BTreeMap<String, u32> {
        &self.tf
    }

    pub fn term_frequency(&self, token: &str) -> u32 {
        self.tf.get(token).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Distinct tokens, lexicographic order.
    pub fn distinct(&self) -> impl Iterator<Item = &str> {
        self.tf.keys().map(String::as_str)
    }
}

pub fn tokenize(text: &str, stopwords: &StopWords) -> TokenizedText {
    let lowered = text.to_lowercase();
    let tokens = lowered
        .split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .filter(|t| !is_single_digit(t))
        .filter(|t| !stopwords.contains(t))
        .map(str::to_owned)
        .collect();
    TokenizedText::from_tokens(tokens)
}

fn is_single_digit(token: &str) -> bool {
    let mut chars = token.chars();
    matches!((chars.next(), chars.next()), (Some(c), None) if c.is_numeric())
}
