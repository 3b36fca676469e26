//! Relaxed Word Mover's Distance.
//!
//! RWMD-Q moves every question word to its nearest document word, RWMD-D
//! every document word to its nearest question word, and RWMD-MAX takes the
//! larger of the two. Distances are Euclidean; repeated tokens contribute
//! once per occurrence.

use std::fmt;
use std::str::FromStr;

use crate::centroid::DimensionMismatch;
use crate::embedding::EmbeddingStore;
use crate::text::TokenizedText;

/// In-vocabulary tokens of a text paired with their embeddings.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedText<'a, T = f32> {
    tokens: Vec<(&'a str, &'a [T])>,
}

impl<'a, T> EmbeddedText<'a, T> {
    pub fn new(tokens: Vec<(&'a str, &'a [T])>) -> Self {
        Self { tokens }
    }

    pub fn tokens(&self) -> &[(&'a str, &'a [T])] {
        &self.tokens
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn push(&mut self, token: &'a str, vector: &'a [T]) {
        self.tokens.push((token, vector));
    }
}

impl<'a> EmbeddedText<'a, f32> {
    /// Looks up every token occurrence; out-of-vocabulary tokens are skipped.
    pub fn from_text(text: &'a TokenizedText, store: &'a EmbeddingStore) -> Self {
        Self {
            tokens: text
                .tokens()
                .iter()
                .filter_map(|t| store.vector(t).map(|v| (t.as_str(), v)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RwmdMethod {
    Query,
    Document,
    Max,
}

impl RwmdMethod {
    pub fn label(self) -> &'static str {
        match self {
            RwmdMethod::Query => "rwmdq",
            RwmdMethod::Document => "rwmdd",
            RwmdMethod::Max => "rwmdmax",
        }
    }

    pub fn score<T: Copy + Into<f64>>(
        self,
        q: &EmbeddedText<'_, T>,
        d: &EmbeddedText<'_, T>,
    ) -> Result<f64, DimensionMismatch> {
        match self {
            RwmdMethod::Query => rwmd_q(q, d),
            RwmdMethod::Document => rwmd_d(q, d),
            RwmdMethod::Max => rwmd_max(q, d),
        }
    }
}

impl fmt::Display for RwmdMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for RwmdMethod {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "rwmdq" | "q" => Ok(RwmdMethod::Query),
            "rwmdd" | "d" => Ok(RwmdMethod::Document),
            "rwmdmax" | "max" => Ok(RwmdMethod::Max),
            _ => Err(format!(
                "unknown RWMD method {s:?} (expected rwmd-q, rwmd-d or rwmd-max)"
            )),
        }
    }
}

fn squared_distance<T: Copy + Into<f64>>(a: &[T], b: &[T]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let d = x.into() - y.into();
            d * d
        })
        .sum()
}

/// `Σ_{w ∈ from} min_{w' ∈ to} ‖w − w'‖`; `+∞` if `to` is empty and `from` is not.
fn one_sided<T: Copy + Into<f64>>(
    from: &EmbeddedText<'_, T>,
    to: &EmbeddedText<'_, T>,
) -> Result<f64, DimensionMismatch> {
    if from.is_empty() {
        return Ok(0.0);
    }
    if to.is_empty() {
        return Ok(f64::INFINITY);
    }
    let dim = from.tokens[0].1.len();
    for (_, v) in from.tokens.iter().chain(&to.tokens) {
        if v.len() != dim {
            return Err(DimensionMismatch {
                left: dim,
                right: v.len(),
            });
        }
    }
    let mut total = 0.0;
    for (_, w) in &from.tokens {
        let nearest = to
            .tokens
            .iter()
            .map(|(_, w2)| squared_distance(w, w2))
            .fold(f64::INFINITY, f64::min);
        total += nearest.sqrt();
    }
    Ok(total)
}

pub fn rwmd_q<T: Copy + Into<f64>>(
    q: &EmbeddedText<'_, T>,
    d: &EmbeddedText<'_, T>,
) -> Result<f64, DimensionMismatch> {
    one_sided(q, d)
}

pub fn rwmd_d<T: Copy + Into<f64>>(
    q: &EmbeddedText<'_, T>,
    d: &EmbeddedText<'_, T>,
) -> Result<f64, DimensionMismatch> {
    one_sided(d, q)
}

pub fn rwmd_max<T: Copy + Into<f64>>(
    q: &EmbeddedText<'_, T>,
    d: &EmbeddedText<'_, T>,
) -> Result<f64, DimensionMismatch> {
    Ok(rwmd_q(q, d)?.max(rwmd_d(q, d)?))
}
