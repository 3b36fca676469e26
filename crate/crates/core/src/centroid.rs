//! Text centroids over word embeddings.
//!
//! The IDF-weighted centroid of a text `t` is
//! `Σ_j w_j · TF(w_j, t) · IDF(w_j) / Σ_j TF(w_j, t) · IDF(w_j)`, summed over
//! the in-vocabulary tokens of `t`. The simple centroid is the same ratio with
//! every IDF set to 1. Accumulation is in f64.

use thiserror::Error;

use crate::embedding::{EmbeddingError, EmbeddingStore};
use crate::text::TokenizedText;

#[derive(Debug, Error, PartialEq, Eq)]
#[error("dimension mismatch: {left} vs {right}")]
pub struct DimensionMismatch {
    pub left: usize,
    pub right: usize,
}

/// Which centroid a text (or an index) is represented with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CentroidKind {
    Simple,
    Idf,
}

impl CentroidKind {
    pub fn label(self) -> &'static str {
        match self {
            CentroidKind::Simple => "cent",
            CentroidKind::Idf => "centidf",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        match label {
            "cent" => Some(CentroidKind::Simple),
            "centidf" => Some(CentroidKind::Idf),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Centroid {
    vec: Vec<f64>,
    norm: f64,
    n_known_tokens: usize,
}

impl Centroid {
    pub fn zero(dim: usize) -> Self {
        Self {
            vec: vec![0.0; dim],
            norm: 0.0,
            n_known_tokens: 0,
        }
    }

    /// Wraps a raw vector, e.g. a precomputed document representation.
    pub fn from_vec(vec: Vec<f64>) -> Self {
        let norm = l2_norm(&vec);
        let n_known_tokens = usize::from(norm > 0.0);
        Self {
            vec,
            norm,
            n_known_tokens,
        }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.vec
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.vec
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// Number of token occurrences that contributed with non-zero weight.
    pub fn n_known_tokens(&self) -> usize {
        self.n_known_tokens
    }

    pub fn is_zero(&self) -> bool {
        self.norm == 0.0
    }
}

fn l2_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Weighted mean of the embeddings of the in-vocabulary tokens of `text`.
/// `weight` maps a token to its non-negative per-occurrence weight.
fn weighted_centroid<F>(text: &TokenizedText, store: &EmbeddingStore, mut weight: F) -> Centroid
where
    F: FnMut(&str) -> f64,
{
    let dim = store.dim();
    let mut acc = vec![0.0f64; dim];
    let mut total = 0.0f64;
    let mut n_known = 0usize;

    for (token, &tf) in text.tf() {
        let Some(vector) = store.vector(token) else {
            continue;
        };
        let w = f64::from(tf) * weight(token);
        if w <= 0.0 {
            continue;
        }
        for (a, &x) in acc.iter_mut().zip(vector) {
            *a += w * f64::from(x);
        }
        total += w;
        n_known += tf as usize;
    }

    if total == 0.0 {
        return Centroid::zero(dim);
    }
    acc.iter_mut().for_each(|a| *a /= total);
    let norm = l2_norm(&acc);
    Centroid {
        vec: acc,
        norm,
        n_known_tokens: n_known,
    }
}

pub fn centroid_simple(text: &TokenizedText, store: &EmbeddingStore) -> Centroid {
    weighted_centroid(text, store, |_| 1.0)
}

pub fn centroid_idf(
    text: &TokenizedText,
    store: &EmbeddingStore,
) -> Result<Centroid, EmbeddingError> {
    let idf = store.idf_table().ok_or(EmbeddingError::IdfMissing)?;
    // The ratio is invariant to rescaling the IDF values; dividing by the
    // largest contributing IDF makes equal IDFs exactly 1.0.
    let max_idf = text
        .distinct()
        .filter(|t| store.contains(t))
        .map(|t| idf.get(t))
        .fold(0.0f64, f64::max);
    if max_idf == 0.0 {
        return Ok(Centroid::zero(store.dim()));
    }
    Ok(weighted_centroid(text, store, |t| idf.get(t) / max_idf))
}

pub fn centroid(
    kind: CentroidKind,
    text: &TokenizedText,
    store: &EmbeddingStore,
) -> Result<Centroid, EmbeddingError> {
    match kind {
        CentroidKind::Simple => Ok(centroid_simple(text, store)),
        CentroidKind::Idf => centroid_idf(text, store),
    }
}

/// `dot(a, b) / (‖a‖ ‖b‖)`, or 0 when either vector is zero.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64, DimensionMismatch> {
    if a.len() != b.len() {
        return Err(DimensionMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Ok(0.0);
    }
    Ok((dot / (na.sqrt() * nb.sqrt())).clamp(-1.0, 1.0))
}
