//! Word embeddings and inverse document frequencies.
//!
//! Embeddings are read from the word2vec/GloVe text format: an optional
//! `V D` header line, then `token f1 ... fD` per line. IDF tables are
//! persisted as `#ndocs=N` followed by `token<TAB>idf` lines.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use thiserror::Error;

use crate::text::TokenizedText;

#[derive(Debug, Error)]
pub enum EmbeddingError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: expected {expected} components, found {found}")]
    DimensionMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("embedding file contains no vectors")]
    Empty,
    #[error("IDF scores have not been computed or loaded")]
    IdfMissing,
    #[error("corpus stream yielded {seen} documents but n_docs = {declared}")]
    DocCountMismatch { declared: usize, seen: usize },
}

/// Vocabulary, embedding matrix and (optionally) IDF scores.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingStore {
    dim: usize,
    vocab: HashMap<String, usize>,
    matrix: Vec<f32>,
    idf: Option<IdfTable>,
}

impl EmbeddingStore {
    /// Builds a store in memory. Later duplicates overwrite earlier ones.
    pub fn from_vectors<I, S>(dim: usize, entries: I) -> Result<Self, EmbeddingError>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        let mut store = Self {
            dim,
            vocab: HashMap::new(),
            matrix: Vec::new(),
            idf: None,
        };
        for (i, (word, vector)) in entries.into_iter().enumerate() {
            if vector.len() != dim {
                return Err(EmbeddingError::DimensionMismatch {
                    line: i + 1,
                    expected: dim,
                    found: vector.len(),
                });
            }
            if vector.iter().any(|v| !v.is_finite()) {
                return Err(EmbeddingError::Parse {
                    line: i + 1,
                    message: "non-finite component".into(),
                });
            }
            store.insert(word.into(), &vector);
        }
        Ok(store)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EmbeddingError> {
        Self::read_text(BufReader::new(File::open(path)?))
    }

    pub fn read_text<R: BufRead>(reader: R) -> Result<Self, EmbeddingError> {
        let mut dim: Option<usize> = None;
        let mut store = Self {
            dim: 0,
            vocab: HashMap::new(),
            matrix: Vec::new(),
            idf: None,
        };
        let mut components = Vec::new();

        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let mut fields = line.split_whitespace();
            let Some(word) = fields.next() else {
                continue;
            };
            let rest: Vec<&str> = fields.collect();

            if line_no == 1 && rest.len() == 1 {
                if let (Ok(_), Ok(d)) = (word.parse::<usize>(), rest[0].parse::<usize>()) {
                    if d == 0 {
                        return Err(EmbeddingError::Parse {
                            line: line_no,
                            message: "header declares zero dimensions".into(),
                        });
                    }
                    dim = Some(d);
                    continue;
                }
            }

            if rest.is_empty() {
                return Err(EmbeddingError::Parse {
                    line: line_no,
                    message: format!("token {word:?} has no vector components"),
                });
            }

            components.clear();
            for field in &rest {
                let value: f32 = field.parse().map_err(|_| EmbeddingError::Parse {
                    line: line_no,
                    message: format!("invalid float {field:?}"),
                })?;
                if !value.is_finite() {
                    return Err(EmbeddingError::Parse {
                        line: line_no,
                        message: format!("non-finite component {field:?}"),
                    });
                }
                components.push(value);
            }

            let expected = *dim.get_or_insert(components.len());
            if components.len() != expected {
                return Err(EmbeddingError::DimensionMismatch {
                    line: line_no,
                    expected,
                    found: components.len(),
                });
            }
            store.dim = expected;
            store.insert(word.to_owned(), &components);
        }

        if store.vocab.is_empty() {
            return Err(EmbeddingError::Empty);
        }
        Ok(store)
    }

    fn insert(&mut self, word: String, vector: &[f32]) {
        match self.vocab.get(&word) {
            Some(&row) => self.matrix[row * self.dim..(row + 1) * self.dim].copy_from_slice(vector),
            None => {
                self.vocab.insert(word, self.vocab.len());
                self.matrix.extend_from_slice(vector);
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab.len()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.vocab.contains_key(token)
    }

    pub fn vector(&self, token: &str) -> Option<&[f32]> {
        self.vocab
            .get(token)
            .map(|&row| &self.matrix[row * self.dim..(row + 1) * self.dim])
    }

    pub fn set_idf(&mut self, idf: IdfTable) {
        self.idf = Some(idf);
    }

    pub fn with_idf(mut self, idf: IdfTable) -> Self {
        self.idf = Some(idf);
        self
    }

    pub fn idf_table(&self) -> Option<&IdfTable> {
        self.idf.as_ref()
    }

    /// IDF of `token`; tokens never seen in the IDF corpus get `ln(n_docs)`.
    pub fn idf_of(&self, token: &str) -> Result<f64, EmbeddingError> {
        self.idf
            .as_ref()
            .map(|t| t.get(token))
            .ok_or(EmbeddingError::IdfMissing)
    }
}

/// Per-token IDF scores plus the size of the corpus they were computed on.
#[derive(Debug, Clone, PartialEq)]
pub struct IdfTable {
    n_docs: usize,
    scores: BTreeMap<String, f64>,
}

impl IdfTable {
    pub fn new(n_docs: usize, scores: BTreeMap<String, f64>) -> Self {
        Self { n_docs, scores }
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn scores(&self) -> &BTreeMap<String, f64> {
        &self.scores
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn get(&self, token: &str) -> f64 {
        match self.scores.get(token) {
            Some(&v) => v,
            None if self.n_docs > 0 => (self.n_docs as f64).ln(),
            None => 0.0,
        }
    }

    /// Multiplies every score by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            n_docs: self.n_docs,
            scores: self
                .scores
                .iter()
                .map(|(k, v)| (k.clone(), v * factor))
                .collect(),
        }
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "#ndocs={}", self.n_docs)?;
        for (token, idf) in &self.scores {
            // `{}` on f64 prints the shortest string that parses back to the same bits.
            writeln!(out, "{token}\t{idf}")?;
        }
        out.flush()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> io::Result<()> {
        self.write_to(io::BufWriter::new(File::create(path)?))
    }

    pub fn read_from<R: BufRead>(reader: R) -> Result<Self, EmbeddingError> {
        let mut n_docs = None;
        let mut scores = BTreeMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(n) = rest.trim().strip_prefix("ndocs=") {
                    n_docs = Some(n.trim().parse().map_err(|_| EmbeddingError::Parse {
                        line: line_no,
                        message: format!("invalid document count {n:?}"),
                    })?);
                }
                continue;
            }
            let (token, value) = line.split_once('\t').ok_or_else(|| EmbeddingError::Parse {
                line: line_no,
                message: "expected token<TAB>idf".into(),
            })?;
            let idf: f64 = value.trim().parse().map_err(|_| EmbeddingError::Parse {
                line: line_no,
                message: format!("invalid idf {value:?}"),
            })?;
            if !(idf.is_finite() && idf >= 0.0) {
                return Err(EmbeddingError::Parse {
                    line: line_no,
                    message: format!("idf must be finite and non-negative, got {idf}"),
                });
            }
            scores.insert(token.to_owned(), idf);
        }
        let n_docs = n_docs.ok_or(EmbeddingError::Parse {
            line: 1,
            message: "missing #ndocs=N header".into(),
        })?;
        Ok(Self { n_docs, scores })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EmbeddingError> {
        Self::read_from(BufReader::new(File::open(path)?))
    }
}

/// Document-frequency accumulator. Partial counts over corpus partitions can
/// be merged in any order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DocFrequencies {
    n_docs: usize,
    df: HashMap<String, usize>,
}

impl DocFrequencies {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, doc: &TokenizedText) {
        self.n_docs += 1;
        for token in doc.distinct() {
            match self.df.get_mut(token) {
                Some(count) => *count += 1,
                None => {
                    self.df.insert(token.to_owned(), 1);
                }
            }
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        self.n_docs += other.n_docs;
        for (token, count) in other.df {
            *self.df.entry(token).or_insert(0) += count;
        }
        self
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn df(&self, token: &str) -> usize {
        self.df.get(token).copied().unwrap_or(0)
    }

    /// `idf(w) = ln(N / df(w))`.
    pub fn into_idf(self) -> IdfTable {
        if self.n_docs == 0 {
            return IdfTable::new(0, BTreeMap::new());
        }
        let n = self.n_docs as f64;
        let scores = self
            .df
            .into_iter()
            .map(|(token, df)| (token, (n / df as f64).ln()))
            .collect();
        IdfTable::new(self.n_docs, scores)
    }
}

/// Computes IDF over a stream of `n_docs` tokenized documents.
pub fn compute_idf<'a, I>(corpus: I, n_docs: usize) -> Result<IdfTable, EmbeddingError>
where
    I: IntoIterator<Item = &'a TokenizedText>,
{
    let mut df = DocFrequencies::new();
    for doc in corpus {
        df.add(doc);
    }
    if df.n_docs() != n_docs {
        return Err(EmbeddingError::DocCountMismatch {
            declared: n_docs,
            seen: df.n_docs(),
        });
    }
    Ok(df.into_idf())
}
