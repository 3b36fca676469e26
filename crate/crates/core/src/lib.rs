//! Document retrieval with word-embedding centroids.
//!
//! Documents and questions are represented as (optionally IDF-weighted)
//! centroids of their word embeddings. The top-k documents by cosine
//! similarity are found exhaustively or through a random-hyperplane forest,
//! optionally reranked with relaxed Word Mover's Distance, and ranked runs
//! are scored with MAP, interpolated precision and nDCG.

pub mod centroid;
pub mod embedding;
pub mod eval;
pub mod index;
pub mod retrieval;
pub mod rwmd;
pub mod text;

pub use centroid::{centroid, centroid_idf, centroid_simple, cosine, Centroid, CentroidKind};
pub use embedding::{compute_idf, DocFrequencies, EmbeddingStore, IdfTable};
pub use eval::{evaluate, EvalOptions, EvalReport, QrelSet};
pub use index::{CentroidIndex, IndexBuilder, ScoredDoc};
pub use retrieval::{
    hybrid, rerank, retrieve, Corpus, DocumentRecord, Engine, Question, RankedRun, RetrievalConfig,
};
pub use rwmd::{rwmd_d, rwmd_max, rwmd_q, EmbeddedText, RwmdMethod};
pub use text::{tokenize, StopWords, TokenizedText};
