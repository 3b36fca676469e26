//! Retrieval pipelines: centroid search (exact or forest-backed), RWMD
//! reranking of any run, and the hybrid combiner.

mod corpus;
mod run;

use std::collections::{HashMap, HashSet};
use std::io;

use rayon::prelude::*;
use thiserror::Error;

pub use corpus::{load_questions, read_questions, Corpus, DocumentRecord, Question};
pub use run::{hybrid, RankedRun};

use crate::centroid::{centroid, CentroidKind, DimensionMismatch};
use crate::embedding::{EmbeddingError, EmbeddingStore};
use crate::index::{CentroidIndex, IndexError, ScoredDoc};
use crate::rwmd::{EmbeddedText, RwmdMethod};

pub const DEFAULT_K: usize = 1000;

#[derive(Debug, Error)]
pub enum RetrievalError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("index was built with {index} centroids but {requested} retrieval was requested")]
    ModeMismatch {
        index: &'static str,
        requested: &'static str,
    },
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Dimension(#[from] DimensionMismatch),
    #[error("duplicate question id {0:?}")]
    DuplicateQuestion(String),
    #[error("duplicate document id {0:?}")]
    DuplicateDocument(String),
    #[error("run references {} unknown documents: {}", .0.len(), preview(.0))]
    UnknownDocuments(Vec<String>),
    #[error("run references {} unknown questions: {}", .0.len(), preview(.0))]
    UnknownQuestions(Vec<String>),
}

fn preview(ids: &[String]) -> String {
    const SHOWN: usize = 10;
    let mut s = ids
        .iter()
        .take(SHOWN)
        .cloned()
        .collect::<Vec<_>>()
        .join(", ");
    if ids.len() > SHOWN {
        s.push_str(", ...");
    }
    s
}

pub(crate) fn check_unique_qids(questions: &[Question]) -> Result<(), RetrievalError> {
    let mut seen = HashSet::with_capacity(questions.len());
    for q in questions {
        if !seen.insert(q.qid.as_str()) {
            return Err(RetrievalError::DuplicateQuestion(q.qid.clone()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Exact,
    /// `search_k = None` uses `10 · n_trees · k`.
    Ann {
        search_k: Option<usize>,
    },
}

impl Engine {
    pub fn label(self) -> &'static str {
        match self {
            Engine::Exact => "exact",
            Engine::Ann { .. } => "ann",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetrievalConfig {
    pub mode: CentroidKind,
    pub engine: Engine,
    pub k: usize,
}

impl RetrievalConfig {
    pub fn new(mode: CentroidKind, engine: Engine) -> Self {
        Self {
            mode,
            engine,
            k: DEFAULT_K,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    /// Run tag such as `centidf-ann`.
    pub fn tag(&self) -> String {
        format!("{}-{}", self.mode.label(), self.engine.label())
    }
}

/// Centroid search for a batch of questions. `index_kind` is the centroid
/// type the index rows were built from and must equal `config.mode`. Questions
/// without any usable token get an empty list.
pub fn retrieve(
    questions: &[Question],
    index: &CentroidIndex,
    index_kind: CentroidKind,
    store: &EmbeddingStore,
    config: &RetrievalConfig,
) -> Result<RankedRun, RetrievalError> {
    if index_kind != config.mode {
        return Err(RetrievalError::ModeMismatch {
            index: index_kind.label(),
            requested: config.mode.label(),
        });
    }
    if matches!(config.engine, Engine::Ann { .. }) && index.n_trees() == 0 {
        return Err(IndexError::NoForest.into());
    }
    check_unique_qids(questions)?;

    let lists: Vec<(String, Vec<ScoredDoc>)> = questions
        .par_iter()
        .map(|q| {
            let c = centroid(config.mode, q.tokens(), store)?;
            let hits = match config.engine {
                Engine::Exact => index.exact_topk(&c, config.k)?,
                Engine::Ann { search_k } => index.ann_topk(&c, config.k, search_k)?,
            };
            Ok((q.qid.clone(), hits))
        })
        .collect::<Result<_, RetrievalError>>()?;

    let mut run = RankedRun::new(config.tag());
    for (qid, hits) in lists {
        run.insert(qid, hits);
    }
    Ok(run)
}

/// Reorders every ranking by ascending RWMD distance (ties by document id)
/// and replaces scores with the distances. With `depth = Some(n)` only the
/// first `n` entries are reordered; the rest keep their order and scores.
pub fn rerank(
    run: &RankedRun,
    questions: &[Question],
    corpus: &Corpus,
    store: &EmbeddingStore,
    method: RwmdMethod,
    depth: Option<usize>,
) -> Result<RankedRun, RetrievalError> {
    let by_qid: HashMap<&str, &Question> = questions.iter().map(|q| (q.qid.as_str(), q)).collect();

    let mut missing_q: Vec<String> = run
        .iter()
        .filter(|(qid, docs)| !docs.is_empty() && !by_qid.contains_key(qid))
        .map(|(qid, _)| qid.to_owned())
        .collect();
    if !missing_q.is_empty() {
        missing_q.sort();
        return Err(RetrievalError::UnknownQuestions(missing_q));
    }
    let mut missing_d: Vec<String> = run
        .iter()
        .flat_map(|(_, docs)| docs)
        .filter(|d| corpus.get(&d.doc_id).is_none())
        .map(|d| d.doc_id.clone())
        .collect();
    if !missing_d.is_empty() {
        missing_d.sort();
        missing_d.dedup();
        return Err(RetrievalError::UnknownDocuments(missing_d));
    }

    let entries: Vec<(&str, &[ScoredDoc])> = run.iter().collect();
    let lists: Vec<(String, Vec<ScoredDoc>)> = entries
        .par_iter()
        .map(|&(qid, docs)| {
            if docs.is_empty() {
                return Ok((qid.to_owned(), Vec::new()));
            }
            let question = EmbeddedText::from_text(by_qid[qid].tokens(), store);
            let cut = depth.unwrap_or(docs.len()).min(docs.len());
            let (head, tail) = docs.split_at(cut);
            let mut scored = head
                .iter()
                .map(|d| {
                    let record = corpus.get(&d.doc_id).expect("resolved above");
                    let doc = EmbeddedText::from_text(record.tokens(), store);
                    Ok(ScoredDoc::new(
                        d.doc_id.clone(),
                        method.score(&question, &doc)?,
                    ))
                })
                .collect::<Result<Vec<_>, RetrievalError>>()?;
            scored.sort_by(|a, b| {
                a.score
                    .total_cmp(&b.score)
                    .then_with(|| a.doc_id.cmp(&b.doc_id))
            });
            scored.extend_from_slice(tail);
            Ok((qid.to_owned(), scored))
        })
        .collect::<Result<_, RetrievalError>>()?;

    let mut out = RankedRun::new(format!("{}-{}", run.tag(), method.label()));
    for (qid, docs) in lists {
        out.insert(qid, docs);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centroid::centroid_simple;
    use crate::embedding::compute_idf;
    use crate::text::StopWords;

    fn toy() -> (EmbeddingStore, Corpus) {
        let store = EmbeddingStore::from_vectors(
            2,
            [
                ("apple", vec![1.0, 0.0]),
                ("banana", vec![0.0, 1.0]),
                ("fruit", vec![0.6, 0.8]),
            ],
        )
        .unwrap();
        let stop = StopWords::english();
        let corpus = Corpus::new(vec![
            DocumentRecord::new("a", "Apple", "apple fruit", &stop),
            DocumentRecord::new("b", "Banana", "banana", &stop),
        ])
        .unwrap();
        (store, corpus)
    }

    fn index_for(kind: CentroidKind, store: &EmbeddingStore, corpus: &Corpus) -> CentroidIndex {
        let docs = corpus
            .docs()
            .iter()
            .map(|d| (d.id.clone(), centroid(kind, d.tokens(), store).unwrap()));
        CentroidIndex::build_exact(store.dim(), docs).unwrap()
    }

    #[test]
    fn question_sharing_a_token_ranks_its_doc_first() {
        let (store, corpus) = toy();
        let index = index_for(CentroidKind::Simple, &store, &corpus);
        let qs = vec![Question::new(
            "q1",
            "What about an apple?",
            &StopWords::english(),
        )];
        let run = retrieve(
            &qs,
            &index,
            CentroidKind::Simple,
            &store,
            &RetrievalConfig::new(CentroidKind::Simple, Engine::Exact),
        )
        .unwrap();
        let list = run.get("q1");
        assert_eq!(run.doc_ids("q1"), ["a", "b"]);
        assert!(list[0].score > list[1].score);
        assert_eq!(run.tag(), "cent-exact");
    }

    #[test]
    fn stopword_question_gets_empty_list() {
        let (store, corpus) = toy();
        let index = index_for(CentroidKind::Simple, &store, &corpus);
        let qs = vec![Question::new("q1", "What is the", &StopWords::english())];
        let run = retrieve(
            &qs,
            &index,
            CentroidKind::Simple,
            &store,
            &RetrievalConfig::new(CentroidKind::Simple, Engine::Exact),
        )
        .unwrap();
        assert!(run.contains("q1"));
        assert!(run.get("q1").is_empty());
    }

    #[test]
    fn mode_mismatch_rejected() {
        let (store, corpus) = toy();
        let index = index_for(CentroidKind::Simple, &store, &corpus);
        let qs = vec![Question::new("q1", "apple", &StopWords::none())];
        let err = retrieve(
            &qs,
            &index,
            CentroidKind::Simple,
            &store,
            &RetrievalConfig::new(CentroidKind::Idf, Engine::Exact),
        )
        .unwrap_err();
        assert!(matches!(err, RetrievalError::ModeMismatch { .. }));
    }

    #[test]
    fn ann_with_exhaustive_search_matches_exact() {
        let (store, corpus) = toy();
        let docs: Vec<_> = corpus.docs().iter().map(|d| d.tokens().clone()).collect();
        let store = store.with_idf(compute_idf(&docs, docs.len()).unwrap());
        let mut index = index_for(CentroidKind::Idf, &store, &corpus);
        index.build_forest(3, 1, 5).unwrap();
        let qs = vec![
            Question::new("q1", "apple", &StopWords::none()),
            Question::new("q2", "banana fruit", &StopWords::none()),
        ];
        let exact = retrieve(
            &qs,
            &index,
            CentroidKind::Idf,
            &store,
            &RetrievalConfig::new(CentroidKind::Idf, Engine::Exact),
        )
        .unwrap();
        let ann = retrieve(
            &qs,
            &index,
            CentroidKind::Idf,
            &store,
            &RetrievalConfig::new(
                CentroidKind::Idf,
                Engine::Ann {
                    search_k: Some(index.len()),
                },
            ),
        )
        .unwrap();
        for q in ["q1", "q2"] {
            assert_eq!(exact.get(q), ann.get(q));
        }
        assert_eq!(ann.tag(), "centidf-ann");
    }

    #[test]
    fn ann_without_forest_is_configuration_error() {
        let (store, corpus) = toy();
        let index = index_for(CentroidKind::Simple, &store, &corpus);
        let qs = vec![Question::new("q1", "apple", &StopWords::none())];
        assert!(retrieve(
            &qs,
            &index,
            CentroidKind::Simple,
            &store,
            &RetrievalConfig::new(CentroidKind::Simple, Engine::Ann { search_k: None })
        )
        .is_err());
    }

    #[test]
    fn rerank_moves_matching_doc_up() {
        let (store, corpus) = toy();
        let qs = vec![Question::new("q1", "apple", &StopWords::none())];
        let mut run = RankedRun::new("x");
        run.insert(
            "q1",
            vec![ScoredDoc::new("b", 0.9), ScoredDoc::new("a", 0.1)],
        );
        let out = rerank(&run, &qs, &corpus, &store, RwmdMethod::Query, None).unwrap();
        assert_eq!(out.doc_ids("q1"), ["a", "b"]);
        assert_eq!(out.get("q1")[0].score, 0.0);
        assert_eq!(out.tag(), "x-rwmdq");
    }

    #[test]
    fn rerank_of_single_doc_and_empty_lists() {
        let (store, corpus) = toy();
        let qs = vec![Question::new("q1", "banana", &StopWords::none())];
        let mut run = RankedRun::new("x");
        run.insert("q1", vec![ScoredDoc::new("a", 0.5)]);
        run.insert("q9", vec![]);
        let out = rerank(&run, &qs, &corpus, &store, RwmdMethod::Document, None).unwrap();
        assert_eq!(out.doc_ids("q1"), ["a"]);
        assert!(out.get("q9").is_empty());
    }

    #[test]
    fn rerank_depth_keeps_tail() {
        let (store, corpus) = toy();
        let qs = vec![Question::new("q1", "apple", &StopWords::none())];
        let mut run = RankedRun::new("x");
        run.insert(
            "q1",
            vec![ScoredDoc::new("b", 0.9), ScoredDoc::new("a", 0.1)],
        );
        let out = rerank(&run, &qs, &corpus, &store, RwmdMethod::Query, Some(1)).unwrap();
        assert_eq!(out.doc_ids("q1"), ["b", "a"]);
        assert_eq!(out.get("q1")[1], ScoredDoc::new("a", 0.1));
    }

    #[test]
    fn rerank_reports_unknown_ids() {
        let (store, corpus) = toy();
        let qs = vec![Question::new("q1", "apple", &StopWords::none())];
        let mut run = RankedRun::new("x");
        run.insert(
            "q1",
            vec![
                ScoredDoc::new("zz", 1.0),
                ScoredDoc::new("a", 0.5),
                ScoredDoc::new("yy", 0.1),
            ],
        );
        match rerank(&run, &qs, &corpus, &store, RwmdMethod::Query, None) {
            Err(RetrievalError::UnknownDocuments(ids)) => assert_eq!(ids, ["yy", "zz"]),
            other => panic!("unexpected {other:?}"),
        }
        let mut run = RankedRun::new("x");
        run.insert("q7", vec![ScoredDoc::new("a", 1.0)]);
        assert!(matches!(
            rerank(&run, &qs, &corpus, &store, RwmdMethod::Query, None),
            Err(RetrievalError::UnknownQuestions(_))
        ));
    }

    #[test]
    fn oov_question_reranks_to_infinity_for_rwmd_d() {
        let (store, corpus) = toy();
        let qs = vec![Question::new("q1", "zebra", &StopWords::none())];
        let mut run = RankedRun::new("x");
        run.insert(
            "q1",
            vec![ScoredDoc::new("b", 0.9), ScoredDoc::new("a", 0.1)],
        );
        let out = rerank(&run, &qs, &corpus, &store, RwmdMethod::Document, None).unwrap();
        assert_eq!(out.doc_ids("q1"), ["a", "b"]);
        assert!(out.get("q1").iter().all(|d| d.score.is_infinite()));
    }

    #[test]
    fn simple_centroid_used_for_cent_mode() {
        let (store, corpus) = toy();
        let c = centroid_simple(corpus.get("a").unwrap().tokens(), &store);
        assert_eq!(c.n_known_tokens(), 3);
    }
}
