//! Ranked-run evaluation against binary relevance judgments.
//!
//! Per question: average precision (AP), interpolated precision at the 11
//! recall levels 0.0, 0.1, …, 1.0 and its mean (AIP), and nDCG@k with binary
//! gains and a `log2(rank + 1)` discount. Aggregates are arithmetic means over
//! every judged question with at least one relevant document.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::retrieval::RankedRun;

pub const RECALL_LEVELS: usize = 11;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("nDCG cutoff must be positive")]
    InvalidCutoff,
    #[error("run and qrels share no question ids")]
    NoOverlap,
}

/// Per-question sets of relevant document ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QrelSet {
    relevant: BTreeMap<String, HashSet<String>>,
}

impl QrelSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, qid: impl Into<String>, doc_id: impl Into<String>) {
        self.relevant
            .entry(qid.into())
            .or_default()
            .insert(doc_id.into());
    }

    /// Registers a judged question, possibly without relevant documents.
    pub fn touch(&mut self, qid: impl Into<String>) {
        self.relevant.entry(qid.into()).or_default();
    }

    pub fn get(&self, qid: &str) -> Option<&HashSet<String>> {
        self.relevant.get(qid)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &HashSet<String>)> {
        self.relevant.iter().map(|(q, s)| (q.as_str(), s))
    }

    pub fn len(&self) -> usize {
        self.relevant.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relevant.is_empty()
    }

    /// TREC qrels: `qid 0 doc_id rel`; lines with `rel = 0` only register the question.
    pub fn read_trec<R: BufRead>(reader: R) -> Result<Self, EvalError> {
        let mut qrels = Self::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            if fields.len() != 4 {
                return Err(EvalError::Parse {
                    line: line_no,
                    message: format!("expected 4 fields, found {}", fields.len()),
                });
            }
            let rel: i64 = fields[3].parse().map_err(|_| EvalError::Parse {
                line: line_no,
                message: format!("invalid relevance {:?}", fields[3]),
            })?;
            if rel > 0 {
                qrels.insert(fields[0], fields[2]);
            } else {
                qrels.touch(fields[0]);
            }
        }
        Ok(qrels)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EvalError> {
        Self::read_trec(BufReader::new(File::open(path)?))
    }
}

fn recall_level(i: usize) -> f64 {
    i as f64 / (RECALL_LEVELS - 1) as f64
}

/// Mean of precision@i over the ranks i holding a relevant document,
/// divided by the total number of relevant documents.
pub fn average_precision<S: AsRef<str>>(ranking: &[S], rel: &HashSet<String>) -> f64 {
    if rel.is_empty() {
        return 0.0;
    }
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (i, doc) in ranking.iter().enumerate() {
        if rel.contains(doc.as_ref()) {
            hits += 1;
            sum += hits as f64 / (i + 1) as f64;
        }
    }
    sum / rel.len() as f64
}

/// Interpolated precision at recall 0.0, 0.1, …, 1.0: the best precision
/// reached at any recall at or above the level, 0 if that recall is never
/// reached.
pub fn interpolated_precision_curve<S: AsRef<str>>(
    ranking: &[S],
    rel: &HashSet<String>,
) -> [f64; RECALL_LEVELS] {
    let mut curve = [0.0; RECALL_LEVELS];
    if rel.is_empty() {
        return curve;
    }
    let n_rel = rel.len();
    // (hits, precision) at every relevant rank; hits is strictly increasing.
    let mut points = Vec::new();
    let mut hits = 0usize;
    for (i, doc) in ranking.iter().enumerate() {
        if rel.contains(doc.as_ref()) {
            hits += 1;
            points.push((hits, hits as f64 / (i + 1) as f64));
        }
    }
    let mut best_from = vec![0.0f64; points.len()];
    let mut best = 0.0f64;
    for (slot, &(_, precision)) in best_from.iter_mut().zip(&points).rev() {
        best = best.max(precision);
        *slot = best;
    }
    let mut p = 0;
    for (j, value) in curve.iter_mut().enumerate() {
        // recall = hits / n_rel reaches level j/10 when hits·10 ≥ j·n_rel.
        while p < points.len() && points[p].0 * (RECALL_LEVELS - 1) < j * n_rel {
            p += 1;
        }
        *value = best_from.get(p).copied().unwrap_or(0.0);
    }
    curve
}

/// Area under the interpolated curve: the mean of its 11 points.
pub fn average_interpolated_precision(curve: &[f64; RECALL_LEVELS]) -> f64 {
    curve.iter().sum::<f64>() / RECALL_LEVELS as f64
}

pub fn ndcg_at_k<S: AsRef<str>>(
    ranking: &[S],
    rel: &HashSet<String>,
    k: usize,
) -> Result<f64, EvalError> {
    if k == 0 {
        return Err(EvalError::InvalidCutoff);
    }
    let discount = |i: usize| 1.0 / ((i + 2) as f64).log2();
    let dcg: f64 = ranking
        .iter()
        .take(k)
        .enumerate()
        .filter(|(_, d)| rel.contains(d.as_ref()))
        .map(|(i, _)| discount(i))
        .sum();
    let idcg: f64 = (0..k.min(rel.len())).map(discount).sum();
    Ok(if idcg > 0.0 { dcg / idcg } else { 0.0 })
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EvalOptions {
    /// Truncate rankings to this depth before computing AP.
    pub map_depth: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuestionMetrics {
    pub qid: String,
    pub n_relevant: usize,
    pub n_retrieved: usize,
    pub ap: f64,
    pub aip: f64,
    pub interpolated_precision: [f64; RECALL_LEVELS],
    pub ndcg: BTreeMap<usize, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub recall: f64,
    pub precision: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub run: String,
    pub n_questions: usize,
    pub n_excluded: usize,
    pub excluded: Vec<String>,
    pub map: f64,
    pub maip: f64,
    pub mip: Vec<CurvePoint>,
    pub ndcg: BTreeMap<usize, f64>,
    pub per_question: Vec<QuestionMetrics>,
}

pub fn evaluate_question<S: AsRef<str>>(
    qid: &str,
    ranking: &[S],
    rel: &HashSet<String>,
    k_list: &[usize],
    options: &EvalOptions,
) -> Result<QuestionMetrics, EvalError> {
    let ap_depth = options
        .map_depth
        .unwrap_or(ranking.len())
        .min(ranking.len());
    let curve = interpolated_precision_curve(ranking, rel);
    let ndcg = k_list
        .iter()
        .map(|&k| Ok((k, ndcg_at_k(ranking, rel, k)?)))
        .collect::<Result<_, EvalError>>()?;
    Ok(QuestionMetrics {
        qid: qid.to_owned(),
        n_relevant: rel.len(),
        n_retrieved: ranking.len(),
        ap: average_precision(&ranking[..ap_depth], rel),
        aip: average_interpolated_precision(&curve),
        interpolated_precision: curve,
        ndcg,
    })
}

/// Scores every judged question with a non-empty gold set; questions
/// missing from the run are scored as empty rankings.
pub fn evaluate(
    run: &RankedRun,
    qrels: &QrelSet,
    k_list: &[usize],
    options: &EvalOptions,
) -> Result<EvalReport, EvalError> {
    if k_list.contains(&0) {
        return Err(EvalError::InvalidCutoff);
    }
    let mut excluded = Vec::new();
    let mut per_question = Vec::new();
    let mut overlap = false;
    for (qid, rel) in qrels.iter() {
        if rel.is_empty() {
            excluded.push(qid.to_owned());
            continue;
        }
        overlap |= run.contains(qid);
        let ranking = run.doc_ids(qid);
        per_question.push(evaluate_question(qid, &ranking, rel, k_list, options)?);
    }
    if !overlap {
        return Err(EvalError::NoOverlap);
    }

    let n = per_question.len() as f64;
    let mean = |f: &dyn Fn(&QuestionMetrics) -> f64| per_question.iter().map(f).sum::<f64>() / n;
    let mip = (0..RECALL_LEVELS)
        .map(|j| CurvePoint {
            recall: recall_level(j),
            precision: mean(&|m| m.interpolated_precision[j]),
        })
        .collect();
    let ndcg = k_list.iter().map(|&k| (k, mean(&|m| m.ndcg[&k]))).collect();

    Ok(EvalReport {
        run: run.tag().to_owned(),
        n_questions: per_question.len(),
        n_excluded: excluded.len(),
        excluded,
        map: mean(&|m| m.ap),
        maip: mean(&|m| m.aip),
        mip,
        ndcg,
        per_question,
    })
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "run        {}", self.run);
        let _ = writeln!(
            s,
            "questions  {} ({} excluded)",
            self.n_questions, self.n_excluded
        );
        let _ = writeln!(s, "MAP        {:.5}", self.map);
        let _ = writeln!(s, "MAIP       {:.5}", self.maip);
        for (k, v) in &self.ndcg {
            let _ = writeln!(s, "{:<10} {v:.5}", format!("nDCG@{k}"));
        }
        let _ = writeln!(s, "recall  MIP");
        for p in &self.mip {
            let _ = writeln!(s, "{:.1}     {:.5}", p.recall, p.precision);
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::ScoredDoc;
    use approx::assert_abs_diff_eq;

    fn rel(ids: &[&str]) -> HashSet<String> {
        ids.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn ap_hand_example() {
        let ap = average_precision(&["d1", "d2", "d3"], &rel(&["d1", "d3"]));
        assert_abs_diff_eq!(ap, 0.5 * (1.0 + 2.0 / 3.0), epsilon = 1e-15);
        assert_abs_diff_eq!(ap, 0.83333, epsilon = 1e-5);
    }

    #[test]
    fn ap_edges() {
        assert_eq!(average_precision(&["a", "b", "x"], &rel(&["a", "b"])), 1.0);
        assert_eq!(average_precision(&["x", "y"], &rel(&["a"])), 0.0);
        // unretrieved relevant documents count in the denominator
        assert_eq!(average_precision(&["a"], &rel(&["a", "b"])), 0.5);
    }

    #[test]
    fn curve_hand_example() {
        let curve = interpolated_precision_curve(&["d1", "d2", "d3"], &rel(&["d1", "d3"]));
        for (j, &p) in curve.iter().enumerate() {
            if j <= 5 {
                assert_eq!(p, 1.0, "level {j}");
            } else {
                assert_abs_diff_eq!(p, 2.0 / 3.0, epsilon = 1e-15);
            }
        }
        assert_abs_diff_eq!(
            average_interpolated_precision(&curve),
            (6.0 + 5.0 * 2.0 / 3.0) / 11.0,
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(
            average_interpolated_precision(&curve),
            0.84848,
            epsilon = 1e-5
        );
    }

    #[test]
    fn curve_edges() {
        assert_eq!(
            interpolated_precision_curve(&["a", "b"], &rel(&["a", "b"])),
            [1.0; 11]
        );
        assert_eq!(
            interpolated_precision_curve(&["x"], &rel(&["a"])),
            [0.0; 11]
        );
        // recall never reaches 1.0 when a relevant document is missing
        let partial = interpolated_precision_curve(&["a", "x"], &rel(&["a", "b"]));
        assert_eq!(&partial[..6], &[1.0; 6]);
        assert_eq!(&partial[6..], &[0.0; 5]);
    }

    #[test]
    fn curve_levels_with_thirds() {
        // recall 1/3, 2/3, 1 at ranks 2, 3, 6
        let curve =
            interpolated_precision_curve(&["x", "a", "b", "y", "z", "c"], &rel(&["a", "b", "c"]));
        let expected = [
            2.0 / 3.0,
            2.0 / 3.0,
            2.0 / 3.0,
            2.0 / 3.0,
            2.0 / 3.0,
            2.0 / 3.0,
            2.0 / 3.0,
            0.5,
            0.5,
            0.5,
            0.5,
        ];
        assert_eq!(curve, expected);
    }

    #[test]
    fn ndcg_hand_example() {
        let v = ndcg_at_k(&["d1", "d2", "d3"], &rel(&["d1", "d3"]), 3).unwrap();
        assert_abs_diff_eq!(v, 1.5 / (1.0 + 1.0 / 3f64.log2()), epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.919721, epsilon = 1e-6);
    }

    #[test]
    fn ndcg_edges() {
        assert_eq!(ndcg_at_k(&["a", "b"], &rel(&["a", "b"]), 5).unwrap(), 1.0);
        assert_eq!(ndcg_at_k::<&str>(&[], &rel(&["a"]), 5).unwrap(), 0.0);
        assert!(matches!(
            ndcg_at_k(&["a"], &rel(&["a"]), 0),
            Err(EvalError::InvalidCutoff)
        ));
        // relevant document below the cutoff does not count
        assert_eq!(ndcg_at_k(&["x", "a"], &rel(&["a"]), 1).unwrap(), 0.0);
    }

    fn run(lists: &[(&str, &[&str])]) -> RankedRun {
        let mut r = RankedRun::new("t");
        for (qid, docs) in lists {
            r.insert(*qid, docs.iter().map(|d| ScoredDoc::new(*d, 0.0)).collect());
        }
        r
    }

    fn qrels(pairs: &[(&str, &str)]) -> QrelSet {
        let mut q = QrelSet::new();
        for (qid, d) in pairs {
            q.insert(*qid, *d);
        }
        q
    }

    #[test]
    fn evaluate_single_question() {
        let report = evaluate(
            &run(&[("q1", &["d1", "d2", "d3"])]),
            &qrels(&[("q1", "d1"), ("q1", "d3")]),
            &[3],
            &EvalOptions::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(report.map, 0.83333, epsilon = 1e-5);
        assert_abs_diff_eq!(report.maip, 0.84848, epsilon = 1e-5);
        assert_abs_diff_eq!(report.ndcg[&3], 0.919721, epsilon = 1e-6);
        assert_eq!(report.mip.len(), 11);
        assert_eq!(report.mip[10].recall, 1.0);
    }

    #[test]
    fn evaluate_perfect_run() {
        let report = evaluate(
            &run(&[("q1", &["a", "b"]), ("q2", &["c"])]),
            &qrels(&[("q1", "a"), ("q1", "b"), ("q2", "c")]),
            &[20, 100],
            &EvalOptions::default(),
        )
        .unwrap();
        assert_eq!(report.map, 1.0);
        assert_eq!(report.maip, 1.0);
        assert!(report.ndcg.values().all(|&v| v == 1.0));
    }

    #[test]
    fn missing_question_scores_zero() {
        let report = evaluate(
            &run(&[("q1", &["a"])]),
            &qrels(&[("q1", "a"), ("q2", "b")]),
            &[10],
            &EvalOptions::default(),
        )
        .unwrap();
        assert_eq!(report.n_questions, 2);
        assert_eq!(report.map, 0.5);
    }

    #[test]
    fn empty_gold_sets_excluded() {
        let mut q = qrels(&[("q1", "a")]);
        q.touch("q2");
        let report = evaluate(
            &run(&[("q1", &["a"]), ("q2", &["b"])]),
            &q,
            &[10],
            &EvalOptions::default(),
        )
        .unwrap();
        assert_eq!(report.n_questions, 1);
        assert_eq!(report.n_excluded, 1);
        assert_eq!(report.excluded, ["q2"]);
    }

    #[test]
    fn disjoint_qids_rejected() {
        assert!(matches!(
            evaluate(
                &run(&[("q1", &["a"])]),
                &qrels(&[("q2", "a")]),
                &[10],
                &EvalOptions::default()
            ),
            Err(EvalError::NoOverlap)
        ));
    }

    #[test]
    fn map_depth_truncates_ap_only() {
        let options = EvalOptions { map_depth: Some(1) };
        let report = evaluate(
            &run(&[("q1", &["x", "a"])]),
            &qrels(&[("q1", "a")]),
            &[2],
            &options,
        )
        .unwrap();
        assert_eq!(report.map, 0.0);
        assert!(report.maip > 0.0);
    }

    #[test]
    fn qrels_parse() {
        let q = QrelSet::read_trec("q1 0 a 1\nq1 0 b 0\nq2 0 c 0\n\n".as_bytes()).unwrap();
        assert_eq!(q.get("q1").unwrap().len(), 1);
        assert!(q.get("q2").unwrap().is_empty());
        assert!(matches!(
            QrelSet::read_trec("q1 0 a\n".as_bytes()),
            Err(EvalError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            QrelSet::read_trec("q1 0 a x\n".as_bytes()),
            Err(EvalError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn report_json_has_aggregates() {
        let report = evaluate(
            &run(&[("q1", &["a"])]),
            &qrels(&[("q1", "a")]),
            &[20],
            &EvalOptions::default(),
        )
        .unwrap();
        let json: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
        assert_eq!(json["map"], 1.0);
        assert_eq!(json["ndcg"]["20"], 1.0);
        assert_eq!(json["mip"].as_array().unwrap().len(), 11);
        assert!(report.to_table().contains("nDCG@20"));
    }
}
