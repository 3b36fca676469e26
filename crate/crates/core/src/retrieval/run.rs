//! Ranked runs and the TREC run-file format (`qid Q0 doc_id rank score tag`).

use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::RetrievalError;
use crate::index::ScoredDoc;

/// Per-question rankings, best first. Lists never repeat a document.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RankedRun {
    tag: String,
    lists: BTreeMap<String, Vec<ScoredDoc>>,
}

impl RankedRun {
    pub fn new(tag: impl Into<String>) -> Self {
        Self {
            tag: sanitize_tag(&tag.into()),
            lists: BTreeMap::new(),
        }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn set_tag(&mut self, tag: impl Into<String>) {
        self.tag = sanitize_tag(&tag.into());
    }

    /// Sets the ranking of `qid`; repeated documents after the first occurrence are dropped.
    pub fn insert(&mut self, qid: impl Into<String>, docs: Vec<ScoredDoc>) {
        let mut seen = HashSet::with_capacity(docs.len());
        let docs = docs
            .into_iter()
            .filter(|d| seen.insert(d.doc_id.clone()))
            .collect();
        self.lists.insert(qid.into(), docs);
    }

    /// Ranking for `qid`; absent questions read as empty.
    pub fn get(&self, qid: &str) -> &[ScoredDoc] {
        self.lists.get(qid).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn contains(&self, qid: &str) -> bool {
        self.lists.contains_key(qid)
    }

    /// Questions in lexicographic order, including those with empty lists.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[ScoredDoc])> {
        self.lists.iter().map(|(q, l)| (q.as_str(), l.as_slice()))
    }

    pub fn qids(&self) -> impl Iterator<Item = &str> {
        self.lists.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn doc_ids(&self, qid: &str) -> Vec<&str> {
        self.get(qid).iter().map(|d| d.doc_id.as_str()).collect()
    }

    pub fn write_trec<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (qid, docs) in &self.lists {
            for (rank, doc) in docs.iter().enumerate() {
                writeln!(
                    out,
                    "{qid} Q0 {} {} {} {}",
                    doc.doc_id,
                    rank + 1,
                    doc.score,
                    self.tag
                )?;
            }
        }
        out.flush()
    }

    pub fn to_trec_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_trec(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("run contents are UTF-8")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> io::Result<()> {
        self.write_trec(BufWriter::new(File::create(path)?))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RetrievalError> {
        Self::read_trec(BufReader::new(File::open(path)?))
    }

    /// Parses a TREC run. Entries are ordered by their rank field (file
    /// order among equal ranks); a repeated `(qid, doc)` keeps its best rank.
    pub fn read_trec<R: BufRead>(reader: R) -> Result<Self, RetrievalError> {
        let mut tag = None;
        let mut raw: BTreeMap<String, Vec<(usize, ScoredDoc)>> = BTreeMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line_no = i + 1;
            let line = line?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.is_empty() {
                continue;
            }
            let bad = |message: String| RetrievalError::Parse {
                line: line_no,
                message,
            };
            if fields.len() != 6 {
                return Err(bad(format!("expected 6 fields, found {}", fields.len())));
            }
            let rank: usize = fields[3]
                .parse()
                .map_err(|_| bad(format!("invalid rank {:?}", fields[3])))?;
            let score: f64 = fields[4]
                .parse()
                .map_err(|_| bad(format!("invalid score {:?}", fields[4])))?;
            tag.get_or_insert_with(|| fields[5].to_owned());
            raw.entry(fields[0].to_owned())
                .or_default()
                .push((rank, ScoredDoc::new(fields[2], score)));
        }
        let mut run = Self::new(tag.unwrap_or_default());
        for (qid, mut entries) in raw {
            entries.sort_by_key(|(rank, _)| *rank);
            run.insert(qid, entries.into_iter().map(|(_, d)| d).collect());
        }
        Ok(run)
    }
}

fn sanitize_tag(tag: &str) -> String {
    if tag.is_empty() {
        return "run".into();
    }
    tag.chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect()
}

/// Per question, the primary ranking unless it is empty, else the fallback.
pub fn hybrid(primary: &RankedRun, fallback: &RankedRun) -> RankedRun {
    let mut out = RankedRun::new("hybrid");
    let qids: std::collections::BTreeSet<&str> = primary.qids().chain(fallback.qids()).collect();
    for qid in qids {
        let chosen = if primary.get(qid).is_empty() {
            fallback.get(qid)
        } else {
            primary.get(qid)
        };
        out.insert(qid, chosen.to_vec());
    }
    out
}
