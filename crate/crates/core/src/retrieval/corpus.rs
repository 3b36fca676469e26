//! Documents and questions, read from JSON-lines files.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use super::RetrievalError;
use crate::text::{tokenize, StopWords, TokenizedText};

/// A corpus item; its text is the title followed by the abstract.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentRecord {
    pub id: String,
    pub title: String,
    pub abstract_text: String,
    tokens: TokenizedText,
}

impl DocumentRecord {
    pub fn new(
        id: impl Into<String>,
        title: impl Into<String>,
        abstract_text: impl Into<String>,
        stopwords: &StopWords,
    ) -> Self {
        let title = title.into();
        let abstract_text = abstract_text.into();
        let tokens = tokenize(&format!("{title} {abstract_text}"), stopwords);
        Self {
            id: id.into(),
            title,
            abstract_text,
            tokens,
        }
    }

    pub fn tokens(&self) -> &TokenizedText {
        &self.tokens
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Question {
    pub qid: String,
    pub text: String,
    tokens: TokenizedText,
}

impl Question {
    pub fn new(qid: impl Into<String>, text: impl Into<String>, stopwords: &StopWords) -> Self {
        let text = text.into();
        let tokens = tokenize(&text, stopwords);
        Self {
            qid: qid.into(),
            text,
            tokens,
        }
    }

    pub fn tokens(&self) -> &TokenizedText {
        &self.tokens
    }
}

/// Documents in file order with an id lookup.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    docs: Vec<DocumentRecord>,
    by_id: HashMap<String, usize>,
}

impl Corpus {
    pub fn new(docs: Vec<DocumentRecord>) -> Result<Self, RetrievalError> {
        let mut by_id = HashMap::with_capacity(docs.len());
        for (i, doc) in docs.iter().enumerate() {
            if by_id.insert(doc.id.clone(), i).is_some() {
                return Err(RetrievalError::DuplicateDocument(doc.id.clone()));
            }
        }
        Ok(Self { docs, by_id })
    }

    pub fn load(path: impl AsRef<Path>, stopwords: &StopWords) -> Result<Self, RetrievalError> {
        Self::read_jsonl(BufReader::new(File::open(path)?), stopwords)
    }

    pub fn read_jsonl<R: BufRead>(
        reader: R,
        stopwords: &StopWords,
    ) -> Result<Self, RetrievalError> {
        #[derive(Deserialize)]
        struct Raw {
            id: Value,
            #[serde(default)]
            title: String,
            #[serde(default, rename = "abstract")]
            abstract_text: String,
        }
        let mut docs = Vec::new();
        for_each_json_line(reader, |line, raw: Raw| {
            let id = id_string(raw.id, line)?;
            docs.push(DocumentRecord::new(
                id,
                raw.title,
                raw.abstract_text,
                stopwords,
            ));
            Ok(())
        })?;
        Self::new(docs)
    }

    pub fn docs(&self) -> &[DocumentRecord] {
        &self.docs
    }

    pub fn get(&self, id: &str) -> Option<&DocumentRecord> {
        self.by_id.get(id).map(|&i| &self.docs[i])
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }
}

/// Questions file: one JSON object per line with `id` and `body` (or `text`).
pub fn load_questions(
    path: impl AsRef<Path>,
    stopwords: &StopWords,
) -> Result<Vec<Question>, RetrievalError> {
    read_questions(BufReader::new(File::open(path)?), stopwords)
}

pub fn read_questions<R: BufRead>(
    reader: R,
    stopwords: &StopWords,
) -> Result<Vec<Question>, RetrievalError> {
    #[derive(Deserialize)]
    struct Raw {
        id: Value,
        #[serde(alias = "body")]
        text: String,
    }
    let mut questions = Vec::new();
    for_each_json_line(reader, |line, raw: Raw| {
        questions.push(Question::new(id_string(raw.id, line)?, raw.text, stopwords));
        Ok(())
    })?;
    super::check_unique_qids(&questions)?;
    Ok(questions)
}

fn for_each_json_line<R, T, F>(reader: R, mut f: F) -> Result<(), RetrievalError>
where
    R: BufRead,
    T: for<'de> Deserialize<'de>,
    F: FnMut(usize, T) -> Result<(), RetrievalError>,
{
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: T = serde_json::from_str(&line).map_err(|e| RetrievalError::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        f(line_no, value)?;
    }
    Ok(())
}

fn id_string(value: Value, line: usize) -> Result<String, RetrievalError> {
    match value {
        Value::String(s) if !s.trim().is_empty() && !s.chars().any(char::is_whitespace) => Ok(s),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(RetrievalError::Parse {
            line,
            message: format!(
                "id must be a non-empty string without whitespace or a number, got {other}"
            ),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_corpus_lines() {
        let data = r#"{"id": "d1", "title": "Apoptosis", "abstract": "The p53 pathway."}

{"id": 12345, "title": "Only a title"}
"#;
        let corpus = Corpus::read_jsonl(data.as_bytes(), &StopWords::english()).unwrap();
        assert_eq!(corpus.len(), 2);
        assert_eq!(
            corpus.get("d1").unwrap().tokens().tokens(),
            ["apoptosis", "p53", "pathway"]
        );
        assert_eq!(corpus.get("12345").unwrap().tokens().tokens(), ["title"]);
    }

    #[test]
    fn duplicate_document_ids_rejected() {
        let data = "{\"id\":\"a\"}\n{\"id\":\"a\"}\n";
        assert!(matches!(
            Corpus::read_jsonl(data.as_bytes(), &StopWords::none()),
            Err(RetrievalError::DuplicateDocument(id)) if id == "a"
        ));
    }

    #[test]
    fn malformed_json_names_line() {
        let data = "{\"id\":\"a\"}\n{oops\n";
        assert!(matches!(
            Corpus::read_jsonl(data.as_bytes(), &StopWords::none()),
            Err(RetrievalError::Parse { line: 2, .. })
        ));
        let data = "{\"id\":\"has space\"}\n";
        assert!(matches!(
            Corpus::read_jsonl(data.as_bytes(), &StopWords::none()),
            Err(RetrievalError::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn questions_accept_body_or_text() {
        let data =
            "{\"id\":\"q1\",\"body\":\"What is p53?\"}\n{\"id\":\"q2\",\"text\":\"Cell death\"}\n";
        let qs = read_questions(data.as_bytes(), &StopWords::english()).unwrap();
        assert_eq!(qs.len(), 2);
        assert_eq!(qs[0].tokens().tokens(), ["p53"]);
        assert_eq!(qs[1].qid, "q2");
    }

    #[test]
    fn duplicate_questions_rejected() {
        let data = "{\"id\":\"q1\",\"body\":\"a\"}\n{\"id\":\"q1\",\"body\":\"b\"}\n";
        assert!(matches!(
            read_questions(data.as_bytes(), &StopWords::none()),
            Err(RetrievalError::DuplicateQuestion(q)) if q == "q1"
        ));
    }
}
