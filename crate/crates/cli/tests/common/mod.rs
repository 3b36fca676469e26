#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub fn embret() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_embret"));
    cmd.env("RUST_LOG", "warn");
    cmd
}

pub fn run_ok(cmd: &mut Command) -> Output {
    let out = cmd.output().expect("spawn embret");
    assert!(
        out.status.success(),
        "embret failed with {:?}\nstderr:\n{}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn exit_code(cmd: &mut Command) -> i32 {
    cmd.output()
        .expect("spawn embret")
        .status
        .code()
        .expect("exit code")
}

/// Paths of a generated collection.
pub struct Fixture {
    pub dir: PathBuf,
    pub embeddings: PathBuf,
    pub corpus: PathBuf,
    pub questions: PathBuf,
    pub qrels: PathBuf,
}

impl Fixture {
    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }
}

pub fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

/// Three documents over a four-word vocabulary.
pub fn toy(dir: &Path) -> Fixture {
    let embeddings = write(
        dir,
        "vectors.txt",
        "4 2\ncancer 1 0\ntumor 0.9 0.1\nheart 0 1\ncardiac 0.1 0.9\n",
    );
    let corpus = write(
        dir,
        "corpus.jsonl",
        concat!(
            r#"{"id": "d1", "title": "Tumor growth", "abstract": "Cancer and tumor cells."}"#,
            "\n",
            r#"{"id": "d2", "title": "Heart failure", "abstract": "A cardiac study of the heart."}"#,
            "\n",
            r#"{"id": 3, "title": "Mixed", "abstract": "Cancer of the heart."}"#,
            "\n",
        ),
    );
    let questions = write(
        dir,
        "questions.jsonl",
        concat!(
            r#"{"id": "q1", "body": "What causes cancer?"}"#,
            "\n",
            r#"{"id": "q2", "body": "Which cardiac drugs help the heart?"}"#,
            "\n",
            r#"{"id": "q3", "body": "What is it?"}"#,
            "\n",
        ),
    );
    let qrels = write(
        dir,
        "qrels.txt",
        "q1 0 d1 1\nq1 0 3 1\nq2 0 d2 1\nq3 0 d1 0\n",
    );
    Fixture {
        dir: dir.to_path_buf(),
        embeddings,
        corpus,
        questions,
        qrels,
    }
}

pub const SYN_TOPICS: usize = 20;
pub const SYN_WORDS_PER_TOPIC: usize = 25;
pub const SYN_GENERAL_WORDS: usize = 60;
pub const SYN_DIM: usize = 32;

fn topic_word(t: usize, j: usize) -> String {
    format!("t{t:02}w{j:02}")
}

/// Topical synthetic collection: topic words cluster around a topic vector,
/// each document draws most of its words from one topic, and every question
/// is judged relevant to the documents of its topic. A few tokens are out of
/// vocabulary and one question consists of stop words only.
pub fn synthetic(dir: &Path, n_docs: usize, n_questions: usize, seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gauss = |rng: &mut ChaCha8Rng, scale: f64| -> Vec<f64> {
        (0..SYN_DIM)
            .map(|_| scale * <StandardNormal as Distribution<f64>>::sample(&StandardNormal, rng))
            .collect()
    };

    let mut vectors = String::new();
    let n_words = SYN_TOPICS * SYN_WORDS_PER_TOPIC + SYN_GENERAL_WORDS;
    writeln!(vectors, "{n_words} {SYN_DIM}").unwrap();
    let mut push_vec = |name: &str, v: &[f64]| {
        vectors.push_str(name);
        for x in v {
            write!(vectors, " {:.6}", x).unwrap();
        }
        vectors.push('\n');
    };
    for t in 0..SYN_TOPICS {
        let center = gauss(&mut rng, 1.0);
        for j in 0..SYN_WORDS_PER_TOPIC {
            let noise = gauss(&mut rng, 0.4);
            let v: Vec<f64> = center.iter().zip(&noise).map(|(c, n)| c + n).collect();
            push_vec(&topic_word(t, j), &v);
        }
    }
    let general: Vec<String> = (0..SYN_GENERAL_WORDS)
        .map(|j| format!("gen{j:02}"))
        .collect();
    for g in &general {
        let v = gauss(&mut rng, 1.0);
        push_vec(g, &v);
    }
    let embeddings = write(dir, "vectors.txt", &vectors);

    let fillers = ["the", "of", "and", "in", "with", "Study", "2", "a"];
    let mut corpus = String::new();
    let mut topic_docs: Vec<Vec<String>> = vec![Vec::new(); SYN_TOPICS];
    let sentence = |rng: &mut ChaCha8Rng, topic: usize, len: usize| -> String {
        let mut words = Vec::with_capacity(len);
        for _ in 0..len {
            let r: f64 = rng.random();
            let w = if r < 0.65 {
                topic_word(topic, rng.random_range(0..SYN_WORDS_PER_TOPIC))
            } else if r < 0.85 {
                general.choose(rng).unwrap().clone()
            } else if r < 0.97 {
                fillers.choose(rng).unwrap().to_string()
            } else {
                format!("oov{}", rng.random_range(0..1000))
            };
            words.push(w);
        }
        words.join(" ")
    };
    for i in 0..n_docs {
        let topic = rng.random_range(0..SYN_TOPICS);
        let id = format!("{}", 100_000 + i);
        let title = sentence(&mut rng, topic, 6);
        let abstract_text = sentence(&mut rng, topic, 40);
        writeln!(
            corpus,
            "{}",
            serde_json::json!({"id": id, "title": title, "abstract": abstract_text})
        )
        .unwrap();
        topic_docs[topic].push(id);
    }
    let corpus_path = write(dir, "corpus.jsonl", &corpus);

    let mut questions = String::new();
    let mut qrels = String::new();
    for q in 0..n_questions {
        let qid = format!("Q{q:04}");
        if q == n_questions - 1 {
            writeln!(
                questions,
                "{}",
                serde_json::json!({"id": qid, "body": "What is the one of these?"})
            )
            .unwrap();
            writeln!(
                qrels,
                "{qid} 0 {} 1",
                topic_docs.iter().flatten().next().unwrap()
            )
            .unwrap();
            continue;
        }
        let topic = q % SYN_TOPICS;
        let body = format!("What is {}?", sentence(&mut rng, topic, 5));
        writeln!(
            questions,
            "{}",
            serde_json::json!({"id": qid, "body": body})
        )
        .unwrap();
        for doc in &topic_docs[topic] {
            writeln!(qrels, "{qid} 0 {doc} 1").unwrap();
        }
    }
    Fixture {
        dir: dir.to_path_buf(),
        embeddings,
        corpus: corpus_path,
        questions: write(dir, "questions.jsonl", &questions),
        qrels: write(dir, "qrels.txt", &qrels),
    }
}
