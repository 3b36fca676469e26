//! Batch workflows behind the `embret` binary.
//!
//! Every subcommand reads its inputs from flags, optionally backed by a
//! `key = value` TOML config file (flags win). Data goes to files or stdout,
//! logs to stderr.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::{Deserialize, Serialize};

use embret::eval::{EvalError, EvalOptions, QrelSet};
use embret::index::{
    CentroidIndex, IndexBuilder, IndexError, DEFAULT_LEAF_CAP, DEFAULT_SEED, DEFAULT_TREES,
};
use embret::retrieval::{load_questions, Corpus, Engine, RankedRun, RetrievalConfig, DEFAULT_K};
use embret::{
    centroid, compute_idf, evaluate, hybrid, rerank, retrieve, CentroidKind, EmbeddingStore,
    IdfTable, RwmdMethod, StopWords,
};

pub const EXIT_MISSING_INPUT: i32 = 2;
pub const EXIT_DATA_ERROR: i32 = 3;
pub const EXIT_EVAL_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "embret",
    version,
    about = "Embedding-centroid document retrieval"
)]
pub struct Cli {
    /// Optional `key = value` config file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute IDF scores over a corpus.
    Idf(IdfArgs),
    /// Compute document centroids and build the search index.
    BuildIndex(BuildIndexArgs),
    /// Retrieve the top-k documents for each question.
    Search(SearchArgs),
    /// Rerank an existing run file with relaxed WMD.
    Rerank(RerankArgs),
    /// Combine two runs: primary unless empty, else fallback.
    Hybrid(HybridArgs),
    /// Score a run against qrels.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cent,
    Centidf,
}

impl From<Mode> for CentroidKind {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Cent => CentroidKind::Simple,
            Mode::Centidf => CentroidKind::Idf,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineArg {
    Exact,
    Ann,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum MethodArg {
    #[value(name = "rwmd-q")]
    #[serde(rename = "rwmd-q")]
    RwmdQ,
    #[value(name = "rwmd-d")]
    #[serde(rename = "rwmd-d")]
    RwmdD,
    #[value(name = "rwmd-max")]
    #[serde(rename = "rwmd-max")]
    RwmdMax,
}

impl From<MethodArg> for RwmdMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::RwmdQ => RwmdMethod::Query,
            MethodArg::RwmdD => RwmdMethod::Document,
            MethodArg::RwmdMax => RwmdMethod::Max,
        }
    }
}

#[derive(Debug, Args)]
pub struct IdfArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BuildIndexArgs {
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Compute IDF from the indexed corpus (default for centidf without --idf-file).
    #[arg(long, conflicts_with = "idf_file")]
    pub compute_idf: bool,
    /// Read IDF scores from a file instead of computing them.
    #[arg(long)]
    pub idf_file: Option<PathBuf>,
    /// Where computed IDF scores are written (default: `<output>.idf`).
    #[arg(long)]
    pub idf_out: Option<PathBuf>,
    /// `exact` stores no trees.
    #[arg(long, value_enum)]
    pub engine: Option<EngineArg>,
    #[arg(long)]
    pub trees: Option<usize>,
    #[arg(long)]
    pub leaf_cap: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub index: Option<PathBuf>,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub questions: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Override the IDF file recorded with the index.
    #[arg(long)]
    pub idf_file: Option<PathBuf>,
    /// Must match the index if given.
    #[arg(long, value_enum)]
    pub mode: Option<Mode>,
    /// Default: `ann` when the index has trees, else `exact`.
    #[arg(long, value_enum)]
    pub engine: Option<EngineArg>,
    #[arg(long)]
    pub k: Option<usize>,
    /// Distinct candidates to collect (default: 10 · trees · k).
    #[arg(long)]
    pub search_k: Option<usize>,
    /// Rerank the retrieved documents (requires --corpus).
    #[arg(long, value_enum)]
    pub rerank: Option<MethodArg>,
    #[arg(long)]
    pub rerank_depth: Option<usize>,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RerankArgs {
    #[arg(long)]
    pub run: Option<PathBuf>,
    #[arg(long)]
    pub questions: Option<PathBuf>,
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub rerank_depth: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HybridArgs {
    #[arg(long)]
    pub primary: Option<PathBuf>,
    #[arg(long)]
    pub fallback: Option<PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub run: Option<PathBuf>,
    #[arg(long)]
    pub qrels: Option<PathBuf>,
    /// nDCG cutoffs, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub k: Option<Vec<usize>>,
    #[arg(long)]
    pub map_depth: Option<usize>,
    /// Write the JSON report here.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Print JSON instead of the table on stdout.
    #[arg(long)]
    pub json: bool,
}

/// A required input that was given neither as a flag nor in the config file.
#[derive(Debug)]
pub struct MissingInput(pub String);

impl fmt::Display for MissingInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "missing required input --{}", self.0.replace('_', "-"))
    }
}

impl std::error::Error for MissingInput {}

/// Values read from `--config`.
#[derive(Debug, Default)]
pub struct ConfigFile {
    table: toml::Table,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(Self {
            table: text.parse::<toml::Table>()?,
        })
    }

    fn get<T: for<'de> Deserialize<'de>>(&self, key: &str) -> Result<Option<T>> {
        let key_alt = key.replace('_', "-");
        match self.table.get(key).or_else(|| self.table.get(&key_alt)) {
            None => Ok(None),
            Some(v) => Ok(Some(
                v.clone()
                    .try_into()
                    .map_err(|e| anyhow!("config key {key}: {e}"))?,
            )),
        }
    }
}

struct Resolver<'a> {
    config: &'a ConfigFile,
}

impl Resolver<'_> {
    fn opt<T: for<'de> Deserialize<'de>>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        match flag {
            Some(v) => Ok(Some(v)),
            None => self.config.get(key),
        }
    }

    fn req<T: for<'de> Deserialize<'de>>(&self, flag: Option<T>, key: &str) -> Result<T> {
        self.opt(flag, key)?
            .ok_or_else(|| MissingInput(key.to_owned()).into())
    }

    fn or<T: for<'de> Deserialize<'de>>(
        &self,
        flag: Option<T>,
        key: &str,
        default: T,
    ) -> Result<T> {
        Ok(self.opt(flag, key)?.unwrap_or(default))
    }
}

/// Maps an error chain onto the documented exit codes.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if cause.is::<MissingInput>() {
            return EXIT_MISSING_INPUT;
        }
        if let Some(EvalError::NoOverlap) = cause.downcast_ref::<EvalError>() {
            return EXIT_EVAL_MISMATCH;
        }
        if let Some(e) = cause.downcast_ref::<io::Error>() {
            if matches!(
                e.kind(),
                io::ErrorKind::NotFound | io::ErrorKind::PermissionDenied
            ) {
                return EXIT_MISSING_INPUT;
            }
        }
    }
    EXIT_DATA_ERROR
}

pub fn run(cli: Cli) -> Result<()> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let resolve = Resolver { config: &config };
    if let Some(threads) = resolve.opt(cli.threads, "threads")? {
        // Fails only if a global pool already exists, e.g. in tests.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match cli.command {
        Command::Idf(args) => cmd_idf(args, &resolve),
        Command::BuildIndex(args) => cmd_build_index(args, &resolve),
        Command::Search(args) => cmd_search(args, &resolve),
        Command::Rerank(args) => cmd_rerank(args, &resolve),
        Command::Hybrid(args) => cmd_hybrid(args, &resolve),
        Command::Evaluate(args) => cmd_evaluate(args, &resolve),
    }
}

fn load_stopwords(path: Option<PathBuf>) -> Result<StopWords> {
    match path {
        None => Ok(StopWords::english()),
        Some(p) => {
            let file = fs::File::open(&p)
                .with_context(|| format!("opening stop words {}", p.display()))?;
            Ok(StopWords::from_reader(io::BufReader::new(file))?)
        }
    }
}

fn load_store(path: &Path) -> Result<EmbeddingStore> {
    let start = Instant::now();
    let store = EmbeddingStore::load(path)
        .with_context(|| format!("loading embeddings {}", path.display()))?;
    info!(
        "loaded {} embeddings of dimension {} in {:.2}s",
        store.vocab_size(),
        store.dim(),
        start.elapsed().as_secs_f64()
    );
    Ok(store)
}

fn load_corpus(path: &Path, stopwords: &StopWords) -> Result<Corpus> {
    Corpus::load(path, stopwords).with_context(|| format!("loading corpus {}", path.display()))
}

fn load_idf(path: &Path) -> Result<IdfTable> {
    IdfTable::load(path).with_context(|| format!("loading IDF file {}", path.display()))
}

fn load_run(path: &Path) -> Result<RankedRun> {
    RankedRun::load(path).with_context(|| format!("loading run {}", path.display()))
}

fn save_run(run: &RankedRun, path: &Path) -> Result<()> {
    run.save(path)
        .with_context(|| format!("writing run {}", path.display()))
}

fn cmd_idf(args: IdfArgs, resolve: &Resolver) -> Result<()> {
    let corpus_path: PathBuf = resolve.req(args.corpus, "corpus")?;
    let output: PathBuf = resolve.req(args.output, "output")?;
    let stopwords = load_stopwords(resolve.opt(args.stopwords, "stopwords")?)?;
    let corpus = load_corpus(&corpus_path, &stopwords)?;
    let idf = compute_idf(corpus.docs().iter().map(|d| d.tokens()), corpus.len())?;
    idf.save(&output)
        .with_context(|| format!("writing {}", output.display()))?;
    info!(
        "IDF for {} tokens over {} documents -> {}",
        idf.len(),
        idf.n_docs(),
        output.display()
    );
    Ok(())
}

/// Sidecar describing how an index file was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexMeta {
    pub mode: Mode,
    /// Relative paths are resolved against the index file's directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idf_file: Option<PathBuf>,
}

impl IndexMeta {
    pub fn path_for(index: &Path) -> PathBuf {
        let mut s = index.as_os_str().to_owned();
        s.push(".meta");
        PathBuf::from(s)
    }

    pub fn save(&self, index: &Path) -> Result<()> {
        let path = Self::path_for(index);
        fs::write(&path, toml::to_string(self)?)
            .with_context(|| format!("writing {}", path.display()))
    }

    pub fn load(index: &Path) -> Result<Self> {
        let path = Self::path_for(index);
        let text = fs::read_to_string(&path)
            .with_context(|| format!("reading index metadata {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing index metadata {}", path.display()))
    }

    pub fn resolved_idf(&self, index: &Path) -> Option<PathBuf> {
        self.idf_file.as_ref().map(|p| {
            if p.is_absolute() {
                p.clone()
            } else {
                index.parent().unwrap_or(Path::new("")).join(p)
            }
        })
    }
}

fn relative_to_index(file: &Path, index: &Path) -> PathBuf {
    let dir = index.parent().unwrap_or(Path::new(""));
    if file.parent() == Some(dir) {
        if let Some(name) = file.file_name() {
            return PathBuf::from(name);
        }
    }
    file.canonicalize().unwrap_or_else(|_| file.to_path_buf())
}

fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_build_index(args: BuildIndexArgs, resolve: &Resolver) -> Result<()> {
    let start = Instant::now();
    let embeddings: PathBuf = resolve.req(args.embeddings, "embeddings")?;
    let corpus_path: PathBuf = resolve.req(args.corpus, "corpus")?;
    let output: PathBuf = resolve.req(args.output, "output")?;
    let mode = resolve.or(args.mode, "mode", Mode::Centidf)?;
    let engine = resolve.or(args.engine, "engine", EngineArg::Ann)?;
    let n_trees = resolve.or(args.trees, "trees", DEFAULT_TREES)?;
    let leaf_cap = resolve.or(args.leaf_cap, "leaf_cap", DEFAULT_LEAF_CAP)?;
    let seed = resolve.or(args.seed, "seed", DEFAULT_SEED)?;
    let idf_file: Option<PathBuf> = resolve.opt(args.idf_file, "idf_file")?;
    let compute = args.compute_idf || resolve.or(None, "compute_idf", false)?;
    if compute && idf_file.is_some() {
        bail!("--compute-idf and --idf-file are mutually exclusive");
    }

    let stopwords = load_stopwords(resolve.opt(args.stopwords, "stopwords")?)?;
    let mut store = load_store(&embeddings)?;
    let corpus = load_corpus(&corpus_path, &stopwords)?;
    info!("read {} documents", corpus.len());

    let mut meta = IndexMeta {
        mode,
        idf_file: None,
    };
    if mode == Mode::Centidf || compute {
        let idf_path = match idf_file {
            Some(path) if !compute => {
                store.set_idf(load_idf(&path)?);
                path
            }
            _ => {
                let idf = compute_idf(corpus.docs().iter().map(|d| d.tokens()), corpus.len())?;
                let path = resolve
                    .opt(args.idf_out, "idf_out")?
                    .unwrap_or_else(|| with_suffix(&output, ".idf"));
                idf.save(&path)
                    .with_context(|| format!("writing {}", path.display()))?;
                info!(
                    "computed IDF for {} tokens -> {}",
                    idf.len(),
                    path.display()
                );
                store.set_idf(idf);
                path
            }
        };
        meta.idf_file = Some(relative_to_index(&idf_path, &output));
    }

    let kind = CentroidKind::from(mode);
    let mut builder = IndexBuilder::with_capacity(store.dim(), corpus.len());
    for doc in corpus.docs() {
        let c = centroid(kind, doc.tokens(), &store)?;
        builder.push(doc.id.clone(), c.as_slice())?;
    }
    let mut index = builder.finish();
    let centroid_secs = start.elapsed().as_secs_f64();

    if engine == EngineArg::Ann && !index.is_empty() {
        let t = Instant::now();
        index.build_forest(n_trees, leaf_cap, seed)?;
        info!(
            "built {} trees (leaf cap {}) in {:.2}s",
            n_trees,
            leaf_cap,
            t.elapsed().as_secs_f64()
        );
    }
    index
        .save(&output)
        .with_context(|| format!("writing index {}", output.display()))?;
    meta.save(&output)?;
    info!(
        "indexed {} documents, dimension {}, {} trees; centroids {:.2}s, total {:.2}s",
        index.len(),
        index.dim(),
        index.n_trees(),
        centroid_secs,
        start.elapsed().as_secs_f64()
    );
    Ok(())
}

fn cmd_search(args: SearchArgs, resolve: &Resolver) -> Result<()> {
    let index_path: PathBuf = resolve.req(args.index, "index")?;
    let embeddings: PathBuf = resolve.req(args.embeddings, "embeddings")?;
    let questions_path: PathBuf = resolve.req(args.questions, "questions")?;
    let output: PathBuf = resolve.req(args.output, "output")?;
    let k = resolve.or(args.k, "k", DEFAULT_K)?;
    if k == 0 {
        bail!("k must be at least 1");
    }
    let search_k: Option<usize> = resolve.opt(args.search_k, "search_k")?;
    let rerank_method: Option<MethodArg> = resolve.opt(args.rerank, "rerank")?;
    let rerank_depth: Option<usize> = resolve.opt(args.rerank_depth, "rerank_depth")?;

    let index = CentroidIndex::load(&index_path)
        .with_context(|| format!("loading index {}", index_path.display()))?;
    let meta = IndexMeta::load(&index_path)?;
    if let Some(mode) = resolve.opt(args.mode, "mode")? {
        if mode != meta.mode {
            bail!(
                "index was built for {:?} but --mode {:?} was requested",
                meta.mode,
                mode
            );
        }
    }
    let default_engine = if index.n_trees() > 0 {
        EngineArg::Ann
    } else {
        EngineArg::Exact
    };
    let engine = match resolve.or(args.engine, "engine", default_engine)? {
        EngineArg::Exact => Engine::Exact,
        EngineArg::Ann if index.n_trees() == 0 => return Err(IndexError::NoForest.into()),
        EngineArg::Ann => Engine::Ann { search_k },
    };

    let stopwords = load_stopwords(resolve.opt(args.stopwords, "stopwords")?)?;
    let mut store = load_store(&embeddings)?;
    if meta.mode == Mode::Centidf {
        let idf_path = resolve
            .opt(args.idf_file, "idf_file")?
            .or_else(|| meta.resolved_idf(&index_path))
            .ok_or_else(|| MissingInput("idf_file".into()))?;
        store.set_idf(load_idf(&idf_path)?);
    }
    let questions = load_questions(&questions_path, &stopwords)
        .with_context(|| format!("loading questions {}", questions_path.display()))?;
    let corpus = match rerank_method {
        Some(_) => {
            let path: PathBuf = resolve.req(args.corpus, "corpus")?;
            Some(load_corpus(&path, &stopwords)?)
        }
        None => None,
    };

    let kind = CentroidKind::from(meta.mode);
    let config = RetrievalConfig::new(kind, engine).with_k(k);
    let t = Instant::now();
    let mut run = retrieve(&questions, &index, kind, &store, &config)?;
    let search_secs = t.elapsed().as_secs_f64();
    let per_q = |secs: f64| secs / questions.len().max(1) as f64;
    info!(
        "search ({}): {} questions in {:.3}s, {:.4}s per question",
        config.tag(),
        questions.len(),
        search_secs,
        per_q(search_secs)
    );

    if let (Some(method), Some(corpus)) = (rerank_method, corpus.as_ref()) {
        let t = Instant::now();
        run = rerank(
            &run,
            &questions,
            corpus,
            &store,
            method.into(),
            rerank_depth,
        )?;
        let rerank_secs = t.elapsed().as_secs_f64();
        info!(
            "rerank ({}): {:.3}s, {:.4}s per question",
            run.tag(),
            rerank_secs,
            per_q(rerank_secs)
        );
    }
    let empty = run.iter().filter(|(_, docs)| docs.is_empty()).count();
    if empty > 0 {
        info!("{empty} questions retrieved no documents");
    }
    save_run(&run, &output)
}

fn cmd_rerank(args: RerankArgs, resolve: &Resolver) -> Result<()> {
    let run_path: PathBuf = resolve.req(args.run, "run")?;
    let questions_path: PathBuf = resolve.req(args.questions, "questions")?;
    let corpus_path: PathBuf = resolve.req(args.corpus, "corpus")?;
    let embeddings: PathBuf = resolve.req(args.embeddings, "embeddings")?;
    let output: PathBuf = resolve.req(args.output, "output")?;
    let method = resolve.or(args.method, "method", MethodArg::RwmdQ)?;
    let depth: Option<usize> = resolve.opt(args.rerank_depth, "rerank_depth")?;

    let stopwords = load_stopwords(resolve.opt(args.stopwords, "stopwords")?)?;
    let store = load_store(&embeddings)?;
    let corpus = load_corpus(&corpus_path, &stopwords)?;
    let questions = load_questions(&questions_path, &stopwords)
        .with_context(|| format!("loading questions {}", questions_path.display()))?;
    let run = load_run(&run_path)?;

    let t = Instant::now();
    let out = rerank(&run, &questions, &corpus, &store, method.into(), depth)?;
    info!(
        "rerank ({}): {} questions in {:.3}s",
        out.tag(),
        out.len(),
        t.elapsed().as_secs_f64()
    );
    save_run(&out, &output)
}

fn cmd_hybrid(args: HybridArgs, resolve: &Resolver) -> Result<()> {
    let primary = load_run(&resolve.req::<PathBuf>(args.primary, "primary")?)?;
    let fallback = load_run(&resolve.req::<PathBuf>(args.fallback, "fallback")?)?;
    let output: PathBuf = resolve.req(args.output, "output")?;
    let combined = hybrid(&primary, &fallback);
    let from_fallback = combined
        .qids()
        .filter(|q| primary.get(q).is_empty() && !fallback.get(q).is_empty())
        .count();
    info!(
        "hybrid: {} questions, {} taken from the fallback run",
        combined.len(),
        from_fallback
    );
    save_run(&combined, &output)
}

fn cmd_evaluate(args: EvaluateArgs, resolve: &Resolver) -> Result<()> {
    let run = load_run(&resolve.req::<PathBuf>(args.run, "run")?)?;
    let qrels_path: PathBuf = resolve.req(args.qrels, "qrels")?;
    let qrels = QrelSet::load(&qrels_path)
        .with_context(|| format!("loading qrels {}", qrels_path.display()))?;
    let k_list = resolve.or(args.k, "k", vec![20, 100])?;
    let options = EvalOptions {
        map_depth: resolve.opt(args.map_depth, "map_depth")?,
    };
    let report = evaluate(&run, &qrels, &k_list, &options)?;
    if report.n_excluded > 0 {
        info!(
            "excluded {} questions with no relevant documents",
            report.n_excluded
        );
    }
    let json = report.to_json();
    if let Some(path) = resolve.opt::<PathBuf>(args.output, "output")? {
        fs::write(&path, format!("{json}\n"))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let mut stdout = io::stdout().lock();
    if args.json {
        writeln!(stdout, "{json}")?;
    } else {
        write!(stdout, "{}", report.to_table())?;
    }
    Ok(())
}
