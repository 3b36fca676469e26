//! Exact and approximate top-k cosine search over document centroids.
//!
//! Centroids are stored L2-normalized in a row-major f32 matrix, so cosine
//! against a unit query is a dot product. The approximate path is a forest
//! of binary trees; each internal node splits its points with the
//! perpendicular bisector of two randomly chosen points. Queries walk all
//! trees from one shared best-first queue keyed on the distance to the
//! splitting hyperplanes, collect at least `search_k` distinct candidates,
//! and score only those exactly.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashSet};
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::centroid::Centroid;

pub const INDEX_MAGIC: [u8; 4] = *b"CRVI";
pub const INDEX_VERSION: u32 = 1;
pub const DEFAULT_TREES: usize = 100;
pub const DEFAULT_LEAF_CAP: usize = 32;
pub const DEFAULT_SEED: u64 = 0x5EED_CE47_201D_0001;

/// Failed split attempts tolerated before a node is forced into a leaf.
const SPLIT_RETRIES: usize = 3;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("invalid index file: {0}")]
    Format(String),
    #[error("duplicate document id {0:?}")]
    DuplicateId(String),
    #[error("dimension mismatch: index has {expected}, got {found}")]
    Dimension { expected: usize, found: usize },
    #[error("cannot build a forest over an empty index")]
    Empty,
    #[error("index has no forest; use exact search")]
    NoForest,
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

/// One retrieved document and its cosine similarity to the query.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredDoc {
    pub doc_id: String,
    pub score: f64,
}

impl ScoredDoc {
    pub fn new(doc_id: impl Into<String>, score: f64) -> Self {
        Self {
            doc_id: doc_id.into(),
            score,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Internal {
        normal: Vec<f32>,
        offset: f32,
        left: u32,
        right: u32,
    },
    Leaf {
        indices: Vec<u32>,
    },
}

/// Nodes in preorder; the root is `nodes[0]`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Tree {
    nodes: Vec<TreeNode>,
}

impl Tree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: u32) -> &TreeNode {
        &self.nodes[id as usize]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentroidIndex {
    dim: usize,
    doc_ids: Vec<String>,
    unit_matrix: Vec<f32>,
    forest: Vec<Tree>,
    leaf_cap: usize,
    seed: u64,
}

/// Incremental construction of an exact index, one document at a time.
#[derive(Debug)]
pub struct IndexBuilder {
    dim: usize,
    doc_ids: Vec<String>,
    seen: HashSet<String>,
    unit_matrix: Vec<f32>,
}

impl IndexBuilder {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            doc_ids: Vec::new(),
            seen: HashSet::new(),
            unit_matrix: Vec::new(),
        }
    }

    pub fn with_capacity(dim: usize, n_docs: usize) -> Self {
        Self {
            dim,
            doc_ids: Vec::with_capacity(n_docs),
            seen: HashSet::with_capacity(n_docs),
            unit_matrix: Vec::with_capacity(n_docs * dim),
        }
    }

    /// Appends a document; the vector is normalized (zero vectors stay zero).
    pub fn push<T>(&mut self, doc_id: impl Into<String>, vector: &[T]) -> Result<(), IndexError>
    where
        T: Copy + Into<f64>,
    {
        if vector.len() != self.dim {
            return Err(IndexError::Dimension {
                expected: self.dim,
                found: vector.len(),
            });
        }
        let doc_id = doc_id.into();
        if !self.seen.insert(doc_id.clone()) {
            return Err(IndexError::DuplicateId(doc_id));
        }
        let norm = vector
            .iter()
            .map(|&x| {
                let x: f64 = x.into();
                x * x
            })
            .sum::<f64>()
            .sqrt();
        let scale = if norm > 0.0 { 1.0 / norm } else { 0.0 };
        self.unit_matrix
            .extend(vector.iter().map(|&x| (x.into() * scale) as f32));
        self.doc_ids.push(doc_id);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doc_ids.is_empty()
    }

    pub fn finish(self) -> CentroidIndex {
        CentroidIndex {
            dim: self.dim,
            doc_ids: self.doc_ids,
            unit_matrix: self.unit_matrix,
            forest: Vec::new(),
            leaf_cap: DEFAULT_LEAF_CAP,
            seed: DEFAULT_SEED,
        }
    }
}

impl CentroidIndex {
    /// Exact-only index over `(doc_id, centroid)` pairs.
    pub fn build_exact<I, S>(dim: usize, centroids: I) -> Result<Self, IndexError>
    where
        I: IntoIterator<Item = (S, Centroid)>,
        S: Into<String>,
    {
        let mut builder = IndexBuilder::new(dim);
        for (id, c) in centroids {
            builder.push(id, c.as_slice())?;
        }
        Ok(builder.finish())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.doc_ids.is_empty()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn doc_id(&self, row: u32) -> &str {
        &self.doc_ids[row as usize]
    }

    pub fn row(&self, row: u32) -> &[f32] {
        let start = row as usize * self.dim;
        &self.unit_matrix[start..start + self.dim]
    }

    pub fn forest(&self) -> &[Tree] {
        &self.forest
    }

    pub fn n_trees(&self) -> usize {
        self.forest.len()
    }

    pub fn leaf_cap(&self) -> usize {
        self.leaf_cap
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `10 · n_trees · k`.
    pub fn default_search_k(&self, k: usize) -> usize {
        10usize.saturating_mul(self.n_trees()).saturating_mul(k)
    }

    /// Replaces the forest with `n_trees` freshly built trees.
    pub fn build_forest(
        &mut self,
        n_trees: usize,
        leaf_cap: usize,
        seed: u64,
    ) -> Result<(), IndexError> {
        if self.is_empty() {
            return Err(IndexError::Empty);
        }
        if leaf_cap == 0 {
            return Err(IndexError::InvalidParameter("leaf_cap must be positive"));
        }
        if n_trees == 0 {
            return Err(IndexError::InvalidParameter("n_trees must be positive"));
        }
        let forest = (0..n_trees)
            .into_par_iter()
            .map(|tree_id| self.build_tree(tree_id as u64, leaf_cap, seed))
            .collect();
        self.forest = forest;
        self.leaf_cap = leaf_cap;
        self.seed = seed;
        Ok(())
    }

    pub fn clear_forest(&mut self) {
        self.forest.clear();
    }

    fn build_tree(&self, tree_id: u64, leaf_cap: usize, seed: u64) -> Tree {
        let mut indices: Vec<u32> = (0..self.len() as u32).collect();
        let mut tree = Tree::default();
        let root_key = mix(mix(seed, 0x7265_6500), tree_id);
        self.build_node(&mut tree.nodes, &mut indices, root_key, leaf_cap);
        tree
    }

    fn build_node(
        &self,
        nodes: &mut Vec<TreeNode>,
        indices: &mut [u32],
        key: u64,
        leaf_cap: usize,
    ) -> u32 {
        let id = nodes.len() as u32;
        if indices.len() > leaf_cap {
            if let Some((normal, offset, split)) = self.choose_split(indices, key) {
                nodes.push(TreeNode::Internal {
                    normal,
                    offset,
                    left: 0,
                    right: 0,
                });
                let (lo, hi) = indices.split_at_mut(split);
                let left = self.build_node(nodes, lo, mix(key, 0), leaf_cap);
                let right = self.build_node(nodes, hi, mix(key, 1), leaf_cap);
                if let TreeNode::Internal {
                    left: l, right: r, ..
                } = &mut nodes[id as usize]
                {
                    *l = left;
                    *r = right;
                }
                return id;
            }
        }
        nodes.push(TreeNode::Leaf {
            indices: indices.to_vec(),
        });
        id
    }

    /// Picks a hyperplane and partitions `indices` so that the left side
    /// comes first. Returns `None` when every attempt fails.
    fn choose_split(&self, indices: &mut [u32], key: u64) -> Option<(Vec<f32>, f32, usize)> {
        let n = indices.len();
        let mut rng = ChaCha8Rng::seed_from_u64(key);
        let mut diff = vec![0.0f64; self.dim];
        for _ in 0..=SPLIT_RETRIES {
            let i = rng.random_range(0..n);
            let mut j = rng.random_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let a = self.row(indices[i]);
            let b = self.row(indices[j]);
            for ((d, &x), &y) in diff.iter_mut().zip(a).zip(b) {
                *d = f64::from(x) - f64::from(y);
            }
            let norm = diff.iter().map(|d| d * d).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let normal: Vec<f32> = diff.iter().map(|d| (d / norm) as f32).collect();
            let offset = normal
                .iter()
                .zip(a.iter().zip(b))
                .map(|(&w, (&x, &y))| f64::from(w) * 0.5 * (f64::from(x) + f64::from(y)))
                .sum::<f64>() as f32;

            let split = partition(indices, |&row| margin(&normal, offset, self.row(row)) < 0.0);
            if split == 0 || split == n {
                continue;
            }
            return Some((normal, offset, split));
        }
        None
    }

    fn check_query(&self, q: &Centroid) -> Result<(), IndexError> {
        if q.dim() != self.dim {
            return Err(IndexError::Dimension {
                expected: self.dim,
                found: q.dim(),
            });
        }
        Ok(())
    }

    fn unit_query(q: &Centroid) -> Vec<f64> {
        let inv = 1.0 / q.norm();
        q.as_slice().iter().map(|x| x * inv).collect()
    }

    /// Exhaustive top-k: `(row, cosine)` pairs, best first.
    pub fn exact_topk_rows(&self, q: &Centroid, k: usize) -> Result<Vec<(u32, f64)>, IndexError> {
        self.check_query(q)?;
        if k == 0 || q.is_zero() || self.is_empty() {
            return Ok(Vec::new());
        }
        let unit = Self::unit_query(q);
        let scored = (0..self.len() as u32)
            .map(|row| (row, dot(self.row(row), &unit)))
            .collect();
        Ok(self.select_top(scored, k))
    }

    pub fn exact_topk(&self, q: &Centroid, k: usize) -> Result<Vec<ScoredDoc>, IndexError> {
        Ok(self.to_docs(self.exact_topk_rows(q, k)?))
    }

    /// Forest-backed top-k. `search_k` defaults to `10 · n_trees · k`.
    pub fn ann_topk_rows(
        &self,
        q: &Centroid,
        k: usize,
        search_k: Option<usize>,
    ) -> Result<Vec<(u32, f64)>, IndexError> {
        if self.forest.is_empty() {
            return Err(IndexError::NoForest);
        }
        self.check_query(q)?;
        if k == 0 || q.is_zero() || self.is_empty() {
            return Ok(Vec::new());
        }
        let search_k = search_k.unwrap_or_else(|| self.default_search_k(k));
        let unit = Self::unit_query(q);
        let candidates = self.collect_candidates(&unit, search_k);
        let scored = candidates
            .iter()
            .enumerate()
            .map(|(i, &row)| {
                if let Some(&ahead) = candidates.get(i + PREFETCH_AHEAD) {
                    prefetch_row(self.row(ahead));
                }
                (row, dot(self.row(row), &unit))
            })
            .collect();
        Ok(self.select_top(scored, k))
    }

    pub fn ann_topk(
        &self,
        q: &Centroid,
        k: usize,
        search_k: Option<usize>,
    ) -> Result<Vec<ScoredDoc>, IndexError> {
        Ok(self.to_docs(self.ann_topk_rows(q, k, search_k)?))
    }

    /// Best-first traversal of every tree from a single queue. The child on
    /// the query's side of a hyperplane inherits `min(priority, |margin|)`,
    /// the far child `min(priority, -|margin|)`.
    fn collect_candidates(&self, unit_query: &[f64], search_k: usize) -> Vec<u32> {
        let mut seen = vec![0u64; self.len().div_ceil(64)];
        let mut candidates = Vec::with_capacity(search_k.min(self.len()));
        let mut queue = BinaryHeap::with_capacity(self.forest.len() * 4);
        for tree in 0..self.forest.len() as u32 {
            queue.push(Pending {
                priority: f64::INFINITY,
                tree,
                node: 0,
            });
        }

        while candidates.len() < search_k {
            let Some(Pending {
                priority,
                tree,
                node,
            }) = queue.pop()
            else {
                break;
            };
            match self.forest[tree as usize].node(node) {
                TreeNode::Leaf { indices } => {
                    for &row in indices {
                        let (word, bit) = (row as usize / 64, row % 64);
                        if seen[word] & (1 << bit) == 0 {
                            seen[word] |= 1 << bit;
                            candidates.push(row);
                        }
                    }
                }
                TreeNode::Internal {
                    normal,
                    offset,
                    left,
                    right,
                } => {
                    let m = margin(normal, *offset, unit_query);
                    let (near, far) = if m >= 0.0 {
                        (*right, *left)
                    } else {
                        (*left, *right)
                    };
                    queue.push(Pending {
                        priority: priority.min(m.abs()),
                        tree,
                        node: near,
                    });
                    queue.push(Pending {
                        priority: priority.min(-m.abs()),
                        tree,
                        node: far,
                    });
                }
            }
        }
        candidates
    }

    /// Keeps the `k` best `(row, score)` pairs: score descending, ties by
    /// ascending document id.
    fn select_top(&self, mut scored: Vec<(u32, f64)>, k: usize) -> Vec<(u32, f64)> {
        let order = |a: &(u32, f64), b: &(u32, f64)| {
            b.1.total_cmp(&a.1)
                .then_with(|| self.doc_ids[a.0 as usize].cmp(&self.doc_ids[b.0 as usize]))
        };
        if scored.len() > k {
            scored.select_nth_unstable_by(k - 1, order);
            scored.truncate(k);
        }
        scored.sort_unstable_by(order);
        scored
    }

    fn to_docs(&self, rows: Vec<(u32, f64)>) -> Vec<ScoredDoc> {
        rows.into_iter()
            .map(|(row, score)| ScoredDoc::new(self.doc_id(row), score))
            .collect()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), IndexError> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write_to(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IndexError> {
        Self::read_from(&mut BufReader::new(File::open(path)?))
    }

    pub fn write_to<W: Write>(&self, out: &mut W) -> Result<(), IndexError> {
        out.write_all(&INDEX_MAGIC)?;
        out.write_u32::<LittleEndian>(INDEX_VERSION)?;
        out.write_u32::<LittleEndian>(to_u32(self.dim, "dim")?)?;
        out.write_u64::<LittleEndian>(self.len() as u64)?;
        out.write_u32::<LittleEndian>(to_u32(self.n_trees(), "n_trees")?)?;
        out.write_u32::<LittleEndian>(to_u32(self.leaf_cap, "leaf_cap")?)?;
        out.write_u64::<LittleEndian>(self.seed)?;
        for id in &self.doc_ids {
            out.write_u32::<LittleEndian>(to_u32(id.len(), "doc id length")?)?;
            out.write_all(id.as_bytes())?;
        }
        for &x in &self.unit_matrix {
            out.write_f32::<LittleEndian>(x)?;
        }
        for tree in &self.forest {
            write_subtree(out, tree, 0)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(input: &mut R) -> Result<Self, IndexError> {
        let mut magic = [0u8; 4];
        input.read_exact(&mut magic)?;
        if magic != INDEX_MAGIC {
            return Err(IndexError::Format(format!("bad magic {magic:?}")));
        }
        let version = input.read_u32::<LittleEndian>()?;
        if version != INDEX_VERSION {
            return Err(IndexError::Format(format!("unsupported version {version}")));
        }
        let dim = input.read_u32::<LittleEndian>()? as usize;
        let n_docs = usize::try_from(input.read_u64::<LittleEndian>()?)
            .map_err(|_| IndexError::Format("document count overflows".into()))?;
        if n_docs > u32::MAX as usize {
            return Err(IndexError::Format(format!("too many documents: {n_docs}")));
        }
        let n_trees = input.read_u32::<LittleEndian>()? as usize;
        let leaf_cap = input.read_u32::<LittleEndian>()? as usize;
        let seed = input.read_u64::<LittleEndian>()?;

        let mut doc_ids = Vec::with_capacity(n_docs.min(1 << 20));
        let mut seen = HashSet::with_capacity(n_docs.min(1 << 20));
        for _ in 0..n_docs {
            let len = input.read_u32::<LittleEndian>()? as usize;
            let mut bytes = vec![0u8; len];
            input.read_exact(&mut bytes)?;
            let id = String::from_utf8(bytes)
                .map_err(|_| IndexError::Format("document id is not UTF-8".into()))?;
            if !seen.insert(id.clone()) {
                return Err(IndexError::Format(format!("duplicate document id {id:?}")));
            }
            doc_ids.push(id);
        }

        let n_values = n_docs
            .checked_mul(dim)
            .ok_or_else(|| IndexError::Format("matrix size overflows".into()))?;
        let mut unit_matrix = vec![0f32; n_values];
        input.read_f32_into::<LittleEndian>(&mut unit_matrix)?;

        let mut forest = Vec::with_capacity(n_trees.min(1 << 16));
        let mut covered = vec![false; n_docs];
        for t in 0..n_trees {
            let mut tree = Tree::default();
            read_subtree(input, &mut tree.nodes, dim, n_docs)?;
            covered.iter_mut().for_each(|c| *c = false);
            for node in &tree.nodes {
                if let TreeNode::Leaf { indices } = node {
                    for &row in indices {
                        if std::mem::replace(&mut covered[row as usize], true) {
                            return Err(IndexError::Format(format!(
                                "tree {t}: row {row} appears twice"
                            )));
                        }
                    }
                }
            }
            if covered.iter().any(|c| !c) {
                return Err(IndexError::Format(format!(
                    "tree {t} does not cover every row"
                )));
            }
            forest.push(tree);
        }

        Ok(Self {
            dim,
            doc_ids,
            unit_matrix,
            forest,
            leaf_cap,
            seed,
        })
    }
}

fn to_u32(value: usize, what: &'static str) -> Result<u32, IndexError> {
    u32::try_from(value).map_err(|_| IndexError::InvalidParameter(what))
}

fn write_subtree<W: Write>(out: &mut W, tree: &Tree, id: u32) -> Result<(), IndexError> {
    match tree.node(id) {
        TreeNode::Internal {
            normal,
            offset,
            left,
            right,
        } => {
            out.write_u8(0)?;
            for &x in normal {
                out.write_f32::<LittleEndian>(x)?;
            }
            out.write_f32::<LittleEndian>(*offset)?;
            write_subtree(out, tree, *left)?;
            write_subtree(out, tree, *right)
        }
        TreeNode::Leaf { indices } => {
            out.write_u8(1)?;
            out.write_u32::<LittleEndian>(to_u32(indices.len(), "leaf size")?)?;
            for &row in indices {
                out.write_u32::<LittleEndian>(row)?;
            }
            Ok(())
        }
    }
}

fn read_subtree<R: Read>(
    input: &mut R,
    nodes: &mut Vec<TreeNode>,
    dim: usize,
    n_docs: usize,
) -> Result<u32, IndexError> {
    let id = nodes.len() as u32;
    match input.read_u8()? {
        0 => {
            let mut normal = vec![0f32; dim];
            input.read_f32_into::<LittleEndian>(&mut normal)?;
            let offset = input.read_f32::<LittleEndian>()?;
            nodes.push(TreeNode::Internal {
                normal,
                offset,
                left: 0,
                right: 0,
            });
            let left = read_subtree(input, nodes, dim, n_docs)?;
            let right = read_subtree(input, nodes, dim, n_docs)?;
            if let TreeNode::Internal {
                left: l, right: r, ..
            } = &mut nodes[id as usize]
            {
                *l = left;
                *r = right;
            }
        }
        1 => {
            let count = input.read_u32::<LittleEndian>()? as usize;
            if count > n_docs {
                return Err(IndexError::Format(format!(
                    "leaf of {count} rows exceeds n_docs"
                )));
            }
            let mut indices = vec![0u32; count];
            input.read_u32_into::<LittleEndian>(&mut indices)?;
            if let Some(&bad) = indices.iter().find(|&&r| r as usize >= n_docs) {
                return Err(IndexError::Format(format!("leaf row {bad} out of range")));
            }
            nodes.push(TreeNode::Leaf { indices });
        }
        tag => return Err(IndexError::Format(format!("unknown node tag {tag}"))),
    }
    Ok(id)
}

#[derive(Debug, Clone, Copy)]
struct Pending {
    priority: f64,
    tree: u32,
    node: u32,
}

impl PartialEq for Pending {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Pending {}

impl PartialOrd for Pending {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Pending {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .total_cmp(&other.priority)
            .then_with(|| other.tree.cmp(&self.tree))
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// `normal · x − offset`.
fn margin<T: Copy + Into<f64>>(normal: &[f32], offset: f32, x: &[T]) -> f64 {
    let mut lanes = [0.0f64; 4];
    let mut ws = normal.chunks_exact(4);
    let mut xs = x.chunks_exact(4);
    for (w, x) in (&mut ws).zip(&mut xs) {
        for i in 0..4 {
            lanes[i] += f64::from(w[i]) * x[i].into();
        }
    }
    let mut tail = 0.0;
    for (&w, &v) in ws.remainder().iter().zip(xs.remainder()) {
        tail += f64::from(w) * v.into();
    }
    (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]) + tail - f64::from(offset)
}

fn dot(row: &[f32], q: &[f64]) -> f64 {
    let mut lanes = [0.0f64; 4];
    let mut rows = row.chunks_exact(4);
    let mut qs = q.chunks_exact(4);
    for (r, q) in (&mut rows).zip(&mut qs) {
        for i in 0..4 {
            lanes[i] += f64::from(r[i]) * q[i];
        }
    }
    let mut tail = 0.0;
    for (&r, &q) in rows.remainder().iter().zip(qs.remainder()) {
        tail += f64::from(r) * q;
    }
    (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]) + tail
}

/// Rows ahead of the one being scored whose cache lines are requested early.
const PREFETCH_AHEAD: usize = 8;

#[cfg(target_arch = "x86_64")]
fn prefetch_row(row: &[f32]) {
    use std::arch::x86_64::{_mm_prefetch, _MM_HINT_T0};
    for line in row.chunks(16) {
        // SAFETY: prefetch is a hint and never faults; the pointer is in bounds.
        unsafe { _mm_prefetch(line.as_ptr() as *const i8, _MM_HINT_T0) };
    }
}

#[cfg(not(target_arch = "x86_64"))]
fn prefetch_row(_row: &[f32]) {}

/// Moves elements satisfying `goes_left` to the front; returns their count.
fn partition<T, F: FnMut(&T) -> bool>(items: &mut [T], mut goes_left: F) -> usize {
    let mut split = 0;
    for i in 0..items.len() {
        if goes_left(&items[i]) {
            items.swap(i, split);
            split += 1;
        }
    }
    split
}

/// SplitMix64 finalizer over `a` combined with `b`.
fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(a << 6)
        .wrapping_add(a >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
