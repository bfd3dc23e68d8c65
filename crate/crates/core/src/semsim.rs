//! Embedding-based semantic similarity between per-type corpora.

use std::collections::{BTreeMap, HashMap};
use std::io::BufRead;

use thiserror::Error;

use crate::mbti::MbtiType;
use crate::table::TypeTable;
use crate::text::tokenize;

#[derive(Debug, Error)]
pub enum SemsimError {
    #[error("line {line}: expected {expected} values, found {found}")]
    DimensionMismatch { line: usize, expected: usize, found: usize },
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },
    #[error("embedding file contains no vectors")]
    EmptyFile,
    #[error("cosine undefined for a zero vector{}", .0.map(|t| format!(" (type {t})")).unwrap_or_default())]
    ZeroVector(Option<MbtiType>),
    #[error("vectors differ in dimension ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("no corpus for type {0}")]
    MissingType(MbtiType),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dimension: usize,
    vectors: HashMap<String, Vec<f64>>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> Self {
        EmbeddingTable {
            dimension,
            vectors: HashMap::new(),
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f64]> {
        self.vectors.get(token).map(Vec::as_slice)
    }

    /// Inserts (or replaces) a vector; tokens are stored lowercase.
    pub fn insert(&mut self, token: &str, vector: Vec<f64>) -> Result<(), SemsimError> {
        if vector.len() != self.dimension {
            return Err(SemsimError::LengthMismatch(self.dimension, vector.len()));
        }
        self.vectors.insert(token.to_lowercase(), vector);
        Ok(())
    }
}

/// Whitespace-separated `token v1 … vd` lines; `d` comes from the first line
/// and later duplicates replace earlier vectors.
pub fn load_embeddings<R: BufRead>(reader: R) -> Result<EmbeddingTable, SemsimError> {
    let mut table: Option<EmbeddingTable> = None;
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let mut parts = line.split_whitespace();
        let Some(token) = parts.next() else {
            continue;
        };
        let values: Vec<f64> = parts
            .map(|v| v.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| SemsimError::Malformed {
                line: line_no,
                reason: e.to_string(),
            })?;
        let t = table.get_or_insert_with(|| EmbeddingTable::new(values.len()));
        if values.is_empty() || values.len() != t.dimension {
            return Err(SemsimError::DimensionMismatch {
                line: line_no,
                expected: t.dimension,
                found: values.len(),
            });
        }
        t.vectors.insert(token.to_lowercase(), values);
    }
    table.ok_or(SemsimError::EmptyFile)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DocVector {
    pub values: Vec<f64>,
    pub in_vocab_fraction: f64,
}

/// Mean of the in-vocabulary token vectors; unknown tokens are skipped.
pub fn doc_vector<S: AsRef<str>>(tokens: &[S], table: &EmbeddingTable) -> DocVector {
    let mut sum = vec![0.0; table.dimension];
    let mut hits = 0usize;
    for tok in tokens {
        if let Some(v) = table.get(tok.as_ref()) {
            hits += 1;
            sum.iter_mut().zip(v).for_each(|(s, x)| *s += x);
        }
    }
    if hits > 0 {
        let h = hits as f64;
        sum.iter_mut().for_each(|s| *s /= h);
    }
    DocVector {
        values: sum,
        in_vocab_fraction: if tokens.is_empty() { 0.0 } else { hits as f64 / tokens.len() as f64 },
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64, SemsimError> {
    if a.len() != b.len() {
        return Err(SemsimError::LengthMismatch(a.len(), b.len()));
    }
    let (mut dot, mut na, mut nb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return Err(SemsimError::ZeroVector(None));
    }
    Ok((dot / (na * nb).sqrt()).clamp(-1.0, 1.0))
}

/// Cosine similarity of the mean-embedding vectors of each pair of distinct
/// types. Every one of the 16 types needs a corpus with at least one
/// in-vocabulary token.
pub fn type_similarity_matrix(
    corpora: &BTreeMap<MbtiType, String>,
    table: &EmbeddingTable,
) -> Result<TypeTable, SemsimError> {
    let mut vectors = Vec::with_capacity(16);
    for t in MbtiType::ALL {
        let doc = corpora.get(&t).ok_or(SemsimError::MissingType(t))?;
        let v = doc_vector(&tokenize(doc), table);
        if v.values.iter().all(|x| *x == 0.0) {
            return Err(SemsimError::ZeroVector(Some(t)));
        }
        vectors.push((t, v.values));
    }
    let mut out = TypeTable::default();
    for (i, (ta, va)) in vectors.iter().enumerate() {
        for (tb, vb) in &vectors[..i] {
            let c = cosine(va, vb).map_err(|_| SemsimError::ZeroVector(Some(*ta)))?;
            out.set(*ta, *tb, c);
        }
    }
    Ok(out)
}
