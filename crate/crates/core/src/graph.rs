//! Personality-labelled weighted directed affinity graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::io::BufRead;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::affinity::{AffinityScore, UserPair};
use crate::ingest::UserProfile;
use crate::mbti::{self, MbtiType};

pub const DEFAULT_EDGE_THRESHOLD: f64 = 1e-5;
pub const TSV_HEADER: &str = "source\ttarget\tweight\tsource_type\ttarget_type";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("edge threshold must be positive, got {0}")]
    InvalidThreshold(f64),
    #[error("edge ({0}, {1}) references a node without a label")]
    UnknownEndpoint(String, String),
    #[error("edge ({0}, {1}) has weight {2} below the threshold")]
    BelowThreshold(String, String, f64),
    #[error("self-loop on {0}")]
    SelfLoop(String),
    #[error("node {0} has no incident edge")]
    IsolatedNode(String),
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct AffinityGraph {
    nodes: BTreeMap<String, MbtiType>,
    edges: BTreeMap<UserPair, f64>,
    threshold: f64,
}

/// Why candidate edges were left out of a built graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BuildDiagnostics {
    pub candidate_pairs: usize,
    pub below_threshold: usize,
    pub missing_profile: usize,
    pub kept_edges: usize,
}

impl AffinityGraph {
    pub fn empty(threshold: f64) -> Self {
        AffinityGraph {
            nodes: BTreeMap::new(),
            edges: BTreeMap::new(),
            threshold,
        }
    }

    /// Builds a graph from explicit parts, checking every structural invariant.
    pub fn from_parts(
        nodes: BTreeMap<String, MbtiType>,
        edges: BTreeMap<UserPair, f64>,
        threshold: f64,
    ) -> Result<Self, GraphError> {
        if !(threshold > 0.0) {
            return Err(GraphError::InvalidThreshold(threshold));
        }
        let mut touched = BTreeSet::new();
        for ((u, v), &w) in &edges {
            if u == v {
                return Err(GraphError::SelfLoop(u.clone()));
            }
            if !nodes.contains_key(u) || !nodes.contains_key(v) {
                return Err(GraphError::UnknownEndpoint(u.clone(), v.clone()));
            }
            if !(w >= threshold) || !w.is_finite() {
                return Err(GraphError::BelowThreshold(u.clone(), v.clone(), w));
            }
            touched.insert(u.as_str());
            touched.insert(v.as_str());
        }
        if let Some(iso) = nodes.keys().find(|n| !touched.contains(n.as_str())) {
            return Err(GraphError::IsolatedNode(iso.clone()));
        }
        Ok(AffinityGraph {
            nodes,
            edges,
            threshold,
        })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Node ids in sorted order; positions in this list are the node indices
    /// used by the matrix-based algorithms.
    pub fn node_ids(&self) -> Vec<&str> {
        self.nodes.keys().map(String::as_str).collect()
    }

    pub fn nodes(&self) -> &BTreeMap<String, MbtiType> {
        &self.nodes
    }

    pub fn edges(&self) -> &BTreeMap<UserPair, f64> {
        &self.edges
    }

    pub fn label(&self, id: &str) -> Option<MbtiType> {
        self.nodes.get(id).copied()
    }

    pub fn weight(&self, u: &str, v: &str) -> Option<f64> {
        self.edges.get(&(u.to_string(), v.to_string())).copied()
    }

    pub fn index_of(&self) -> BTreeMap<&str, usize> {
        self.nodes.keys().enumerate().map(|(i, k)| (k.as_str(), i)).collect()
    }

    /// Edges as `(source index, target index, weight)`.
    pub fn indexed_edges(&self) -> Vec<(usize, usize, f64)> {
        let idx = self.index_of();
        self.edges
            .iter()
            .map(|((u, v), &w)| (idx[u.as_str()], idx[v.as_str()], w))
            .collect()
    }

    pub fn min_weight(&self) -> Option<f64> {
        self.edges.values().copied().reduce(f64::min)
    }
}

/// Keeps pairs whose score reaches `threshold` and whose endpoints both have a
/// profile; nodes without a surviving edge are dropped.
pub fn build_affinity_graph(
    scores: &BTreeMap<UserPair, AffinityScore>,
    profiles: &[UserProfile],
    threshold: f64,
) -> Result<(AffinityGraph, BuildDiagnostics), GraphError> {
    if !(threshold > 0.0) {
        return Err(GraphError::InvalidThreshold(threshold));
    }
    let labels: BTreeMap<&str, MbtiType> =
        profiles.iter().map(|p| (p.user_id.as_str(), p.mbti)).collect();
    let mut diag = BuildDiagnostics {
        candidate_pairs: scores.len(),
        ..Default::default()
    };
    let mut nodes = BTreeMap::new();
    let mut edges = BTreeMap::new();
    for ((u, v), score) in scores {
        let (Some(&lu), Some(&lv)) = (labels.get(u.as_str()), labels.get(v.as_str())) else {
            diag.missing_profile += 1;
            continue;
        };
        if !(score.value() >= threshold) {
            diag.below_threshold += 1;
            continue;
        }
        nodes.insert(u.clone(), lu);
        nodes.insert(v.clone(), lv);
        edges.insert((u.clone(), v.clone()), score.value());
    }
    diag.kept_edges = edges.len();
    if diag.missing_profile > 0 {
        log::info!("dropped {} scored pairs lacking a profile", diag.missing_profile);
    }
    let g = AffinityGraph::from_parts(nodes, edges, threshold)?;
    Ok((g, diag))
}

/// Share of edges per unordered type pair, as percentages.
#[derive(Debug, Clone, PartialEq)]
pub struct TypePairTable {
    entries: BTreeMap<(MbtiType, MbtiType), f64>,
}

impl TypePairTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, a: MbtiType, b: MbtiType) -> f64 {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.entries[&key]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(MbtiType, MbtiType), &f64)> {
        self.entries.iter()
    }

    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    /// `type_a<TAB>type_b<TAB>percent` rows with a header.
    pub fn to_tsv(&self) -> String {
        let mut s = String::from("type_a\ttype_b\tpercent\n");
        for ((a, b), p) in &self.entries {
            let _ = writeln!(s, "{a}\t{b}\t{p}");
        }
        s
    }
}

impl Serialize for TypePairTable {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for ((a, b), p) in &self.entries {
            map.serialize_entry(&format!("{a}-{b}"), p)?;
        }
        map.end()
    }
}

pub fn type_pair_percentages(g: &AffinityGraph) -> Result<TypePairTable, GraphError> {
    if g.is_empty() {
        return Err(GraphError::EmptyGraph);
    }
    let mut counts: BTreeMap<(MbtiType, MbtiType), usize> =
        mbti::unordered_pairs().map(|p| (p, 0)).collect();
    for (u, v) in g.edges.keys() {
        let a = g.nodes[u];
        let b = g.nodes[v];
        let key = if a <= b { (a, b) } else { (b, a) };
        *counts.get_mut(&key).expect("all pairs present") += 1;
    }
    let total = g.edge_count() as f64;
    let entries = counts
        .into_iter()
        .map(|(k, c)| (k, 100.0 * c as f64 / total))
        .collect();
    Ok(TypePairTable { entries })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    EdgeTsv,
    Dot,
}

/// Shortest-safe rendering: 17 significant digits round-trip any `f64`.
pub fn format_weight(w: f64) -> String {
    format!("{w:.16e}")
}

pub fn export_graph(g: &AffinityGraph, format: ExportFormat) -> String {
    match format {
        ExportFormat::EdgeTsv => {
            let mut s = String::with_capacity(64 * (g.edge_count() + 1));
            s.push_str(TSV_HEADER);
            s.push('\n');
            for ((u, v), &w) in &g.edges {
                let _ = writeln!(s, "{u}\t{v}\t{}\t{}\t{}", format_weight(w), g.nodes[u], g.nodes[v]);
            }
            s
        }
        ExportFormat::Dot => {
            let mut s = String::from("digraph affinity {\n");
            for (id, t) in &g.nodes {
                let _ = writeln!(s, "  {} [label=\"{t}\"];", dot_id(id));
            }
            for ((u, v), &w) in &g.edges {
                let _ = writeln!(s, "  {} -> {} [weight={}];", dot_id(u), dot_id(v), format_weight(w));
            }
            s.push_str("}\n");
            s
        }
    }
}

fn dot_id(id: &str) -> String {
    format!("\"{}\"", id.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Parses the edge-TSV export back into a graph.
pub fn parse_edge_tsv<R: BufRead>(reader: R, threshold: f64) -> Result<AffinityGraph, GraphError> {
    let mut nodes: BTreeMap<String, MbtiType> = BTreeMap::new();
    let mut edges = BTreeMap::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let err = |reason: String| GraphError::Parse { line: line_no, reason };
        let line = line.map_err(|e| err(e.to_string()))?;
        if i == 0 {
            if line != TSV_HEADER {
                return Err(err(format!("expected header {TSV_HEADER:?}")));
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [u, v, w, tu, tv] = fields[..] else {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        };
        let w: f64 = w.parse().map_err(|e| err(format!("weight: {e}")))?;
        for (id, code) in [(u, tu), (v, tv)] {
            let t = MbtiType::parse(code).map_err(|e| err(e.to_string()))?;
            if let Some(prev) = nodes.insert(id.to_string(), t) {
                if prev != t {
                    return Err(err(format!("conflicting labels for {id}")));
                }
            }
        }
        if edges.insert((u.to_string(), v.to_string()), w).is_some() {
            return Err(err(format!("duplicate edge ({u}, {v})")));
        }
    }
    AffinityGraph::from_parts(nodes, edges, threshold)
}
