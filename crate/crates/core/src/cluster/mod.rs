//! Random-walk graph clustering (MCL and K-destinations) and clustering
//! evaluation (NMI, minimal clustering error).
//!
//! Node `i` in every matrix here is the `i`-th id of
//! [`AffinityGraph::node_ids`](crate::graph::AffinityGraph::node_ids).

mod assignment;
mod kdest;
mod mcl;
mod metrics;
mod walk;

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::markov::MarkovError;

pub use assignment::max_weight_assignment;
pub use kdest::{k_destinations, KDestParams};
pub use mcl::{clusters_from_limit, mcl, mcl_matrix, MclOutcome, MclParams};
pub use metrics::{clustering_error, nmi};
pub use walk::{hitting_times, random_walk_matrix, HittingTimeMatrix, StochasticMatrix, DEFAULT_TELEPORT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClusterError {
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("hitting-time system is singular (chain not ergodic)")]
    SingularSystem,
    #[error("k = {k} outside 1..={n}")]
    KOutOfRange { k: usize, n: usize },
    #[error("label vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("label vectors are empty")]
    EmptyLabels,
    #[error("row {0} is not a probability vector")]
    NotStochastic(usize),
    #[error(transparent)]
    Markov(#[from] MarkovError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Method {
    Mcl {
        expansion: u32,
        inflation: f64,
        prune: f64,
    },
    KDestinations {
        k: usize,
        teleport: f64,
    },
}

impl Method {
    pub fn label(&self) -> String {
        match self {
            Method::Mcl { .. } => "mcl".to_string(),
            Method::KDestinations { k, .. } => format!("{k}-destinations"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    /// Sorted node indices.
    pub members: Vec<usize>,
    /// Per-member attraction to this cluster, parallel to `members`. For MCL
    /// this is the limit-matrix flow mass into the cluster's attractors; for
    /// K-destinations it is 1.
    pub attraction: Vec<f64>,
    /// Destination node for K-destinations clusters.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub destination: Option<usize>,
}

impl Cluster {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, node: usize) -> bool {
        self.members.binary_search(&node).is_ok()
    }

    pub fn attraction_of(&self, node: usize) -> Option<f64> {
        self.members.binary_search(&node).ok().map(|i| self.attraction[i])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clustering {
    pub node_ids: Vec<String>,
    pub clusters: Vec<Cluster>,
    pub method: Method,
    pub overlapping: bool,
    pub iterations: usize,
    pub converged: bool,
    /// K-destinations objective `Σ_i H(i, dest(i))` after every step.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub objective_trace: Vec<f64>,
}

impl Clustering {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Node ids of cluster `c`.
    pub fn member_ids(&self, c: usize) -> Vec<&str> {
        self.clusters[c]
            .members
            .iter()
            .map(|&i| self.node_ids[i].as_str())
            .collect()
    }

    /// `node_id<TAB>cluster_index` rows preceded by `#`-prefixed metadata.
    /// Nodes in several clusters appear once per cluster.
    pub fn to_tsv(&self) -> String {
        let mut s = String::new();
        let params = match &self.method {
            Method::Mcl {
                expansion,
                inflation,
                prune,
            } => format!("expansion={expansion} inflation={inflation} prune={prune:e}"),
            Method::KDestinations { k, teleport } => format!("k={k} teleport={teleport}"),
        };
        let _ = writeln!(s, "# method={}", self.method.label());
        let _ = writeln!(s, "# parameters {params}");
        let _ = writeln!(s, "# iterations={}", self.iterations);
        let _ = writeln!(s, "# converged={}", self.converged);
        let _ = writeln!(s, "# overlapping={}", self.overlapping);
        s.push_str("node_id\tcluster_index\n");
        for (ci, c) in self.clusters.iter().enumerate() {
            for &m in &c.members {
                let _ = writeln!(s, "{}\t{ci}", self.node_ids[m]);
            }
        }
        s
    }
}

/// One label per node: the cluster with the largest attraction, ties to the
/// smaller cluster index. Nodes that belong to no cluster get a fresh label
/// of their own (`clusters.len() + node`).
pub fn labels_from_clustering(c: &Clustering) -> Vec<usize> {
    let n = c.node_ids.len();
    let mut best: Vec<Option<(usize, f64)>> = vec![None; n];
    for (ci, cl) in c.clusters.iter().enumerate() {
        for (&m, &a) in cl.members.iter().zip(&cl.attraction) {
            match best[m] {
                Some((_, b)) if b >= a => {}
                _ => best[m] = Some((ci, a)),
            }
        }
    }
    best.iter()
        .enumerate()
        .map(|(i, b)| b.map_or(c.clusters.len() + i, |(ci, _)| ci))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clustering(clusters: Vec<Cluster>, n: usize) -> Clustering {
        Clustering {
            node_ids: (0..n).map(|i| format!("n{i}")).collect(),
            clusters,
            method: Method::Mcl {
                expansion: 2,
                inflation: 2.0,
                prune: 1e-6,
            },
            overlapping: true,
            iterations: 1,
            converged: true,
            objective_trace: vec![],
        }
    }

    fn cl(members: &[usize], attraction: &[f64]) -> Cluster {
        Cluster {
            members: members.to_vec(),
            attraction: attraction.to_vec(),
            destination: None,
        }
    }

    #[test]
    fn disjoint_labels_map_directly() {
        let c = clustering(vec![cl(&[0, 2], &[1.0, 1.0]), cl(&[1, 3], &[1.0, 1.0])], 4);
        assert_eq!(labels_from_clustering(&c), [0, 1, 0, 1]);
    }

    #[test]
    fn overlap_resolved_by_attraction_then_index() {
        let c = clustering(vec![cl(&[0, 1], &[0.7, 0.5]), cl(&[0, 1], &[0.3, 0.5])], 2);
        assert_eq!(labels_from_clustering(&c), [0, 0]);
        let c = clustering(vec![cl(&[0], &[0.2]), cl(&[0], &[0.8])], 2);
        // node 1 is uncovered
        assert_eq!(labels_from_clustering(&c), [1, 3]);
    }

    #[test]
    fn tsv_has_metadata_and_rows() {
        let c = clustering(vec![cl(&[0, 1], &[1.0, 1.0]), cl(&[1], &[1.0])], 2);
        let tsv = c.to_tsv();
        assert!(tsv.starts_with("# method=mcl\n# parameters expansion=2 inflation=2 prune=1e-6\n"));
        assert!(tsv.ends_with("node_id\tcluster_index\nn0\t0\nn1\t0\nn1\t1\n"));
    }
}
