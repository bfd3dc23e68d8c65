//! Markov clustering: alternate expansion (matrix power) and inflation
//! (entrywise power with column renormalization) on a column-stochastic flow
//! matrix until the flow settles on attractors.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{Cluster, ClusterError, Clustering, Method};
use crate::graph::AffinityGraph;

pub const MAX_ITERATIONS: usize = 200;
pub const CONVERGENCE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MclParams {
    pub expansion: u32,
    pub inflation: f64,
    pub prune: f64,
}

impl Default for MclParams {
    fn default() -> Self {
        MclParams {
            expansion: 2,
            inflation: 2.0,
            prune: 1e-6,
        }
    }
}

impl MclParams {
    fn validate(&self) -> Result<(), ClusterError> {
        if self.expansion < 2 {
            return Err(ClusterError::InvalidParameter(format!("expansion {} < 2", self.expansion)));
        }
        if !(self.inflation > 1.0) {
            return Err(ClusterError::InvalidParameter(format!("inflation {} <= 1", self.inflation)));
        }
        if !(self.prune >= 0.0 && self.prune < 1.0) {
            return Err(ClusterError::InvalidParameter(format!("prune {} outside [0, 1)", self.prune)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct MclOutcome {
    /// Column-stochastic limit: column `j` is where node `j`'s flow ends up.
    pub limit: DMatrix<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// Largest `|column sum − 1|` seen after any inflation step.
    pub max_column_error: f64,
}

fn normalize_columns(m: &mut DMatrix<f64>) {
    for mut col in m.column_iter_mut() {
        let s = col.sum();
        if s > 0.0 {
            col /= s;
        }
    }
}

fn inflate(m: &mut DMatrix<f64>, inflation: f64, prune: f64) {
    m.apply(|x| *x = x.powf(inflation));
    normalize_columns(m);
    m.apply(|x| {
        if *x < prune {
            *x = 0.0
        }
    });
    normalize_columns(m);
}

fn max_column_error(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| (c.sum() - 1.0).abs()).fold(0.0, f64::max)
}

/// Runs MCL on a weighted adjacency matrix (`adjacency[(u, v)]` = weight of
/// `u → v`). Self-loops are set to the node's largest incident weight, or 1
/// for a node without edges.
pub fn mcl_matrix(adjacency: &DMatrix<f64>, params: MclParams) -> Result<MclOutcome, ClusterError> {
    params.validate()?;
    let n = adjacency.nrows();
    if n == 0 || adjacency.ncols() != n {
        return Err(ClusterError::InvalidParameter("adjacency must be square and non-empty".into()));
    }
    // flow matrix: column u holds u's outgoing flow
    let mut m = adjacency.transpose();
    for i in 0..n {
        m[(i, i)] = 0.0;
    }
    for i in 0..n {
        let max_incident = m.row(i).max().max(m.column(i).max());
        m[(i, i)] = if max_incident > 0.0 { max_incident } else { 1.0 };
    }
    normalize_columns(&mut m);

    let mut iterations = 0;
    let mut converged = false;
    let mut worst = 0.0f64;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let prev = m.clone();
        let mut expanded = m.clone();
        for _ in 1..params.expansion {
            expanded = &expanded * &m;
        }
        m = expanded;
        inflate(&mut m, params.inflation, params.prune);
        worst = worst.max(max_column_error(&m));
        if (&m - &prev).amax() < CONVERGENCE_TOL {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("MCL stopped after {iterations} iterations without converging");
    }
    Ok(MclOutcome {
        limit: m,
        iterations,
        converged,
        max_column_error: worst,
    })
}

/// Reads clusters from a limit matrix. Attractors are nodes with positive
/// diagonal; attractors that exchange flow form one system, and each system
/// becomes a cluster containing every node that flows into it.
pub fn clusters_from_limit(limit: &DMatrix<f64>) -> Vec<Cluster> {
    let n = limit.nrows();
    let attractors: Vec<usize> = (0..n).filter(|&i| limit[(i, i)] > 0.0).collect();

    // union-find over attractors
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (ai, &a) in attractors.iter().enumerate() {
        for &b in &attractors[ai + 1..] {
            if limit[(a, b)] > 0.0 || limit[(b, a)] > 0.0 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut systems: Vec<(usize, Vec<usize>)> = Vec::new();
    for &a in &attractors {
        let root = find(&mut parent, a);
        match systems.iter_mut().find(|(r, _)| *r == root) {
            Some((_, members)) => members.push(a),
            None => systems.push((root, vec![a])),
        }
    }

    systems
        .into_iter()
        .map(|(_, attr)| {
            let mut members = Vec::new();
            let mut attraction = Vec::new();
            for j in 0..n {
                let mass: f64 = attr.iter().map(|&a| limit[(a, j)]).sum();
                if mass > 0.0 {
                    members.push(j);
                    attraction.push(mass);
                }
            }
            Cluster {
                members,
                attraction,
                destination: None,
            }
        })
        .filter(|c| !c.is_empty())
        .collect()
}

pub fn mcl(g: &AffinityGraph, params: MclParams) -> Result<Clustering, ClusterError> {
    if g.is_empty() {
        return Err(ClusterError::EmptyGraph);
    }
    let n = g.node_count();
    let mut adjacency = DMatrix::<f64>::zeros(n, n);
    for (u, v, w) in g.indexed_edges() {
        adjacency[(u, v)] = w;
    }
    let outcome = mcl_matrix(&adjacency, params)?;
    let clusters = clusters_from_limit(&outcome.limit);
    let mut seen = vec![0usize; n];
    for c in &clusters {
        for &m in &c.members {
            seen[m] += 1;
        }
    }
    Ok(Clustering {
        node_ids: g.node_ids().into_iter().map(String::from).collect(),
        overlapping: seen.iter().any(|&s| s > 1),
        clusters,
        method: Method::Mcl {
            expansion: params.expansion,
            inflation: params.inflation,
            prune: params.prune,
        },
        iterations: outcome.iterations,
        converged: outcome.converged,
        objective_trace: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mbti::MbtiType;
    use std::collections::BTreeMap;

    fn graph(edges: &[(usize, usize, f64)]) -> AffinityGraph {
        let mut nodes = BTreeMap::new();
        let mut es = BTreeMap::new();
        for &(u, v, w) in edges {
            nodes.insert(format!("n{u:02}"), MbtiType::ALL[u % 16]);
            nodes.insert(format!("n{v:02}"), MbtiType::ALL[v % 16]);
            es.insert((format!("n{u:02}"), format!("n{v:02}")), w);
        }
        AffinityGraph::from_parts(nodes, es, 1e-5).unwrap()
    }

    fn undirected(pairs: &[(usize, usize)], w: f64) -> Vec<(usize, usize, f64)> {
        pairs.iter().flat_map(|&(a, b)| [(a, b, w), (b, a, w)]).collect()
    }

    #[test]
    fn two_triangles() {
        let g = graph(&undirected(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)], 1.0));
        let c = mcl(&g, MclParams::default()).unwrap();
        assert!(c.converged);
        assert_eq!(c.len(), 2);
        assert_eq!(c.clusters[0].members, [0, 1, 2]);
        assert_eq!(c.clusters[1].members, [3, 4, 5]);
        assert!(!c.overlapping);
    }

    #[test]
    fn complete_graph_is_one_cluster() {
        let pairs: Vec<_> = (0..6).flat_map(|a| ((a + 1)..6).map(move |b| (a, b))).collect();
        let c = mcl(&graph(&undirected(&pairs, 0.5)), MclParams::default()).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c.clusters[0].members, [0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn single_node() {
        let out = mcl_matrix(&DMatrix::zeros(1, 1), MclParams::default()).unwrap();
        let clusters = clusters_from_limit(&out.limit);
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].members, [0]);
        assert_eq!(clusters[0].attraction, [1.0]);
    }

    #[test]
    fn column_sums_stay_stochastic() {
        let pairs: Vec<_> = (0..12).flat_map(|a| ((a + 1)..12).filter(move |b| (a * 7 + b) % 3 == 0).map(move |b| (a, b))).collect();
        let mut adj = DMatrix::zeros(12, 12);
        for (k, &(a, b)) in pairs.iter().enumerate() {
            adj[(a, b)] = 0.1 + (k % 5) as f64 * 0.2;
            adj[(b, a)] = 0.3;
        }
        let out = mcl_matrix(&adj, MclParams::default()).unwrap();
        assert!(out.max_column_error <= 1e-9, "{}", out.max_column_error);
    }

    #[test]
    fn parameter_validation() {
        let adj = DMatrix::zeros(2, 2);
        let bad = [
            MclParams { expansion: 1, ..Default::default() },
            MclParams { inflation: 1.0, ..Default::default() },
            MclParams { prune: -1.0, ..Default::default() },
        ];
        for p in bad {
            assert!(matches!(mcl_matrix(&adj, p), Err(ClusterError::InvalidParameter(_))));
        }
    }

    #[test]
    fn deterministic() {
        let g = graph(&undirected(&[(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 4)], 0.8));
        assert_eq!(mcl(&g, MclParams::default()).unwrap(), mcl(&g, MclParams::default()).unwrap());
    }
}
