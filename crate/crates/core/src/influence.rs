//! Influential personality types per cluster, found by counting links.
//!
//! Links are undirected and unweighted: `u` and `v` are linked when either
//! `u → v` or `v → u` is an edge, and a reciprocal pair is one link.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::cluster::Clustering;
use crate::graph::AffinityGraph;
use crate::mbti::MbtiType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InfluenceError {
    #[error("cluster {cluster} contains node {node:?} which is not in the graph")]
    UnknownNode { cluster: usize, node: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClusterInfluence {
    pub cluster_index: usize,
    pub size: usize,
    pub top_node: String,
    pub top_type: MbtiType,
    pub link_count: usize,
    pub per_type_link_totals: BTreeMap<MbtiType, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InfluenceReport {
    pub per_cluster: Vec<ClusterInfluence>,
}

fn neighbor_sets(g: &AffinityGraph) -> BTreeMap<&str, BTreeSet<&str>> {
    let mut out: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for (u, v) in g.edges().keys() {
        out.entry(u.as_str()).or_default().insert(v.as_str());
        out.entry(v.as_str()).or_default().insert(u.as_str());
    }
    out
}

fn cluster_members<'a>(c: &'a Clustering, g: &AffinityGraph, ci: usize) -> Result<Vec<&'a str>, InfluenceError> {
    let ids = c.member_ids(ci);
    if let Some(bad) = ids.iter().find(|id| g.label(id).is_none()) {
        return Err(InfluenceError::UnknownNode {
            cluster: ci,
            node: bad.to_string(),
        });
    }
    Ok(ids)
}

/// Number of distinct in-cluster neighbours of each member, keyed by
/// `(cluster_index, node_id)`.
pub fn cluster_link_counts(
    g: &AffinityGraph,
    c: &Clustering,
) -> Result<BTreeMap<(usize, String), usize>, InfluenceError> {
    let nbrs = neighbor_sets(g);
    let mut out = BTreeMap::new();
    for ci in 0..c.len() {
        let members = cluster_members(c, g, ci)?;
        let set: BTreeSet<&str> = members.iter().copied().collect();
        for &m in &members {
            let count = nbrs.get(m).map_or(0, |n| n.intersection(&set).count());
            out.insert((ci, m.to_string()), count);
        }
    }
    Ok(out)
}

/// Per cluster: the member with the most links (ties to the smallest id),
/// its type, and link totals aggregated by type.
pub fn influential_types(g: &AffinityGraph, c: &Clustering) -> Result<InfluenceReport, InfluenceError> {
    let counts = cluster_link_counts(g, c)?;
    let mut per_cluster = Vec::with_capacity(c.len());
    for ci in 0..c.len() {
        let members = cluster_members(c, g, ci)?;
        let mut totals: BTreeMap<MbtiType, usize> = BTreeMap::new();
        let mut top: Option<(&str, usize)> = None;
        for &m in &members {
            let n = counts[&(ci, m.to_string())];
            *totals.entry(g.label(m).expect("checked")).or_default() += n;
            top = match top {
                Some((id, best)) if best > n || (best == n && id < m) => Some((id, best)),
                _ => Some((m, n)),
            };
        }
        let Some((top_node, link_count)) = top else {
            continue;
        };
        per_cluster.push(ClusterInfluence {
            cluster_index: ci,
            size: members.len(),
            top_node: top_node.to_string(),
            top_type: g.label(top_node).expect("checked"),
            link_count,
            per_type_link_totals: totals,
        });
    }
    Ok(InfluenceReport { per_cluster })
}
