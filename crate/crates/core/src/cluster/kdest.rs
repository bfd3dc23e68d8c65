//! K-destinations: hitting-time clustering of directed graphs.
//!
//! Each cluster is represented by a destination node. Nodes join the
//! destination they reach fastest in expectation, and each cluster then moves
//! its destination to the member that minimizes the total hitting time from
//! the rest of the cluster.

use serde::Serialize;

use super::walk::{hitting_times, random_walk_matrix, HittingTimeMatrix, DEFAULT_TELEPORT};
use super::{Cluster, ClusterError, Clustering, Method};
use crate::graph::AffinityGraph;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KDestParams {
    pub k: usize,
    pub max_iter: usize,
    pub teleport: f64,
}

impl KDestParams {
    pub fn new(k: usize) -> Self {
        KDestParams {
            k,
            max_iter: 100,
            teleport: DEFAULT_TELEPORT,
        }
    }
}

/// Deterministic spread-out seeding: the node with the largest weighted
/// in-degree, then repeatedly the node whose nearest chosen destination is
/// farthest in hitting time.
fn initial_destinations(in_weight: &[f64], h: &HittingTimeMatrix, k: usize) -> Vec<usize> {
    let n = in_weight.len();
    let mut first = 0;
    for i in 1..n {
        if in_weight[i] > in_weight[first] {
            first = i;
        }
    }
    let mut dests = vec![first];
    let mut chosen = vec![false; n];
    chosen[first] = true;
    while dests.len() < k {
        let mut best: Option<(usize, f64)> = None;
        for i in (0..n).filter(|&i| !chosen[i]) {
            let spread = dests.iter().map(|&d| h.get(i, d)).fold(f64::INFINITY, f64::min);
            if best.is_none_or(|(_, b)| spread > b) {
                best = Some((i, spread));
            }
        }
        let (next, _) = best.expect("k <= n leaves a candidate");
        chosen[next] = true;
        dests.push(next);
    }
    dests
}

/// Cluster slot per node: nearest destination, ties to the smaller node index
/// (equivalently the lexicographically smaller id).
fn assign(h: &HittingTimeMatrix, dests: &[usize]) -> Vec<usize> {
    (0..h.len())
        .map(|i| {
            let mut best = 0;
            for c in 1..dests.len() {
                let (hc, hb) = (h.get(i, dests[c]), h.get(i, dests[best]));
                if hc < hb || (hc == hb && dests[c] < dests[best]) {
                    best = c;
                }
            }
            best
        })
        .collect()
}

fn objective(h: &HittingTimeMatrix, dests: &[usize], assignment: &[usize]) -> f64 {
    assignment.iter().enumerate().map(|(i, &c)| h.get(i, dests[c])).sum()
}

/// Moves each destination to the member minimizing the within-cluster
/// hitting-time sum; the current destination is kept unless strictly beaten.
fn update_destinations(h: &HittingTimeMatrix, dests: &mut [usize], assignment: &[usize]) {
    for (c, dest) in dests.iter_mut().enumerate() {
        let members: Vec<usize> = (0..assignment.len()).filter(|&i| assignment[i] == c).collect();
        let cost = |cand: usize| members.iter().map(|&i| h.get(i, cand)).sum::<f64>();
        let mut best = (*dest, cost(*dest));
        for &cand in &members {
            let v = cost(cand);
            if v < best.1 {
                best = (cand, v);
            }
        }
        *dest = best.0;
    }
}

pub fn k_destinations(g: &AffinityGraph, params: KDestParams) -> Result<Clustering, ClusterError> {
    if g.is_empty() {
        return Err(ClusterError::EmptyGraph);
    }
    let n = g.node_count();
    let k = params.k;
    if k < 1 || k > n {
        return Err(ClusterError::KOutOfRange { k, n });
    }
    let p = random_walk_matrix(g, params.teleport)?;
    let h = hitting_times(&p)?;
    let mut in_weight = vec![0.0; n];
    for (_, v, w) in g.indexed_edges() {
        in_weight[v] += w;
    }

    let mut dests = initial_destinations(&in_weight, &h, k);
    let mut assignment = assign(&h, &dests);
    let mut trace = vec![objective(&h, &dests, &assignment)];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < params.max_iter {
        iterations += 1;
        update_destinations(&h, &mut dests, &assignment);
        trace.push(objective(&h, &dests, &assignment));
        let next = assign(&h, &dests);
        trace.push(objective(&h, &dests, &next));
        if next == assignment {
            converged = true;
            break;
        }
        assignment = next;
    }

    let clusters: Vec<Cluster> = dests
        .iter()
        .enumerate()
        .map(|(c, &d)| {
            let members: Vec<usize> = (0..n).filter(|&i| assignment[i] == c).collect();
            Cluster {
                attraction: vec![1.0; members.len()],
                members,
                destination: Some(d),
            }
        })
        .collect();
    // every destination assigns to itself (H(d, d) = 0), so no cluster is empty
    debug_assert!(clusters.iter().all(|c| !c.is_empty()));

    Ok(Clustering {
        node_ids: g.node_ids().into_iter().map(String::from).collect(),
        clusters,
        method: Method::KDestinations {
            k,
            teleport: params.teleport,
        },
        overlapping: false,
        iterations,
        converged,
        objective_trace: trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{labels_from_clustering, nmi};
    use crate::mbti::MbtiType;
    use std::collections::BTreeMap;

    fn two_blocks() -> (AffinityGraph, Vec<usize>) {
        let mut nodes = BTreeMap::new();
        let mut edges = BTreeMap::new();
        let id = |i: usize| format!("u{i:02}");
        for i in 0..20 {
            nodes.insert(id(i), MbtiType::ALL[i / 10]);
            for j in 0..20 {
                if i != j {
                    let w = if i / 10 == j / 10 { 1.0 } else { 0.01 };
                    edges.insert((id(i), id(j)), w);
                }
            }
        }
        let truth = (0..20).map(|i| i / 10).collect();
        (AffinityGraph::from_parts(nodes, edges, 1e-5).unwrap(), truth)
    }

    #[test]
    fn recovers_two_dense_blocks() {
        let (g, truth) = two_blocks();
        let c = k_destinations(&g, KDestParams::new(2)).unwrap();
        assert!(c.converged);
        let labels = labels_from_clustering(&c);
        assert_eq!(nmi(&labels, &truth).unwrap(), 1.0);
    }

    #[test]
    fn k_one_and_k_n() {
        let (g, _) = two_blocks();
        let one = k_destinations(&g, KDestParams::new(1)).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one.clusters[0].len(), 20);
        let all = k_destinations(&g, KDestParams::new(20)).unwrap();
        assert_eq!(all.len(), 20);
        for c in &all.clusters {
            assert_eq!(c.members, [c.destination.unwrap()]);
        }
    }

    #[test]
    fn k_out_of_range() {
        let (g, _) = two_blocks();
        assert_eq!(
            k_destinations(&g, KDestParams::new(0)),
            Err(ClusterError::KOutOfRange { k: 0, n: 20 })
        );
        assert_eq!(
            k_destinations(&g, KDestParams::new(21)),
            Err(ClusterError::KOutOfRange { k: 21, n: 20 })
        );
    }

    #[test]
    fn objective_never_increases() {
        let (g, _) = two_blocks();
        for k in 1..6 {
            let c = k_destinations(&g, KDestParams::new(k)).unwrap();
            for w in c.objective_trace.windows(2) {
                assert!(w[1] <= w[0] + 1e-9 * w[0].abs(), "{:?}", c.objective_trace);
            }
        }
    }
}
