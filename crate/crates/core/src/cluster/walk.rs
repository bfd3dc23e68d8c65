use nalgebra::{DMatrix, DVector};

use super::ClusterError;
use crate::graph::AffinityGraph;
use crate::markov;

pub const DEFAULT_TELEPORT: f64 = 0.01;
const ROW_SUM_TOL: f64 = 1e-12;

/// Row-stochastic transition matrix of a random walk.
#[derive(Debug, Clone, PartialEq)]
pub struct StochasticMatrix {
    entries: DMatrix<f64>,
    teleport: f64,
}

impl StochasticMatrix {
    /// Wraps an arbitrary row-stochastic matrix (teleport 0).
    pub fn from_matrix(entries: DMatrix<f64>) -> Result<Self, ClusterError> {
        if entries.nrows() != entries.ncols() {
            return Err(ClusterError::InvalidParameter("transition matrix must be square".into()));
        }
        for (i, row) in entries.row_iter().enumerate() {
            if row.iter().any(|v| !v.is_finite() || *v < 0.0) || (row.sum() - 1.0).abs() > ROW_SUM_TOL {
                return Err(ClusterError::NotStochastic(i));
            }
        }
        Ok(StochasticMatrix {
            entries,
            teleport: 0.0,
        })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn teleport(&self) -> f64 {
        self.teleport
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.nrows() == 0
    }
}

/// `P = (1−τ)·W + τ/n`, with `W` the out-weight-normalized adjacency and
/// dangling rows replaced by the uniform distribution.
pub fn random_walk_matrix(g: &AffinityGraph, teleport: f64) -> Result<StochasticMatrix, ClusterError> {
    if g.is_empty() {
        return Err(ClusterError::EmptyGraph);
    }
    if !(teleport > 0.0 && teleport < 1.0) {
        return Err(ClusterError::InvalidParameter(format!("teleport {teleport} outside (0, 1)")));
    }
    let n = g.node_count();
    let mut w = DMatrix::<f64>::zeros(n, n);
    for (u, v, weight) in g.indexed_edges() {
        w[(u, v)] += weight;
    }
    let uniform = 1.0 / n as f64;
    for mut row in w.row_iter_mut() {
        let s = row.sum();
        if s > 0.0 {
            row /= s;
        } else {
            row.fill(uniform);
        }
    }
    let entries = w.map(|x| (1.0 - teleport) * x + teleport * uniform);
    Ok(StochasticMatrix { entries, teleport })
}

/// Expected number of steps `H(i, j)` for a walk started at `i` to first reach `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct HittingTimeMatrix {
    entries: DMatrix<f64>,
}

impl HittingTimeMatrix {
    pub fn get(&self, from: usize, to: usize) -> f64 {
        self.entries[(from, to)]
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.nrows() == 0
    }
}

/// Hitting times from the fundamental matrix `Z = (I − P + 1πᵀ)⁻¹`:
/// `H(i, j) = (Z(j, j) − Z(i, j)) / π(j)`.
pub fn hitting_times(p: &StochasticMatrix) -> Result<HittingTimeMatrix, ClusterError> {
    let n = p.len();
    let pi: DVector<f64> = markov::stationary(&p.entries).map_err(|_| ClusterError::SingularSystem)?;
    if pi.iter().any(|&x| !(x > 0.0)) {
        return Err(ClusterError::SingularSystem);
    }
    let mut a = DMatrix::<f64>::identity(n, n) - &p.entries;
    for mut row in a.row_iter_mut() {
        row += pi.transpose();
    }
    let z = a.try_inverse().ok_or(ClusterError::SingularSystem)?;
    let entries = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            (z[(j, j)] - z[(i, j)]) / pi[j]
        }
    });
    if entries.iter().any(|x| !x.is_finite()) {
        return Err(ClusterError::SingularSystem);
    }
    Ok(HittingTimeMatrix { entries })
}
