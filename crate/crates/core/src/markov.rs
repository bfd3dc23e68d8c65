//! Stationary distributions of finite row-stochastic chains.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

pub const STATIONARY_TOL: f64 = 1e-12;
pub const POWER_MAX_ITER: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MarkovError {
    #[error("chain is not ergodic: no unique stationary distribution")]
    NonErgodic,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
}

/// ‖πP − π‖∞
pub fn stationary_residual(p: &DMatrix<f64>, pi: &DVector<f64>) -> f64 {
    let next = p.tr_mul(pi);
    (next - pi).amax()
}

/// Solves πP = π, Σπ = 1 for a row-stochastic `p`. Uses a direct linear solve
/// and falls back to power iteration if the solve is singular or inaccurate.
pub fn stationary(p: &DMatrix<f64>) -> Result<DVector<f64>, MarkovError> {
    let n = p.nrows();
    if n != p.ncols() {
        return Err(MarkovError::NotSquare {
            rows: n,
            cols: p.ncols(),
        });
    }
    if n == 0 {
        return Ok(DVector::zeros(0));
    }
    match direct_solve(p) {
        Some(pi) if stationary_residual(p, &pi) < STATIONARY_TOL => return Ok(pi),
        Some(_) => {}
        // a singular system with zero entries means reducible, not round-off
        None if p.iter().any(|&v| v == 0.0) => return Err(MarkovError::NonErgodic),
        None => {}
    }
    power_iteration(p).ok_or(MarkovError::NonErgodic)
}

fn direct_solve(p: &DMatrix<f64>) -> Option<DVector<f64>> {
    let n = p.nrows();
    // (Pᵀ − I)π = 0 with the last equation replaced by Σπ = 1
    let mut a = p.transpose() - DMatrix::<f64>::identity(n, n);
    a.row_mut(n - 1).fill(1.0);
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let mut pi = a.lu().solve(&b)?;
    if pi.iter().any(|v| !v.is_finite() || *v < -1e-12) {
        return None;
    }
    pi.iter_mut().for_each(|v| *v = v.max(0.0));
    let s = pi.sum();
    if s <= 0.0 {
        return None;
    }
    pi /= s;
    Some(pi)
}

fn power_iteration(p: &DMatrix<f64>) -> Option<DVector<f64>> {
    let n = p.nrows();
    let mut pi = DVector::from_element(n, 1.0 / n as f64);
    for _ in 0..POWER_MAX_ITER {
        let mut next = p.tr_mul(&pi);
        let s = next.sum();
        next /= s;
        let delta = (&next - &pi).amax();
        pi = next;
        if delta < STATIONARY_TOL && stationary_residual(p, &pi) < STATIONARY_TOL {
            return Some(pi);
        }
    }
    None
}
