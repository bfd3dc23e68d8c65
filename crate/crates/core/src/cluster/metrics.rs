use std::collections::BTreeMap;

use super::assignment::max_weight_assignment;
use super::ClusterError;

/// Contingency table of two labelings with dense label indices.
struct Contingency {
    counts: Vec<Vec<usize>>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    n: usize,
}

fn dense<T: Ord>(labels: &[T]) -> (Vec<usize>, usize) {
    let mut ids: BTreeMap<&T, usize> = BTreeMap::new();
    let out = labels
        .iter()
        .map(|l| {
            let next = ids.len();
            *ids.entry(l).or_insert(next)
        })
        .collect();
    (out, ids.len())
}

fn contingency<T: Ord, U: Ord>(x: &[T], y: &[U]) -> Result<Contingency, ClusterError> {
    if x.len() != y.len() {
        return Err(ClusterError::LengthMismatch(x.len(), y.len()));
    }
    if x.is_empty() {
        return Err(ClusterError::EmptyLabels);
    }
    let (xs, kx) = dense(x);
    let (ys, ky) = dense(y);
    let mut counts = vec![vec![0usize; ky]; kx];
    let mut rows = vec![0usize; kx];
    let mut cols = vec![0usize; ky];
    for (&a, &b) in xs.iter().zip(&ys) {
        counts[a][b] += 1;
        rows[a] += 1;
        cols[b] += 1;
    }
    Ok(Contingency {
        counts,
        rows,
        cols,
        n: x.len(),
    })
}

fn entropy(marginal: &[usize], n: usize) -> f64 {
    let n = n as f64;
    marginal
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Normalized mutual information `I(x, y) / √(H(x) H(y))` with natural-log
/// entropies. Two single-cluster labelings score 1; a single-cluster labeling
/// against any other scores 0.
pub fn nmi<T: Ord, U: Ord>(x: &[T], y: &[U]) -> Result<f64, ClusterError> {
    let t = contingency(x, y)?;
    let hx = entropy(&t.rows, t.n);
    let hy = entropy(&t.cols, t.n);
    let (x_single, y_single) = (t.rows.len() == 1, t.cols.len() == 1);
    if x_single && y_single {
        return Ok(1.0);
    }
    if x_single || y_single {
        return Ok(0.0);
    }
    let n = t.n as f64;
    let mut mi = 0.0;
    for (a, row) in t.counts.iter().enumerate() {
        for (b, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (n * c / (t.rows[a] as f64 * t.cols[b] as f64)).ln();
            }
        }
    }
    Ok((mi / (hx * hy).sqrt()).clamp(0.0, 1.0))
}

/// Minimal misassignment rate over all one-to-one matchings of predicted to
/// true labels, solved as an assignment problem on the confusion matrix.
pub fn clustering_error<T: Ord, U: Ord>(pred: &[T], truth: &[U]) -> Result<f64, ClusterError> {
    let t = contingency(pred, truth)?;
    let m = t.rows.len().max(t.cols.len());
    let weights: Vec<Vec<i64>> = (0..m)
        .map(|a| {
            (0..m)
                .map(|b| t.counts.get(a).and_then(|r| r.get(b)).copied().unwrap_or(0) as i64)
                .collect()
        })
        .collect();
    let matching = max_weight_assignment(&weights);
    let matched: i64 = matching.iter().enumerate().map(|(a, &b)| weights[a][b]).sum();
    Ok((t.n as i64 - matched) as f64 / t.n as f64)
}
