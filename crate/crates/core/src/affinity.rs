//! Affinity scoring from sentiment-coded mention sequences.
//!
//! Each directed user pair's time-ordered sentiments are treated as a path of
//! a first-order Markov chain over `{NEG, NEU, POS}`. The chain is estimated
//! with additive smoothing, and the score is the stationary mass of `POS`
//! scaled by an evidence factor `n / (n + κ)`, so short histories are
//! discounted and the score stays in `[0, 1)`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{InteractionEvent, Sentiment};
use crate::markov::{self, MarkovError};

pub const STATES: usize = 3;
pub const DEFAULT_ALPHA: f64 = 1.0;
pub const DEFAULT_KAPPA: f64 = 5.0;
const ROW_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AffinityError {
    #[error("smoothing must be positive, got {0}")]
    NonPositiveSmoothing(f64),
    #[error("evidence constant kappa must be positive, got {0}")]
    NonPositiveKappa(f64),
    #[error("row {row} of transition matrix is not a probability vector")]
    NotStochastic { row: usize },
    #[error(transparent)]
    Markov(#[from] MarkovError),
}

pub type UserPair = (String, String);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentimentSequence {
    pub source: String,
    pub target: String,
    pub states: Vec<Sentiment>,
}

impl SentimentSequence {
    pub fn new(source: impl Into<String>, target: impl Into<String>, states: Vec<Sentiment>) -> Self {
        SentimentSequence {
            source: source.into(),
            target: target.into(),
            states,
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Counts of consecutive `(from, to)` state pairs.
    pub fn transition_counts(&self) -> [[usize; STATES]; STATES] {
        let mut counts = [[0usize; STATES]; STATES];
        for w in self.states.windows(2) {
            counts[w[0].index()][w[1].index()] += 1;
        }
        counts
    }
}

/// Row-stochastic 3×3 matrix over `(NEG, NEU, POS)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    entries: [[f64; STATES]; STATES],
}

impl TransitionMatrix {
    pub fn uniform() -> Self {
        TransitionMatrix {
            entries: [[1.0 / STATES as f64; STATES]; STATES],
        }
    }

    pub fn from_rows(entries: [[f64; STATES]; STATES]) -> Result<Self, AffinityError> {
        for (row, r) in entries.iter().enumerate() {
            let sum: f64 = r.iter().sum();
            if r.iter().any(|v| !v.is_finite() || *v < 0.0) || (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(AffinityError::NotStochastic { row });
            }
        }
        Ok(TransitionMatrix { entries })
    }

    pub fn rows(&self) -> &[[f64; STATES]; STATES] {
        &self.entries
    }

    pub fn get(&self, from: Sentiment, to: Sentiment) -> f64 {
        self.entries[from.index()][to.index()]
    }

    pub fn to_dmatrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(STATES, STATES, |i, j| self.entries[i][j])
    }

    /// Largest absolute entrywise difference.
    pub fn max_abs_diff(&self, other: &TransitionMatrix) -> f64 {
        let mut m = 0.0f64;
        for i in 0..STATES {
            for j in 0..STATES {
                m = m.max((self.entries[i][j] - other.entries[i][j]).abs());
            }
        }
        m
    }
}

#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AffinityScore(pub f64);

impl AffinityScore {
    pub fn value(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffinityParams {
    pub alpha: f64,
    pub kappa: f64,
}

impl Default for AffinityParams {
    fn default() -> Self {
        AffinityParams {
            alpha: DEFAULT_ALPHA,
            kappa: DEFAULT_KAPPA,
        }
    }
}

/// Groups events by directed `(source, target)` pair, preserving event order.
pub fn build_pair_sequences(events: &[InteractionEvent]) -> BTreeMap<UserPair, SentimentSequence> {
    let mut out: BTreeMap<UserPair, SentimentSequence> = BTreeMap::new();
    for ev in events {
        out.entry((ev.source.clone(), ev.target.clone()))
            .or_insert_with(|| SentimentSequence::new(ev.source.clone(), ev.target.clone(), Vec::new()))
            .states
            .push(ev.sentiment);
    }
    out
}

/// Additively smoothed maximum-likelihood transition matrix:
/// `(count(i→j) + α) / (count(i→·) + 3α)`.
pub fn estimate_chain(seq: &SentimentSequence, alpha: f64) -> Result<TransitionMatrix, AffinityError> {
    if !(alpha > 0.0) {
        return Err(AffinityError::NonPositiveSmoothing(alpha));
    }
    let counts = seq.transition_counts();
    let mut entries = [[0.0; STATES]; STATES];
    for (i, row) in counts.iter().enumerate() {
        let total: usize = row.iter().sum();
        let denom = total as f64 + STATES as f64 * alpha;
        for (j, &c) in row.iter().enumerate() {
            entries[i][j] = (c as f64 + alpha) / denom;
        }
    }
    Ok(TransitionMatrix { entries })
}

pub fn stationary_distribution(t: &TransitionMatrix) -> Result<[f64; STATES], AffinityError> {
    let pi: DVector<f64> = markov::stationary(&t.to_dmatrix())?;
    Ok([pi[0], pi[1], pi[2]])
}

/// `π_POS · n / (n + κ)` for an already estimated chain.
pub fn score_from_chain(t: &TransitionMatrix, n: usize, kappa: f64) -> Result<AffinityScore, AffinityError> {
    if !(kappa > 0.0) {
        return Err(AffinityError::NonPositiveKappa(kappa));
    }
    if n == 0 {
        return Ok(AffinityScore(0.0));
    }
    let pi = stationary_distribution(t)?;
    let n = n as f64;
    Ok(AffinityScore(pi[Sentiment::Pos.index()] * n / (n + kappa)))
}

pub fn affinity_score(seq: &SentimentSequence, alpha: f64, kappa: f64) -> Result<AffinityScore, AffinityError> {
    let chain = estimate_chain(seq, alpha)?;
    score_from_chain(&chain, seq.len(), kappa)
}

/// Scores every directed pair present in `events`.
pub fn score_pairs(
    events: &[InteractionEvent],
    params: AffinityParams,
) -> Result<BTreeMap<UserPair, AffinityScore>, AffinityError> {
    let seqs: Vec<(UserPair, SentimentSequence)> = build_pair_sequences(events).into_iter().collect();
    let scored: Result<Vec<_>, _> = seqs
        .into_par_iter()
        .map(|(pair, seq)| affinity_score(&seq, params.alpha, params.kappa).map(|s| (pair, s)))
        .collect();
    Ok(scored?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use Sentiment::*;

    fn seq(states: &[Sentiment]) -> SentimentSequence {
        SentimentSequence::new("u", "v", states.to_vec())
    }

    fn ev(s: &str, t: &str, ts: i64, sent: Sentiment) -> InteractionEvent {
        InteractionEvent {
            source: s.into(),
            target: t.into(),
            timestamp: ts,
            sentiment: sent,
            text: None,
        }
    }

    #[test]
    fn pair_sequences_keep_direction() {
        let events = vec![
            ev("u", "v", 1, Pos),
            ev("v", "u", 2, Neg),
            ev("u", "v", 3, Neu),
            ev("v", "u", 4, Pos),
            ev("u", "v", 5, Neg),
        ];
        let seqs = build_pair_sequences(&events);
        assert_eq!(seqs.len(), 2);
        assert_eq!(seqs[&("u".into(), "v".into())].states, vec![Pos, Neu, Neg]);
        assert_eq!(seqs[&("v".into(), "u".into())].states, vec![Neg, Pos]);
        assert_eq!(seqs.values().map(|s| s.len()).sum::<usize>(), events.len());
        assert!(build_pair_sequences(&[]).is_empty());
    }

    #[test]
    fn empty_sequence_gives_uniform_chain() {
        let t = estimate_chain(&seq(&[]), 1.0).unwrap();
        assert_eq!(t, TransitionMatrix::uniform());
    }

    #[test]
    fn all_positive_chain() {
        let t = estimate_chain(&seq(&[Pos, Pos, Pos]), 1.0).unwrap();
        assert_abs_diff_eq!(t.get(Pos, Neg), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(Pos, Neu), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(Pos, Pos), 0.6, epsilon = 1e-15);
        for from in [Neg, Neu] {
            for to in Sentiment::ALL {
                assert_abs_diff_eq!(t.get(from, to), 1.0 / 3.0, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn alternating_chain() {
        let t = estimate_chain(&seq(&[Pos, Neg, Pos, Neg, Pos]), 1.0).unwrap();
        assert_abs_diff_eq!(t.get(Pos, Neg), 0.6, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(Pos, Neu), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(Pos, Pos), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(Neg, Neg), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(Neg, Neu), 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(t.get(Neg, Pos), 0.6, epsilon = 1e-15);
    }

    #[test]
    fn smoothing_must_be_positive() {
        assert_eq!(
            estimate_chain(&seq(&[Pos]), 0.0),
            Err(AffinityError::NonPositiveSmoothing(0.0))
        );
        assert!(estimate_chain(&seq(&[Pos]), -1.0).is_err());
        assert!(estimate_chain(&seq(&[Pos]), f64::NAN).is_err());
        assert!(affinity_score(&seq(&[Pos]), 1.0, 0.0).is_err());
    }

    #[test]
    fn stationary_of_uniform() {
        let pi = stationary_distribution(&TransitionMatrix::uniform()).unwrap();
        for v in pi {
            assert_abs_diff_eq!(v, 1.0 / 3.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn score_examples() {
        assert_eq!(affinity_score(&seq(&[]), 1.0, 5.0).unwrap(), AffinityScore(0.0));
        // π = (3/11, 3/11, 5/11) for the smoothed all-POS chain
        let s = affinity_score(&seq(&[Pos, Pos, Pos]), 1.0, 5.0).unwrap();
        assert_abs_diff_eq!(s.0, 15.0 / 88.0, epsilon = 1e-14);
    }

    #[test]
    fn order_of_states_matters() {
        let a = affinity_score(&seq(&[Pos, Pos, Neg, Neg]), 1.0, 5.0).unwrap();
        let b = affinity_score(&seq(&[Pos, Neg, Pos, Neg]), 1.0, 5.0).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn score_pairs_matches_per_pair_scoring() {
        let events = vec![ev("a", "b", 1, Pos), ev("a", "b", 2, Pos), ev("b", "a", 3, Neg)];
        let scores = score_pairs(&events, AffinityParams::default()).unwrap();
        assert_eq!(scores.len(), 2);
        let direct = affinity_score(&seq(&[Pos, Pos]), 1.0, 5.0).unwrap();
        assert_eq!(scores[&("a".into(), "b".into())], direct);
    }
}
