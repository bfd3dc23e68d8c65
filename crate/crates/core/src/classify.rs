//! Personality-type prediction from text: tf-idf features, multinomial naive
//! Bayes and one-vs-rest ridge logistic regression, evaluated by stratified
//! k-fold cross-validation with per-type F-1.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::mbti::MbtiType;
use crate::text::tokenize;

pub const NB_SMOOTHING: f64 = 1.0;
pub const LR_GRAD_TOL: f64 = 1e-6;
pub const LR_MAX_EPOCHS: usize = 1000;
pub const MIN_DOCUMENT_FREQUENCY: usize = 2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifyError {
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("training data has fewer than two classes")]
    SingleClass,
    #[error("length mismatch ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Sparse row: `(feature index, value)` sorted by index.
pub type SparseRow = Vec<(usize, f64)>;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LabeledCorpus {
    pub documents: Vec<(String, MbtiType)>,
}

impl LabeledCorpus {
    pub fn labels(&self) -> Vec<MbtiType> {
        self.documents.iter().map(|(_, t)| *t).collect()
    }
}

/// Vocabulary and idf weights learned from a set of documents.
#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfVectorizer {
    vocabulary: Vec<String>,
    index: HashMap<String, usize>,
    idf: Vec<f64>,
}

impl TfIdfVectorizer {
    /// Keeps tokens seen in at least two documents; `idf = ln((1+N)/(1+df)) + 1`.
    pub fn fit<D: AsRef<[S]>, S: AsRef<str>>(docs: &[D]) -> Self {
        let mut df: BTreeMap<&str, usize> = BTreeMap::new();
        for doc in docs {
            let mut uniq: Vec<&str> = doc.as_ref().iter().map(|t| t.as_ref()).collect();
            uniq.sort_unstable();
            uniq.dedup();
            for t in uniq {
                *df.entry(t).or_default() += 1;
            }
        }
        let n = docs.len() as f64;
        let mut vocabulary = Vec::new();
        let mut idf = Vec::new();
        for (t, d) in df {
            if d >= MIN_DOCUMENT_FREQUENCY {
                vocabulary.push(t.to_string());
                idf.push(((1.0 + n) / (1.0 + d as f64)).ln() + 1.0);
            }
        }
        let index = vocabulary.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        TfIdfVectorizer { vocabulary, index, idf }
    }

    pub fn vocabulary(&self) -> &[String] {
        &self.vocabulary
    }

    pub fn idf(&self) -> &[f64] {
        &self.idf
    }

    /// L2-normalized tf-idf row; out-of-vocabulary tokens are ignored.
    pub fn transform<S: AsRef<str>>(&self, tokens: &[S]) -> SparseRow {
        let mut tf: BTreeMap<usize, f64> = BTreeMap::new();
        for t in tokens {
            if let Some(&i) = self.index.get(t.as_ref()) {
                *tf.entry(i).or_default() += 1.0;
            }
        }
        let mut row: SparseRow = tf.into_iter().map(|(i, c)| (i, c * self.idf[i])).collect();
        let norm = row.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|(_, v)| *v /= norm);
        }
        row
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TfIdfMatrix {
    pub vocabulary: Vec<String>,
    pub idf: Vec<f64>,
    pub rows: Vec<SparseRow>,
}

impl TfIdfMatrix {
    pub fn n_features(&self) -> usize {
        self.vocabulary.len()
    }
}

pub fn vectorize_corpus(c: &LabeledCorpus) -> Result<TfIdfMatrix, ClassifyError> {
    if c.documents.is_empty() {
        return Err(ClassifyError::EmptyCorpus);
    }
    let docs: Vec<Vec<String>> = c.documents.iter().map(|(d, _)| tokenize(d)).collect();
    let v = TfIdfVectorizer::fit(&docs);
    let rows = docs.iter().map(|d| v.transform(d)).collect();
    Ok(TfIdfMatrix {
        vocabulary: v.vocabulary,
        idf: v.idf,
        rows,
    })
}

pub trait Classifier {
    /// Per-class scores, parallel to [`Classifier::classes`].
    fn scores(&self, row: &SparseRow) -> Vec<f64>;
    fn classes(&self) -> &[MbtiType];

    /// Highest-scoring class; ties go to the lexicographically smallest code.
    fn predict(&self, row: &SparseRow) -> MbtiType {
        argmax_class(self.classes(), &self.scores(row))
    }
}

/// `classes` must be sorted, so the first maximum is the smallest code.
pub fn argmax_class(classes: &[MbtiType], scores: &[f64]) -> MbtiType {
    let mut best = 0;
    for i in 1..scores.len() {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    classes[best]
}

fn class_index(labels: &[MbtiType]) -> Result<Vec<MbtiType>, ClassifyError> {
    let mut classes = labels.to_vec();
    classes.sort();
    classes.dedup();
    if classes.len() < 2 {
        return Err(ClassifyError::SingleClass);
    }
    Ok(classes)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NaiveBayes {
    classes: Vec<MbtiType>,
    log_prior: Vec<f64>,
    log_likelihood: Vec<Vec<f64>>,
}

impl NaiveBayes {
    /// Class log prior plus `Σ_t x_t log θ_{c,t}`.
    pub fn joint_log_likelihood(&self, row: &SparseRow) -> Vec<f64> {
        self.log_prior
            .iter()
            .zip(&self.log_likelihood)
            .map(|(p, ll)| p + row.iter().map(|&(i, v)| v * ll[i]).sum::<f64>())
            .collect()
    }
}

impl Classifier for NaiveBayes {
    fn scores(&self, row: &SparseRow) -> Vec<f64> {
        self.joint_log_likelihood(row)
    }

    fn classes(&self) -> &[MbtiType] {
        &self.classes
    }
}

/// Multinomial naive Bayes over tf-idf masses with additive smoothing 1.
pub fn train_nb(m: &TfIdfMatrix, labels: &[MbtiType]) -> Result<NaiveBayes, ClassifyError> {
    train_nb_rows(&m.rows, labels, m.n_features())
}

pub fn train_nb_rows(rows: &[SparseRow], labels: &[MbtiType], n_features: usize) -> Result<NaiveBayes, ClassifyError> {
    if rows.len() != labels.len() {
        return Err(ClassifyError::LengthMismatch(rows.len(), labels.len()));
    }
    let classes = class_index(labels)?;
    let k = classes.len();
    let mut mass = vec![vec![0.0; n_features]; k];
    let mut docs = vec![0usize; k];
    for (row, label) in rows.iter().zip(labels) {
        let c = classes.binary_search(label).expect("label in classes");
        docs[c] += 1;
        for &(i, v) in row {
            mass[c][i] += v;
        }
    }
    let n = rows.len() as f64;
    let log_prior = docs.iter().map(|&d| (d as f64 / n).ln()).collect();
    let log_likelihood = mass
        .into_iter()
        .map(|m| {
            let total: f64 = m.iter().sum::<f64>() + NB_SMOOTHING * n_features as f64;
            m.into_iter().map(|v| ((v + NB_SMOOTHING) / total).ln()).collect()
        })
        .collect();
    Ok(NaiveBayes {
        classes,
        log_prior,
        log_likelihood,
    })
}

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Binary ridge-penalized logistic loss
/// `Σ_i log(1 + exp(−s_i (w·x_i + b))) + (ridge/2)‖w‖²`, `s_i ∈ {−1, +1}`,
/// with the bias unpenalized. Parameters are `[w…, b]`.
pub struct LogisticObjective<'a> {
    pub rows: &'a [SparseRow],
    pub signs: Vec<f64>,
    pub n_features: usize,
    pub ridge: f64,
}

impl LogisticObjective<'_> {
    fn margin(&self, params: &[f64], i: usize) -> f64 {
        let b = params[self.n_features];
        self.signs[i] * (self.rows[i].iter().map(|&(j, v)| params[j] * v).sum::<f64>() + b)
    }

    pub fn value(&self, params: &[f64]) -> f64 {
        let w = &params[..self.n_features];
        let loss: f64 = (0..self.rows.len()).map(|i| softplus(-self.margin(params, i))).sum();
        loss + 0.5 * self.ridge * w.iter().map(|x| x * x).sum::<f64>()
    }

    pub fn gradient(&self, params: &[f64]) -> Vec<f64> {
        let d = self.n_features;
        let mut g = vec![0.0; d + 1];
        for i in 0..self.rows.len() {
            let coef = -self.signs[i] * sigmoid(-self.margin(params, i));
            for &(j, v) in &self.rows[i] {
                g[j] += coef * v;
            }
            g[d] += coef;
        }
        for j in 0..d {
            g[j] += self.ridge * params[j];
        }
        g
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Accelerated gradient descent with backtracking and function-value restart,
/// from a zero start.
fn minimize(obj: &LogisticObjective<'_>) -> (Vec<f64>, usize) {
    let dim = obj.n_features + 1;
    let mut x = vec![0.0; dim];
    let mut y = x.clone();
    let mut fx = obj.value(&x);
    let mut t = 1.0f64;
    let mut lipschitz = 1.0f64;
    for epoch in 0..LR_MAX_EPOCHS {
        if norm(&obj.gradient(&x)) < LR_GRAD_TOL {
            return (x, epoch);
        }
        let gy = obj.gradient(&y);
        let fy = obj.value(&y);
        let gy_sq: f64 = gy.iter().map(|g| g * g).sum();
        let mut next: Vec<f64>;
        loop {
            next = y.iter().zip(&gy).map(|(a, g)| a - g / lipschitz).collect();
            if obj.value(&next) <= fy - gy_sq / (2.0 * lipschitz) + 1e-12 * fy.abs() {
                break;
            }
            lipschitz *= 2.0;
        }
        let f_next = obj.value(&next);
        if f_next > fx {
            // momentum overshot: restart from the last iterate
            t = 1.0;
            y = x.clone();
            continue;
        }
        let t_next = (1.0 + (1.0 + 4.0 * t * t).sqrt()) / 2.0;
        let beta = (t - 1.0) / t_next;
        y = next.iter().zip(&x).map(|(n, o)| n + beta * (n - o)).collect();
        x = next;
        fx = f_next;
        t = t_next;
        // let the step grow again
        lipschitz = (lipschitz * 0.9).max(1e-12);
    }
    (x, LR_MAX_EPOCHS)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogisticOvR {
    classes: Vec<MbtiType>,
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
    pub epochs: Vec<usize>,
}

impl LogisticOvR {
    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }
}

impl Classifier for LogisticOvR {
    fn scores(&self, row: &SparseRow) -> Vec<f64> {
        self.weights
            .iter()
            .zip(&self.bias)
            .map(|(w, b)| b + row.iter().map(|&(i, v)| w[i] * v).sum::<f64>())
            .collect()
    }

    fn classes(&self) -> &[MbtiType] {
        &self.classes
    }
}

pub fn train_lr(m: &TfIdfMatrix, labels: &[MbtiType], ridge: f64) -> Result<LogisticOvR, ClassifyError> {
    train_lr_rows(&m.rows, labels, m.n_features(), ridge)
}

pub fn train_lr_rows(
    rows: &[SparseRow],
    labels: &[MbtiType],
    n_features: usize,
    ridge: f64,
) -> Result<LogisticOvR, ClassifyError> {
    if rows.len() != labels.len() {
        return Err(ClassifyError::LengthMismatch(rows.len(), labels.len()));
    }
    if !(ridge >= 0.0) {
        return Err(ClassifyError::InvalidParameter(format!("ridge {ridge} < 0")));
    }
    let classes = class_index(labels)?;
    let mut weights = Vec::with_capacity(classes.len());
    let mut bias = Vec::with_capacity(classes.len());
    let mut epochs = Vec::with_capacity(classes.len());
    for c in &classes {
        let obj = LogisticObjective {
            rows,
            signs: labels.iter().map(|l| if l == c { 1.0 } else { -1.0 }).collect(),
            n_features,
            ridge,
        };
        let (mut params, used) = minimize(&obj);
        bias.push(params.pop().expect("bias slot"));
        weights.push(params);
        epochs.push(used);
    }
    Ok(LogisticOvR {
        classes,
        weights,
        bias,
        epochs,
    })
}

/// One-vs-rest F-1 of `positive`; 0 when precision + recall is 0.
pub fn f1_score(pred: &[MbtiType], truth: &[MbtiType], positive: MbtiType) -> Result<f64, ClassifyError> {
    if pred.len() != truth.len() {
        return Err(ClassifyError::LengthMismatch(pred.len(), truth.len()));
    }
    let (mut tp, mut fp, mut fn_) = (0usize, 0usize, 0usize);
    for (p, t) in pred.iter().zip(truth) {
        match (*p == positive, *t == positive) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    if tp == 0 {
        return Ok(0.0);
    }
    let precision = tp as f64 / (tp + fp) as f64;
    let recall = tp as f64 / (tp + fn_) as f64;
    Ok(2.0 * precision * recall / (precision + recall))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ClassifierSpec {
    NaiveBayes,
    LogisticRegression { ridge: f64 },
}

impl ClassifierSpec {
    pub fn id(&self) -> &'static str {
        match self {
            ClassifierSpec::NaiveBayes => "NB",
            ClassifierSpec::LogisticRegression { .. } => "LR",
        }
    }

    fn fit_predict(&self, train: &[SparseRow], labels: &[MbtiType], n_features: usize, test: &[SparseRow]) -> Result<Vec<MbtiType>, ClassifyError> {
        Ok(match self {
            ClassifierSpec::NaiveBayes => {
                let m = train_nb_rows(train, labels, n_features)?;
                test.iter().map(|r| m.predict(r)).collect()
            }
            ClassifierSpec::LogisticRegression { ridge } => {
                let m = train_lr_rows(train, labels, n_features, *ridge)?;
                test.iter().map(|r| m.predict(r)).collect()
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FoldDetail {
    pub fold: usize,
    pub train_size: usize,
    pub test_size: usize,
    pub vocabulary_size: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvReport {
    pub classifier: ClassifierSpec,
    pub seed: u64,
    pub folds: usize,
    pub per_type_f1: BTreeMap<MbtiType, f64>,
    pub macro_f1: f64,
    pub fold_details: Vec<FoldDetail>,
    pub excluded_types: Vec<MbtiType>,
}

/// Fold index per document: each type's documents are shuffled and dealt
/// round-robin, types in code order, so every fold gets within one document
/// of its share of each type. `None` for documents of excluded types.
pub fn stratified_folds(labels: &[MbtiType], folds: usize, seed: u64, include: impl Fn(MbtiType) -> bool) -> Vec<Option<usize>> {
    let mut by_type: BTreeMap<MbtiType, Vec<usize>> = BTreeMap::new();
    for (i, t) in labels.iter().enumerate() {
        by_type.entry(*t).or_default().push(i);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![None; labels.len()];
    let mut pos = 0usize;
    for (t, mut idx) in by_type {
        if !include(t) {
            continue;
        }
        idx.shuffle(&mut rng);
        for i in idx {
            out[i] = Some(pos % folds);
            pos += 1;
        }
    }
    out
}

pub fn cross_validate(
    c: &LabeledCorpus,
    classifier: ClassifierSpec,
    folds: usize,
    seed: u64,
) -> Result<CvReport, ClassifyError> {
    if folds < 2 {
        return Err(ClassifyError::InvalidParameter(format!("folds {folds} < 2")));
    }
    let labels = c.labels();
    let mut counts: BTreeMap<MbtiType, usize> = BTreeMap::new();
    for t in &labels {
        *counts.entry(*t).or_default() += 1;
    }
    let excluded: Vec<MbtiType> = counts.iter().filter(|(_, &n)| n < folds).map(|(t, _)| *t).collect();
    for t in &excluded {
        log::warn!("excluding type {t}: {} documents for {folds} folds", counts[t]);
    }
    let included: Vec<MbtiType> = counts.keys().filter(|t| !excluded.contains(t)).copied().collect();
    if included.len() < 2 {
        return Err(ClassifyError::InsufficientData(format!(
            "{} type(s) with at least {folds} documents",
            included.len()
        )));
    }
    let assignment = stratified_folds(&labels, folds, seed, |t| !excluded.contains(&t));
    let tokens: Vec<Vec<String>> = c.documents.iter().map(|(d, _)| tokenize(d)).collect();

    let results: Vec<Result<(Vec<(usize, MbtiType)>, FoldDetail), ClassifyError>> = (0..folds)
        .into_par_iter()
        .map(|f| {
            let train: Vec<usize> = (0..labels.len()).filter(|&i| matches!(assignment[i], Some(a) if a != f)).collect();
            let test: Vec<usize> = (0..labels.len()).filter(|&i| assignment[i] == Some(f)).collect();
            let train_tokens: Vec<&[String]> = train.iter().map(|&i| tokens[i].as_slice()).collect();
            let vectorizer = TfIdfVectorizer::fit(&train_tokens);
            let train_rows: Vec<SparseRow> = train.iter().map(|&i| vectorizer.transform(&tokens[i])).collect();
            let test_rows: Vec<SparseRow> = test.iter().map(|&i| vectorizer.transform(&tokens[i])).collect();
            let train_labels: Vec<MbtiType> = train.iter().map(|&i| labels[i]).collect();
            let pred = classifier.fit_predict(&train_rows, &train_labels, vectorizer.vocabulary().len(), &test_rows)?;
            let correct = test.iter().zip(&pred).filter(|(&i, p)| labels[i] == **p).count();
            let detail = FoldDetail {
                fold: f,
                train_size: train.len(),
                test_size: test.len(),
                vocabulary_size: vectorizer.vocabulary().len(),
                accuracy: if test.is_empty() { 0.0 } else { correct as f64 / test.len() as f64 },
            };
            Ok((test.into_iter().zip(pred).collect(), detail))
        })
        .collect();

    let mut predictions: Vec<Option<MbtiType>> = vec![None; labels.len()];
    let mut fold_details = Vec::with_capacity(folds);
    for r in results {
        let (preds, detail) = r?;
        for (i, p) in preds {
            predictions[i] = Some(p);
        }
        fold_details.push(detail);
    }
    let (pred, truth): (Vec<MbtiType>, Vec<MbtiType>) = predictions
        .iter()
        .zip(&labels)
        .filter_map(|(p, t)| p.map(|p| (p, *t)))
        .unzip();
    let mut per_type_f1 = BTreeMap::new();
    for t in &included {
        per_type_f1.insert(*t, f1_score(&pred, &truth, *t)?);
    }
    let macro_f1 = per_type_f1.values().sum::<f64>() / per_type_f1.len() as f64;
    Ok(CvReport {
        classifier,
        seed,
        folds,
        per_type_f1,
        macro_f1,
        fold_details,
        excluded_types: excluded,
    })
}

/// 16-row table of per-type F-1, one column per classifier.
pub fn render_f1_table(reports: &[CvReport]) -> String {
    let mut s = String::from("type");
    for r in reports {
        let _ = write!(s, "\t{}", r.classifier.id());
    }
    s.push('\n');
    for t in MbtiType::ALL {
        s.push_str(t.code());
        for r in reports {
            match r.per_type_f1.get(&t) {
                Some(f) => {
                    let _ = write!(s, "\t{f:.3}");
                }
                None => s.push_str("\tNA"),
            }
        }
        s.push('\n');
    }
    s
}
