//! Lexicon-category features, elastic-net regression and Pearson correlation
//! of emotion-word weights between personality types.

use std::collections::{BTreeMap, BTreeSet};
use std::io::BufRead;

use nalgebra::DMatrix;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::mbti::MbtiType;
use crate::table::TypeTable;
use crate::text::tokenize;

pub const FIRST_PERSON_KEY: &str = "first_person_pronoun";
pub const FIRST_PERSON: [&str; 10] = ["i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves"];
pub const DEFAULT_TOP_N: usize = 1000;

#[derive(Debug, Error)]
pub enum LexError {
    #[error("line {line}: malformed pattern {pattern:?}")]
    MalformedPattern { line: usize, pattern: String },
    #[error("line {line}: expected `category<TAB>pattern`")]
    MalformedLine { line: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("need at least 2 observations, got {0}")]
    TooShort(usize),
    #[error("vector is constant; correlation undefined")]
    ConstantVector,
    #[error("corpus has {0} documents; at least 2 required")]
    DegenerateCorpus(usize),
    #[error("unknown lexicon category {0:?}")]
    UnknownCategory(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Literal(String),
    /// `word*`: any token starting with the stem.
    Prefix(String),
}

impl Pattern {
    pub fn matches(&self, token: &str) -> bool {
        match self {
            Pattern::Literal(w) => token == w,
            Pattern::Prefix(p) => token.starts_with(p.as_str()),
        }
    }

    fn parse(raw: &str) -> Option<Pattern> {
        let lower = raw.trim().to_lowercase();
        match lower.find('*') {
            None if !lower.is_empty() => Some(Pattern::Literal(lower)),
            Some(pos) if pos == lower.len() - 1 && pos > 0 => Some(Pattern::Prefix(lower[..pos].to_string())),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    categories: BTreeMap<String, BTreeSet<Pattern>>,
}

impl Lexicon {
    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.categories.keys().map(String::as_str)
    }

    pub fn patterns(&self, category: &str) -> Option<&BTreeSet<Pattern>> {
        self.categories.get(category)
    }

    pub fn insert(&mut self, category: &str, pattern: Pattern) {
        self.categories.entry(category.to_string()).or_default().insert(pattern);
    }

    pub fn category_matches(&self, category: &str, token: &str) -> bool {
        self.categories
            .get(category)
            .is_some_and(|ps| ps.iter().any(|p| p.matches(token)))
    }
}

/// Reads `category<TAB>pattern` lines; blank lines and `#` comments are skipped.
pub fn load_lexicon<R: BufRead>(reader: R) -> Result<Lexicon, LexError> {
    let mut lex = Lexicon::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let line_no = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (category, raw) = line.split_once('\t').ok_or(LexError::MalformedLine { line: line_no })?;
        let category = category.trim();
        if category.is_empty() {
            return Err(LexError::MalformedLine { line: line_no });
        }
        let pattern = Pattern::parse(raw).ok_or_else(|| LexError::MalformedPattern {
            line: line_no,
            pattern: raw.to_string(),
        })?;
        lex.insert(category, pattern);
    }
    Ok(lex)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct FeatureVector(pub BTreeMap<String, f64>);

impl FeatureVector {
    pub fn get(&self, key: &str) -> f64 {
        self.0.get(key).copied().unwrap_or(0.0)
    }
}

/// Per-category share of matching tokens, plus the first-person-pronoun share.
pub fn extract_features(text: &str, lex: &Lexicon) -> FeatureVector {
    features_from_tokens(&tokenize(text), lex)
}

pub fn features_from_tokens(tokens: &[String], lex: &Lexicon) -> FeatureVector {
    let mut out: BTreeMap<String, f64> = lex.categories().map(|c| (c.to_string(), 0.0)).collect();
    out.insert(FIRST_PERSON_KEY.to_string(), 0.0);
    if tokens.is_empty() {
        return FeatureVector(out);
    }
    let total = tokens.len() as f64;
    for (cat, patterns) in &lex.categories {
        let hits = tokens.iter().filter(|t| patterns.iter().any(|p| p.matches(t))).count();
        out.insert(cat.clone(), hits as f64 / total);
    }
    let fp = tokens.iter().filter(|t| FIRST_PERSON.contains(&t.as_str())).count();
    out.insert(FIRST_PERSON_KEY.to_string(), fp as f64 / total);
    FeatureVector(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ElasticNetParams {
    pub lambda: f64,
    pub mix: f64,
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for ElasticNetParams {
    fn default() -> Self {
        ElasticNetParams {
            lambda: 0.01,
            mix: 0.5,
            tol: 1e-6,
            max_sweeps: 1000,
        }
    }
}

impl ElasticNetParams {
    fn validate(&self) -> Result<(), LexError> {
        if !(self.lambda >= 0.0) {
            return Err(LexError::InvalidParameter(format!("lambda {} < 0", self.lambda)));
        }
        if !(0.0..=1.0).contains(&self.mix) {
            return Err(LexError::InvalidParameter(format!("mix {} outside [0, 1]", self.mix)));
        }
        Ok(())
    }
}

/// Dense elastic-net fit, coefficients on the original feature scale.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DenseFit {
    pub coefficients: Vec<f64>,
    pub intercept: f64,
    pub sweeps: usize,
    pub converged: bool,
    /// Standardized-scale objective after each sweep.
    pub objective_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElasticNetModel {
    pub coefficients: FeatureVector,
    pub intercept: f64,
    pub lambda: f64,
    pub mix: f64,
    pub sweeps: usize,
    pub converged: bool,
}

pub fn soft_threshold(z: f64, gamma: f64) -> f64 {
    if z > gamma {
        z - gamma
    } else if z < -gamma {
        z + gamma
    } else {
        0.0
    }
}

fn objective(r: &[f64], beta: &[f64], lambda: f64, mix: f64) -> f64 {
    let n = r.len() as f64;
    let rss: f64 = r.iter().map(|v| v * v).sum();
    let l1: f64 = beta.iter().map(|b| b.abs()).sum();
    let l2: f64 = beta.iter().map(|b| b * b).sum();
    rss / (2.0 * n) + lambda * (mix * l1 + (1.0 - mix) / 2.0 * l2)
}

/// Minimizes `(1/2n)‖y − Xβ − b‖² + λ(mix‖β‖₁ + (1−mix)/2‖β‖²)` by cyclic
/// coordinate descent on standardized columns (unit population variance).
/// Constant columns get a zero coefficient.
pub fn fit_elastic_net(x: &DMatrix<f64>, y: &[f64], params: ElasticNetParams) -> Result<DenseFit, LexError> {
    params.validate()?;
    let (n, p) = x.shape();
    if y.len() != n {
        return Err(LexError::DimensionMismatch(format!("{n} rows but {} targets", y.len())));
    }
    if n < 2 {
        return Err(LexError::TooShort(n));
    }
    let nf = n as f64;
    let y_mean = y.iter().sum::<f64>() / nf;
    let mut means = vec![0.0; p];
    let mut scales = vec![0.0; p];
    let mut z = x.clone();
    for (j, mut col) in z.column_iter_mut().enumerate() {
        let m = col.sum() / nf;
        let var = col.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / nf;
        means[j] = m;
        scales[j] = var.sqrt();
        if scales[j] > 0.0 {
            col.apply(|v| *v = (*v - m) / scales[j]);
        } else {
            col.fill(0.0);
        }
    }

    let l1 = params.lambda * params.mix;
    let l2 = params.lambda * (1.0 - params.mix);
    let mut beta = vec![0.0; p];
    let mut r: Vec<f64> = y.iter().map(|v| v - y_mean).collect();
    let mut history = Vec::new();
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < params.max_sweeps {
        sweeps += 1;
        let mut max_change = 0.0f64;
        for j in 0..p {
            if scales[j] == 0.0 {
                continue;
            }
            let col = z.column(j);
            let rho = col.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>() / nf + beta[j];
            let updated = soft_threshold(rho, l1) / (1.0 + l2);
            let delta = updated - beta[j];
            if delta != 0.0 {
                for (ri, xi) in r.iter_mut().zip(col.iter()) {
                    *ri -= xi * delta;
                }
                beta[j] = updated;
            }
            max_change = max_change.max(delta.abs());
        }
        history.push(objective(&r, &beta, params.lambda, params.mix));
        if max_change < params.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("elastic net did not converge in {} sweeps", params.max_sweeps);
    }
    let coefficients: Vec<f64> = beta
        .iter()
        .zip(&scales)
        .map(|(b, s)| if *s > 0.0 { b / s } else { 0.0 })
        .collect();
    let intercept = y_mean - coefficients.iter().zip(&means).map(|(b, m)| b * m).sum::<f64>();
    Ok(DenseFit {
        coefficients,
        intercept,
        sweeps,
        converged,
        objective_history: history,
    })
}

/// Elastic net over keyed feature rows; the design matrix uses the sorted
/// union of all keys, absent keys read as 0.
pub fn elastic_net(rows: &[FeatureVector], y: &[f64], params: ElasticNetParams) -> Result<ElasticNetModel, LexError> {
    let keys: Vec<&String> = rows
        .iter()
        .flat_map(|r| r.0.keys())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let x = DMatrix::from_fn(rows.len(), keys.len(), |i, j| rows[i].get(keys[j]));
    let fit = fit_elastic_net(&x, y, params)?;
    Ok(ElasticNetModel {
        coefficients: FeatureVector(keys.into_iter().cloned().zip(fit.coefficients).collect()),
        intercept: fit.intercept,
        lambda: params.lambda,
        mix: params.mix,
        sweeps: fit.sweeps,
        converged: fit.converged,
    })
}

pub fn pearson_r(x: &[f64], y: &[f64]) -> Result<f64, LexError> {
    if x.len() != y.len() {
        return Err(LexError::DimensionMismatch(format!("{} vs {} values", x.len(), y.len())));
    }
    if x.len() < 2 {
        return Err(LexError::TooShort(x.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(LexError::ConstantVector);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Two-sided p-value of a Pearson correlation under the t-test with `n − 2`
/// degrees of freedom.
pub fn pearson_p_value(r: f64, n: usize) -> Option<f64> {
    if n < 3 {
        return None;
    }
    if r.abs() >= 1.0 {
        return Some(0.0);
    }
    let df = (n - 2) as f64;
    let t = r * (df / (1.0 - r * r)).sqrt();
    let dist = StudentsT::new(0.0, 1.0, df).ok()?;
    Some(2.0 * (1.0 - dist.cdf(t.abs())))
}

/// Elastic-net weights of each token when regressing a document's `target`
/// category share on its token counts.
pub fn emotion_coefficients(
    docs: &[String],
    lex: &Lexicon,
    target: &str,
    params: ElasticNetParams,
) -> Result<BTreeMap<String, f64>, LexError> {
    if lex.patterns(target).is_none() {
        return Err(LexError::UnknownCategory(target.to_string()));
    }
    if docs.len() < 2 {
        return Err(LexError::DegenerateCorpus(docs.len()));
    }
    let tokenized: Vec<Vec<String>> = docs.iter().map(|d| tokenize(d)).collect();
    let vocab: Vec<&str> = tokenized
        .iter()
        .flatten()
        .map(String::as_str)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let col_of: BTreeMap<&str, usize> = vocab.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut x = DMatrix::<f64>::zeros(docs.len(), vocab.len());
    let mut y = Vec::with_capacity(docs.len());
    for (i, toks) in tokenized.iter().enumerate() {
        for t in toks {
            x[(i, col_of[t.as_str()])] += 1.0;
        }
        y.push(features_from_tokens(toks, lex).get(target));
    }
    let fit = fit_elastic_net(&x, &y, params)?;
    Ok(vocab.into_iter().map(String::from).zip(fit.coefficients).collect())
}

/// The `n` largest coefficients, ties broken by key.
pub fn top_n(coefficients: &BTreeMap<String, f64>, n: usize) -> BTreeMap<String, f64> {
    let mut items: Vec<(&String, f64)> = coefficients.iter().map(|(k, v)| (k, *v)).collect();
    items.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    items.into_iter().take(n).map(|(k, v)| (k.clone(), v)).collect()
}

/// Pearson r of two keyed vectors aligned on the union of their keys.
pub fn aligned_pearson(a: &BTreeMap<String, f64>, b: &BTreeMap<String, f64>) -> Result<(f64, usize), LexError> {
    let keys: BTreeSet<&String> = a.keys().chain(b.keys()).collect();
    let xa: Vec<f64> = keys.iter().map(|k| a.get(*k).copied().unwrap_or(0.0)).collect();
    let xb: Vec<f64> = keys.iter().map(|k| b.get(*k).copied().unwrap_or(0.0)).collect();
    Ok((pearson_r(&xa, &xb)?, keys.len()))
}

pub fn type_emotion_correlation(
    corpus_a: &[String],
    corpus_b: &[String],
    lex: &Lexicon,
    target: &str,
    n: usize,
    params: ElasticNetParams,
) -> Result<f64, LexError> {
    let a = top_n(&emotion_coefficients(corpus_a, lex, target, params)?, n);
    let b = top_n(&emotion_coefficients(corpus_b, lex, target, params)?, n);
    Ok(aligned_pearson(&a, &b)?.0)
}

/// Lower-triangular correlation table across types, with p-values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationTables {
    pub target: String,
    pub r: TypeTable,
    pub p_value: TypeTable,
    /// Types whose coefficients could not be fitted, with the reason.
    pub skipped: BTreeMap<MbtiType, String>,
    /// Each fitted type correlated with itself; exactly 1 unless constant.
    pub self_r: BTreeMap<MbtiType, f64>,
}

pub fn type_emotion_table(
    corpora: &BTreeMap<MbtiType, Vec<String>>,
    lex: &Lexicon,
    target: &str,
    n: usize,
    params: ElasticNetParams,
) -> Result<CorrelationTables, LexError> {
    if lex.patterns(target).is_none() {
        return Err(LexError::UnknownCategory(target.to_string()));
    }
    let mut tops = BTreeMap::new();
    let mut skipped = BTreeMap::new();
    for (&t, docs) in corpora {
        match emotion_coefficients(docs, lex, target, params) {
            Ok(c) => {
                tops.insert(t, top_n(&c, n));
            }
            Err(e) => {
                skipped.insert(t, e.to_string());
            }
        }
    }
    let mut r = TypeTable::default();
    let mut p = TypeTable::default();
    let mut self_r = BTreeMap::new();
    let typed: Vec<_> = tops.iter().collect();
    for (&t, top) in &typed {
        if let Ok((value, _)) = aligned_pearson(top, top) {
            self_r.insert(t, value);
        }
    }
    for (i, (&ta, a)) in typed.iter().enumerate() {
        for (&tb, b) in &typed[..i] {
            if let Ok((value, len)) = aligned_pearson(a, b) {
                r.set(ta, tb, value);
                if let Some(pv) = pearson_p_value(value, len) {
                    p.set(ta, tb, pv);
                }
            }
        }
    }
    Ok(CorrelationTables {
        target: target.to_string(),
        r,
        p_value: p,
        skipped,
        self_r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lexicon(src: &str) -> Lexicon {
        load_lexicon(src.as_bytes()).unwrap()
    }

    #[test]
    fn pattern_rules() {
        let lex = lexicon("posemo\thapp*\nposemo\tjoy\nposemo\tjoy\n# comment\n\n");
        assert!(lex.category_matches("posemo", "happiness"));
        assert!(lex.category_matches("posemo", "joy"));
        assert!(!lex.category_matches("posemo", "joyful"));
        assert_eq!(lex.patterns("posemo").unwrap().len(), 2);
        assert!(matches!(
            load_lexicon("x\tha*p".as_bytes()),
            Err(LexError::MalformedPattern { line: 1, .. })
        ));
        assert!(load_lexicon("x\t*".as_bytes()).is_err());
        assert!(load_lexicon("x\t".as_bytes()).is_err());
        assert!(matches!(load_lexicon("nocolumn".as_bytes()), Err(LexError::MalformedLine { line: 1 })));
        assert_eq!(lexicon("neg\tSAD").patterns("neg").unwrap().iter().next(), Some(&Pattern::Literal("sad".into())));
    }

    #[test]
    fn feature_examples() {
        let lex = lexicon("posemo\thapp*\nnegemo\tsad\n");
        let f = extract_features("I am happy", &lex);
        assert_abs_diff_eq!(f.get("posemo"), 1.0 / 3.0, epsilon = 1e-15);
        assert_abs_diff_eq!(f.get(FIRST_PERSON_KEY), 1.0 / 3.0, epsilon = 1e-15);
        assert_eq!(f.get("negemo"), 0.0);

        let empty = extract_features("", &lex);
        assert_eq!(empty.0.len(), 3);
        assert!(empty.0.values().all(|v| *v == 0.0));

        assert_eq!(extract_features("sad sad sad", &lex).get("negemo"), 1.0);
    }

    #[test]
    fn constant_target() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 2.0, 2.0, 1.0, 3.0, 5.0, 4.0, 0.0]);
        let fit = fit_elastic_net(&x, &[2.5; 4], ElasticNetParams::default()).unwrap();
        assert_eq!(fit.coefficients, [0.0, 0.0]);
        assert_eq!(fit.intercept, 2.5);
    }

    #[test]
    fn huge_penalty_zeroes_everything() {
        let x = DMatrix::from_row_slice(4, 2, &[1.0, 2.0, 2.0, 1.0, 3.0, 5.0, 4.0, 0.0]);
        let y = [1.0, 3.0, 2.0, 7.0];
        let params = ElasticNetParams {
            lambda: 1e6,
            mix: 1.0,
            ..Default::default()
        };
        let fit = fit_elastic_net(&x, &y, params).unwrap();
        assert_eq!(fit.coefficients, [0.0, 0.0]);
        assert_eq!(fit.intercept, 3.25);
    }

    #[test]
    fn elastic_net_argument_checks() {
        let x = DMatrix::from_row_slice(2, 1, &[1.0, 2.0]);
        assert!(matches!(fit_elastic_net(&x, &[1.0], ElasticNetParams::default()), Err(LexError::DimensionMismatch(_))));
        let one = DMatrix::from_row_slice(1, 1, &[1.0]);
        assert!(matches!(fit_elastic_net(&one, &[1.0], ElasticNetParams::default()), Err(LexError::TooShort(1))));
        let bad = ElasticNetParams { mix: 1.5, ..Default::default() };
        assert!(fit_elastic_net(&x, &[1.0, 2.0], bad).is_err());
    }

    #[test]
    fn keyed_model_uses_key_union() {
        let rows = vec![
            FeatureVector([("a".to_string(), 1.0)].into()),
            FeatureVector([("b".to_string(), 1.0)].into()),
            FeatureVector([("a".to_string(), 2.0), ("b".to_string(), 1.0)].into()),
        ];
        let m = elastic_net(&rows, &[1.0, 0.0, 2.0], ElasticNetParams { lambda: 0.0, ..Default::default() }).unwrap();
        assert_eq!(m.coefficients.0.len(), 2);
        assert_abs_diff_eq!(m.coefficients.get("a"), 1.0, epsilon = 1e-6);
        assert_abs_diff_eq!(m.coefficients.get("b"), 0.0, epsilon = 1e-6);
    }

    #[test]
    fn pearson_examples() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        assert_abs_diff_eq!(pearson_r(&x, &y).unwrap(), 1.0, epsilon = 1e-15);
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_abs_diff_eq!(pearson_r(&x, &neg).unwrap(), -1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(pearson_r(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap(), 0.5, epsilon = 1e-15);
        assert!(matches!(pearson_r(&[1.0, 1.0], &[1.0, 2.0]), Err(LexError::ConstantVector)));
        assert!(matches!(pearson_r(&[1.0], &[1.0]), Err(LexError::TooShort(1))));
        assert!(matches!(pearson_r(&[1.0, 2.0], &[1.0]), Err(LexError::DimensionMismatch(_))));
    }

    #[test]
    fn p_values() {
        assert_eq!(pearson_p_value(1.0, 10), Some(0.0));
        assert_eq!(pearson_p_value(0.5, 2), None);
        let p0 = pearson_p_value(0.0, 30).unwrap();
        assert_abs_diff_eq!(p0, 1.0, epsilon = 1e-12);
        // r = 0.5, n = 12: t = 0.5·√(10/0.75) ≈ 1.8257, two-sided p ≈ 0.0979
        let p = pearson_p_value(0.5, 12).unwrap();
        assert_abs_diff_eq!(p, 0.0979, epsilon = 5e-4);
    }

    #[test]
    fn top_n_orders_by_value_then_key() {
        let c: BTreeMap<String, f64> = [("b", 1.0), ("a", 1.0), ("c", 3.0), ("d", -1.0)]
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        let top = top_n(&c, 2);
        assert_eq!(top.keys().collect::<Vec<_>>(), ["a", "c"]);
        assert_eq!(top_n(&c, 10).len(), 4);
    }

    #[test]
    fn emotion_correlation_identical_corpora() {
        let lex = lexicon("posemo\tjoy\nposemo\tlove\n");
        let docs: Vec<String> = [
            "joy joy cat dog",
            "dog dog cat",
            "love cat fish",
            "fish fish dog joy",
            "cat love love",
            "dog fish",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        let r = type_emotion_correlation(&docs, &docs, &lex, "posemo", 1000, ElasticNetParams::default()).unwrap();
        assert_eq!(r, 1.0);
        assert!(matches!(
            type_emotion_correlation(&docs[..1], &docs, &lex, "posemo", 10, ElasticNetParams::default()),
            Err(LexError::DegenerateCorpus(1))
        ));
        assert!(matches!(
            type_emotion_correlation(&docs, &docs, &lex, "negemo", 10, ElasticNetParams::default()),
            Err(LexError::UnknownCategory(_))
        ));
    }
}
