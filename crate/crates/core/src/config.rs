//! Flat key-value pipeline configuration.
//!
//! Values are layered: built-in defaults, then the TOML file, then
//! `PERSONA_<KEY>` environment variables, then command-line overrides.
//! Relative paths are resolved against the directory holding the file.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::DEFAULT_EDGE_THRESHOLD;
use crate::ingest::{BOT_SCORE_MAX, DEFAULT_BOT_THRESHOLD};

pub const ENV_PREFIX: &str = "PERSONA_";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("config is not valid TOML: {0}")]
    Parse(String),
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("invalid value for `{key}`: {reason}")]
    InvalidValue { key: String, reason: String },
    #[error("`{key}` is required")]
    MissingKey { key: String },
    #[error("`{key}`: file {path} does not exist")]
    MissingFile { key: String, path: PathBuf },
}

impl ConfigError {
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::UnknownKey(k) => Some(k),
            ConfigError::InvalidValue { key, .. } | ConfigError::MissingKey { key } | ConfigError::MissingFile { key, .. } => Some(key),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClusterChoice {
    Mcl,
    Kdest,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassifierChoice {
    Nb,
    Lr,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub interactions: PathBuf,
    pub profiles: PathBuf,
    pub embeddings: PathBuf,
    pub lexicon: PathBuf,
    pub out: PathBuf,
    pub seed: u64,

    pub bot_threshold: f64,
    pub alpha: f64,
    pub kappa: f64,
    pub edge_threshold: f64,

    pub cluster_method: ClusterChoice,
    pub k: usize,
    pub expansion: u32,
    pub inflation: f64,
    pub prune: f64,
    pub teleport: f64,
    pub kdest_max_iter: usize,

    pub lambda: f64,
    pub mix: f64,
    pub top_n: usize,
    /// Comma-separated lexicon categories to correlate.
    pub emotion_targets: String,

    pub classifier: ClassifierChoice,
    pub ridge: f64,
    pub folds: usize,

    /// Directory relative paths are resolved against; not a config key.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            interactions: PathBuf::new(),
            profiles: PathBuf::new(),
            embeddings: PathBuf::new(),
            lexicon: PathBuf::new(),
            out: PathBuf::from("out"),
            seed: 0,
            bot_threshold: DEFAULT_BOT_THRESHOLD,
            alpha: 1.0,
            kappa: 5.0,
            edge_threshold: DEFAULT_EDGE_THRESHOLD,
            cluster_method: ClusterChoice::Both,
            k: 4,
            expansion: 2,
            inflation: 2.0,
            prune: 1e-6,
            teleport: 0.01,
            kdest_max_iter: 100,
            lambda: 0.01,
            mix: 0.5,
            top_n: 1000,
            emotion_targets: "posemo,negemo".into(),
            classifier: ClassifierChoice::Both,
            ridge: 1.0,
            folds: 10,
            base_dir: PathBuf::new(),
        }
    }
}

pub const KEYS: [&str; 24] = [
    "interactions",
    "profiles",
    "embeddings",
    "lexicon",
    "out",
    "seed",
    "bot_threshold",
    "alpha",
    "kappa",
    "edge_threshold",
    "cluster_method",
    "k",
    "expansion",
    "inflation",
    "prune",
    "teleport",
    "kdest_max_iter",
    "lambda",
    "mix",
    "top_n",
    "emotion_targets",
    "classifier",
    "ridge",
    "folds",
];

fn is_key(k: &str) -> bool {
    KEYS.contains(&k)
}

/// Command-line overrides, applied last.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// Environment text is read as a TOML value when it parses as one and as a
/// bare string otherwise, so `PERSONA_K=8` and `PERSONA_OUT=/tmp/x` both work.
fn env_value(raw: &str) -> toml::Value {
    match format!("v = {raw}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("single key"),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

fn invalid(key: &str, reason: impl Into<String>) -> ConfigError {
    ConfigError::InvalidValue {
        key: key.to_string(),
        reason: reason.into(),
    }
}

impl PipelineConfig {
    /// Parses config text; `env` looks up override variables by full name.
    pub fn from_toml_str(
        text: &str,
        base_dir: &Path,
        overrides: &Overrides,
        env: impl Fn(&str) -> Option<String>,
    ) -> Result<Self, ConfigError> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.message().to_string()))?;
        if let Some(k) = table.keys().find(|k| !is_key(k)) {
            return Err(ConfigError::UnknownKey(k.clone()));
        }
        for key in KEYS {
            if let Some(raw) = env(&format!("{ENV_PREFIX}{}", key.to_uppercase())) {
                table.insert(key.to_string(), env_value(&raw));
            }
        }
        if let Some(seed) = overrides.seed {
            let seed = i64::try_from(seed).map_err(|_| invalid("seed", "exceeds the TOML integer range"))?;
            table.insert("seed".into(), toml::Value::Integer(seed));
        }
        if let Some(out) = &overrides.out {
            table.insert("out".into(), toml::Value::String(out.to_string_lossy().into_owned()));
        }
        let mut cfg = match PipelineConfig::deserialize(toml::Value::Table(table.clone())) {
            Ok(c) => c,
            Err(e) => {
                // find the offending key by deserializing each one alone
                for (k, v) in &table {
                    let single: toml::Table = [(k.clone(), v.clone())].into_iter().collect();
                    if let Err(e) = PipelineConfig::deserialize(toml::Value::Table(single)) {
                        return Err(invalid(k, e.message().to_string()));
                    }
                }
                return Err(ConfigError::Parse(e.message().to_string()));
            }
        };
        cfg.base_dir = base_dir.to_path_buf();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new(".")).to_path_buf();
        Self::from_toml_str(&text, &base, overrides, |k| std::env::var(k).ok())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn out_dir(&self) -> PathBuf {
        self.resolve(&self.out)
    }

    pub fn emotion_targets(&self) -> Vec<String> {
        self.emotion_targets
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let check = |ok: bool, key: &str, reason: &str| if ok { Ok(()) } else { Err(invalid(key, reason)) };
        check((0.0..=BOT_SCORE_MAX).contains(&self.bot_threshold), "bot_threshold", "must be in [0, 5]")?;
        check(self.alpha > 0.0 && self.alpha.is_finite(), "alpha", "must be positive")?;
        check(self.kappa > 0.0 && self.kappa.is_finite(), "kappa", "must be positive")?;
        check(self.edge_threshold > 0.0 && self.edge_threshold.is_finite(), "edge_threshold", "must be positive")?;
        check(self.k >= 1, "k", "must be at least 1")?;
        check(self.expansion >= 2, "expansion", "must be at least 2")?;
        check(self.inflation > 1.0 && self.inflation.is_finite(), "inflation", "must exceed 1")?;
        check((0.0..1.0).contains(&self.prune), "prune", "must be in [0, 1)")?;
        check(self.teleport > 0.0 && self.teleport < 1.0, "teleport", "must be in (0, 1)")?;
        check(self.kdest_max_iter >= 1, "kdest_max_iter", "must be at least 1")?;
        check(self.lambda >= 0.0 && self.lambda.is_finite(), "lambda", "must be non-negative")?;
        check((0.0..=1.0).contains(&self.mix), "mix", "must be in [0, 1]")?;
        check(self.top_n >= 1, "top_n", "must be at least 1")?;
        check(!self.emotion_targets().is_empty(), "emotion_targets", "needs at least one category")?;
        check(self.ridge >= 0.0 && self.ridge.is_finite(), "ridge", "must be non-negative")?;
        check(self.folds >= 2, "folds", "must be at least 2")?;
        check(!self.out.as_os_str().is_empty(), "out", "must not be empty")?;
        Ok(())
    }

    /// Checks that every named input path key is set and points at a file.
    pub fn require_inputs(&self, keys: &[&str]) -> Result<(), ConfigError> {
        for &key in keys {
            let p = match key {
                "interactions" => &self.interactions,
                "profiles" => &self.profiles,
                "embeddings" => &self.embeddings,
                "lexicon" => &self.lexicon,
                other => unreachable!("not an input key: {other}"),
            };
            if p.as_os_str().is_empty() {
                return Err(ConfigError::MissingKey { key: key.into() });
            }
            let full = self.resolve(p);
            if !full.is_file() {
                return Err(ConfigError::MissingFile { key: key.into(), path: full });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<PipelineConfig, ConfigError> {
        PipelineConfig::from_toml_str(text, Path::new("/data"), &Overrides::default(), |_| None)
    }

    #[test]
    fn defaults_and_resolution() {
        let c = parse("interactions = \"in.jsonl\"\nk = 6\n").unwrap();
        assert_eq!(c.k, 6);
        assert_eq!(c.ridge, 1.0);
        assert_eq!(c.resolve(&c.interactions), Path::new("/data/in.jsonl"));
        assert_eq!(c.resolve(Path::new("/abs")), Path::new("/abs"));
        assert_eq!(c.emotion_targets(), ["posemo", "negemo"]);
    }

    #[test]
    fn unknown_and_bad_keys_are_named() {
        assert!(matches!(parse("kk = 3"), Err(ConfigError::UnknownKey(k)) if k == "kk"));
        assert!(matches!(parse("base_dir = \"x\""), Err(ConfigError::UnknownKey(_))));
        let e = parse("k = \"four\"").unwrap_err();
        assert_eq!(e.key(), Some("k"));
        let e = parse("mix = 1.5").unwrap_err();
        assert_eq!(e.key(), Some("mix"));
        let e = parse("cluster_method = \"spectral\"").unwrap_err();
        assert_eq!(e.key(), Some("cluster_method"));
        assert!(matches!(parse("k = "), Err(ConfigError::Parse(_))));
    }

    #[test]
    fn env_then_cli_overrides() {
        let env = |k: &str| match k {
            "PERSONA_SEED" => Some("5".to_string()),
            "PERSONA_OUT" => Some("/tmp/run".to_string()),
            "PERSONA_INFLATION" => Some("3.5".to_string()),
            _ => None,
        };
        let c = PipelineConfig::from_toml_str("seed = 1", Path::new("."), &Overrides::default(), env).unwrap();
        assert_eq!((c.seed, c.inflation), (5, 3.5));
        assert_eq!(c.out, Path::new("/tmp/run"));
        let o = Overrides {
            seed: Some(9),
            out: Some("elsewhere".into()),
        };
        let c = PipelineConfig::from_toml_str("seed = 1", Path::new("."), &o, env).unwrap();
        assert_eq!(c.seed, 9);
        assert_eq!(c.out, Path::new("elsewhere"));
        let bad = |k: &str| (k == "PERSONA_FOLDS").then(|| "1".to_string());
        let e = PipelineConfig::from_toml_str("", Path::new("."), &Overrides::default(), bad).unwrap_err();
        assert_eq!(e.key(), Some("folds"));
    }

    #[test]
    fn missing_inputs_name_the_key() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("p.csv"), "user_id,mbti,bot_score\n").unwrap();
        let c = PipelineConfig::from_toml_str(
            "profiles = \"p.csv\"\ninteractions = \"nope.jsonl\"",
            dir.path(),
            &Overrides::default(),
            |_| None,
        )
        .unwrap();
        assert!(c.require_inputs(&["profiles"]).is_ok());
        let e = c.require_inputs(&["profiles", "interactions"]).unwrap_err();
        assert!(matches!(&e, ConfigError::MissingFile { key, .. } if key == "interactions"));
        let e = c.require_inputs(&["lexicon"]).unwrap_err();
        assert!(matches!(&e, ConfigError::MissingKey { key } if key == "lexicon"));
    }
}
