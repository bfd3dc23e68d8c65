//! Profile and interaction-log ingestion with the data-cleaning rules applied
//! before any affinity is computed.

use std::collections::BTreeSet;
use std::fmt;
use std::io::{BufRead, Read, Write};
use std::str::FromStr;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::mbti::{InvalidType, MbtiType};

/// Accounts scoring at or above this are treated as bots.
pub const DEFAULT_BOT_THRESHOLD: f64 = 2.5;
/// Upper end of the bot-score scale.
pub const BOT_SCORE_MAX: f64 = 5.0;
/// Fraction of malformed interaction lines above which the whole file is rejected.
pub const MAX_MALFORMED_FRACTION: f64 = 0.10;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("line {line}: {reason}")]
    MalformedRecord { line: usize, reason: String },
    #[error("{malformed} of {total} interaction lines malformed (first: {first})")]
    TooManyMalformed {
        malformed: usize,
        total: usize,
        first: Box<IngestError>,
    },
    #[error("duplicate user_id {0:?} in profiles")]
    DuplicateUser(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sentiment {
    #[serde(rename = "NEG")]
    Neg,
    #[serde(rename = "NEU")]
    Neu,
    #[serde(rename = "POS")]
    Pos,
}

impl Sentiment {
    pub const ALL: [Sentiment; 3] = [Sentiment::Neg, Sentiment::Neu, Sentiment::Pos];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Sentiment> {
        Sentiment::ALL.get(i).copied()
    }

    pub fn token(self) -> &'static str {
        match self {
            Sentiment::Neg => "NEG",
            Sentiment::Neu => "NEU",
            Sentiment::Pos => "POS",
        }
    }
}

impl fmt::Display for Sentiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Sentiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NEG" => Ok(Sentiment::Neg),
            "NEU" => Ok(Sentiment::Neu),
            "POS" => Ok(Sentiment::Pos),
            other => Err(format!("unknown sentiment token {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UserProfile {
    pub user_id: String,
    pub mbti: MbtiType,
    pub bot_score: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionEvent {
    pub source: String,
    pub target: String,
    pub timestamp: i64,
    pub sentiment: Sentiment,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub text: Option<String>,
}

/// Validated events plus the per-line diagnostics for rejected records.
#[derive(Debug, Default)]
pub struct InteractionLog {
    pub events: Vec<InteractionEvent>,
    pub rejected: Vec<IngestError>,
    pub total_lines: usize,
}

pub fn parse_mbti(code: &str) -> Result<MbtiType, InvalidType> {
    MbtiType::parse(code)
}

static TYPE_CODE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)\b(?:[ei][ns][tf][jp])\b").expect("static regex")
});
static MARKER: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\b(?:mbti|briggs|myers)\b").expect("static regex"));

/// Returns the type a text self-identifies with: exactly one distinct type code
/// plus at least one of the marker terms "mbti", "briggs", "myers".
pub fn detect_self_identification(text: &str) -> Option<MbtiType> {
    if !MARKER.is_match(text) {
        return None;
    }
    let codes: BTreeSet<MbtiType> = TYPE_CODE
        .find_iter(text)
        .filter_map(|m| MbtiType::parse(m.as_str()).ok())
        .collect();
    if codes.len() == 1 {
        codes.into_iter().next()
    } else {
        None
    }
}

/// Keeps profiles whose bot score is strictly below `threshold`, in input order.
pub fn filter_bots(profiles: &[UserProfile], threshold: f64) -> Vec<UserProfile> {
    profiles
        .iter()
        .filter(|p| p.bot_score < threshold)
        .cloned()
        .collect()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInteraction {
    source: String,
    target: String,
    timestamp: i64,
    sentiment: String,
    #[serde(default)]
    text: Option<String>,
}

fn parse_interaction(line: &str, line_no: usize) -> Result<InteractionEvent, IngestError> {
    let malformed = |reason: String| IngestError::MalformedRecord {
        line: line_no,
        reason,
    };
    let raw: RawInteraction = serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
    let sentiment = raw.sentiment.parse::<Sentiment>().map_err(malformed)?;
    if raw.source.is_empty() || raw.target.is_empty() {
        return Err(malformed("empty user id".into()));
    }
    if raw.source == raw.target {
        return Err(malformed(format!("self-mention by {:?}", raw.source)));
    }
    Ok(InteractionEvent {
        source: raw.source,
        target: raw.target,
        timestamp: raw.timestamp,
        sentiment,
        text: raw.text,
    })
}

/// Reads a JSON-lines interaction log. Malformed lines are collected as
/// diagnostics; more than 10% malformed lines fails the whole load. Events are
/// returned sorted by timestamp, ties kept in input order.
pub fn load_interactions<R: BufRead>(reader: R) -> Result<InteractionLog, IngestError> {
    let mut log = InteractionLog::default();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        log.total_lines += 1;
        match parse_interaction(&line, i + 1) {
            Ok(ev) => log.events.push(ev),
            Err(e) => {
                log::warn!("skipping interaction record: {e}");
                log.rejected.push(e);
            }
        }
    }
    let malformed = log.rejected.len();
    if malformed as f64 > MAX_MALFORMED_FRACTION * log.total_lines as f64 {
        let first = log.rejected.swap_remove(0);
        return Err(IngestError::TooManyMalformed {
            malformed,
            total: log.total_lines,
            first: Box::new(first),
        });
    }
    // stable: equal timestamps keep input order
    log.events.sort_by_key(|e| e.timestamp);
    Ok(log)
}

pub fn write_interactions<W: Write>(mut out: W, events: &[InteractionEvent]) -> std::io::Result<()> {
    for ev in events {
        serde_json::to_writer(&mut out, ev)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Deserialize)]
struct RawProfile {
    user_id: String,
    mbti: String,
    bot_score: f64,
}

/// Reads a delimited `user_id,mbti,bot_score` table with a header row.
pub fn load_profiles<R: Read>(reader: R) -> Result<Vec<UserProfile>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<RawProfile>().enumerate() {
        // header is line 1
        let line = i + 2;
        let raw = rec.map_err(|e| IngestError::MalformedRecord {
            line,
            reason: e.to_string(),
        })?;
        let mbti = MbtiType::parse(&raw.mbti).map_err(|e| IngestError::MalformedRecord {
            line,
            reason: e.to_string(),
        })?;
        if !(0.0..=BOT_SCORE_MAX).contains(&raw.bot_score) {
            return Err(IngestError::MalformedRecord {
                line,
                reason: format!("bot_score {} outside [0, 5]", raw.bot_score),
            });
        }
        if !seen.insert(raw.user_id.clone()) {
            return Err(IngestError::DuplicateUser(raw.user_id));
        }
        out.push(UserProfile {
            user_id: raw.user_id,
            mbti,
            bot_score: raw.bot_score,
        });
    }
    Ok(out)
}

pub fn write_profiles<W: Write>(out: W, profiles: &[UserProfile]) -> Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["user_id", "mbti", "bot_score"])?;
    for p in profiles {
        wtr.write_record([p.user_id.as_str(), p.mbti.code(), &p.bot_score.to_string()])?;
    }
    wtr.flush()?;
    Ok(())
}
