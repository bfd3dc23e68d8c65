//! The sixteen Myers-Briggs personality types.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid MBTI type code {0:?}")]
pub struct InvalidType(pub String);

// Variant order within each axis is alphabetical so that the derived `Ord`
// on `MbtiType` coincides with lexicographic order of the four-letter code.

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Attitude {
    Extraversion,
    Introversion,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Perceiving {
    Intuition,
    Sensing,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Judging {
    Feeling,
    Thinking,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lifestyle {
    Judging,
    Perceiving,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MbtiType {
    pub attitude: Attitude,
    pub perceiving: Perceiving,
    pub judging: Judging,
    pub lifestyle: Lifestyle,
}

const CODES: [&str; 16] = [
    "ENFJ", "ENFP", "ENTJ", "ENTP", "ESFJ", "ESFP", "ESTJ", "ESTP", "INFJ", "INFP", "INTJ", "INTP",
    "ISFJ", "ISFP", "ISTJ", "ISTP",
];

impl MbtiType {
    /// All sixteen types in lexicographic code order.
    pub const ALL: [MbtiType; 16] = {
        let mut out = [MbtiType::from_bits(0); 16];
        let mut i = 0;
        while i < 16 {
            out[i] = MbtiType::from_bits(i as u8);
            i += 1;
        }
        out
    };

    const fn from_bits(bits: u8) -> MbtiType {
        MbtiType {
            attitude: if bits & 8 == 0 { Attitude::Extraversion } else { Attitude::Introversion },
            perceiving: if bits & 4 == 0 { Perceiving::Intuition } else { Perceiving::Sensing },
            judging: if bits & 2 == 0 { Judging::Feeling } else { Judging::Thinking },
            lifestyle: if bits & 1 == 0 { Lifestyle::Judging } else { Lifestyle::Perceiving },
        }
    }

    /// Position of this type in [`MbtiType::ALL`].
    pub fn index(self) -> usize {
        (self.attitude as usize) << 3
            | (self.perceiving as usize) << 2
            | (self.judging as usize) << 1
            | self.lifestyle as usize
    }

    pub fn from_index(index: usize) -> Option<MbtiType> {
        (index < 16).then(|| MbtiType::from_bits(index as u8))
    }

    pub fn code(self) -> &'static str {
        CODES[self.index()]
    }

    /// Case-insensitive parse of a four-letter code.
    pub fn parse(code: &str) -> Result<MbtiType, InvalidType> {
        let upper = code.to_ascii_uppercase();
        CODES
            .iter()
            .position(|c| *c == upper)
            .map(|i| MbtiType::from_bits(i as u8))
            .ok_or_else(|| InvalidType(code.to_string()))
    }
}

impl fmt::Display for MbtiType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for MbtiType {
    type Err = InvalidType;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MbtiType::parse(s)
    }
}

impl Serialize for MbtiType {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.code())
    }
}

impl<'de> Deserialize<'de> for MbtiType {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        MbtiType::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// All 136 unordered type pairs `(p, q)` with `p <= q`, in lexicographic order.
pub fn unordered_pairs() -> impl Iterator<Item = (MbtiType, MbtiType)> {
    (0..16).flat_map(|i| (i..16).map(move |j| (MbtiType::ALL[i], MbtiType::ALL[j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sixteen_distinct_codes_round_trip() {
        let mut seen = std::collections::BTreeSet::new();
        for t in MbtiType::ALL {
            assert_eq!(MbtiType::parse(t.code()).unwrap(), t);
            assert_eq!(MbtiType::from_index(t.index()), Some(t));
            seen.insert(t.code());
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn ordering_matches_code_order() {
        for w in MbtiType::ALL.windows(2) {
            assert!(w[0] < w[1]);
            assert!(w[0].code() < w[1].code());
        }
    }

    #[test]
    fn parse_examples() {
        let infj = MbtiType::parse("INFJ").unwrap();
        assert_eq!(infj.code(), "INFJ");
        assert_eq!(infj.attitude, Attitude::Introversion);
        assert_eq!(infj.perceiving, Perceiving::Intuition);
        assert_eq!(infj.judging, Judging::Feeling);
        assert_eq!(infj.lifestyle, Lifestyle::Judging);
        assert_eq!(MbtiType::parse("infj").unwrap(), infj);
        assert!(MbtiType::parse("ABCD").is_err());
        assert!(MbtiType::parse("INF").is_err());
        assert!(MbtiType::parse("").is_err());
    }

    #[test]
    fn pair_count() {
        assert_eq!(unordered_pairs().count(), 136);
    }
}
