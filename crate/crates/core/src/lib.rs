//! Personality-aware analysis of social interaction data: affinity scoring,
//! affinity graphs, clustering, influence, lexical and semantic comparison
//! between personality types, and text classification.

pub mod affinity;
pub mod classify;
pub mod config;
pub mod cluster;
pub mod graph;
pub mod influence;
pub mod ingest;
pub mod lexfeat;
pub mod markov;
pub mod mbti;
pub mod pipeline;
pub mod semsim;
pub mod synth;
pub mod table;
pub mod text;

pub use mbti::MbtiType;
