//! Synthetic data with known structure: planted-partition affinity graphs,
//! sentiment sequences drawn from known chains, and complete input datasets
//! in the formats the ingest stage reads.
//!
//! Every generator uses ChaCha8 seeded from one `u64`, with an independent
//! stream per node (or source user), so output does not depend on thread
//! scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::affinity::{SentimentSequence, TransitionMatrix, UserPair, STATES};
use crate::graph::{AffinityGraph, GraphError, DEFAULT_EDGE_THRESHOLD};
use crate::ingest::{write_interactions, write_profiles, InteractionEvent, Sentiment, UserProfile};
use crate::markov;
use crate::mbti::MbtiType;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Stream-separated generator: same seed, different stream per index.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlantedSpec {
    pub n: usize,
    pub k: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub w_in: (f64, f64),
    pub w_out: (f64, f64),
    pub seed: u64,
}

impl PlantedSpec {
    fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidSpec(m));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.k == 0 || self.k > self.n {
            return bad(format!("k = {} outside 1..={}", self.k, self.n));
        }
        for (name, p) in [("p_in", self.p_in), ("p_out", self.p_out)] {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("{name} = {p} outside [0, 1]"));
            }
        }
        for (name, (lo, hi)) in [("w_in", self.w_in), ("w_out", self.w_out)] {
            if !(lo >= DEFAULT_EDGE_THRESHOLD && lo <= hi && hi.is_finite()) {
                return bad(format!("{name} = [{lo}, {hi}] is not a range above the edge threshold"));
            }
        }
        Ok(())
    }

    /// Block of node `i`; contiguous blocks whose sizes differ by at most one.
    pub fn block_of(&self, i: usize) -> usize {
        i * self.k / self.n
    }
}

pub fn node_id(i: usize, n: usize) -> String {
    let width = n.saturating_sub(1).to_string().len().max(4);
    format!("u{i:0width$}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedGraph {
    pub graph: AffinityGraph,
    /// Block of each graph node, in `graph.node_ids()` order.
    pub truth: Vec<usize>,
    /// Nodes left without any edge, which the graph does not keep.
    pub isolated: usize,
}

fn uniform_in(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..hi)
    }
}

/// Directed edges drawn independently; node `i` is in block `i·k/n` and gets
/// type `ALL[block mod 16]`.
pub fn planted_partition(spec: &PlantedSpec) -> Result<PlantedGraph, SynthError> {
    spec.validate()?;
    let n = spec.n;
    let out_edges: Vec<Vec<(usize, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(spec.seed, i as u64);
            let mut edges = Vec::new();
            for j in 0..n {
                if j == i {
                    continue;
                }
                let same = spec.block_of(i) == spec.block_of(j);
                let (p, w) = if same { (spec.p_in, spec.w_in) } else { (spec.p_out, spec.w_out) };
                if rng.random_bool(p) {
                    edges.push((j, uniform_in(&mut rng, w)));
                }
            }
            edges
        })
        .collect();

    let mut touched = vec![false; n];
    let mut edges: BTreeMap<UserPair, f64> = BTreeMap::new();
    for (i, row) in out_edges.iter().enumerate() {
        for &(j, w) in row {
            touched[i] = true;
            touched[j] = true;
            edges.insert((node_id(i, n), node_id(j, n)), w);
        }
    }
    let mut nodes = BTreeMap::new();
    let mut truth = Vec::new();
    for i in (0..n).filter(|&i| touched[i]) {
        let block = spec.block_of(i);
        nodes.insert(node_id(i, n), MbtiType::ALL[block % 16]);
        truth.push(block);
    }
    let graph = AffinityGraph::from_parts(nodes, edges, DEFAULT_EDGE_THRESHOLD)?;
    Ok(PlantedGraph {
        graph,
        truth,
        isolated: touched.iter().filter(|t| !**t).count(),
    })
}

fn sample_row(rng: &mut ChaCha8Rng, row: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (j, p) in row.iter().enumerate() {
        acc += p;
        if u < acc {
            return j;
        }
    }
    // rounding left the cumulative sum a hair under 1
    row.iter().rposition(|p| *p > 0.0).unwrap_or(row.len() - 1)
}

/// Sequence whose first state is drawn from the stationary distribution of
/// `p` (uniform when the chain has no unique one).
pub fn sample_chain_sequence(p: &TransitionMatrix, length: usize, seed: u64) -> SentimentSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = match markov::stationary(&p.to_dmatrix()) {
        Ok(pi) => sample_row(&mut rng, pi.as_slice()),
        Err(_) => rng.random_range(0..STATES),
    };
    walk(p, start, length, &mut rng)
}

/// Like [`sample_chain_sequence`] with a fixed first state.
pub fn sample_chain_from(p: &TransitionMatrix, start: Sentiment, length: usize, seed: u64) -> SentimentSequence {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    walk(p, start.index(), length, &mut rng)
}

fn walk(p: &TransitionMatrix, start: usize, length: usize, rng: &mut ChaCha8Rng) -> SentimentSequence {
    let mut states = Vec::with_capacity(length);
    let mut s = start;
    for step in 0..length {
        if step > 0 {
            s = sample_row(rng, &p.rows()[s]);
        }
        states.push(Sentiment::from_index(s).expect("state index"));
    }
    SentimentSequence::new("synthetic-source", "synthetic-target", states)
}

/// Chain whose rows are uniform on the open simplex, hence ergodic.
pub fn random_chain(rng: &mut impl Rng) -> TransitionMatrix {
    let mut entries = [[0.0; STATES]; STATES];
    for row in entries.iter_mut() {
        for e in row.iter_mut() {
            *e = -(1.0 - rng.random::<f64>()).ln();
        }
        let total: f64 = row.iter().sum();
        row.iter_mut().for_each(|e| *e /= total);
    }
    TransitionMatrix::from_rows(entries).expect("normalized rows")
}

/// Knobs for [`generate_dataset`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DatasetSpec {
    pub users_per_type: usize,
    pub communities: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub min_messages: usize,
    pub max_messages: usize,
    pub dimension: usize,
    /// Every user whose index is `bot_every - 1` modulo `bot_every` is a bot.
    pub bot_every: usize,
    pub seed: u64,
}

impl Default for DatasetSpec {
    fn default() -> Self {
        DatasetSpec {
            users_per_type: 12,
            communities: 4,
            p_in: 0.15,
            p_out: 0.01,
            min_messages: 3,
            max_messages: 8,
            dimension: 16,
            bot_every: 40,
            seed: 7,
        }
    }
}

pub const POSITIVE_WORDS: [&str; 7] = ["happy", "happiness", "joy", "lovely", "love", "great", "glad"];
pub const NEGATIVE_WORDS: [&str; 7] = ["sad", "angry", "anger", "hate", "hated", "awful", "upset"];
pub const NOISE_WORDS: [&str; 16] = [
    "the", "and", "today", "really", "just", "people", "time", "think", "i", "my", "we", "you", "me", "our", "news", "work",
];
const TYPE_WORDS: usize = 12;

pub const DEMO_LEXICON: &str = "\
# demonstration lexicon: category<TAB>pattern, trailing * is a prefix
posemo\thapp*
posemo\tjoy
posemo\tlove*
posemo\tgreat
posemo\tglad
negemo\tsad
negemo\tangr*
negemo\thate*
negemo\tawful
negemo\tupset
";

fn type_words(t: MbtiType) -> Vec<String> {
    let code = t.code().to_lowercase();
    (0..TYPE_WORDS).map(|j| format!("{code}w{j}")).collect()
}

// friendly inside a community, cooler across
const WARM: [[f64; 3]; 3] = [[0.3, 0.3, 0.4], [0.1, 0.4, 0.5], [0.05, 0.25, 0.7]];
const COOL: [[f64; 3]; 3] = [[0.6, 0.3, 0.1], [0.4, 0.4, 0.2], [0.4, 0.4, 0.2]];

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticDataset {
    pub profiles: Vec<UserProfile>,
    pub events: Vec<InteractionEvent>,
    pub embeddings: Vec<(String, Vec<f64>)>,
    pub lexicon: String,
    /// Planted community of each user, in `profiles` order.
    pub communities: Vec<usize>,
}

pub fn generate_dataset(spec: &DatasetSpec) -> Result<SyntheticDataset, SynthError> {
    if spec.users_per_type == 0 || spec.communities == 0 || spec.dimension == 0 || spec.bot_every == 0 {
        return Err(SynthError::InvalidSpec("counts must be positive".into()));
    }
    if spec.min_messages == 0 || spec.min_messages > spec.max_messages {
        return Err(SynthError::InvalidSpec("message range must be nonempty and start at 1 or more".into()));
    }
    for p in [spec.p_in, spec.p_out] {
        if !(0.0..=1.0).contains(&p) {
            return Err(SynthError::InvalidSpec(format!("probability {p} outside [0, 1]")));
        }
    }
    let n = 16 * spec.users_per_type;
    if spec.communities > n {
        return Err(SynthError::InvalidSpec(format!("{} communities for {n} users", spec.communities)));
    }
    let ids: Vec<String> = (0..n).map(|i| node_id(i, n)).collect();
    let community: Vec<usize> = (0..n).map(|i| i * spec.communities / n).collect();
    let types: Vec<MbtiType> = (0..n).map(|i| MbtiType::ALL[i % 16]).collect();

    let mut profile_rng = stream_rng(spec.seed, u64::MAX);
    let profiles: Vec<UserProfile> = (0..n)
        .map(|i| {
            let bot = i % spec.bot_every == spec.bot_every - 1;
            let bot_score: f64 = if bot {
                profile_rng.random_range(3.0..5.0)
            } else {
                profile_rng.random_range(0.0..2.0)
            };
            UserProfile {
                user_id: ids[i].clone(),
                mbti: types[i],
                // short decimals keep the csv round trip exact
                bot_score: (bot_score * 1000.0).round() / 1000.0,
            }
        })
        .collect();

    let warm = TransitionMatrix::from_rows(WARM).expect("warm chain");
    let cool = TransitionMatrix::from_rows(COOL).expect("cool chain");
    let per_source: Vec<Vec<InteractionEvent>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(spec.seed, i as u64);
            let vocab = type_words(types[i]);
            let mut out = Vec::new();
            for j in (0..n).filter(|&j| j != i) {
                let same = community[i] == community[j];
                if !rng.random_bool(if same { spec.p_in } else { spec.p_out }) {
                    continue;
                }
                let chain = if same { &warm } else { &cool };
                let len = rng.random_range(spec.min_messages..=spec.max_messages);
                let seq = sample_chain_sequence(chain, len, rng.random());
                for (step, s) in seq.states.into_iter().enumerate() {
                    out.push(InteractionEvent {
                        source: ids[i].clone(),
                        target: ids[j].clone(),
                        timestamp: 1_600_000_000 + 3600 * step as i64 + (i * n + j) as i64 % 3600,
                        sentiment: s,
                        text: Some(message(&mut rng, &vocab, s)),
                    });
                }
            }
            out
        })
        .collect();
    let mut events: Vec<InteractionEvent> = per_source.into_iter().flatten().collect();
    events.sort_by(|a, b| (a.timestamp, &a.source, &a.target).cmp(&(b.timestamp, &b.source, &b.target)));

    Ok(SyntheticDataset {
        profiles,
        events,
        embeddings: embeddings(spec),
        lexicon: DEMO_LEXICON.to_string(),
        communities: community,
    })
}

fn message(rng: &mut ChaCha8Rng, vocab: &[String], s: Sentiment) -> String {
    let mut words: Vec<&str> = Vec::new();
    for _ in 0..4 {
        words.push(vocab.choose(rng).expect("type vocabulary"));
    }
    for _ in 0..4 {
        words.push(NOISE_WORDS.choose(rng).expect("noise words"));
    }
    let emotive = match s {
        Sentiment::Pos => &POSITIVE_WORDS[..],
        Sentiment::Neg => &NEGATIVE_WORDS[..],
        Sentiment::Neu => &[][..],
    };
    for _ in 0..rng.random_range(1..=2usize) {
        if let Some(w) = emotive.choose(rng) {
            words.push(w);
        }
    }
    words.shuffle(rng);
    words.join(" ")
}

/// Vectors for every generated token: type words cluster around a
/// per-type centroid, everything else is isotropic noise.
fn embeddings(spec: &DatasetSpec) -> Vec<(String, Vec<f64>)> {
    let mut rng = stream_rng(spec.seed, u64::MAX - 1);
    let d = spec.dimension;
    let mut gauss = |scale: f64| -> Vec<f64> { (0..d).map(|_| scale * rng.sample::<f64, _>(StandardNormal)).collect() };
    let mut out = Vec::new();
    for t in MbtiType::ALL {
        let centroid = gauss(1.0);
        for w in type_words(t) {
            let v: Vec<f64> = centroid.iter().zip(gauss(0.5)).map(|(c, e)| c + e).collect();
            out.push((w, v));
        }
    }
    for w in NOISE_WORDS.iter().chain(&POSITIVE_WORDS).chain(&NEGATIVE_WORDS) {
        out.push((w.to_string(), gauss(1.0)));
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetPaths {
    pub interactions: PathBuf,
    pub profiles: PathBuf,
    pub embeddings: PathBuf,
    pub lexicon: PathBuf,
    pub config: PathBuf,
}

/// Writes the dataset plus a matching `config.toml` (paths relative to it).
pub fn write_dataset(ds: &SyntheticDataset, spec: &DatasetSpec, dir: &Path) -> Result<DatasetPaths, SynthError> {
    fs::create_dir_all(dir)?;
    let paths = DatasetPaths {
        interactions: dir.join("interactions.jsonl"),
        profiles: dir.join("profiles.csv"),
        embeddings: dir.join("embeddings.txt"),
        lexicon: dir.join("lexicon.tsv"),
        config: dir.join("config.toml"),
    };
    write_interactions(std::io::BufWriter::new(fs::File::create(&paths.interactions)?), &ds.events)?;
    write_profiles(fs::File::create(&paths.profiles)?, &ds.profiles)?;
    let mut emb = String::new();
    for (tok, v) in &ds.embeddings {
        emb.push_str(tok);
        for x in v {
            let _ = write!(emb, " {x:.6}");
        }
        emb.push('\n');
    }
    fs::write(&paths.embeddings, emb)?;
    fs::write(&paths.lexicon, &ds.lexicon)?;
    let config = format!(
        "# generated by `persona synth`\n\
         interactions = \"interactions.jsonl\"\n\
         profiles = \"profiles.csv\"\n\
         embeddings = \"embeddings.txt\"\n\
         lexicon = \"lexicon.tsv\"\n\
         out = \"out\"\n\
         seed = {}\n\
         k = {}\n",
        spec.seed, spec.communities
    );
    fs::write(&paths.config, config)?;
    Ok(paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affinity::estimate_chain;

    fn spec(n: usize, k: usize, p_in: f64, p_out: f64, seed: u64) -> PlantedSpec {
        PlantedSpec {
            n,
            k,
            p_in,
            p_out,
            w_in: (0.5, 1.0),
            w_out: (0.5, 1.0),
            seed,
        }
    }

    #[test]
    fn complete_blocks() {
        let pg = planted_partition(&spec(9, 3, 1.0, 0.0, 1)).unwrap();
        assert_eq!(pg.graph.node_count(), 9);
        assert_eq!(pg.graph.edge_count(), 3 * 3 * 2);
        assert_eq!(pg.truth, [0, 0, 0, 1, 1, 1, 2, 2, 2]);
        for ((u, v), _) in pg.graph.edges() {
            let b = |id: &str| id[1..].parse::<usize>().unwrap() / 3;
            assert_eq!(b(u), b(v));
        }
    }

    #[test]
    fn blocks_differ_by_at_most_one() {
        let s = spec(10, 3, 1.0, 0.0, 0);
        let mut sizes = [0usize; 3];
        for i in 0..10 {
            sizes[s.block_of(i)] += 1;
        }
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn seeded_and_validated() {
        let a = planted_partition(&spec(40, 4, 0.3, 0.05, 9)).unwrap();
        let b = planted_partition(&spec(40, 4, 0.3, 0.05, 9)).unwrap();
        let c = planted_partition(&spec(40, 4, 0.3, 0.05, 10)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.graph, c.graph);
        assert!(planted_partition(&spec(4, 5, 0.3, 0.1, 0)).is_err());
        assert!(planted_partition(&spec(4, 2, 1.3, 0.1, 0)).is_err());
        let mut s = spec(4, 2, 0.3, 0.1, 0);
        s.w_in = (1.0, 0.5);
        assert!(planted_partition(&s).is_err());
    }

    #[test]
    fn empty_probabilities_give_empty_graph() {
        let pg = planted_partition(&spec(5, 1, 0.0, 0.0, 0)).unwrap();
        assert!(pg.graph.is_empty());
        assert_eq!(pg.isolated, 5);
    }

    #[test]
    fn absorbing_and_empty_sequences() {
        let p = TransitionMatrix::from_rows([[0.2, 0.3, 0.5], [0.1, 0.1, 0.8], [0.0, 0.0, 1.0]]).unwrap();
        let s = sample_chain_from(&p, Sentiment::Pos, 50, 3);
        assert!(s.states.iter().all(|x| *x == Sentiment::Pos));
        assert!(sample_chain_sequence(&p, 0, 3).is_empty());
        // the unique stationary law sits on POS
        assert_eq!(sample_chain_sequence(&p, 1, 3).states, [Sentiment::Pos]);
    }

    #[test]
    fn long_sequence_recovers_chain() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_chain(&mut rng);
        let s = sample_chain_sequence(&p, 100_000, 11);
        assert_eq!(s, sample_chain_sequence(&p, 100_000, 11));
        let est = estimate_chain(&s, 1.0).unwrap();
        assert!(est.max_abs_diff(&p) < 0.02);
    }

    #[test]
    fn dataset_is_seeded() {
        let small = DatasetSpec {
            users_per_type: 2,
            p_in: 0.5,
            ..DatasetSpec::default()
        };
        let a = generate_dataset(&small).unwrap();
        assert_eq!(a, generate_dataset(&small).unwrap());
        assert_eq!(a.profiles.len(), 32);
        assert!(a.events.windows(2).all(|w| w[0].timestamp <= w[1].timestamp));
        assert!(a.events.iter().all(|e| e.text.is_some()));
        let other = generate_dataset(&DatasetSpec { seed: 8, ..small }).unwrap();
        assert_ne!(a.events, other.events);
    }
}
