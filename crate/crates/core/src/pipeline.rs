//! Stage orchestration: ingest → affinity → graph → {cluster → influence},
//! with semsim, lexcorr and classify branching off ingest.
//!
//! Every stage writes `<stage>.json` (plus tables and exports) into the output
//! directory through a temp-file rename, so a failing stage never leaves a
//! half-written file behind and never touches earlier outputs.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::affinity::{build_pair_sequences, score_pairs, AffinityParams};
use crate::classify::{cross_validate, render_f1_table, ClassifierSpec, ClassifyError, CvReport, LabeledCorpus};
use crate::cluster::{
    clustering_error, k_destinations, labels_from_clustering, mcl, nmi, ClusterError, Clustering, KDestParams, MclParams,
};
use crate::config::{ClassifierChoice, ClusterChoice, ConfigError, PipelineConfig};
use crate::graph::{build_affinity_graph, export_graph, type_pair_percentages, AffinityGraph, BuildDiagnostics, ExportFormat, GraphError, TypePairTable};
use crate::influence::{influential_types, InfluenceReport};
use crate::ingest::{detect_self_identification, filter_bots, load_interactions, load_profiles, InteractionEvent, UserProfile};
use crate::lexfeat::{load_lexicon, type_emotion_table, CorrelationTables, ElasticNetParams, LexError};
use crate::mbti::MbtiType;
use crate::semsim::{cosine, doc_vector, load_embeddings, type_similarity_matrix, SemsimError};
use crate::table::TypeTable;
use crate::text::tokenize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    Affinity,
    Graph,
    Cluster,
    Influence,
    Semsim,
    Lexcorr,
    Classify,
}

impl Stage {
    pub const ALL: [Stage; 8] = [
        Stage::Ingest,
        Stage::Affinity,
        Stage::Graph,
        Stage::Cluster,
        Stage::Influence,
        Stage::Semsim,
        Stage::Lexcorr,
        Stage::Classify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Affinity => "affinity",
            Stage::Graph => "graph",
            Stage::Cluster => "cluster",
            Stage::Influence => "influence",
            Stage::Semsim => "semsim",
            Stage::Lexcorr => "lexcorr",
            Stage::Classify => "classify",
        }
    }

    pub fn prerequisite(self) -> Option<Stage> {
        match self {
            Stage::Ingest => None,
            Stage::Affinity | Stage::Semsim | Stage::Lexcorr | Stage::Classify => Some(Stage::Ingest),
            Stage::Graph => Some(Stage::Affinity),
            Stage::Cluster => Some(Stage::Graph),
            Stage::Influence => Some(Stage::Cluster),
        }
    }

    /// Config keys naming the input files this stage reads.
    pub fn inputs(self) -> &'static [&'static str] {
        match self {
            Stage::Ingest => &["interactions", "profiles"],
            Stage::Semsim => &["embeddings"],
            Stage::Lexcorr => &["lexicon"],
            _ => &[],
        }
    }
}

/// Whether a failure is the input's fault (exit 1) or ours (exit 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Validation,
    Internal,
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("stage {stage}: {message}")]
    Stage {
        stage: &'static str,
        kind: FailureKind,
        message: String,
    },
    #[error("writing {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl PipelineError {
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 1,
            PipelineError::Stage {
                kind: FailureKind::Validation,
                ..
            } => 1,
            _ => 2,
        }
    }
}

fn fail(stage: Stage, kind: FailureKind, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Stage {
        stage: stage.name(),
        kind,
        message: e.to_string(),
    }
}

/// Writes through a sibling temp file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<(), PipelineError> {
    let err = |source| PipelineError::Write {
        path: path.to_path_buf(),
        source,
    };
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents).map_err(err)?;
    fs::rename(&tmp, path).map_err(err)
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), PipelineError> {
    let mut text = serde_json::to_string_pretty(value).expect("stage outputs serialize");
    text.push('\n');
    write_atomic(&dir.join(name), text.as_bytes())
}

fn open(cfg: &PipelineConfig, p: &Path, stage: Stage) -> Result<BufReader<fs::File>, PipelineError> {
    fs::File::open(cfg.resolve(p))
        .map(BufReader::new)
        .map_err(|e| fail(stage, FailureKind::Validation, format!("{}: {e}", p.display())))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IngestSummary {
    pub profiles_total: usize,
    pub profiles_retained: usize,
    pub bots_removed: usize,
    pub interaction_lines: usize,
    pub events_loaded: usize,
    pub events_rejected: usize,
    pub rejected_samples: Vec<String>,
    /// Events whose endpoints both survive bot filtering.
    pub events_retained: usize,
    pub users_with_text: usize,
    pub self_identified: usize,
    pub self_identified_agreeing: usize,
}

/// Ingested data shared by the downstream stages.
#[derive(Debug, Clone)]
pub struct Ingested {
    pub profiles: Vec<UserProfile>,
    pub events: Vec<InteractionEvent>,
    /// Each user's authored texts, joined in time order.
    pub documents: BTreeMap<String, String>,
    pub summary: IngestSummary,
}

impl Ingested {
    fn typed_documents(&self) -> Vec<(MbtiType, &str)> {
        self.profiles
            .iter()
            .filter_map(|p| self.documents.get(&p.user_id).map(|d| (p.mbti, d.as_str())))
            .collect()
    }
}

pub fn stage_ingest(cfg: &PipelineConfig) -> Result<Ingested, PipelineError> {
    let st = Stage::Ingest;
    let all_profiles = load_profiles(open(cfg, &cfg.profiles, st)?).map_err(|e| fail(st, FailureKind::Validation, e))?;
    let log = load_interactions(open(cfg, &cfg.interactions, st)?).map_err(|e| fail(st, FailureKind::Validation, e))?;
    let profiles = filter_bots(&all_profiles, cfg.bot_threshold);
    let kept: BTreeSet<&str> = profiles.iter().map(|p| p.user_id.as_str()).collect();
    let events: Vec<InteractionEvent> = log
        .events
        .iter()
        .filter(|e| kept.contains(e.source.as_str()) && kept.contains(e.target.as_str()))
        .cloned()
        .collect();
    let mut documents: BTreeMap<String, String> = BTreeMap::new();
    for e in &events {
        if let Some(t) = &e.text {
            let d = documents.entry(e.source.clone()).or_default();
            if !d.is_empty() {
                d.push('\n');
            }
            d.push_str(t);
        }
    }
    let mut self_identified = 0;
    let mut agreeing = 0;
    for p in &profiles {
        if let Some(t) = documents.get(&p.user_id).and_then(|d| detect_self_identification(d)) {
            self_identified += 1;
            agreeing += usize::from(t == p.mbti);
        }
    }
    let summary = IngestSummary {
        profiles_total: all_profiles.len(),
        profiles_retained: profiles.len(),
        bots_removed: all_profiles.len() - profiles.len(),
        interaction_lines: log.total_lines,
        events_loaded: log.events.len(),
        events_rejected: log.rejected.len(),
        rejected_samples: log.rejected.iter().take(5).map(|e| e.to_string()).collect(),
        events_retained: events.len(),
        users_with_text: documents.len(),
        self_identified,
        self_identified_agreeing: agreeing,
    };
    Ok(Ingested {
        profiles,
        events,
        documents,
        summary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AffinitySummary {
    pub params: AffinityParams,
    pub pairs_scored: usize,
    pub min_score: f64,
    pub max_score: f64,
    pub mean_score: f64,
}

pub fn stage_affinity(
    cfg: &PipelineConfig,
    data: &Ingested,
) -> Result<(BTreeMap<(String, String), crate::affinity::AffinityScore>, AffinitySummary, String), PipelineError> {
    let params = AffinityParams {
        alpha: cfg.alpha,
        kappa: cfg.kappa,
    };
    let scores = score_pairs(&data.events, params).map_err(|e| fail(Stage::Affinity, FailureKind::Internal, e))?;
    let lengths: BTreeMap<_, usize> = build_pair_sequences(&data.events).into_iter().map(|(k, s)| (k, s.len())).collect();
    let values: Vec<f64> = scores.values().map(|s| s.value()).collect();
    let summary = AffinitySummary {
        params,
        pairs_scored: values.len(),
        min_score: values.iter().copied().reduce(f64::min).unwrap_or(0.0),
        max_score: values.iter().copied().reduce(f64::max).unwrap_or(0.0),
        mean_score: if values.is_empty() { 0.0 } else { values.iter().sum::<f64>() / values.len() as f64 },
    };
    let mut tsv = String::from("source\ttarget\tlength\tscore\n");
    for ((u, v), s) in &scores {
        tsv.push_str(&format!("{u}\t{v}\t{}\t{}\n", lengths[&(u.clone(), v.clone())], s.value()));
    }
    Ok((scores, summary, tsv))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub threshold: f64,
    pub diagnostics: BuildDiagnostics,
    pub type_pair_percentages: TypePairTable,
}

fn graph_kind(e: &GraphError) -> FailureKind {
    match e {
        GraphError::EmptyGraph => FailureKind::Validation,
        _ => FailureKind::Internal,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusterResult {
    pub method: String,
    pub clusters: usize,
    pub sizes: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    pub overlapping: bool,
    /// Agreement with the personality-type labelling of the nodes.
    pub nmi_vs_type: f64,
    pub error_vs_type: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub objective_trace: Vec<f64>,
}

fn cluster_kind(e: &ClusterError) -> FailureKind {
    match e {
        ClusterError::EmptyGraph | ClusterError::KOutOfRange { .. } => FailureKind::Validation,
        _ => FailureKind::Internal,
    }
}

/// Runs the configured clusterers; keys are `mcl` and `kdest`.
pub fn stage_cluster(cfg: &PipelineConfig, g: &AffinityGraph) -> Result<BTreeMap<&'static str, Clustering>, PipelineError> {
    let st = Stage::Cluster;
    let mut out = BTreeMap::new();
    if matches!(cfg.cluster_method, ClusterChoice::Mcl | ClusterChoice::Both) {
        let params = MclParams {
            expansion: cfg.expansion,
            inflation: cfg.inflation,
            prune: cfg.prune,
        };
        out.insert("mcl", mcl(g, params).map_err(|e| fail(st, cluster_kind(&e), e))?);
    }
    if matches!(cfg.cluster_method, ClusterChoice::Kdest | ClusterChoice::Both) {
        let params = KDestParams {
            k: cfg.k,
            max_iter: cfg.kdest_max_iter,
            teleport: cfg.teleport,
        };
        out.insert("kdest", k_destinations(g, params).map_err(|e| fail(st, cluster_kind(&e), e))?);
    }
    Ok(out)
}

fn summarize_clustering(g: &AffinityGraph, c: &Clustering) -> Result<ClusterResult, PipelineError> {
    let labels = labels_from_clustering(c);
    let truth: Vec<MbtiType> = c.node_ids.iter().map(|id| g.label(id).expect("clustered node in graph")).collect();
    let internal = |e: ClusterError| fail(Stage::Cluster, FailureKind::Internal, e);
    Ok(ClusterResult {
        method: c.method.label(),
        clusters: c.len(),
        sizes: c.clusters.iter().map(|cl| cl.len()).collect(),
        iterations: c.iterations,
        converged: c.converged,
        overlapping: c.overlapping,
        nmi_vs_type: nmi(&labels, &truth).map_err(internal)?,
        error_vs_type: clustering_error(&labels, &truth).map_err(internal)?,
        objective_trace: c.objective_trace.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SemsimSummary {
    pub dimension: usize,
    pub vocabulary: usize,
    pub in_vocab_fraction: BTreeMap<MbtiType, f64>,
    /// Every type's document vector compared with itself.
    pub self_similarity: BTreeMap<MbtiType, f64>,
    pub similarity: TypeTable,
}

fn semsim_kind(e: &SemsimError) -> FailureKind {
    match e {
        SemsimError::LengthMismatch(..) => FailureKind::Internal,
        _ => FailureKind::Validation,
    }
}

pub fn stage_semsim(cfg: &PipelineConfig, data: &Ingested) -> Result<SemsimSummary, PipelineError> {
    let st = Stage::Semsim;
    let table = load_embeddings(open(cfg, &cfg.embeddings, st)?).map_err(|e| fail(st, semsim_kind(&e), e))?;
    let mut corpora: BTreeMap<MbtiType, String> = BTreeMap::new();
    for (t, doc) in data.typed_documents() {
        let c = corpora.entry(t).or_default();
        if !c.is_empty() {
            c.push('\n');
        }
        c.push_str(doc);
    }
    let similarity = type_similarity_matrix(&corpora, &table).map_err(|e| fail(st, semsim_kind(&e), e))?;
    let mut in_vocab_fraction = BTreeMap::new();
    let mut self_similarity = BTreeMap::new();
    for (t, doc) in &corpora {
        let v = doc_vector(&tokenize(doc), &table);
        in_vocab_fraction.insert(*t, v.in_vocab_fraction);
        let own = cosine(&v.values, &v.values).map_err(|e| fail(st, semsim_kind(&e), e))?;
        self_similarity.insert(*t, own);
    }
    Ok(SemsimSummary {
        dimension: table.dimension(),
        vocabulary: table.len(),
        in_vocab_fraction,
        self_similarity,
        similarity,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LexcorrSummary {
    pub params: ElasticNetParams,
    pub top_n: usize,
    pub tables: Vec<CorrelationTables>,
}

fn lex_kind(e: &LexError) -> FailureKind {
    match e {
        LexError::MalformedPattern { .. } | LexError::MalformedLine { .. } | LexError::UnknownCategory(_) | LexError::Io(_) => {
            FailureKind::Validation
        }
        _ => FailureKind::Internal,
    }
}

pub fn stage_lexcorr(cfg: &PipelineConfig, data: &Ingested) -> Result<LexcorrSummary, PipelineError> {
    let st = Stage::Lexcorr;
    let lex = load_lexicon(open(cfg, &cfg.lexicon, st)?).map_err(|e| fail(st, lex_kind(&e), e))?;
    let mut corpora: BTreeMap<MbtiType, Vec<String>> = BTreeMap::new();
    for (t, doc) in data.typed_documents() {
        corpora.entry(t).or_default().push(doc.to_string());
    }
    let params = ElasticNetParams {
        lambda: cfg.lambda,
        mix: cfg.mix,
        ..ElasticNetParams::default()
    };
    let tables = cfg
        .emotion_targets()
        .iter()
        .map(|target| type_emotion_table(&corpora, &lex, target, cfg.top_n, params).map_err(|e| fail(st, lex_kind(&e), e)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(LexcorrSummary {
        params,
        top_n: cfg.top_n,
        tables,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifySummary {
    pub documents: usize,
    pub reports: Vec<CvReport>,
}

fn classify_kind(e: &ClassifyError) -> FailureKind {
    match e {
        ClassifyError::InvalidParameter(_) | ClassifyError::LengthMismatch(..) => FailureKind::Internal,
        _ => FailureKind::Validation,
    }
}

pub fn stage_classify(cfg: &PipelineConfig, data: &Ingested) -> Result<ClassifySummary, PipelineError> {
    let corpus = LabeledCorpus {
        documents: data.typed_documents().into_iter().map(|(t, d)| (d.to_string(), t)).collect(),
    };
    let mut specs = Vec::new();
    if matches!(cfg.classifier, ClassifierChoice::Nb | ClassifierChoice::Both) {
        specs.push(ClassifierSpec::NaiveBayes);
    }
    if matches!(cfg.classifier, ClassifierChoice::Lr | ClassifierChoice::Both) {
        specs.push(ClassifierSpec::LogisticRegression { ridge: cfg.ridge });
    }
    let reports = specs
        .into_iter()
        .map(|s| cross_validate(&corpus, s, cfg.folds, cfg.seed).map_err(|e| fail(Stage::Classify, classify_kind(&e), e)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ClassifySummary {
        documents: corpus.documents.len(),
        reports,
    })
}

/// Requested stages plus everything they depend on.
pub fn with_prerequisites(stages: &[Stage]) -> BTreeSet<Stage> {
    let mut out = BTreeSet::new();
    for &s in stages {
        let mut cur = Some(s);
        while let Some(c) = cur {
            out.insert(c);
            cur = c.prerequisite();
        }
    }
    out
}

/// Runs `stages` (and their prerequisites), writing each stage's outputs into
/// the configured output directory. Returns the stages that ran.
pub fn run_stages(cfg: &PipelineConfig, stages: &[Stage]) -> Result<BTreeSet<Stage>, PipelineError> {
    let plan = with_prerequisites(stages);
    for s in &plan {
        cfg.require_inputs(s.inputs())?;
    }
    let out = cfg.out_dir();
    fs::create_dir_all(&out).map_err(|source| PipelineError::Write {
        path: out.clone(),
        source,
    })?;
    let data = stage_ingest(cfg)?;
    write_json(&out, "ingest.json", &data.summary)?;

    let want = |s: Stage| plan.contains(&s);
    let graph_branch = || -> Result<(), PipelineError> {
        if !want(Stage::Affinity) {
            return Ok(());
        }
        let (scores, summary, tsv) = stage_affinity(cfg, &data)?;
        write_atomic(&out.join("affinity_scores.tsv"), tsv.as_bytes())?;
        write_json(&out, "affinity.json", &summary)?;
        if !want(Stage::Graph) {
            return Ok(());
        }
        let (g, diagnostics) =
            build_affinity_graph(&scores, &data.profiles, cfg.edge_threshold).map_err(|e| fail(Stage::Graph, graph_kind(&e), e))?;
        let pairs = type_pair_percentages(&g).map_err(|e| fail(Stage::Graph, graph_kind(&e), e))?;
        write_atomic(&out.join("graph.tsv"), export_graph(&g, ExportFormat::EdgeTsv).as_bytes())?;
        write_atomic(&out.join("graph.dot"), export_graph(&g, ExportFormat::Dot).as_bytes())?;
        write_atomic(&out.join("type_pairs.tsv"), pairs.to_tsv().as_bytes())?;
        let summary = GraphSummary {
            nodes: g.node_count(),
            edges: g.edge_count(),
            threshold: g.threshold(),
            diagnostics,
            type_pair_percentages: pairs,
        };
        write_json(&out, "graph.json", &summary)?;
        if !want(Stage::Cluster) {
            return Ok(());
        }
        let clusterings = stage_cluster(cfg, &g)?;
        let mut results = BTreeMap::new();
        for (key, c) in &clusterings {
            write_atomic(&out.join(format!("clusters_{key}.tsv")), c.to_tsv().as_bytes())?;
            results.insert(*key, summarize_clustering(&g, c)?);
        }
        write_json(&out, "cluster.json", &results)?;
        if !want(Stage::Influence) {
            return Ok(());
        }
        let mut influence: BTreeMap<&str, InfluenceReport> = BTreeMap::new();
        for (key, c) in &clusterings {
            influence.insert(key, influential_types(&g, c).map_err(|e| fail(Stage::Influence, FailureKind::Internal, e))?);
        }
        write_json(&out, "influence.json", &influence)
    };
    let semsim_branch = || -> Result<(), PipelineError> {
        if !want(Stage::Semsim) {
            return Ok(());
        }
        let s = stage_semsim(cfg, &data)?;
        write_atomic(&out.join("semsim.tsv"), s.similarity.to_tsv(3).as_bytes())?;
        write_json(&out, "semsim.json", &s)
    };
    let lexcorr_branch = || -> Result<(), PipelineError> {
        if !want(Stage::Lexcorr) {
            return Ok(());
        }
        let s = stage_lexcorr(cfg, &data)?;
        for t in &s.tables {
            write_atomic(&out.join(format!("lexcorr_{}.tsv", t.target)), t.r.to_tsv(3).as_bytes())?;
            write_atomic(&out.join(format!("lexcorr_{}_p.tsv", t.target)), t.p_value.to_tsv(4).as_bytes())?;
        }
        write_json(&out, "lexcorr.json", &s)
    };
    let classify_branch = || -> Result<(), PipelineError> {
        if !want(Stage::Classify) {
            return Ok(());
        }
        let s = stage_classify(cfg, &data)?;
        write_atomic(&out.join("classify_f1.tsv"), render_f1_table(&s.reports).as_bytes())?;
        write_json(&out, "classify.json", &s)
    };

    let (a, (b, (c, d))) = rayon::join(graph_branch, || {
        rayon::join(semsim_branch, || rayon::join(lexcorr_branch, classify_branch))
    });
    // report the first failure in stage order
    a.and(b).and(c).and(d)?;
    Ok(plan)
}

/// Collects every stage output present in the output directory into
/// `report.json`, together with the resolved configuration.
pub fn assemble_report(cfg: &PipelineConfig) -> Result<Value, PipelineError> {
    let out = cfg.out_dir();
    let mut stages = serde_json::Map::new();
    for s in Stage::ALL {
        let path = out.join(format!("{}.json", s.name()));
        let Ok(text) = fs::read_to_string(&path) else {
            continue;
        };
        let v: Value = serde_json::from_str(&text).map_err(|e| PipelineError::Stage {
            stage: "report",
            kind: FailureKind::Internal,
            message: format!("{}: {e}", path.display()),
        })?;
        stages.insert(s.name().to_string(), v);
    }
    let mut report = serde_json::Map::new();
    report.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
    report.insert("stages".into(), Value::Object(stages));
    let report = Value::Object(report);
    write_json(&out, "report.json", &report)?;
    Ok(report)
}

/// Every stage, then the report.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Value, PipelineError> {
    run_stages(cfg, &Stage::ALL)?;
    assemble_report(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prerequisites_close_over_dependencies() {
        let p = with_prerequisites(&[Stage::Influence]);
        assert_eq!(
            p.into_iter().collect::<Vec<_>>(),
            [Stage::Ingest, Stage::Affinity, Stage::Graph, Stage::Cluster, Stage::Influence]
        );
        let p = with_prerequisites(&[Stage::Semsim]);
        assert_eq!(p.into_iter().collect::<Vec<_>>(), [Stage::Ingest, Stage::Semsim]);
    }

    #[test]
    fn atomic_write_leaves_no_temp_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.json");
        write_atomic(&path, b"{}").unwrap();
        write_atomic(&path, b"[]").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "[]");
        assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
    }

    #[test]
    fn exit_codes() {
        let cfg = PipelineError::Config(ConfigError::MissingKey { key: "lexicon".into() });
        assert_eq!(cfg.exit_code(), 1);
        assert_eq!(fail(Stage::Cluster, FailureKind::Internal, "x").exit_code(), 2);
        assert_eq!(fail(Stage::Ingest, FailureKind::Validation, "x").exit_code(), 1);
    }
}
