use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use persona_core::config::{Overrides, PipelineConfig};
use persona_core::pipeline::{assemble_report, run_pipeline, run_stages, PipelineError, Stage};
use persona_core::synth::{generate_dataset, write_dataset, DatasetSpec};

#[derive(Parser)]
#[command(name = "persona", version, about = "Personality-aware affinity analysis of mention networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Flat TOML config file.
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's `seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's `out` directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Optional config; only its `seed` and `out` are used.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for the generated inputs and config.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DatasetSpec::default().users_per_type)]
    users_per_type: usize,
    #[arg(long, default_value_t = DatasetSpec::default().communities)]
    communities: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Load profiles and interactions, drop bots.
    Ingest(Common),
    /// Score every directed user pair.
    Affinity(Common),
    /// Build and export the affinity graph.
    Graph(Common),
    /// Cluster the affinity graph (MCL and/or K-destinations).
    Cluster(Common),
    /// Most-linked type per cluster.
    Influence(Common),
    /// Embedding similarity between per-type corpora.
    Semsim(Common),
    /// Emotion-lexicon correlations between types.
    Lexcorr(Common),
    /// Cross-validated type prediction from text.
    Classify(Common),
    /// Assemble report.json from the stage outputs already written.
    Report(Common),
    /// Every stage, then the report.
    Run(Common),
    /// Generate a synthetic dataset with a matching config.
    Synth(SynthArgs),
}

fn load(c: &Common) -> Result<PipelineConfig, PipelineError> {
    let overrides = Overrides {
        seed: c.seed,
        out: c.out.clone(),
    };
    Ok(PipelineConfig::load(&c.config, &overrides)?)
}

fn synth(a: &SynthArgs) -> Result<(), PipelineError> {
    let (seed, out) = match &a.config {
        Some(path) => {
            let cfg = load(&Common {
                config: path.clone(),
                seed: a.seed,
                out: a.out.clone(),
            })?;
            (cfg.seed, cfg.out_dir())
        }
        None => (
            a.seed.unwrap_or(DatasetSpec::default().seed),
            a.out.clone().unwrap_or_else(|| PathBuf::from("synthetic")),
        ),
    };
    let spec = DatasetSpec {
        users_per_type: a.users_per_type,
        communities: a.communities,
        seed,
        ..DatasetSpec::default()
    };
    let internal = |e: &dyn std::fmt::Display| PipelineError::Stage {
        stage: "synth",
        kind: persona_core::pipeline::FailureKind::Validation,
        message: e.to_string(),
    };
    let ds = generate_dataset(&spec).map_err(|e| internal(&e))?;
    let paths = write_dataset(&ds, &spec, &out).map_err(|e| internal(&e))?;
    println!(
        "wrote {} profiles and {} interactions; config at {}",
        ds.profiles.len(),
        ds.events.len(),
        paths.config.display()
    );
    Ok(())
}

fn execute(cli: &Cli) -> Result<(), PipelineError> {
    let stage = |c: &Common, s: Stage| -> Result<(), PipelineError> {
        let cfg = load(c)?;
        let ran = run_stages(&cfg, &[s])?;
        let names: Vec<&str> = ran.iter().map(|s| s.name()).collect();
        println!("ran {} into {}", names.join(", "), cfg.out_dir().display());
        Ok(())
    };
    match &cli.command {
        Command::Ingest(c) => stage(c, Stage::Ingest),
        Command::Affinity(c) => stage(c, Stage::Affinity),
        Command::Graph(c) => stage(c, Stage::Graph),
        Command::Cluster(c) => stage(c, Stage::Cluster),
        Command::Influence(c) => stage(c, Stage::Influence),
        Command::Semsim(c) => stage(c, Stage::Semsim),
        Command::Lexcorr(c) => stage(c, Stage::Lexcorr),
        Command::Classify(c) => stage(c, Stage::Classify),
        Command::Report(c) => {
            let cfg = load(c)?;
            assemble_report(&cfg)?;
            println!("{}", cfg.out_dir().join("report.json").display());
            Ok(())
        }
        Command::Run(c) => {
            let cfg = load(c)?;
            run_pipeline(&cfg)?;
            println!("{}", cfg.out_dir().join("report.json").display());
            Ok(())
        }
        Command::Synth(a) => synth(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
