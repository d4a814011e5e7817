use std::fs;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use evidiff_core::diff::{filter_top, inference_diff, rank, DiffReport, FilterConfig};
use evidiff_core::inference::posterior_all;
use evidiff_core::layout::{LayeredLayout, LayoutConfig};
use evidiff_core::learning::{LearnConfig, SpaceDeclarations};
use evidiff_core::model::{parse_network, serialize_network};
use evidiff_core::view::{build_scene, render_svg, SceneOptions};
use evidiff_core::BayesianNetwork;
use serde::Serialize;
use thiserror::Error;

use crate::api::router;
use crate::session::{parse_evidence, LearnRequest, NamedEvidence, SessionError, SessionStore};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{what}: {message}")]
    Input { what: String, message: String },
    #[error(transparent)]
    Session(#[from] SessionError),
    #[error("server: {0}")]
    Serve(std::io::Error),
}

#[derive(Debug, Parser)]
#[command(name = "evidiff", version, about = "Inference diffs for discrete Bayesian networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn a network document from a CSV dataset.
    Learn(LearnArgs),
    /// Posteriors of every variable under one evidence set.
    Infer(InferArgs),
    /// Per-variable posterior pairs and relevances under two evidence sets.
    Diff(DiffArgs),
    /// Diff report plus ranking and the retained set at a threshold.
    Rank(RankArgs),
    /// Render the filtered scene to an SVG file.
    Render(RenderArgs),
    /// Start the HTTP service.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct LearnArgs {
    /// CSV file with a header row.
    pub data: PathBuf,
    /// JSON space declarations for some or all columns.
    #[arg(long)]
    pub spaces: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    pub max_indegree: usize,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_passes: usize,
    /// Learn from a random subset of this many rows.
    #[arg(long)]
    pub sample_n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output path; standard output when absent.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InferArgs {
    pub network: PathBuf,
    /// JSON object of variable name to value, or @file.
    #[arg(long, default_value = "{}")]
    pub evidence: String,
}

#[derive(Debug, Args)]
pub struct DiffArgs {
    pub network: PathBuf,
    /// E1 as a JSON object of variable name to value, or @file.
    #[arg(long, default_value = "{}")]
    pub e1: String,
    /// E2 as a JSON object of variable name to value, or @file.
    #[arg(long, default_value = "{}")]
    pub e2: String,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[command(flatten)]
    pub diff: DiffArgs,
    /// Percentage of eligible variables to retain.
    #[arg(long, default_value_t = 100.0)]
    pub threshold: f64,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    #[command(flatten)]
    pub rank: RankArgs,
    #[arg(long, short)]
    pub out: PathBuf,
    /// Also write the scene model as JSON.
    #[arg(long)]
    pub scene: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:8080")]
    pub addr: SocketAddr,
    /// Recompute diffs on every request.
    #[arg(long)]
    pub no_cache: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn load_network(path: &Path) -> Result<BayesianNetwork, CliError> {
    parse_network(&read(path)?).map_err(|e| CliError::Input {
        what: path.display().to_string(),
        message: e.to_string(),
    })
}

fn evidence_arg(flag: &str, arg: &str) -> Result<NamedEvidence, CliError> {
    let text = match arg.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => arg.to_owned(),
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input {
        what: format!("--{flag}"),
        message: e.to_string(),
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct PosteriorReport {
    evidence: NamedEvidence,
    posteriors: Vec<VariablePosterior>,
}

#[derive(Serialize)]
struct VariablePosterior {
    name: String,
    values: Vec<String>,
    masses: Vec<f64>,
}

fn learn(args: &LearnArgs) -> Result<String, CliError> {
    let spaces = args
        .spaces
        .as_deref()
        .map(|p| {
            serde_json::from_str::<SpaceDeclarations>(&read(p)?).map_err(|e| CliError::Input {
                what: p.display().to_string(),
                message: e.to_string(),
            })
        })
        .transpose()?;
    let request = LearnRequest {
        dataset: read(&args.data)?,
        config: LearnConfig {
            max_indegree: args.max_indegree,
            dirichlet_alpha: args.alpha,
            max_passes: args.max_passes,
        },
        spaces,
        sample_n: args.sample_n,
        seed: args.seed,
    };
    Ok(serialize_network(&request.run()?.network))
}

fn infer(args: &InferArgs) -> Result<String, CliError> {
    let net = load_network(&args.network)?;
    let named = evidence_arg("evidence", &args.evidence)?;
    let evidence = parse_evidence(&net, &named)?;
    let set = posterior_all(&net, &evidence).map_err(|e| CliError::Input {
        what: "--evidence".into(),
        message: e.to_string(),
    })?;
    let report = PosteriorReport {
        evidence: named,
        posteriors: net
            .variables()
            .iter()
            .zip(&set.posteriors)
            .map(|(v, d)| VariablePosterior {
                name: v.name.clone(),
                values: v.space.values.clone(),
                masses: d.masses().to_vec(),
            })
            .collect(),
    };
    Ok(to_json(&report))
}

struct Prepared {
    net: BayesianNetwork,
    diff: evidiff_core::diff::InferenceDiff,
}

fn prepare(args: &DiffArgs) -> Result<Prepared, CliError> {
    let net = load_network(&args.network)?;
    let e1 = parse_evidence(&net, &evidence_arg("e1", &args.e1)?)?;
    let e2 = parse_evidence(&net, &evidence_arg("e2", &args.e2)?)?;
    let diff = inference_diff(&net, &e1, &e2).map_err(SessionError::from)?;
    Ok(Prepared { net, diff })
}

fn diff(args: &DiffArgs) -> Result<String, CliError> {
    let p = prepare(args)?;
    Ok(to_json(&DiffReport::new(&p.net, &p.diff)))
}

fn threshold(percent: f64) -> Result<FilterConfig, CliError> {
    FilterConfig::new(percent).map_err(|e| CliError::Input {
        what: "--threshold".into(),
        message: e.to_string(),
    })
}

fn rank_report(args: &RankArgs) -> Result<String, CliError> {
    let config = threshold(args.threshold)?;
    let p = prepare(&args.diff)?;
    let ranking = rank(&p.diff);
    let relevant = filter_top(&ranking, &config);
    Ok(to_json(
        &DiffReport::new(&p.net, &p.diff).with_filter(&p.net, &ranking, &relevant, &config),
    ))
}

fn render(args: &RenderArgs) -> Result<(), CliError> {
    let config = threshold(args.rank.threshold)?;
    let p = prepare(&args.rank.diff)?;
    let ranking = rank(&p.diff);
    let layout = LayeredLayout::new(&p.net, LayoutConfig::default()).map_err(SessionError::from)?;
    let scene = build_scene(&p.net, &p.diff, &ranking, &config, &layout, &SceneOptions::default())
        .map_err(SessionError::from)?;
    write(&args.out, &render_svg(&scene))?;
    if let Some(path) = &args.scene {
        write(path, &to_json(&scene))?;
    }
    Ok(())
}

fn serve(args: &ServeArgs) -> Result<(), CliError> {
    let store = Arc::new(SessionStore::new(!args.no_cache));
    let runtime = tokio::runtime::Runtime::new().map_err(CliError::Serve)?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(args.addr).await.map_err(CliError::Serve)?;
        eprintln!("listening on http://{}", args.addr);
        axum::serve(listener, router(store)).await.map_err(CliError::Serve)
    })
}

/// Runs one command, writing reports to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match &cli.command {
        Command::Learn(args) => {
            let text = learn(args)?;
            if let Some(path) = &args.out {
                return write(path, &text);
            }
            text
        }
        Command::Infer(args) => infer(args)?,
        Command::Diff(args) => diff(args)?,
        Command::Rank(args) => rank_report(args)?,
        Command::Render(args) => return render(args),
        Command::Serve(args) => return serve(args),
    };
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}
