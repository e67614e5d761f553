//! Command-line pipeline for overlapping community detection in temporal
//! text networks: validate, project, fit, extract communities, evaluate,
//! analyze, select K, and sample synthetic networks.
//!
//! All file formats are tab-separated text; see the repository README. An
//! optional `--config` file in flat `key=value` form can supply any flag,
//! with command-line flags taking precedence. Usage problems exit 2, data
//! problems exit 1.

use std::collections::HashMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use magic::analytics;
use magic::cover::CommunityCover;
use magic::graph::{Directedness, NodeRecord, TemporalTextNetwork, Temporality};
use magic::io::{
    load_model, parse_communities, parse_network, parse_nodes_file, save_model,
    write_atomic, write_communities, write_network, NetworkFileSet,
};
use magic::metrics;
use magic::model::{
    choose_communities, community_thresholds, extract_cover, fit, sample_network, FitConfig,
    FittedModel, LineSearchParams, Mode,
};
use magic::projection::{project, ProjectedNetwork, ProjectionConfig};

#[derive(Parser)]
#[command(
    name = "magic",
    version,
    about = "Overlapping community detection in temporal text networks"
)]
struct Cli {
    /// Config file with key=value lines; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a network's files and report whether it is natural
    Validate(ValidateArgs),
    /// Materialize word nodes and word->document edges
    Project(ProjectArgs),
    /// Fit the model to a network
    Fit(FitArgs),
    /// Threshold a fitted model into hard community memberships
    Communities(CommunitiesArgs),
    /// Score detected communities against ground truth
    Eval(EvalArgs),
    /// Community-interaction and text-similarity analytics
    Analyze(AnalyzeArgs),
    /// Pick the community count by link-prediction holdout
    ChooseK(ChooseKArgs),
    /// Sample a network from a saved model
    Sample(SampleArgs),
}

#[derive(Args, Clone)]
struct NetworkOpts {
    /// Nodes file: id<TAB>timestamp[<TAB>space-joined tokens]
    #[arg(long)]
    nodes: Option<PathBuf>,
    /// Edges file: src<TAB>dst
    #[arg(long)]
    edges: Option<PathBuf>,
    /// Treat edges as unordered pairs
    #[arg(long)]
    undirected: bool,
}

#[derive(Args, Clone)]
struct ProjectionOpts {
    /// Keep original case when tokenizing
    #[arg(long)]
    no_lowercase: bool,
    /// File with one stopword per line (default: builtin English list)
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Minimum document frequency for a word node
    #[arg(long)]
    min_df: Option<usize>,
    /// Maximum document frequency as a fraction of documents
    #[arg(long)]
    max_df_ratio: Option<f64>,
}

#[derive(Args, Clone)]
struct FitOpts {
    /// Number of communities
    #[arg(long)]
    k: Option<usize>,
    /// Model variant: all | net | raw
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    max_sweeps: Option<usize>,
    /// Relative log-likelihood improvement below which a fit stops
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    initial_step: Option<f64>,
    #[arg(long)]
    shrink: Option<f64>,
    #[arg(long)]
    armijo: Option<f64>,
    #[arg(long)]
    max_backtracks: Option<usize>,
    #[arg(long)]
    epsilon_floor: Option<f64>,
    /// Reject complex networks instead of dropping violating edges
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    network: NetworkOpts,
    /// Optional ground-truth communities to validate against the nodes
    #[arg(long)]
    communities: Option<PathBuf>,
}

#[derive(Args)]
struct ProjectArgs {
    #[command(flatten)]
    network: NetworkOpts,
    #[command(flatten)]
    projection: ProjectionOpts,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    network: NetworkOpts,
    #[command(flatten)]
    fit: FitOpts,
    #[command(flatten)]
    projection: ProjectionOpts,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct CommunitiesArgs {
    #[command(flatten)]
    network: NetworkOpts,
    #[command(flatten)]
    projection: ProjectionOpts,
    /// Fitted model file
    #[arg(long)]
    model: Option<PathBuf>,
    /// How many top words to list per community (all mode)
    #[arg(long)]
    top_words: Option<usize>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    network: NetworkOpts,
    /// Detected communities file
    #[arg(long)]
    detected: Option<PathBuf>,
    /// Ground-truth communities file
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    network: NetworkOpts,
    /// Ground-truth communities file
    #[arg(long)]
    truth: Option<PathBuf>,
    /// Pair-sampling cap per community for the text study
    #[arg(long)]
    max_pairs: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ChooseKArgs {
    #[command(flatten)]
    network: NetworkOpts,
    #[command(flatten)]
    fit: FitOpts,
    /// Comma-separated candidate community counts, e.g. 2,3,6
    #[arg(long)]
    candidates: Option<String>,
    /// Fraction of edges reserved for validation
    #[arg(long)]
    holdout: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    /// Fitted model file to sample from
    #[arg(long)]
    model: Option<PathBuf>,
    /// Nodes file supplying ids and timestamps (must match the model size)
    #[arg(long)]
    nodes: Option<PathBuf>,
    /// Generate this many synthetic nodes instead (timestamps 1..=n)
    #[arg(long)]
    num_nodes: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Data(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError::Data(e.into())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Key=value settings loaded from `--config`; lookups parse on demand.
struct Settings(HashMap<String, String>);

impl Settings {
    fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let contents = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            for (number, line) in contents.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| {
                    usage(format!(
                        "{}:{}: expected key=value",
                        path.display(),
                        number + 1
                    ))
                })?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Settings(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| usage(format!("config key {key}: {e}"))),
        }
    }

    fn get_flag(&self, key: &str) -> Result<bool, CliError> {
        match self.0.get(key).map(String::as_str) {
            None => Ok(false),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(other) => Err(usage(format!(
                "config key {key}: expected true/false, found {other:?}"
            ))),
        }
    }
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| usage(format!("missing required option --{flag}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let settings = match Settings::load(cli.config.as_deref()) {
        Ok(s) => s,
        Err(e) => return report(e),
    };
    let result = match cli.command {
        Command::Validate(args) => run_validate(args, &settings),
        Command::Project(args) => run_project(args, &settings),
        Command::Fit(args) => run_fit(args, &settings),
        Command::Communities(args) => run_communities(args, &settings),
        Command::Eval(args) => run_eval(args, &settings),
        Command::Analyze(args) => run_analyze(args, &settings),
        Command::ChooseK(args) => run_choose_k(args, &settings),
        Command::Sample(args) => run_sample(args, &settings),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    match e {
        CliError::Usage(msg) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        CliError::Data(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

// ---------------------------------------------------------------- resolution

fn resolve_network(
    opts: &NetworkOpts,
    settings: &Settings,
) -> Result<(NetworkFileSet, Directedness), CliError> {
    let nodes = require(
        opts.nodes.clone().or(settings.get("nodes")?),
        "nodes",
    )?;
    let edges = require(
        opts.edges.clone().or(settings.get("edges")?),
        "edges",
    )?;
    let undirected = opts.undirected || settings.get_flag("undirected")?;
    Ok((
        NetworkFileSet {
            nodes,
            edges,
            communities: None,
        },
        if undirected {
            Directedness::Undirected
        } else {
            Directedness::Directed
        },
    ))
}

fn resolve_projection(
    opts: &ProjectionOpts,
    settings: &Settings,
) -> Result<ProjectionConfig, CliError> {
    let mut cfg = ProjectionConfig::default();
    if opts.no_lowercase || settings.get_flag("no-lowercase")? {
        cfg.lowercase = false;
    }
    if let Some(path) = opts.stopwords.clone().or(settings.get("stopwords")?) {
        let contents = std::fs::read_to_string(&path)
            .with_context(|| format!("reading stopwords {}", path.display()))?;
        cfg.stopwords = contents
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(String::from)
            .collect();
    }
    if let Some(min_df) = opts.min_df.or(settings.get("min-df")?) {
        if min_df == 0 {
            return Err(usage("--min-df must be at least 1"));
        }
        cfg.min_document_frequency = min_df;
    }
    if let Some(ratio) = opts.max_df_ratio.or(settings.get("max-df-ratio")?) {
        if !(ratio > 0.0 && ratio <= 1.0) {
            return Err(usage("--max-df-ratio must lie in (0, 1]"));
        }
        cfg.max_document_frequency_ratio = ratio;
    }
    Ok(cfg)
}

fn resolve_mode(opts: &FitOpts, settings: &Settings) -> Result<Mode, CliError> {
    let text: String = require(opts.mode.clone().or(settings.get("mode")?), "mode")?;
    text.parse().map_err(usage)
}

fn resolve_fit_config(
    opts: &FitOpts,
    settings: &Settings,
    mode: Mode,
    seed: u64,
) -> Result<FitConfig, CliError> {
    let communities = require(opts.k.or(settings.get("k")?), "k")?;
    let mut cfg = FitConfig::new(communities, mode, seed);
    if let Some(v) = opts.max_sweeps.or(settings.get("max-sweeps")?) {
        cfg.max_sweeps = v;
    }
    if let Some(v) = opts.tolerance.or(settings.get("tolerance")?) {
        cfg.tolerance = v;
    }
    let mut line_search = LineSearchParams::default();
    if let Some(v) = opts.initial_step.or(settings.get("initial-step")?) {
        line_search.initial_step = v;
    }
    if let Some(v) = opts.shrink.or(settings.get("shrink")?) {
        line_search.shrink = v;
    }
    if let Some(v) = opts.armijo.or(settings.get("armijo")?) {
        line_search.armijo = v;
    }
    if let Some(v) = opts.max_backtracks.or(settings.get("max-backtracks")?) {
        line_search.max_backtracks = v;
    }
    cfg.line_search = line_search;
    if let Some(v) = opts.epsilon_floor.or(settings.get("epsilon-floor")?) {
        cfg.epsilon_floor = v;
    }
    cfg.strict_temporality = opts.strict || settings.get_flag("strict")?;
    Ok(cfg)
}

fn resolve_out_dir(
    out_dir: &Option<PathBuf>,
    settings: &Settings,
) -> Result<PathBuf, CliError> {
    let dir = out_dir
        .clone()
        .or(settings.get("out-dir")?)
        .unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir)
        .with_context(|| format!("creating output directory {}", dir.display()))?;
    Ok(dir)
}

fn resolve_seed(seed: Option<u64>, settings: &Settings) -> Result<u64, CliError> {
    require(seed.or(settings.get("seed")?), "seed")
}

fn generated_labels(count: usize) -> Vec<String> {
    (0..count).map(|k| format!("c{k}")).collect()
}

// ---------------------------------------------------------------- commands

fn run_validate(args: ValidateArgs, settings: &Settings) -> Result<(), CliError> {
    let (mut files, directedness) = resolve_network(&args.network, settings)?;
    files.communities = args.communities.clone().or(settings.get("communities")?);
    let (net, truth) = parse_network(&files, directedness)?;
    match directedness {
        Directedness::Undirected => println!("undirected"),
        Directedness::Directed => match net.classify_temporality().map_err(anyhow::Error::from)? {
            Temporality::Natural => println!("natural"),
            Temporality::Complex(violations) => {
                println!("complex");
                println!("{} edges violate the strict time order", violations.len());
                for &(src, dst) in violations.iter().take(10) {
                    println!("  {} -> {}", net.node(src).id, net.node(dst).id);
                }
            }
        },
    }
    println!("nodes\t{}", net.node_count());
    println!("edges\t{}", net.edge_count());
    if let Some(truth) = truth {
        println!("communities\t{}", truth.cover.community_count());
    }
    Ok(())
}

fn run_project(args: ProjectArgs, settings: &Settings) -> Result<(), CliError> {
    let (files, directedness) = resolve_network(&args.network, settings)?;
    let cfg = resolve_projection(&args.projection, settings)?;
    let out_dir = resolve_out_dir(&args.out_dir, settings)?;
    let (net, _) = parse_network(&files, directedness)?;
    let projected = project(&net, &cfg).map_err(anyhow::Error::from)?;
    write_network(
        projected.network(),
        &out_dir.join("projected_nodes.tsv"),
        &out_dir.join("projected_edges.tsv"),
    )?;
    println!("documents\t{}", projected.document_count());
    println!("words\t{}", projected.word_count());
    println!("edges\t{}", projected.network().edge_count());
    Ok(())
}

/// Builds the network a model of the given mode is fitted on (the word-
/// augmented one in all mode).
fn modeled_network(
    files: &NetworkFileSet,
    directedness: Directedness,
    mode: Mode,
    projection: &ProjectionConfig,
) -> Result<(TemporalTextNetwork, TemporalTextNetwork, Option<ProjectedNetwork>), CliError> {
    let (net, _) = parse_network(files, directedness)?;
    match mode {
        Mode::All => {
            let projected = project(&net, projection).map_err(anyhow::Error::from)?;
            Ok((projected.network().clone(), net, Some(projected)))
        }
        Mode::Net | Mode::Raw => Ok((net.clone(), net, None)),
    }
}

fn run_fit(args: FitArgs, settings: &Settings) -> Result<(), CliError> {
    let (files, directedness) = resolve_network(&args.network, settings)?;
    let mode = resolve_mode(&args.fit, settings)?;
    let seed = resolve_seed(args.seed, settings)?;
    let cfg = resolve_fit_config(&args.fit, settings, mode, seed)?;
    let projection = resolve_projection(&args.projection, settings)?;
    let out_dir = resolve_out_dir(&args.out_dir, settings)?;

    let (fit_net, _, projected) = modeled_network(&files, directedness, mode, &projection)?;
    let model = fit(&fit_net, &cfg).map_err(anyhow::Error::from)?;
    let path = out_dir.join("model.magic");
    save_model(&path, &model)?;

    println!("mode\t{}", model.mode.as_str());
    println!("k\t{}", model.community_count());
    println!("nodes\t{}", model.node_count());
    if let Some(projected) = &projected {
        println!("words\t{}", projected.word_count());
    }
    println!("sweeps\t{}", model.sweeps);
    println!("log_likelihood\t{:.6}", model.log_likelihood);
    println!("model\t{}", path.display());
    Ok(())
}

fn run_communities(args: CommunitiesArgs, settings: &Settings) -> Result<(), CliError> {
    let (files, directedness) = resolve_network(&args.network, settings)?;
    let model_path = require(args.model.clone().or(settings.get("model")?), "model")?;
    let projection = resolve_projection(&args.projection, settings)?;
    let out_dir = resolve_out_dir(&args.out_dir, settings)?;
    let top_words = args
        .top_words
        .or(settings.get("top-words")?)
        .unwrap_or(20);

    let model = load_model(&model_path)?;
    let (fit_net, original, projected) =
        modeled_network(&files, directedness, model.mode, &projection)?;
    if fit_net.node_count() != model.node_count() {
        return Err(anyhow!(
            "model was fitted on {} nodes but the reconstructed network has {}; \
             use the same input files and projection flags as the fit",
            model.node_count(),
            fit_net.node_count()
        )
        .into());
    }

    let thresholds = community_thresholds(&model.interactions, model.node_count())
        .map_err(anyhow::Error::from)?;
    let cover = extract_cover(&model.affiliations, &thresholds);
    let labels = generated_labels(cover.community_count());

    match &projected {
        None => {
            write_communities(&out_dir.join("communities.tsv"), &cover, &labels, &fit_net)?;
            println!("communities\t{}", cover.community_count());
            println!("covered_nodes\t{}", cover.covered_nodes());
        }
        Some(projected) => {
            let documents = projected.restrict_cover_to_documents(&cover, &original);
            write_communities(
                &out_dir.join("communities.tsv"),
                &documents,
                &labels,
                &original,
            )?;
            let words = word_cover(projected, &cover);
            write_communities(
                &out_dir.join("word_communities.tsv"),
                &words,
                &labels,
                fit_net_ref(projected),
            )?;
            write_top_words(
                &out_dir.join("top_words.txt"),
                projected,
                &cover,
                &model,
                top_words,
            )?;
            println!("communities\t{}", cover.community_count());
            println!("covered_documents\t{}", documents.covered_nodes());
            println!("covered_words\t{}", words.covered_nodes());
        }
    }
    Ok(())
}

fn fit_net_ref(projected: &ProjectedNetwork) -> &TemporalTextNetwork {
    projected.network()
}

/// The word-node part of a cover over a projected network.
fn word_cover(projected: &ProjectedNetwork, cover: &CommunityCover) -> CommunityCover {
    let sets = cover
        .communities()
        .iter()
        .map(|community| {
            community
                .iter()
                .copied()
                .filter(|&u| projected.is_word(u))
                .collect()
        })
        .collect();
    CommunityCover::new(cover.universe(), sets).expect("same universe")
}

/// Plain-text listing of each community's strongest words.
fn write_top_words(
    path: &Path,
    projected: &ProjectedNetwork,
    cover: &CommunityCover,
    model: &FittedModel,
    top_words: usize,
) -> Result<(), CliError> {
    let mut text = String::new();
    for (k, community) in cover.communities().iter().enumerate() {
        let mut words: Vec<(&str, f64)> = community
            .iter()
            .filter_map(|&u| {
                projected
                    .term(u)
                    .map(|term| (term, model.affiliations.get(u, k)))
            })
            .collect();
        words.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(b.0)));
        let listed: Vec<&str> = words.iter().take(top_words).map(|&(w, _)| w).collect();
        text.push_str(&format!("c{k}: {}\n", listed.join(" ")));
    }
    write_atomic(path, &text)?;
    Ok(())
}

fn run_eval(args: EvalArgs, settings: &Settings) -> Result<(), CliError> {
    let (files, directedness) = resolve_network(&args.network, settings)?;
    let detected_path = require(args.detected.clone().or(settings.get("detected")?), "detected")?;
    let truth_path = require(args.truth.clone().or(settings.get("truth")?), "truth")?;
    let out_dir = resolve_out_dir(&args.out_dir, settings)?;

    let (net, _) = parse_network(&files, directedness)?;
    let detected = parse_communities(&detected_path, &net)?;
    let truth = parse_communities(&truth_path, &net)?;
    let report = metrics::evaluate(&net, &detected.cover, &truth.cover)
        .map_err(anyhow::Error::from)?;

    let pair_count = report.universe * report.universe.saturating_sub(1) / 2;
    let mut text = String::from("metric\tvalue\tinfo\n");
    text.push_str(&format!(
        "coverage_ratio\t{:.6}\tcovered={} universe={}\n",
        report.coverage, report.covered_nodes, report.universe
    ));
    text.push_str(&format!(
        "f1_score\t{:.6}\tdetected={} truth={}\n",
        report.f1, report.detected_communities, report.truth_communities
    ));
    text.push_str(&format!(
        "overlapping_modularity\t{:.6}\tcommunities={} edges={}\n",
        report.modularity,
        report.detected_communities,
        net.edge_count()
    ));
    text.push_str(&format!(
        "omega_index\t{:.6}\tpairs={pair_count}\n",
        report.omega
    ));
    write_atomic(&out_dir.join("eval.tsv"), &text)?;
    print!("{text}");
    Ok(())
}

fn run_analyze(args: AnalyzeArgs, settings: &Settings) -> Result<(), CliError> {
    let (mut files, directedness) = resolve_network(&args.network, settings)?;
    files.communities = Some(require(
        args.truth.clone().or(settings.get("truth")?),
        "truth",
    )?);
    let max_pairs = args
        .max_pairs
        .or(settings.get("max-pairs")?)
        .unwrap_or(100_000);
    let seed = resolve_seed(args.seed, settings)?;
    let out_dir = resolve_out_dir(&args.out_dir, settings)?;

    let (net, truth) = parse_network(&files, directedness)?;
    let truth = truth.expect("communities path was set");

    let ratio = analytics::interaction_edge_ratio(&net, &truth.cover);
    let scores = analytics::ic_ec_scores(&net, &truth.cover);
    let study = analytics::community_jaccard_study(&net, &truth.cover, max_pairs, seed);

    let fmt_opt = |v: Option<f64>| v.map_or_else(|| "NA".to_string(), |v| format!("{v:.6}"));
    let mut text = String::from("community\tic\tec\tir\tjaccard_mean\tbaseline_mean\n");
    for (interaction, row) in scores.per_community.iter().zip(&study) {
        text.push_str(&format!(
            "{}\t{:.6}\t{:.6}\t{}\t{}\t{}\n",
            truth.labels[interaction.community],
            interaction.internal,
            interaction.external,
            fmt_opt(interaction.interaction_ratio()),
            fmt_opt(row.community_mean),
            fmt_opt(row.baseline_mean),
        ));
    }
    write_atomic(&out_dir.join("analytics.tsv"), &text)?;
    print!("{text}");
    println!("interaction_edge_ratio\t{ratio:.6}");
    println!("labeled_edges\t{}", scores.labeled_edges);
    println!("skipped_edges\t{}", scores.skipped_edges);
    Ok(())
}

fn run_choose_k(args: ChooseKArgs, settings: &Settings) -> Result<(), CliError> {
    let (files, directedness) = resolve_network(&args.network, settings)?;
    let mode = resolve_mode(&args.fit, settings)?;
    let seed = resolve_seed(args.seed, settings)?;
    let candidates_text: String = require(
        args.candidates.clone().or(settings.get("candidates")?),
        "candidates",
    )?;
    let candidates: Vec<usize> = candidates_text
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|e| usage(format!("--candidates: {e}")))?;
    let holdout = args
        .holdout
        .or(settings.get("holdout")?)
        .unwrap_or(0.2);
    let out_dir = resolve_out_dir(&args.out_dir, settings)?;

    // K comes from the candidate list here, so satisfy the resolver with a
    // placeholder when --k is absent
    let mut fit_opts = args.fit.clone();
    if fit_opts.k.is_none() {
        fit_opts.k = Some(1);
    }
    let base = resolve_fit_config(&fit_opts, settings, mode, seed)?;

    let (net, _) = parse_network(&files, directedness)?;
    let outcome =
        choose_communities(&net, &candidates, holdout, &base).map_err(anyhow::Error::from)?;

    println!("{}", outcome.chosen);
    let mut text = String::from("k\tauc\n");
    for (k, score) in &outcome.scores {
        text.push_str(&format!("{k}\t{score:.6}\n"));
    }
    write_atomic(&out_dir.join("choose_k.tsv"), &text)?;
    print!("{text}");
    Ok(())
}

fn run_sample(args: SampleArgs, settings: &Settings) -> Result<(), CliError> {
    let model_path = require(args.model.clone().or(settings.get("model")?), "model")?;
    let seed = resolve_seed(args.seed, settings)?;
    let out_dir = resolve_out_dir(&args.out_dir, settings)?;
    let model = load_model(&model_path)?;

    let nodes_path = args.nodes.clone().or(settings.get("nodes")?);
    let mut records: Vec<NodeRecord> = match (&nodes_path, args.num_nodes) {
        (Some(path), _) => parse_nodes_file(path)?,
        (None, Some(n)) => {
            let width = n.saturating_sub(1).to_string().len().max(1);
            (0..n)
                .map(|i| NodeRecord::document(format!("n{i:0width$}"), i as i64 + 1, Vec::new()))
                .collect()
        }
        (None, None) => return Err(usage("provide --nodes or --num-nodes")),
    };
    // canonical id order, matching the affiliation rows of a model fitted
    // on the same nodes file
    records.sort_by(|a, b| a.id.cmp(&b.id));
    if records.len() != model.node_count() {
        return Err(anyhow!(
            "model has {} nodes but {} were supplied",
            model.node_count(),
            records.len()
        )
        .into());
    }

    let timestamps: Vec<i64> = records.iter().map(|r| r.timestamp).collect();
    let sampled = sample_network(
        &model.affiliations,
        &model.interactions,
        &timestamps,
        model.mode,
        seed,
    )
    .map_err(anyhow::Error::from)?;

    // map sampled row indices back to the supplied ids
    let edges: Vec<(String, String)> = sampled
        .edges()
        .map(|(u, v)| (records[u].id.clone(), records[v].id.clone()))
        .collect();
    let mut nodes_text = String::new();
    for record in &records {
        nodes_text.push_str(&format!("{}\t{}\n", record.id, record.timestamp));
    }
    let mut edges_text = String::new();
    for (src, dst) in &edges {
        edges_text.push_str(&format!("{src}\t{dst}\n"));
    }
    write_atomic(&out_dir.join("sampled_nodes.tsv"), &nodes_text)?;
    write_atomic(&out_dir.join("sampled_edges.tsv"), &edges_text)?;
    println!("nodes\t{}", records.len());
    println!("edges\t{}", edges.len());
    Ok(())
}
