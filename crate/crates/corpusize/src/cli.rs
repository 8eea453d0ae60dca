//! Command-line interface: argument types, error-to-exit-code mapping, and
//! the five subcommands (`stats`, `growth`, `fit`, `project`, `analyze`).
//!
//! Exit codes: 0 success, 2 bad configuration or arguments, 3 corpus
//! ingestion failure, 4 no grid point satisfied the stopping threshold,
//! 1 anything else (IO).

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use corpusize_core::{
    cumulative_series, downsample, eval_heaps, fit_heaps, fit_points, order_by_types_desc,
    order_manifest, order_pinned_shuffle, project, recommend_size, DigitPolicy, FitError,
    GrowthError, GrowthPoint, GrowthSeries, ProjectionError, ProjectionGrid, ProjectionRow,
    PunctuationPolicy, RecommendMode, Recommendation, SampleSpec, SampleUnit, SubCorpus,
    TokenRules, TypeInventory, UnitMode,
};
use thiserror::Error;

use crate::ingest::{self, CorpusManifest, IngestError};
use crate::report::{
    self, FitReport, GridReport, RecommendationReport, ReportError, StatsRow, SummaryReport,
    SummaryResult,
};
use crate::svg::{ChartSpec, SeriesSpec};

#[derive(Debug, Parser)]
#[command(
    name = "corpusize",
    version,
    about = "Estimate how large a balanced corpus must grow from its vocabulary growth curve"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-domain token and type counts, before and after down-sampling
    Stats(StatsArgs),
    /// Cumulative token/type growth tables under one or more domain orderings
    Growth(GrowthArgs),
    /// Fit the vocabulary-growth function to a growth CSV
    Fit(FitArgs),
    /// Project the type-token ratio over a token grid and recommend a size
    Project(ProjectArgs),
    /// Full pipeline: sample, order, fit, project, recommend
    Analyze(AnalyzeArgs),
}

/// Flags shared by every command that reads a corpus.
#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Corpus manifest (TOML)
    #[arg(long, value_name = "FILE")]
    pub manifest: PathBuf,
    /// Sampling unit
    #[arg(long, value_enum, default_value_t = UnitArg::Sentence)]
    pub unit: UnitArg,
    #[command(flatten)]
    pub tokenizer: TokenizerArgs,
}

#[derive(Debug, Args)]
pub struct TokenizerArgs {
    /// Lower-case word forms before counting
    #[arg(long)]
    pub case_fold: bool,
    /// Count tokens made solely of digits (dropped by default)
    #[arg(long)]
    pub keep_digits: bool,
    /// Keep punctuation attached to word forms instead of trimming it
    #[arg(long)]
    pub keep_punct: bool,
}

impl TokenizerArgs {
    pub fn rules(&self) -> TokenRules {
        TokenRules {
            digit_policy: if self.keep_digits {
                DigitPolicy::KeepAll
            } else {
                DigitPolicy::ExcludePureDigitTokens
            },
            punctuation_policy: if self.keep_punct {
                PunctuationPolicy::KeepAttached
            } else {
                PunctuationPolicy::Strip
            },
            case_fold: self.case_fold,
        }
    }
}

/// Projection grid and stopping-rule flags.
#[derive(Debug, Args)]
pub struct ProjectionArgs {
    /// First grid point, in tokens
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    pub grid_start: u64,
    /// Last grid point, in tokens (inclusive)
    #[arg(long, value_name = "N", default_value_t = 102_000_000)]
    pub grid_end: u64,
    /// Grid spacing, in tokens
    #[arg(long, value_name = "N", default_value_t = 1_000_000)]
    pub grid_step: u64,
    /// Stop once the TTR change per step falls to this level
    #[arg(long, default_value_t = 1e-4)]
    pub threshold: f64,
    /// paper-compat reads the rounded 4-decimal change column (<=),
    /// exact compares the raw change (<)
    #[arg(long, value_enum, default_value_t = ModeArg::PaperCompat)]
    pub mode: ModeArg,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub ingest: IngestArgs,
    /// Run seed for down-sampling
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-domain token budget; omit to keep every token
    #[arg(long, value_name = "N")]
    pub target_tokens: Option<u64>,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GrowthArgs {
    #[command(flatten)]
    pub ingest: IngestArgs,
    /// Run seed for down-sampling and shuffles
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-domain token budget
    #[arg(long, value_name = "N")]
    pub target_tokens: u64,
    /// Ordering policy to emit (repeatable; default: types-desc and manifest)
    #[arg(long = "ordering", value_enum, value_name = "POLICY")]
    pub orderings: Vec<OrderingArg>,
    /// Pin a domain to a 1-based position in the shuffle ordering
    #[arg(long = "pin", value_name = "POS=ID", value_parser = parse_pin)]
    pub pins: Vec<(usize, String)>,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Growth CSV, as written by the growth command
    #[arg(value_name = "GROWTH_CSV")]
    pub input: PathBuf,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProjectArgs {
    /// Fit JSON, as written by the fit command
    #[arg(value_name = "FIT_JSON")]
    pub input: PathBuf,
    #[command(flatten)]
    pub projection: ProjectionArgs,
    /// Also render SVG charts
    #[arg(long)]
    pub emit_svg: bool,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub ingest: IngestArgs,
    /// Run seed for down-sampling and shuffles
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Per-domain token budget
    #[arg(long, value_name = "N")]
    pub target_tokens: u64,
    /// Ordering policy to run (repeatable; default: types-desc and manifest)
    #[arg(long = "ordering", value_enum, value_name = "POLICY")]
    pub orderings: Vec<OrderingArg>,
    /// Pin a domain to a 1-based position in the shuffle ordering
    #[arg(long = "pin", value_name = "POS=ID", value_parser = parse_pin)]
    pub pins: Vec<(usize, String)>,
    #[command(flatten)]
    pub projection: ProjectionArgs,
    /// Also render SVG charts for each ordering
    #[arg(long)]
    pub emit_svg: bool,
    /// Output directory
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum UnitArg {
    Line,
    Sentence,
    Token,
}

impl UnitArg {
    /// Segmentation used while reading documents. Token sampling still
    /// ingests sentence units; only the draw granularity changes.
    pub fn segment_mode(self) -> UnitMode {
        match self {
            UnitArg::Line => UnitMode::Line,
            UnitArg::Sentence | UnitArg::Token => UnitMode::Sentence,
        }
    }

    pub fn sample_unit(self) -> SampleUnit {
        match self {
            UnitArg::Line => SampleUnit::Line,
            UnitArg::Sentence => SampleUnit::Sentence,
            UnitArg::Token => SampleUnit::Token,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderingArg {
    /// Domains ordered by sampled type count, richest first
    TypesDesc,
    /// Domains in manifest order
    Manifest,
    /// Seeded random order, honoring --pin constraints
    Shuffle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    PaperCompat,
    Exact,
}

impl From<ModeArg> for RecommendMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::PaperCompat => RecommendMode::PaperCompat,
            ModeArg::Exact => RecommendMode::Exact,
        }
    }
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(
        "no grid point met the stopping threshold (searched up to {grid_end} tokens); \
         raise --grid-end or loosen --threshold"
    )]
    NoQualifyingPoint { grid_end: u64 },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<AppError>,
    },
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Config(_) => 2,
            AppError::Ingest(_) => 3,
            AppError::NoQualifyingPoint { .. } => 4,
            AppError::Io { .. } => 1,
            AppError::Stage { source, .. } => source.exit_code(),
        }
    }
}

impl From<ReportError> for AppError {
    fn from(e: ReportError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<FitError> for AppError {
    fn from(e: FitError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<GrowthError> for AppError {
    fn from(e: GrowthError) -> Self {
        AppError::Config(e.to_string())
    }
}

impl From<ProjectionError> for AppError {
    fn from(e: ProjectionError) -> Self {
        match e {
            ProjectionError::NoQualifyingRow { grid_end } => {
                AppError::NoQualifyingPoint { grid_end }
            }
            other => AppError::Config(other.to_string()),
        }
    }
}

pub fn run(cli: &Cli) -> Result<(), AppError> {
    match &cli.command {
        Command::Stats(args) => cmd_stats(args),
        Command::Growth(args) => cmd_growth(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Project(args) => cmd_project(args),
        Command::Analyze(args) => cmd_analyze(args),
    }
}

/// One manifest domain after tokenization and (optional) down-sampling.
struct DomainCorpus {
    label: String,
    register: String,
    raw: TypeInventory,
    sub: SubCorpus,
}

fn build_domains(
    manifest: &CorpusManifest,
    unit: UnitArg,
    rules: &TokenRules,
    seed: u64,
    target_tokens: Option<u64>,
) -> Result<Vec<DomainCorpus>, AppError> {
    if target_tokens == Some(0) {
        return Err(AppError::Config(
            "--target-tokens must be at least 1".into(),
        ));
    }
    let mut out = Vec::with_capacity(manifest.domains.len());
    for domain in &manifest.domains {
        let docs = ingest::read_documents(manifest, &domain.id, unit.segment_mode())?;
        let mut sequences = Vec::new();
        for doc in &docs {
            for text in &doc.units {
                sequences.push(corpusize_core::tokenize(text, rules));
            }
        }
        let mut raw = TypeInventory::new();
        for seq in &sequences {
            for token in &seq.tokens {
                raw.record(token);
            }
        }
        let sub = match target_tokens {
            Some(target) => downsample(
                &domain.id,
                &sequences,
                &SampleSpec {
                    target_tokens: target,
                    unit: unit.sample_unit(),
                    seed,
                },
            )
            .map_err(|e| AppError::Config(format!("domain {:?}: {e}", domain.id)))?,
            None => SubCorpus {
                id: domain.id.clone(),
                inventory: raw.clone(),
                sampled_units: (0..sequences.len()).collect(),
            },
        };
        out.push(DomainCorpus {
            label: domain.label.clone(),
            register: domain.register.to_string(),
            raw,
            sub,
        });
    }
    Ok(out)
}

fn stats_rows(domains: &[DomainCorpus]) -> (Vec<StatsRow>, u64, u64) {
    let mut raw_union: BTreeSet<&str> = BTreeSet::new();
    let mut sampled_union: BTreeSet<&str> = BTreeSet::new();
    let mut rows = Vec::with_capacity(domains.len());
    for d in domains {
        raw_union.extend(d.raw.iter().map(|(form, _)| form));
        sampled_union.extend(d.sub.inventory.iter().map(|(form, _)| form));
        rows.push(StatsRow {
            domain_id: d.sub.id.clone(),
            label: d.label.clone(),
            register: d.register.clone(),
            raw_tokens: d.raw.token_total(),
            raw_types: d.raw.type_total(),
            sampled_tokens: d.sub.inventory.token_total(),
            sampled_types: d.sub.inventory.type_total(),
        });
    }
    (rows, raw_union.len() as u64, sampled_union.len() as u64)
}

fn cmd_stats(args: &StatsArgs) -> Result<(), AppError> {
    let manifest = ingest::load_manifest(&args.ingest.manifest)?;
    let rules = args.ingest.tokenizer.rules();
    let domains = build_domains(
        &manifest,
        args.ingest.unit,
        &rules,
        args.seed,
        args.target_tokens,
    )?;
    let (rows, total_raw, total_sampled) = stats_rows(&domains);
    print_stats_table(&rows, total_raw, total_sampled);

    ensure_out_dir(&args.out)?;
    let mut outputs = Vec::new();
    write_file(
        &args.out,
        "stats.csv",
        &report::stats_csv(&rows, total_raw, total_sampled),
        &mut outputs,
    )?;
    println!("wrote {}", args.out.join("stats.csv").display());
    Ok(())
}

fn cmd_growth(args: &GrowthArgs) -> Result<(), AppError> {
    let manifest = ingest::load_manifest(&args.ingest.manifest)?;
    let rules = args.ingest.tokenizer.rules();
    let domains = build_domains(
        &manifest,
        args.ingest.unit,
        &rules,
        args.seed,
        Some(args.target_tokens),
    )?;
    let subs: Vec<SubCorpus> = domains.iter().map(|d| d.sub.clone()).collect();
    let pins = pin_map(&args.pins)?;
    let policies = effective_orderings(&args.orderings);
    warn_unused_pins(&pins, &policies);

    ensure_out_dir(&args.out)?;
    let mut outputs = Vec::new();
    for policy in policies {
        let series = build_series(&subs, policy, &pins, args.seed)?;
        let name = format!("growth_{}.csv", report::policy_name(series.ordering.policy));
        write_file(&args.out, &name, &report::growth_csv(&series), &mut outputs)?;
        println!("wrote {}", args.out.join(&name).display());
    }
    Ok(())
}

fn cmd_fit(args: &FitArgs) -> Result<(), AppError> {
    let text = fs::read_to_string(&args.input).map_err(|source| AppError::Io {
        context: format!("reading {}", args.input.display()),
        source,
    })?;
    let points = report::parse_growth_points(&text)?;
    let growth: Vec<GrowthPoint> = points
        .iter()
        .map(|p| GrowthPoint {
            cum_tokens: p.cum_tokens,
            cum_types: p.cum_types,
        })
        .collect();
    let params = fit_points(&growth)?;
    warn_beta(params.beta);

    let rep = report::fit_report_from_points(&points, params);
    let stem = stem_after(&args.input, "growth_");
    ensure_out_dir(&args.out)?;
    let mut outputs = Vec::new();
    let name = format!("fit_{stem}.json");
    write_file(
        &args.out,
        &name,
        &report::to_json_pretty(&rep),
        &mut outputs,
    )?;
    println!(
        "k = {:.5}  beta = {:.5}  r^2 = {:.4}  ({} points)",
        params.k, params.beta, params.r_squared, params.n_points
    );
    println!("wrote {}", args.out.join(&name).display());
    Ok(())
}

fn cmd_project(args: &ProjectArgs) -> Result<(), AppError> {
    let text = fs::read_to_string(&args.input).map_err(|source| AppError::Io {
        context: format!("reading {}", args.input.display()),
        source,
    })?;
    let rep: FitReport = serde_json::from_str(&text).map_err(|e| {
        AppError::Config(format!("malformed fit file {}: {e}", args.input.display()))
    })?;
    let params = rep.params();
    if !params.k.is_finite() || params.k <= 0.0 || !params.beta.is_finite() {
        return Err(AppError::Config(format!(
            "fit file {} carries unusable parameters (k = {}, beta = {})",
            args.input.display(),
            params.k,
            params.beta
        )));
    }
    warn_beta(params.beta);

    let grid = build_grid(&args.projection)?;
    let rows = project(&params, &grid);
    let stem = stem_after(&args.input, "fit_");
    ensure_out_dir(&args.out)?;
    let mut outputs = Vec::new();

    // The projection table lands before the stopping rule runs, so a
    // threshold nothing satisfies still leaves the full table to inspect.
    let csv_name = format!("projection_{stem}.csv");
    write_file(
        &args.out,
        &csv_name,
        &report::projection_csv(&rows),
        &mut outputs,
    )?;
    println!("wrote {}", args.out.join(&csv_name).display());

    let rec = recommend_size(
        &rows,
        &params,
        args.projection.threshold,
        args.projection.mode.into(),
    );
    if args.emit_svg {
        emit_charts(
            &args.out,
            &stem,
            &rep,
            &rows,
            rec.as_ref().ok(),
            args.projection.threshold,
            true,
            &mut outputs,
        )?;
    }
    let rec = rec.map_err(AppError::from)?;
    let rec_name = format!("recommendation_{stem}.json");
    write_file(
        &args.out,
        &rec_name,
        &report::to_json_pretty(&RecommendationReport::new(&rec)),
        &mut outputs,
    )?;
    println!("wrote {}", args.out.join(&rec_name).display());
    println!(
        "recommended corpus size: {} tokens ({})",
        rec.n_recommended,
        human_tokens(rec.n_recommended)
    );
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<(), AppError> {
    let threshold = args.projection.threshold;
    validate_threshold(threshold)?;
    let mode: RecommendMode = args.projection.mode.into();
    let grid = build_grid(&args.projection)?;
    let pins = pin_map(&args.pins)?;
    let policies = effective_orderings(&args.orderings);
    warn_unused_pins(&pins, &policies);

    let manifest = ingest::load_manifest(&args.ingest.manifest)?;
    let rules = args.ingest.tokenizer.rules();
    let domains = stage(
        "ingest",
        build_domains(
            &manifest,
            args.ingest.unit,
            &rules,
            args.seed,
            Some(args.target_tokens),
        ),
    )?;

    ensure_out_dir(&args.out)?;
    let mut outputs = Vec::new();
    let (stat_rows, total_raw, total_sampled) = stats_rows(&domains);
    write_file(
        &args.out,
        "stats.csv",
        &report::stats_csv(&stat_rows, total_raw, total_sampled),
        &mut outputs,
    )?;

    let subs: Vec<SubCorpus> = domains.iter().map(|d| d.sub.clone()).collect();
    let mut results = Vec::with_capacity(policies.len());
    for policy in policies {
        let series = stage(
            &format!("growth ({})", policy_flag_name(policy)),
            build_series(&subs, policy, &pins, args.seed),
        )?;
        let pname = report::policy_name(series.ordering.policy);
        write_file(
            &args.out,
            &format!("growth_{pname}.csv"),
            &report::growth_csv(&series),
            &mut outputs,
        )?;

        let params = stage(
            &format!("fit ({pname})"),
            fit_heaps(&series).map_err(AppError::from),
        )?;
        warn_beta(params.beta);
        let fit_rep = report::fit_report(&series, params);
        write_file(
            &args.out,
            &format!("fit_{pname}.json"),
            &report::to_json_pretty(&fit_rep),
            &mut outputs,
        )?;

        let rows = project(&params, &grid);
        write_file(
            &args.out,
            &format!("projection_{pname}.csv"),
            &report::projection_csv(&rows),
            &mut outputs,
        )?;

        let rec = recommend_size(&rows, &params, threshold, mode);
        if args.emit_svg {
            emit_charts(
                &args.out,
                pname,
                &fit_rep,
                &rows,
                rec.as_ref().ok(),
                threshold,
                false,
                &mut outputs,
            )?;
        }
        let rec = rec
            .map_err(AppError::from)
            .map_err(|e| stage_err(format!("recommend ({pname})"), e))?;
        write_file(
            &args.out,
            &format!("recommendation_{pname}.json"),
            &report::to_json_pretty(&RecommendationReport::new(&rec)),
            &mut outputs,
        )?;

        results.push(SummaryResult {
            ordering_policy: pname.to_string(),
            k: params.k,
            beta: params.beta,
            r_squared: params.r_squared,
            n_points: params.n_points,
            n_recommended: rec.n_recommended,
        });
    }

    outputs.push("summary.json".to_string());
    let summary = SummaryReport {
        seed: args.seed,
        target_tokens: args.target_tokens,
        unit: report::unit_name(args.ingest.unit.sample_unit()).to_string(),
        threshold,
        mode: report::mode_name(mode).to_string(),
        grid: GridReport::new(&grid),
        results: results.clone(),
        outputs: outputs.clone(),
    };
    let json = report::to_json_pretty(&summary);
    fs::write(args.out.join("summary.json"), json).map_err(|source| AppError::Io {
        context: format!("writing {}", args.out.join("summary.json").display()),
        source,
    })?;

    print_stats_table(&stat_rows, total_raw, total_sampled);
    println!();
    print_results_table(&results);
    println!();
    println!("wrote {} files to {}", outputs.len(), args.out.display());
    Ok(())
}

fn build_series(
    subs: &[SubCorpus],
    policy: OrderingArg,
    pins: &BTreeMap<usize, String>,
    seed: u64,
) -> Result<GrowthSeries, AppError> {
    let ordering = match policy {
        OrderingArg::TypesDesc => order_by_types_desc(subs),
        OrderingArg::Manifest => order_manifest(subs),
        OrderingArg::Shuffle => order_pinned_shuffle(subs, pins, seed),
    }?;
    Ok(cumulative_series(subs, &ordering)?)
}

fn build_grid(args: &ProjectionArgs) -> Result<ProjectionGrid, AppError> {
    validate_threshold(args.threshold)?;
    Ok(ProjectionGrid::new(
        args.grid_start,
        args.grid_end,
        args.grid_step,
    )?)
}

fn validate_threshold(threshold: f64) -> Result<(), AppError> {
    if !threshold.is_finite() || threshold <= 0.0 {
        return Err(AppError::Config(format!(
            "--threshold must be a positive number, got {threshold}"
        )));
    }
    Ok(())
}

fn effective_orderings(requested: &[OrderingArg]) -> Vec<OrderingArg> {
    let base: &[OrderingArg] = if requested.is_empty() {
        &[OrderingArg::TypesDesc, OrderingArg::Manifest]
    } else {
        requested
    };
    let mut out = Vec::new();
    for &policy in base {
        if !out.contains(&policy) {
            out.push(policy);
        }
    }
    out
}

fn policy_flag_name(policy: OrderingArg) -> &'static str {
    match policy {
        OrderingArg::TypesDesc => "types-desc",
        OrderingArg::Manifest => "manifest",
        OrderingArg::Shuffle => "shuffle",
    }
}

fn pin_map(pins: &[(usize, String)]) -> Result<BTreeMap<usize, String>, AppError> {
    let mut map = BTreeMap::new();
    for (position, id) in pins {
        if map.insert(*position, id.clone()).is_some() {
            return Err(AppError::Config(format!(
                "position {position} pinned more than once"
            )));
        }
    }
    Ok(map)
}

fn warn_unused_pins(pins: &BTreeMap<usize, String>, policies: &[OrderingArg]) {
    if !pins.is_empty() && !policies.contains(&OrderingArg::Shuffle) {
        eprintln!("warning: --pin only affects the shuffle ordering, which was not requested");
    }
}

fn parse_pin(raw: &str) -> Result<(usize, String), String> {
    let (position, id) = raw
        .split_once('=')
        .ok_or_else(|| format!("expected POS=ID, got {raw:?}"))?;
    let position: usize = position
        .trim()
        .parse()
        .map_err(|e| format!("bad position {position:?}: {e}"))?;
    if position == 0 {
        return Err("positions are 1-based".to_string());
    }
    let id = id.trim();
    if id.is_empty() {
        return Err("empty domain id".to_string());
    }
    Ok((position, id.to_string()))
}

/// File stem with an expected prefix stripped: `growth_types_desc.csv`
/// with prefix `growth_` becomes `types_desc`.
fn stem_after(path: &Path, prefix: &str) -> String {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("output");
    stem.strip_prefix(prefix).unwrap_or(stem).to_string()
}

fn warn_beta(beta: f64) {
    if beta <= 0.0 || beta >= 1.0 {
        eprintln!(
            "warning: fitted beta {beta:.5} lies outside (0, 1); \
             type-token projections may be unreliable"
        );
    }
}

fn stage<T>(name: &str, result: Result<T, AppError>) -> Result<T, AppError> {
    result.map_err(|e| stage_err(name.to_string(), e))
}

fn stage_err(stage: String, source: AppError) -> AppError {
    AppError::Stage {
        stage,
        source: Box::new(source),
    }
}

fn ensure_out_dir(dir: &Path) -> Result<(), AppError> {
    fs::create_dir_all(dir).map_err(|source| AppError::Io {
        context: format!("creating output directory {}", dir.display()),
        source,
    })
}

fn write_file(
    dir: &Path,
    name: &str,
    contents: &str,
    outputs: &mut Vec<String>,
) -> Result<(), AppError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|source| AppError::Io {
        context: format!("writing {}", path.display()),
        source,
    })?;
    outputs.push(name.to_string());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn emit_charts(
    dir: &Path,
    stem: &str,
    rep: &FitReport,
    rows: &[ProjectionRow],
    rec: Option<&Recommendation>,
    threshold: f64,
    announce: bool,
    outputs: &mut Vec<String>,
) -> Result<(), AppError> {
    let vline = rec.map(|r| (r.n_recommended as f64, "recommended"));
    let emit = |name: String, svg: String, outputs: &mut Vec<String>| -> Result<(), AppError> {
        write_file(dir, &name, &svg, outputs)?;
        if announce {
            println!("wrote {}", dir.join(&name).display());
        }
        Ok(())
    };

    // Observed growth with the fitted curve overlaid — only possible when
    // the fit file still carries its points.
    if !rep.points.is_empty() {
        let params = rep.params();
        let observed: Vec<(f64, f64)> = rep
            .points
            .iter()
            .map(|p| (p.cum_tokens as f64, p.cum_types as f64))
            .collect();
        let lo = rep.points.iter().map(|p| p.cum_tokens).min().unwrap();
        let hi = rep.points.iter().map(|p| p.cum_tokens).max().unwrap();
        let fitted: Vec<(f64, f64)> = (0..=63u64)
            .map(|i| {
                let n = lo + (hi - lo) * i / 63;
                (n as f64, eval_heaps(&params, n))
            })
            .collect();
        let chart = ChartSpec {
            title: "Observed vocabulary growth",
            x_label: "cumulative tokens",
            y_label: "cumulative types",
            series: vec![
                SeriesSpec {
                    label: "observed",
                    points: &observed,
                    marker: true,
                },
                SeriesSpec {
                    label: "fitted",
                    points: &fitted,
                    marker: false,
                },
            ],
            vline: None,
            hline: None,
        };
        emit(format!("chart_growth_{stem}.svg"), chart.render(), outputs)?;
    }

    let types: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.v_real)).collect();
    let chart = ChartSpec {
        title: "Projected vocabulary size",
        x_label: "corpus size (tokens)",
        y_label: "types",
        series: vec![SeriesSpec {
            label: "projected types",
            points: &types,
            marker: false,
        }],
        vline,
        hline: None,
    };
    emit(format!("chart_types_{stem}.svg"), chart.render(), outputs)?;

    let ttr: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.ttr)).collect();
    let chart = ChartSpec {
        title: "Projected type-token ratio",
        x_label: "corpus size (tokens)",
        y_label: "TTR",
        series: vec![SeriesSpec {
            label: "TTR",
            points: &ttr,
            marker: false,
        }],
        vline,
        hline: None,
    };
    emit(format!("chart_ttr_{stem}.svg"), chart.render(), outputs)?;

    let deltas: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| r.delta_ttr.map(|d| (r.n as f64, d)))
        .collect();
    let chart = ChartSpec {
        title: "TTR change per grid step",
        x_label: "corpus size (tokens)",
        y_label: "TTR change",
        series: vec![SeriesSpec {
            label: "TTR change",
            points: &deltas,
            marker: false,
        }],
        vline,
        hline: Some((threshold, "threshold")),
    };
    emit(
        format!("chart_ttr_change_{stem}.svg"),
        chart.render(),
        outputs,
    )?;
    Ok(())
}

fn print_stats_table(rows: &[StatsRow], total_raw_types: u64, total_sampled_types: u64) {
    let id_width = rows
        .iter()
        .map(|r| r.domain_id.chars().count())
        .chain([6])
        .max()
        .unwrap_or(6);
    println!(
        "{:<id_width$}  {:<8}  {:>12}  {:>10}  {:>14}  {:>13}",
        "domain", "register", "raw_tokens", "raw_types", "sampled_tokens", "sampled_types"
    );
    let mut raw_tokens = 0u64;
    let mut sampled_tokens = 0u64;
    for row in rows {
        raw_tokens += row.raw_tokens;
        sampled_tokens += row.sampled_tokens;
        println!(
            "{:<id_width$}  {:<8}  {:>12}  {:>10}  {:>14}  {:>13}",
            row.domain_id,
            row.register,
            row.raw_tokens,
            row.raw_types,
            row.sampled_tokens,
            row.sampled_types
        );
    }
    println!(
        "{:<id_width$}  {:<8}  {:>12}  {:>10}  {:>14}  {:>13}",
        "TOTAL", "", raw_tokens, total_raw_types, sampled_tokens, total_sampled_types
    );
}

fn print_results_table(results: &[SummaryResult]) {
    println!(
        "{:<14}  {:>12}  {:>9}  {:>8}  {:>20}",
        "ordering", "k", "beta", "r^2", "recommendation"
    );
    for r in results {
        println!(
            "{:<14}  {:>12.5}  {:>9.5}  {:>8.4}  {:>20}",
            r.ordering_policy,
            r.k,
            r.beta,
            r.r_squared,
            human_tokens(r.n_recommended)
        );
    }
}

fn human_tokens(n: u64) -> String {
    if n >= 1_000_000 && n.is_multiple_of(1_000_000) {
        format!("{}M tokens", n / 1_000_000)
    } else {
        format!("{n} tokens")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn analyze_defaults_match_the_documented_contract() {
        let cli = Cli::try_parse_from([
            "corpusize",
            "analyze",
            "--manifest",
            "m.toml",
            "--target-tokens",
            "4000",
        ])
        .unwrap();
        match cli.command {
            Command::Analyze(args) => {
                assert_eq!(args.seed, 0);
                assert_eq!(args.ingest.unit, UnitArg::Sentence);
                assert_eq!(args.projection.grid_start, 1_000_000);
                assert_eq!(args.projection.grid_end, 102_000_000);
                assert_eq!(args.projection.grid_step, 1_000_000);
                assert_eq!(args.projection.threshold, 1e-4);
                assert_eq!(args.projection.mode, ModeArg::PaperCompat);
                assert_eq!(args.out, PathBuf::from("out"));
                assert!(args.orderings.is_empty());
                assert!(!args.emit_svg);
            }
            other => panic!("wrong command: {other:?}"),
        }
    }

    #[test]
    fn flag_values_parse_to_the_right_variants() {
        let cli = Cli::try_parse_from([
            "corpusize",
            "growth",
            "--manifest",
            "m.toml",
            "--target-tokens",
            "100",
            "--unit",
            "token",
            "--ordering",
            "shuffle",
            "--pin",
            "1=news",
            "--pin",
            "4=talks",
            "--case-fold",
        ])
        .unwrap();
        match cli.command {
            Command::Growth(args) => {
                assert_eq!(args.ingest.unit, UnitArg::Token);
                assert_eq!(args.orderings, [OrderingArg::Shuffle]);
                assert_eq!(args.pins, [(1, "news".into()), (4, "talks".into())]);
                assert!(args.ingest.tokenizer.case_fold);
                assert!(args.ingest.tokenizer.rules().case_fold);
            }
            other => panic!("wrong command: {other:?}"),
        }
    }

    #[test]
    fn unknown_flags_are_rejected() {
        assert!(Cli::try_parse_from(["corpusize", "stats", "--manifest", "m", "--bogus"]).is_err());
        assert!(Cli::try_parse_from(["corpusize", "nonsense"]).is_err());
    }

    #[test]
    fn pin_parser_validates_shape() {
        assert_eq!(parse_pin("3=law").unwrap(), (3, "law".to_string()));
        assert_eq!(parse_pin(" 2 = news ").unwrap(), (2, "news".to_string()));
        assert!(parse_pin("law").is_err());
        assert!(parse_pin("0=law").is_err());
        assert!(parse_pin("x=law").is_err());
        assert!(parse_pin("2=").is_err());
    }

    #[test]
    fn pin_map_rejects_duplicate_positions() {
        let pins = vec![(1, "a".to_string()), (1, "b".to_string())];
        assert!(matches!(pin_map(&pins), Err(AppError::Config(_))));
        let pins = vec![(1, "a".to_string()), (2, "b".to_string())];
        assert_eq!(pin_map(&pins).unwrap().len(), 2);
    }

    #[test]
    fn stems_strip_their_stage_prefix() {
        assert_eq!(
            stem_after(Path::new("out/growth_manifest.csv"), "growth_"),
            "manifest"
        );
        assert_eq!(
            stem_after(Path::new("fit_types_desc.json"), "fit_"),
            "types_desc"
        );
        assert_eq!(stem_after(Path::new("custom.csv"), "growth_"), "custom");
    }

    #[test]
    fn ordering_defaults_and_deduplication() {
        assert_eq!(
            effective_orderings(&[]),
            [OrderingArg::TypesDesc, OrderingArg::Manifest]
        );
        assert_eq!(
            effective_orderings(&[OrderingArg::Manifest, OrderingArg::Manifest]),
            [OrderingArg::Manifest]
        );
    }

    #[test]
    fn exit_codes_map_one_to_one() {
        assert_eq!(AppError::Config("x".into()).exit_code(), 2);
        assert_eq!(AppError::NoQualifyingPoint { grid_end: 1 }.exit_code(), 4);
        let io = AppError::Io {
            context: "c".into(),
            source: std::io::Error::other("boom"),
        };
        assert_eq!(io.exit_code(), 1);
        let staged = stage_err("fit (manifest)".into(), AppError::Config("x".into()));
        assert_eq!(staged.exit_code(), 2);
        assert_eq!(staged.to_string(), "fit (manifest): x");
    }

    #[test]
    fn human_token_counts_abbreviate_round_millions() {
        assert_eq!(human_tokens(42_000_000), "42M tokens");
        assert_eq!(human_tokens(1_500_000), "1500000 tokens");
        assert_eq!(human_tokens(999), "999 tokens");
    }

    #[test]
    fn threshold_validation() {
        assert!(validate_threshold(1e-4).is_ok());
        assert!(validate_threshold(0.0).is_err());
        assert!(validate_threshold(-1.0).is_err());
        assert!(validate_threshold(f64::NAN).is_err());
    }
}
