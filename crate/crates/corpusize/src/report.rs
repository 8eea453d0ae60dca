//! File formats for pipeline results: CSV tables and JSON reports.
//!
//! All writers are hand-rolled so the byte output is fully determined by
//! the data — no locale, no float formatting drift between runs. Raw
//! float columns use Rust's shortest round-trip formatting; display
//! columns are fixed at four decimals to match the rounded tables the
//! tool prints.

use std::fmt::Write as _;

use corpusize_core::{
    GrowthSeries, HeapsParams, OrderingPolicy, ProjectionGrid, ProjectionRow, RecommendMode,
    Recommendation, SampleUnit,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const GROWTH_CSV_HEADER: &str = "order_index,corpus_id,cum_tokens,cum_types";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("malformed growth CSV at line {line}: {message}")]
    MalformedCsv { line: usize, message: String },
}

/// One cumulative point with its provenance, as serialized in fit reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub order_index: usize,
    pub corpus_id: String,
    pub cum_tokens: u64,
    pub cum_types: u64,
}

/// A fitted vocabulary-growth model plus the series it was fitted to.
///
/// The points ride along so a fit file is self-contained: projection and
/// charting can run from it without re-reading the corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub k: f64,
    pub beta: f64,
    pub r_squared: f64,
    pub n_points: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordering_policy: Option<String>,
    #[serde(default)]
    pub corpus_ids: Vec<String>,
    #[serde(default)]
    pub points: Vec<FitPoint>,
}

impl FitReport {
    pub fn params(&self) -> HeapsParams {
        HeapsParams {
            k: self.k,
            beta: self.beta,
            r_squared: self.r_squared,
            n_points: self.n_points,
        }
    }
}

/// Per-domain token/type figures for the stats table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatsRow {
    pub domain_id: String,
    pub label: String,
    pub register: String,
    pub raw_tokens: u64,
    pub raw_types: u64,
    pub sampled_tokens: u64,
    pub sampled_types: u64,
}

/// Machine-readable recommendation, mirroring `Recommendation` with the
/// fitted parameters inlined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecommendationReport {
    pub n_recommended: u64,
    pub threshold: f64,
    pub mode: String,
    pub k: f64,
    pub beta: f64,
}

impl RecommendationReport {
    pub fn new(rec: &Recommendation) -> Self {
        RecommendationReport {
            n_recommended: rec.n_recommended,
            threshold: rec.threshold,
            mode: mode_name(rec.mode).to_string(),
            k: rec.params_used.k,
            beta: rec.params_used.beta,
        }
    }
}

/// Grid bounds as they appear in the summary report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridReport {
    pub start: u64,
    pub end: u64,
    pub step: u64,
}

impl GridReport {
    pub fn new(grid: &ProjectionGrid) -> Self {
        GridReport {
            start: grid.start(),
            end: grid.end(),
            step: grid.step(),
        }
    }
}

/// One ordering's fit and recommendation inside a summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryResult {
    pub ordering_policy: String,
    pub k: f64,
    pub beta: f64,
    pub r_squared: f64,
    pub n_points: usize,
    pub n_recommended: u64,
}

/// Top-level record of one `analyze` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    pub seed: u64,
    pub target_tokens: u64,
    pub unit: String,
    pub threshold: f64,
    pub mode: String,
    pub grid: GridReport,
    pub results: Vec<SummaryResult>,
    /// Files the run wrote, relative to the output directory.
    pub outputs: Vec<String>,
}

/// Stable file-name fragment for an ordering policy.
pub fn policy_name(policy: OrderingPolicy) -> &'static str {
    match policy {
        OrderingPolicy::TypesDesc => "types_desc",
        OrderingPolicy::Manifest => "manifest",
        OrderingPolicy::PinnedShuffle => "pinned_shuffle",
    }
}

/// Stable name for a recommendation mode.
pub fn mode_name(mode: RecommendMode) -> &'static str {
    match mode {
        RecommendMode::PaperCompat => "paper_compat",
        RecommendMode::Exact => "exact",
    }
}

/// Stable name for a sampling unit.
pub fn unit_name(unit: SampleUnit) -> &'static str {
    match unit {
        SampleUnit::Line => "line",
        SampleUnit::Sentence => "sentence",
        SampleUnit::Token => "token",
    }
}

/// Renders a cumulative growth series as CSV.
pub fn growth_csv(series: &GrowthSeries) -> String {
    let mut out = String::from(GROWTH_CSV_HEADER);
    out.push('\n');
    for (i, point) in series.points.iter().enumerate() {
        let id = &series.ordering.permutation[i];
        writeln!(
            out,
            "{},{},{},{}",
            i + 1,
            id,
            point.cum_tokens,
            point.cum_types
        )
        .expect("writing to String cannot fail");
    }
    out
}

/// Parses a growth CSV back into fit-ready points.
///
/// The header must match exactly and every data row must carry exactly
/// four fields; errors cite the 1-based line number.
pub fn parse_growth_points(text: &str) -> Result<Vec<FitPoint>, ReportError> {
    let mut points = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if lineno == 1 {
            if line.trim_end() != GROWTH_CSV_HEADER {
                return Err(ReportError::MalformedCsv {
                    line: 1,
                    message: format!("expected header {GROWTH_CSV_HEADER:?}, found {line:?}"),
                });
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(ReportError::MalformedCsv {
                line: lineno,
                message: format!("expected 4 fields, found {}", fields.len()),
            });
        }
        let order_index =
            fields[0]
                .trim()
                .parse::<usize>()
                .map_err(|e| ReportError::MalformedCsv {
                    line: lineno,
                    message: format!("bad order_index {:?}: {e}", fields[0]),
                })?;
        let cum_tokens =
            fields[2]
                .trim()
                .parse::<u64>()
                .map_err(|e| ReportError::MalformedCsv {
                    line: lineno,
                    message: format!("bad cum_tokens {:?}: {e}", fields[2]),
                })?;
        let cum_types = fields[3]
            .trim()
            .parse::<u64>()
            .map_err(|e| ReportError::MalformedCsv {
                line: lineno,
                message: format!("bad cum_types {:?}: {e}", fields[3]),
            })?;
        points.push(FitPoint {
            order_index,
            corpus_id: fields[1].trim().to_string(),
            cum_tokens,
            cum_types,
        });
    }
    Ok(points)
}

/// Builds a fit report from a series and its fitted parameters.
pub fn fit_report(series: &GrowthSeries, params: HeapsParams) -> FitReport {
    FitReport {
        k: params.k,
        beta: params.beta,
        r_squared: params.r_squared,
        n_points: params.n_points,
        ordering_policy: Some(policy_name(series.ordering.policy).to_string()),
        corpus_ids: series.ordering.permutation.clone(),
        points: series
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| FitPoint {
                order_index: i + 1,
                corpus_id: series.ordering.permutation[i].clone(),
                cum_tokens: p.cum_tokens,
                cum_types: p.cum_types,
            })
            .collect(),
    }
}

/// Builds a fit report from standalone points (no ordering provenance).
pub fn fit_report_from_points(points: &[FitPoint], params: HeapsParams) -> FitReport {
    FitReport {
        k: params.k,
        beta: params.beta,
        r_squared: params.r_squared,
        n_points: params.n_points,
        ordering_policy: None,
        corpus_ids: points.iter().map(|p| p.corpus_id.clone()).collect(),
        points: points.to_vec(),
    }
}

/// Renders the per-domain stats table as CSV, with a trailing TOTAL row.
///
/// The TOTAL row's type counts must be computed over the union inventory
/// by the caller — summing per-domain type counts would double-count
/// shared vocabulary — so they are passed in explicitly.
pub fn stats_csv(rows: &[StatsRow], total_raw_types: u64, total_sampled_types: u64) -> String {
    let mut out = String::from(
        "domain_id,label,register,raw_tokens,raw_types,sampled_tokens,sampled_types\n",
    );
    let mut raw_tokens = 0u64;
    let mut sampled_tokens = 0u64;
    for row in rows {
        raw_tokens += row.raw_tokens;
        sampled_tokens += row.sampled_tokens;
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.domain_id,
            csv_escape(&row.label),
            row.register,
            row.raw_tokens,
            row.raw_types,
            row.sampled_tokens,
            row.sampled_types
        )
        .expect("writing to String cannot fail");
    }
    writeln!(
        out,
        "TOTAL,,,{raw_tokens},{total_raw_types},{sampled_tokens},{total_sampled_types}"
    )
    .expect("writing to String cannot fail");
    out
}

fn csv_escape(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Renders projection rows as CSV.
///
/// Columns carry both the raw values (shortest round-trip floats) and the
/// four-decimal display values the recommendation rule reads, so the
/// decision is auditable from the table alone. Delta columns are empty on
/// the first row.
pub fn projection_csv(rows: &[ProjectionRow]) -> String {
    let mut out =
        String::from("tokens,type_estimate,ttr,ttr_change,ttr_display,ttr_change_display\n");
    for row in rows {
        let delta = match row.delta_ttr {
            Some(d) => format!("{d}"),
            None => String::new(),
        };
        let delta_display = match row.delta_display {
            Some(d) => format!("{d:.4}"),
            None => String::new(),
        };
        writeln!(
            out,
            "{},{},{},{},{:.4},{}",
            row.n, row.v_rounded, row.ttr, delta, row.ttr_display, delta_display
        )
        .expect("writing to String cannot fail");
    }
    out
}

/// Pretty JSON with a trailing newline, for files meant to be read.
pub fn to_json_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize cleanly");
    text.push('\n');
    text
}
