//! TTR projection over a token grid and the stopping-rule recommendation.
//!
//! Given fitted Heaps parameters, every grid size N gets an estimated type
//! count V̂ = k·N^β and a type-token ratio V̂/N. The recommended corpus size
//! is the first grid point where the TTR decrease falls under a threshold —
//! the point where growing the corpus has essentially stopped buying new
//! forms.

use alloc::vec::Vec;

use crate::float;
use crate::heaps::{eval_heaps, HeapsParams};

/// Evenly spaced token grid, inclusive of both ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectionGrid {
    start: u64,
    end: u64,
    step: u64,
}

impl ProjectionGrid {
    /// Validates `start ≥ step ≥ 1`, `end ≥ start`, and that `end` lies on
    /// the grid (`end − start` divisible by `step`).
    pub fn new(start: u64, end: u64, step: u64) -> Result<Self, ProjectionError> {
        if step < 1 || start < step || end < start || !(end - start).is_multiple_of(step) {
            return Err(ProjectionError::InvalidGrid { start, end, step });
        }
        Ok(Self { start, end, step })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.end
    }

    pub fn step(&self) -> u64 {
        self.step
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        ((self.end - self.start) / self.step) as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false // a valid grid always holds at least its start point
    }

    /// The grid points in ascending order.
    pub fn points(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len() as u64).map(move |i| self.start + i * self.step)
    }
}

/// One million to 102 million tokens, stepping by one million.
impl Default for ProjectionGrid {
    fn default() -> Self {
        Self {
            start: 1_000_000,
            end: 102_000_000,
            step: 1_000_000,
        }
    }
}

/// Projection at one grid size.
///
/// Raw and display values are both kept: `ttr` is exact, `ttr_display` is
/// the 4-decimal half-up rounding used in published tables. The deltas of
/// the first row are absent — there is no previous row to compare with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionRow {
    pub n: u64,
    /// Unrounded k·n^β.
    pub v_real: f64,
    /// k·n^β rounded half-up to an integer.
    pub v_rounded: u64,
    /// v_real / n, exact.
    pub ttr: f64,
    /// ttr rounded half-up to 4 decimals.
    pub ttr_display: f64,
    /// |previous ttr − ttr|, computed from the raw ttr values.
    pub delta_ttr: Option<f64>,
    /// delta_ttr rounded half-up to 4 decimals. Never the difference of
    /// the two display values: rounding first then differencing drifts a
    /// whole display step for deltas near the rounding boundary.
    pub delta_display: Option<f64>,
}

/// Which comparison the stopping rule applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecommendMode {
    /// Compare the 4-decimal rounded delta: first row with
    /// `delta_display ≤ threshold`. This is the rule the published
    /// analysis used — its chosen sizes have raw deltas above 0.0001 that
    /// round down to it.
    PaperCompat,
    /// Compare the raw delta: first row with `delta_ttr < threshold`.
    Exact,
}

/// The stopping rule's verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recommendation {
    pub n_recommended: u64,
    pub threshold: f64,
    pub mode: RecommendMode,
    pub params_used: HeapsParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionError {
    InvalidGrid {
        start: u64,
        end: u64,
        step: u64,
    },
    /// recommend_size needs at least two rows (the first has no delta).
    TooFewRows {
        rows: usize,
    },
    /// No grid row satisfied the rule — the grid end must be raised.
    NoQualifyingRow {
        grid_end: u64,
    },
}

impl core::fmt::Display for ProjectionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ProjectionError::InvalidGrid { start, end, step } => write!(
                f,
                "invalid grid start={start} end={end} step={step}: \
                 need start ≥ step ≥ 1, end ≥ start, end on the grid"
            ),
            ProjectionError::TooFewRows { rows } => {
                write!(f, "need at least 2 projection rows, got {rows}")
            }
            ProjectionError::NoQualifyingRow { grid_end } => write!(
                f,
                "no grid point under the threshold up to {grid_end} tokens; raise the grid end"
            ),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for ProjectionError {}

/// Rounds half away from zero to 4 decimals (half-up for our non-negative
/// inputs), the convention of the published tables.
fn display4(x: f64) -> f64 {
    float::round(x * 10_000.0) / 10_000.0
}

/// Projects `params` over every grid point.
pub fn project(params: &HeapsParams, grid: &ProjectionGrid) -> Vec<ProjectionRow> {
    let mut rows = Vec::with_capacity(grid.len());
    let mut prev_ttr: Option<f64> = None;
    for n in grid.points() {
        let v_real = eval_heaps(params, n);
        let ttr = v_real / n as f64;
        let delta_ttr = prev_ttr.map(|prev| {
            let d = prev - ttr;
            if d < 0.0 {
                -d
            } else {
                d
            }
        });
        rows.push(ProjectionRow {
            n,
            v_real,
            v_rounded: float::round(v_real) as u64,
            ttr,
            ttr_display: display4(ttr),
            delta_ttr,
            delta_display: delta_ttr.map(display4),
        });
        prev_ttr = Some(ttr);
    }
    rows
}

/// Finds the first grid row where the TTR change falls under `threshold`.
///
/// Larger thresholds can only move the recommendation earlier, and for
/// β < 1 the raw delta decreases monotonically, so the first qualifying
/// row is the final answer — every later row qualifies too.
pub fn recommend_size(
    rows: &[ProjectionRow],
    params: &HeapsParams,
    threshold: f64,
    mode: RecommendMode,
) -> Result<Recommendation, ProjectionError> {
    if rows.len() < 2 {
        return Err(ProjectionError::TooFewRows { rows: rows.len() });
    }
    let hit = rows.iter().find(|row| match mode {
        RecommendMode::PaperCompat => row.delta_display.is_some_and(|d| d <= threshold),
        RecommendMode::Exact => row.delta_ttr.is_some_and(|d| d < threshold),
    });
    match hit {
        Some(row) => Ok(Recommendation {
            n_recommended: row.n,
            threshold,
            mode,
            params_used: *params,
        }),
        None => Err(ProjectionError::NoQualifyingRow {
            grid_end: rows.last().map(|r| r.n).unwrap_or(0),
        }),
    }
}
