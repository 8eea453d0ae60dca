//! Fitting V = k·N^β to a growth series.
//!
//! The fit is ordinary unweighted least squares of ln V on ln N; the slope
//! is β and the back-transformed intercept is k. Natural logarithms are
//! used internally, but the result is base-independent: changing the base
//! rescales both axes by the same constant, which leaves the slope and the
//! back-transformed intercept untouched.

use alloc::vec::Vec;

use crate::float;
use crate::growth::{GrowthPoint, GrowthSeries};

/// Fitted Heaps parameters with fit diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeapsParams {
    /// Scale coefficient k (always positive: it is exp of the intercept).
    pub k: f64,
    /// Growth exponent β. Natural-language corpora land in (0, 1); values
    /// outside that range are legal here — callers who care should warn.
    pub beta: f64,
    /// Coefficient of determination of the log-space fit, clamped to [0, 1].
    pub r_squared: f64,
    /// Number of points the fit consumed.
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FitError {
    /// Fewer than two distinct N values — the slope is undetermined.
    TooFewPoints { distinct: usize },
    /// A point with N = 0 or V = 0 cannot be log-transformed.
    NonPositive { index: usize },
}

impl core::fmt::Display for FitError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            FitError::TooFewPoints { distinct } => write!(
                f,
                "need at least 2 points with distinct token counts, got {distinct}"
            ),
            FitError::NonPositive { index } => {
                write!(f, "point {index} has a zero coordinate")
            }
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for FitError {}

/// Fits Heaps' function to a growth series.
pub fn fit_heaps(series: &GrowthSeries) -> Result<HeapsParams, FitError> {
    fit_points(&series.points)
}

/// Fits Heaps' function to bare (N, V) points.
pub fn fit_points(points: &[GrowthPoint]) -> Result<HeapsParams, FitError> {
    for (index, p) in points.iter().enumerate() {
        if p.cum_tokens == 0 || p.cum_types == 0 {
            return Err(FitError::NonPositive { index });
        }
    }
    let mut ns: Vec<u64> = points.iter().map(|p| p.cum_tokens).collect();
    ns.sort_unstable();
    ns.dedup();
    if ns.len() < 2 {
        return Err(FitError::TooFewPoints { distinct: ns.len() });
    }

    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|p| {
            (
                float::ln(p.cum_tokens as f64),
                float::ln(p.cum_types as f64),
            )
        })
        .collect();
    let mean_x = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = logs.iter().map(|(_, y)| y).sum::<f64>() / n;

    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for &(x, y) in &logs {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let beta = sxy / sxx;
    let intercept = mean_y - beta * mean_x;

    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for &(x, y) in &logs {
        let fitted = intercept + beta * x;
        ss_res += (y - fitted) * (y - fitted);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else if ss_res <= f64::EPSILON {
        // All V equal and perfectly fitted by a flat line.
        1.0
    } else {
        0.0
    };

    Ok(HeapsParams {
        k: float::exp(intercept),
        beta,
        r_squared,
        n_points: points.len(),
    })
}

/// Evaluates k·n^β, unrounded.
pub fn eval_heaps(params: &HeapsParams, n: u64) -> f64 {
    params.k * float::powf(n as f64, params.beta)
}
