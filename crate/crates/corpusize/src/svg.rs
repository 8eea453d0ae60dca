//! Minimal deterministic SVG line charts.
//!
//! Hand-rolled on purpose: the charts exist so runs can be diffed, so the
//! same data must always produce byte-identical markup. Everything is
//! computed with plain f64 arithmetic and written with fixed two-decimal
//! coordinates; there is no randomness, no timestamps, no external assets.

use std::fmt::Write as _;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 64.0;

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// One polyline on the chart.
#[derive(Debug, Clone)]
pub struct SeriesSpec<'a> {
    pub label: &'a str,
    pub points: &'a [(f64, f64)],
    /// Draw circle markers at each point (for sparse observed data).
    pub marker: bool,
}

/// A single-panel line chart.
#[derive(Debug, Clone)]
pub struct ChartSpec<'a> {
    pub title: &'a str,
    pub x_label: &'a str,
    pub y_label: &'a str,
    pub series: Vec<SeriesSpec<'a>>,
    /// Optional dashed vertical marker line with a caption.
    pub vline: Option<(f64, &'a str)>,
    /// Optional dashed horizontal marker line with a caption.
    pub hline: Option<(f64, &'a str)>,
}

impl ChartSpec<'_> {
    /// Renders the chart. Series with no points are skipped; an entirely
    /// empty chart still renders its frame and labels.
    pub fn render(&self) -> String {
        let (x_min, x_max) = data_range(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.0))
                .chain(self.vline.map(|(x, _)| x)),
        );
        let (y_min, y_max) = data_range(
            self.series
                .iter()
                .flat_map(|s| s.points.iter().map(|p| p.1))
                .chain(self.hline.map(|(y, _)| y)),
        );

        let x_ticks = ticks(x_min, x_max);
        let y_ticks = ticks(y_min, y_max);
        // Tick bounds become the plotted range so lines never overrun the frame.
        let x_lo = x_ticks.first().copied().unwrap_or(0.0).min(x_min);
        let x_hi = x_ticks.last().copied().unwrap_or(1.0).max(x_max);
        let y_lo = y_ticks.first().copied().unwrap_or(0.0).min(y_min);
        let y_hi = y_ticks.last().copied().unwrap_or(1.0).max(y_max);

        let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        let to_x =
            |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo).max(f64::MIN_POSITIVE) * plot_w;
        let to_y = |y: f64| {
            MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo).max(f64::MIN_POSITIVE) * plot_h
        };

        let mut out = String::new();
        writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" \
             width=\"{WIDTH}\" height=\"{HEIGHT}\" font-family=\"sans-serif\">"
        )
        .unwrap();
        writeln!(
            out,
            "  <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>"
        )
        .unwrap();
        writeln!(
            out,
            "  <text x=\"{:.2}\" y=\"26\" font-size=\"17\" text-anchor=\"middle\">{}</text>",
            WIDTH / 2.0,
            escape(self.title)
        )
        .unwrap();

        // Gridlines + axis tick labels.
        for &t in &y_ticks {
            let y = to_y(t);
            writeln!(
                out,
                "  <line x1=\"{MARGIN_LEFT:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" \
                 stroke=\"#dddddd\" stroke-width=\"1\"/>",
                WIDTH - MARGIN_RIGHT
            )
            .unwrap();
            writeln!(
                out,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
                MARGIN_LEFT - 8.0,
                y + 4.0,
                tick_label(t)
            )
            .unwrap();
        }
        for &t in &x_ticks {
            let x = to_x(t);
            writeln!(
                out,
                "  <line x1=\"{x:.2}\" y1=\"{MARGIN_TOP:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" \
                 stroke=\"#dddddd\" stroke-width=\"1\"/>",
                HEIGHT - MARGIN_BOTTOM
            )
            .unwrap();
            writeln!(
                out,
                "  <text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
                HEIGHT - MARGIN_BOTTOM + 20.0,
                tick_label(t)
            )
            .unwrap();
        }

        // Frame.
        writeln!(
            out,
            "  <rect x=\"{MARGIN_LEFT:.2}\" y=\"{MARGIN_TOP:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
             fill=\"none\" stroke=\"#444444\" stroke-width=\"1\"/>",
            plot_w, plot_h
        )
        .unwrap();

        // Axis captions.
        writeln!(
            out,
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\">{}</text>",
            MARGIN_LEFT + plot_w / 2.0,
            HEIGHT - 18.0,
            escape(self.x_label)
        )
        .unwrap();
        writeln!(
            out,
            "  <text x=\"20\" y=\"{:.2}\" font-size=\"13\" text-anchor=\"middle\" \
             transform=\"rotate(-90 20 {:.2})\">{}</text>",
            MARGIN_TOP + plot_h / 2.0,
            MARGIN_TOP + plot_h / 2.0,
            escape(self.y_label)
        )
        .unwrap();

        // Marker lines under the data.
        if let Some((x, caption)) = self.vline {
            let px = to_x(x);
            writeln!(
                out,
                "  <line x1=\"{px:.2}\" y1=\"{MARGIN_TOP:.2}\" x2=\"{px:.2}\" y2=\"{:.2}\" \
                 stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>",
                HEIGHT - MARGIN_BOTTOM
            )
            .unwrap();
            writeln!(
                out,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#555555\">{}</text>",
                px + 6.0,
                MARGIN_TOP + 16.0,
                escape(caption)
            )
            .unwrap();
        }
        if let Some((y, caption)) = self.hline {
            let py = to_y(y);
            writeln!(
                out,
                "  <line x1=\"{MARGIN_LEFT:.2}\" y1=\"{py:.2}\" x2=\"{:.2}\" y2=\"{py:.2}\" \
                 stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>",
                WIDTH - MARGIN_RIGHT
            )
            .unwrap();
            writeln!(
                out,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" fill=\"#555555\">{}</text>",
                WIDTH - MARGIN_RIGHT - 6.0 - 7.0 * caption.chars().count() as f64,
                py - 6.0,
                escape(caption)
            )
            .unwrap();
        }

        // Data series.
        for (i, series) in self.series.iter().enumerate() {
            if series.points.is_empty() {
                continue;
            }
            let color = PALETTE[i % PALETTE.len()];
            let mut path = String::new();
            for (j, &(x, y)) in series.points.iter().enumerate() {
                if j > 0 {
                    path.push(' ');
                }
                write!(path, "{:.2},{:.2}", to_x(x), to_y(y)).unwrap();
            }
            writeln!(
                out,
                "  <polyline points=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>"
            )
            .unwrap();
            if series.marker {
                for &(x, y) in series.points {
                    writeln!(
                        out,
                        "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.5\" fill=\"{color}\"/>",
                        to_x(x),
                        to_y(y)
                    )
                    .unwrap();
                }
            }
        }

        // Legend, top-left inside the frame.
        let mut ly = MARGIN_TOP + 14.0;
        for (i, series) in self.series.iter().enumerate() {
            if series.label.is_empty() {
                continue;
            }
            let color = PALETTE[i % PALETTE.len()];
            let lx = MARGIN_LEFT + 12.0;
            writeln!(
                out,
                "  <line x1=\"{lx:.2}\" y1=\"{ly:.2}\" x2=\"{:.2}\" y2=\"{ly:.2}\" \
                 stroke=\"{color}\" stroke-width=\"2\"/>",
                lx + 22.0
            )
            .unwrap();
            writeln!(
                out,
                "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{}</text>",
                lx + 28.0,
                ly + 4.0,
                escape(series.label)
            )
            .unwrap();
            ly += 18.0;
        }

        out.push_str("</svg>\n");
        out
    }
}

fn data_range<I: Iterator<Item = f64>>(values: I) -> (f64, f64) {
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in values {
        if v.is_finite() {
            min = min.min(v);
            max = max.max(v);
        }
    }
    if !min.is_finite() {
        return (0.0, 1.0);
    }
    if min == max {
        // Degenerate span: widen symmetrically so ticks exist.
        let pad = if min == 0.0 { 1.0 } else { min.abs() * 0.1 };
        return (min - pad, max + pad);
    }
    (min, max)
}

/// Round-number ticks covering [min, max], aiming at about six intervals.
fn ticks(min: f64, max: f64) -> Vec<f64> {
    let span = (max - min).max(f64::MIN_POSITIVE);
    let raw_step = span / 6.0;
    let magnitude = 10f64.powf(raw_step.log10().floor());
    let normalized = raw_step / magnitude;
    let nice = if normalized <= 1.0 {
        1.0
    } else if normalized <= 2.0 {
        2.0
    } else if normalized <= 5.0 {
        5.0
    } else {
        10.0
    };
    let step = nice * magnitude;
    let first = (min / step).floor() * step;
    let last = (max / step).ceil() * step;
    let count = ((last - first) / step).round() as usize;
    (0..=count).map(|i| first + step * i as f64).collect()
}

/// Short human tick label: 42000000 → "42M", 1500 → "1.5k", 0.0081 → "0.0081".
fn tick_label(value: f64) -> String {
    let abs = value.abs();
    if abs >= 1e6 {
        trim_decimals(value / 1e6) + "M"
    } else if abs >= 1e3 {
        trim_decimals(value / 1e3) + "k"
    } else if abs == 0.0 {
        "0".to_string()
    } else if abs < 0.01 {
        format!("{value:.4}")
    } else if abs < 1.0 {
        format!("{value:.3}")
    } else {
        trim_decimals(value)
    }
}

fn trim_decimals(value: f64) -> String {
    let s = format!("{value:.2}");
    let s = s.trim_end_matches('0');
    s.trim_end_matches('.').to_string()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
