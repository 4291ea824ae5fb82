//! Self-contained SVG line charts for run summaries: one polyline per
//! labeled series, linear axes with tick labels, and a legend.

use std::path::Path;

use super::SummaryRecord;
use crate::{Result, SimError};

/// Which summary column a plot shows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMetric {
    Loss,
    GradNorm,
    LossMinusFstar,
}

impl PlotMetric {
    fn title(self) -> &'static str {
        match self {
            PlotMetric::Loss => "loss",
            PlotMetric::GradNorm => "gradient l2 norm",
            PlotMetric::LossMinusFstar => "loss minus ground energy",
        }
    }

    fn series(self, summary: &SummaryRecord) -> Result<Vec<f64>> {
        Ok(match self {
            PlotMetric::Loss => summary.loss_mean.clone(),
            PlotMetric::GradNorm => summary.grad_mean.clone(),
            PlotMetric::LossMinusFstar => summary
                .loss_minus_fstar_mean
                .clone()
                .ok_or_else(|| SimError::Invalid("summary lacks the ground-energy column".into()))?,
        })
    }
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 160.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;
const PALETTE: [&str; 9] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#17becf",
];

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Round tick labels to a compact form.
fn fmt_tick(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let a = x.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{x:.3}");
        let s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        if s.is_empty() || s == "-" {
            "0".into()
        } else {
            s
        }
    } else {
        format!("{x:.2e}")
    }
}

/// Evenly spaced ticks over [lo, hi].
fn ticks(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..=count)
        .map(|i| lo + (hi - lo) * i as f64 / count as f64)
        .collect()
}

/// Render an SVG line chart of one metric for several labeled summaries.
///
/// All summaries must cover identical epoch grids. The file is valid
/// standalone XML.
pub fn emit_comparison_plot(
    series: &[(String, SummaryRecord)],
    metric: PlotMetric,
    path: &Path,
) -> Result<()> {
    if series.is_empty() {
        return Err(SimError::Invalid("plot needs at least one summary".into()));
    }
    let epochs = &series[0].1.epochs;
    for (_, s) in series {
        if s.epochs != *epochs {
            return Err(SimError::Invalid("summaries have inconsistent epoch counts".into()));
        }
    }
    let curves: Vec<(String, Vec<f64>)> = series
        .iter()
        .map(|(label, s)| Ok((label.clone(), metric.series(s)?)))
        .collect::<Result<_>>()?;

    let x_lo = *epochs.first().unwrap() as f64;
    let x_hi = (*epochs.last().unwrap() as f64).max(x_lo + 1.0);
    let mut y_lo = f64::INFINITY;
    let mut y_hi = f64::NEG_INFINITY;
    for (_, ys) in &curves {
        for &y in ys {
            y_lo = y_lo.min(y);
            y_hi = y_hi.max(y);
        }
    }
    if !(y_lo.is_finite() && y_hi.is_finite()) {
        return Err(SimError::Invalid("non-finite values in plot data".into()));
    }
    // Degenerate (constant) data still renders as a horizontal line.
    if y_hi - y_lo < 1e-300 {
        y_lo -= 1.0;
        y_hi += 1.0;
    }
    let pad = 0.05 * (y_hi - y_lo);
    let (y_lo, y_hi) = (y_lo - pad, y_hi + pad);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |x: f64| MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
    let y_of = |y: f64| MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
    ));
    // Axes.
    svg.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        MARGIN_LEFT,
        MARGIN_TOP + plot_h,
        MARGIN_LEFT + plot_w,
        MARGIN_TOP + plot_h
    ));
    svg.push_str(&format!(
        "  <line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
        MARGIN_LEFT,
        MARGIN_TOP,
        MARGIN_LEFT,
        MARGIN_TOP + plot_h
    ));
    for t in ticks(x_lo, x_hi, 5) {
        let x = x_of(t);
        svg.push_str(&format!(
            "  <line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{x:.2}\" y2=\"{:.2}\" stroke=\"black\"/>\n",
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{x:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            MARGIN_TOP + plot_h + 18.0,
            fmt_tick(t)
        ));
    }
    for t in ticks(y_lo, y_hi, 5) {
        let y = y_of(t);
        svg.push_str(&format!(
            "  <line x1=\"{:.2}\" y1=\"{y:.2}\" x2=\"{:.2}\" y2=\"{y:.2}\" stroke=\"black\"/>\n",
            MARGIN_LEFT - 5.0,
            MARGIN_LEFT
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            MARGIN_LEFT - 8.0,
            y + 4.0,
            fmt_tick(t)
        ));
    }
    // Axis titles.
    svg.push_str(&format!(
        "  <text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\">epoch</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "  <text x=\"16\" y=\"{:.2}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.2})\">{}</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        metric.title()
    ));
    // Curves.
    for (idx, (_, ys)) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let points: Vec<String> = epochs
            .iter()
            .zip(ys)
            .map(|(&e, &y)| format!("{:.2},{:.2}", x_of(e as f64), y_of(y)))
            .collect();
        svg.push_str(&format!(
            "  <polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.join(" ")
        ));
    }
    // Legend.
    for (idx, (label, _)) in curves.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        let y = MARGIN_TOP + 14.0 + idx as f64 * 18.0;
        let x = MARGIN_LEFT + plot_w + 12.0;
        svg.push_str(&format!(
            "  <line x1=\"{x:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"{color}\" stroke-width=\"1.5\"/>\n",
            y - 4.0,
            x + 18.0,
            y - 4.0
        ));
        svg.push_str(&format!(
            "  <text x=\"{:.2}\" y=\"{y:.2}\" font-size=\"12\">{}</text>\n",
            x + 24.0,
            xml_escape(label)
        ));
    }
    svg.push_str("</svg>\n");
    super::write_file(path, svg.as_bytes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::summarize;
    use crate::engine::{RunTrace, TraceRow};

    fn summary_of(losses: &[f64]) -> SummaryRecord {
        let rows = losses
            .iter()
            .enumerate()
            .map(|(epoch, &loss)| TraceRow {
                epoch,
                loss,
                grad_l2_norm: loss.abs() * 0.5,
            })
            .collect();
        summarize(&[RunTrace { rows }], None).unwrap()
    }

    fn tmp(name: &str) -> std::path::PathBuf {
        let dir = std::env::temp_dir().join("qinit-plot-test");
        std::fs::create_dir_all(&dir).unwrap();
        dir.join(name)
    }

    #[test]
    fn one_summary_one_polyline() {
        let path = tmp("one.svg");
        emit_comparison_plot(
            &[("dpg".into(), summary_of(&[3.0, 2.0, 1.0]))],
            PlotMetric::Loss,
            &path,
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("<polyline").count(), 1);
        assert!(text.starts_with("<?xml"));
    }

    #[test]
    fn legend_lists_labels_verbatim() {
        let path = tmp("two.svg");
        emit_comparison_plot(
            &[
                ("dpg <A&B>".into(), summary_of(&[3.0, 1.0])),
                ("zero".into(), summary_of(&[2.0, 2.0])),
            ],
            PlotMetric::Loss,
            &path,
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.matches("<polyline").count(), 2);
        assert!(text.contains("dpg &lt;A&amp;B&gt;"));
        assert!(text.contains(">zero</text>"));
    }

    #[test]
    fn constant_zero_series_is_horizontal() {
        let path = tmp("flat.svg");
        emit_comparison_plot(
            &[("flat".into(), summary_of(&[0.0, 0.0, 0.0]))],
            PlotMetric::Loss,
            &path,
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let points = text
            .split("points=\"")
            .nth(1)
            .unwrap()
            .split('"')
            .next()
            .unwrap();
        let ys: Vec<&str> = points
            .split_whitespace()
            .map(|p| p.split(',').nth(1).unwrap())
            .collect();
        assert!(ys.windows(2).all(|w| w[0] == w[1]), "{ys:?}");
    }

    #[test]
    fn inconsistent_epochs_rejected() {
        let r = emit_comparison_plot(
            &[
                ("a".into(), summary_of(&[1.0, 2.0])),
                ("b".into(), summary_of(&[1.0, 2.0, 3.0])),
            ],
            PlotMetric::Loss,
            &tmp("bad.svg"),
        );
        assert!(r.is_err());
    }

    #[test]
    fn fstar_metric_requires_column() {
        let r = emit_comparison_plot(
            &[("a".into(), summary_of(&[1.0]))],
            PlotMetric::LossMinusFstar,
            &tmp("fstar.svg"),
        );
        assert!(r.is_err());
    }
}
