//! Self-contained SVG renderings of experiment results.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::{SweepSummary, TrialRecord};
use crate::scalar::Scalar;

const PANEL_W: f64 = 320.0;
const PANEL_H: f64 = 220.0;
const MARGIN: f64 = 40.0;
const BINS: usize = 20;

fn header(out: &mut String, width: f64, height: f64) {
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    )
    .unwrap();
}

fn axes(out: &mut String, x0: f64, y0: f64, w: f64, h: f64) {
    writeln!(
        out,
        r#"<path d="M{x0} {y0} V{} H{}" fill="none" stroke="black"/>"#,
        y0 + h,
        x0 + w
    )
    .unwrap();
}

/// One histogram of the nonpositive proportion per `k`, side by side.
/// Bins span the observed range of each panel.
pub fn distribution_svg<S: Scalar>(records: &[TrialRecord<S>]) -> String {
    let mut by_k: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        if let Ok(s) = &r.stats {
            by_k.entry(r.k).or_default().push(s.prop_nonpositive());
        }
    }
    let panels = by_k.len().max(1) as f64;
    let mut out = String::new();
    header(
        &mut out,
        panels * (PANEL_W + MARGIN) + MARGIN,
        PANEL_H + 2.0 * MARGIN,
    );
    for (idx, (k, values)) in by_k.iter().enumerate() {
        let x0 = MARGIN + idx as f64 * (PANEL_W + MARGIN);
        let y0 = MARGIN;
        let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let mut counts = [0usize; BINS];
        for v in values {
            let b = (((v - lo) / span) * BINS as f64) as usize;
            counts[b.min(BINS - 1)] += 1;
        }
        let top = *counts.iter().max().unwrap_or(&1) as f64;
        let bar_w = PANEL_W / BINS as f64;
        for (b, &c) in counts.iter().enumerate() {
            let h = c as f64 / top * PANEL_H;
            writeln!(
                out,
                r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{h:.2}" fill="#4a78b5" stroke="white"/>"##,
                x0 + b as f64 * bar_w,
                y0 + PANEL_H - h,
                bar_w
            )
            .unwrap();
        }
        axes(&mut out, x0, y0, PANEL_W, PANEL_H);
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">k = {k}</text>"#,
            x0 + PANEL_W / 2.0,
            y0 - 10.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{x0}" y="{}">{lo:.3}</text>"#,
            y0 + PANEL_H + 15.0
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{hi:.3}</text>"#,
            x0 + PANEL_W,
            y0 + PANEL_H + 15.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

/// Mean nonpositive proportion against `k / n`, one series per `n`, with
/// bars one standard deviation wide.
pub fn sweep_svg(summary: &SweepSummary) -> String {
    const COLORS: [&str; 6] = [
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    ];
    let mut series: BTreeMap<usize, Vec<(f64, f64, f64)>> = BTreeMap::new();
    for r in &summary.rows {
        series.entry(r.n).or_default().push((
            r.k as f64 / r.n as f64,
            r.mean_prop_nonpos,
            r.std_prop_nonpos,
        ));
    }
    let max_x = summary
        .rows
        .iter()
        .map(|r| r.k as f64 / r.n as f64)
        .fold(1.0, f64::max);
    let (w, h) = (2.0 * PANEL_W, 1.5 * PANEL_H);
    let sx = |x: f64| MARGIN + x / (max_x + 0.5) * w;
    let sy = |y: f64| MARGIN + (1.0 - y) * h;
    let mut out = String::new();
    header(&mut out, w + 3.0 * MARGIN + 80.0, h + 2.0 * MARGIN);
    axes(&mut out, MARGIN, MARGIN, w, h);
    for tick in 0..=4 {
        let y = tick as f64 / 4.0;
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end">{y:.2}</text>"#,
            MARGIN - 4.0,
            sy(y) + 4.0
        )
        .unwrap();
    }
    for (idx, (n, points)) in series.iter().enumerate() {
        let color = COLORS[idx % COLORS.len()];
        let offset = (idx as f64 - series.len() as f64 / 2.0) * 0.03;
        let path: Vec<String> = points
            .iter()
            .map(|&(x, m, _)| format!("{:.2},{:.2}", sx(x + offset), sy(m)))
            .collect();
        writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}"/>"#,
            path.join(" ")
        )
        .unwrap();
        for &(x, m, s) in points {
            let px = sx(x + offset);
            writeln!(
                out,
                r#"<line x1="{px:.2}" y1="{:.2}" x2="{px:.2}" y2="{:.2}" stroke="{color}"/>"#,
                sy((m + s).min(1.0)),
                sy((m - s).max(0.0))
            )
            .unwrap();
            writeln!(
                out,
                r#"<circle cx="{px:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                sy(m)
            )
            .unwrap();
        }
        let ly = MARGIN + 16.0 * idx as f64;
        writeln!(
            out,
            r#"<text x="{}" y="{ly}" fill="{color}">n = {n}</text>"#,
            MARGIN + w + 20.0
        )
        .unwrap();
    }
    let mut mults: Vec<f64> = summary
        .rows
        .iter()
        .map(|r| r.k as f64 / r.n as f64)
        .collect();
    mults.sort_by(f64::total_cmp);
    mults.dedup();
    for x in mults {
        writeln!(
            out,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{x}n</text>"#,
            sx(x),
            MARGIN + h + 15.0
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::super::{run_distribution, run_sweep, ExperimentConfig};
    use super::*;

    #[test]
    fn svgs_are_well_formed_and_deterministic() {
        let config = ExperimentConfig::default();
        let records = run_distribution::<f64>(6, &[6, 12], 5, &config).unwrap();
        let a = distribution_svg(&records);
        assert!(a.starts_with("<svg") && a.trim_end().ends_with("</svg>"));
        assert_eq!(a.matches("k = ").count(), 2);
        assert_eq!(a, distribution_svg(&records));
        let summary = run_sweep::<f64>(&[6, 8], &[1, 2], 3, &config).unwrap();
        let b = sweep_svg(&summary);
        assert_eq!(b.matches("<circle").count(), 4);
    }
}
