//! Report serialization: structured text summaries, machine-readable TSV
//! tables, and small hand-rolled SVG plots for the fitted checks.

use std::fmt::Write as _;

use crate::checks::ClaimReport;

/// Human-readable summary: verdict, parameters, fitted constants, details,
/// then the data table. Deterministic (no timestamps).
pub fn report_text(rep: &ClaimReport) -> String {
    let mut s = String::new();
    writeln!(s, "check: {}", rep.claim).unwrap();
    writeln!(s, "verdict: {}", rep.verdict).unwrap();
    for (name, v) in &rep.params {
        writeln!(s, "param {name} = {v}").unwrap();
    }
    for (name, v) in &rep.constants {
        writeln!(s, "const {name} = {v}").unwrap();
    }
    writeln!(s, "details: {}", rep.details).unwrap();
    writeln!(s, "{}", rep.data_header.join("\t")).unwrap();
    for row in &rep.data_rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
        writeln!(s, "{}", cells.join("\t")).unwrap();
    }
    s
}

/// Tab-separated data table only (header + rows), for downstream tooling.
pub fn report_tsv(rep: &ClaimReport) -> String {
    let mut s = String::new();
    writeln!(s, "{}", rep.data_header.join("\t")).unwrap();
    for row in &rep.data_rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:.12e}")).collect();
        writeln!(s, "{}", cells.join("\t")).unwrap();
    }
    s
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const MARGIN: f64 = 60.0;

struct Frame {
    x_lo: f64,
    x_hi: f64,
    y_lo: f64,
    y_hi: f64,
}

impl Frame {
    fn of(points: &[(f64, f64)]) -> Frame {
        let mut f = Frame { x_lo: f64::INFINITY, x_hi: f64::NEG_INFINITY, y_lo: f64::INFINITY, y_hi: f64::NEG_INFINITY };
        for &(x, y) in points {
            f.x_lo = f.x_lo.min(x);
            f.x_hi = f.x_hi.max(x);
            f.y_lo = f.y_lo.min(y);
            f.y_hi = f.y_hi.max(y);
        }
        // pad degenerate extents so the transform stays finite
        if f.x_hi - f.x_lo < 1e-12 {
            f.x_lo -= 0.5;
            f.x_hi += 0.5;
        }
        if f.y_hi - f.y_lo < 1e-12 {
            f.y_lo -= 0.5;
            f.y_hi += 0.5;
        }
        f
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x_lo) / (self.x_hi - self.x_lo) * (W - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        H - MARGIN - (y - self.y_lo) / (self.y_hi - self.y_lo) * (H - 2.0 * MARGIN)
    }
}

fn svg_open(title: &str, x_label: &str, y_label: &str, frame: &Frame) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">"
    )
    .unwrap();
    writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>").unwrap();
    writeln!(
        s,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"14\">{title}</text>",
        W / 2.0
    )
    .unwrap();
    // axes
    writeln!(
        s,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>",
        m = MARGIN,
        b = H - MARGIN,
        r = W - MARGIN
    )
    .unwrap();
    writeln!(
        s,
        "<line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>",
        m = MARGIN,
        t = MARGIN,
        b = H - MARGIN
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">{x_label}</text>",
        W / 2.0,
        H - 16.0
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 16 {})\">{y_label}</text>",
        H / 2.0,
        H / 2.0
    )
    .unwrap();
    // corner tick labels
    writeln!(
        s,
        "<text x=\"{m}\" y=\"{b}\" font-family=\"monospace\" font-size=\"10\">{:.3e}</text>",
        frame.x_lo,
        m = MARGIN,
        b = H - MARGIN + 14.0
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{r}\" y=\"{b}\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">{:.3e}</text>",
        frame.x_hi,
        r = W - MARGIN,
        b = H - MARGIN + 14.0
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{m}\" y=\"{t}\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">{:.3e}</text>",
        frame.y_hi,
        m = MARGIN - 4.0,
        t = MARGIN + 4.0
    )
    .unwrap();
    writeln!(
        s,
        "<text x=\"{m}\" y=\"{b}\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">{:.3e}</text>",
        frame.y_lo,
        m = MARGIN - 4.0,
        b = H - MARGIN
    )
    .unwrap();
    s
}

/// Scatter of `points` with an optional overlaid polyline, as a standalone
/// SVG document.
pub fn svg_scatter(
    title: &str,
    x_label: &str,
    y_label: &str,
    points: &[(f64, f64)],
    line: Option<&[(f64, f64)]>,
) -> String {
    let mut all: Vec<(f64, f64)> = points.to_vec();
    if let Some(l) = line {
        all.extend_from_slice(l);
    }
    let frame = Frame::of(&all);
    let mut s = svg_open(title, x_label, y_label, &frame);
    if let Some(l) = line {
        let pts: Vec<String> = l
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        writeln!(
            s,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"#c33\" stroke-width=\"1.5\"/>",
            pts.join(" ")
        )
        .unwrap();
    }
    for &(x, y) in points {
        writeln!(
            s,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"3\" fill=\"#236\"/>",
            frame.px(x),
            frame.py(y)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

/// Decay plot for the Hölder fit: ln u against ln(dist/r) with the fitted
/// line C·t^α overlaid.
pub fn holder_plot(rep: &ClaimReport) -> String {
    let r = rep.params.iter().find(|(n, _)| n == "r").map_or(1.0, |(_, v)| *v);
    let pts: Vec<(f64, f64)> = rep
        .data_rows
        .iter()
        .map(|row| ((row[1] / r).ln(), row[2].ln()))
        .collect();
    let line = match (rep.constant("alpha"), rep.constant("c_fit")) {
        (Some(alpha), Some(c)) if !pts.is_empty() => {
            let (x0, x1) = pts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), p| {
                (a.min(p.0), b.max(p.0))
            });
            Some(vec![(x0, c.ln() + alpha * x0), (x1, c.ln() + alpha * x1)])
        }
        _ => None,
    };
    svg_scatter(
        "holder_decay",
        "ln(dist / r)",
        "ln u",
        &pts,
        line.as_deref(),
    )
}

/// Envelope plot for the weak-A∞ fit: C₀(θ) over the θ grid.
pub fn ainfty_plot(rep: &ClaimReport) -> String {
    let pts: Vec<(f64, f64)> = rep
        .data_rows
        .iter()
        .filter(|row| row[1].is_finite())
        .map(|row| (row[0], row[1]))
        .collect();
    svg_scatter("weak_a_infinity envelope", "theta", "C0(theta)", &pts, Some(&pts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checks::ClaimVerdict;

    fn sample_report() -> ClaimReport {
        ClaimReport {
            claim: "holder_decay".into(),
            params: vec![("r".into(), 0.15)],
            constants: vec![("alpha".into(), 1.0), ("c_fit".into(), 0.4)],
            verdict: ClaimVerdict::Supported,
            details: "sample".into(),
            data_header: vec!["k".into(), "dist".into(), "u".into()],
            data_rows: vec![vec![0.0, 0.15, 0.06], vec![1.0, 0.015, 0.006]],
        }
    }

    #[test]
    fn text_and_tsv_are_deterministic_and_complete() {
        let rep = sample_report();
        let a = report_text(&rep);
        let b = report_text(&rep);
        assert_eq!(a, b);
        assert!(a.contains("verdict: supported"));
        assert!(a.contains("const alpha = 1"));
        let tsv = report_tsv(&rep);
        let mut lines = tsv.lines();
        assert_eq!(lines.next().unwrap(), "k\tdist\tu");
        assert_eq!(tsv.lines().count(), 3);
    }

    #[test]
    fn svg_outputs_are_wellformed() {
        let rep = sample_report();
        for svg in [holder_plot(&rep), ainfty_plot(&rep)] {
            assert!(svg.starts_with("<svg"));
            assert!(svg.trim_end().ends_with("</svg>"));
            assert!(svg.matches("<circle").count() >= 1);
        }
    }

    #[test]
    fn degenerate_extent_stays_finite() {
        let svg = svg_scatter("t", "x", "y", &[(1.0, 2.0)], None);
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
