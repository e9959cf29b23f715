//! Static SVG output: labelled scatter plots and histogram-vs-density
//! overlays. Output is plain text with fixed-precision coordinates, so equal
//! inputs give byte-identical files.

use std::collections::BTreeMap;
use std::fmt::Write as _;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 60.0;

/// Categorical palette; labels beyond nine reuse colors cyclically.
pub const PALETTE: [&str; 9] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22",
];

/// Data range padded by 5% on each side.
fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let span = if hi > lo { hi - lo } else { 1.0 };
    (lo - 0.05 * span, hi + 0.05 * span)
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, v: f64) -> f64 {
        MARGIN + (v - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, v: f64) -> f64 {
        HEIGHT - MARGIN - (v - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn axes(&self, out: &mut String, title: &str, x_label: &str, y_label: &str) {
        let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
        let _ = writeln!(
            out,
            r##"<rect x="{l}" y="{t}" width="{}" height="{}" fill="none" stroke="#333"/>"##,
            r - l,
            b - t
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="30" text-anchor="middle" font-size="16">{}</text>"#,
            WIDTH / 2.0,
            escape(title)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">{}</text>"#,
            WIDTH / 2.0,
            HEIGHT - 15.0,
            escape(x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="15" y="{}" text-anchor="middle" font-size="12" transform="rotate(-90 15 {})">{}</text>"#,
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(y_label)
        );
        let ticks = [
            (self.x.0, l, b + 15.0, "start"),
            (self.x.1, r, b + 15.0, "end"),
        ];
        for (v, x, y, anchor) in ticks {
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{y:.2}" text-anchor="{anchor}" font-size="10">{v:.3}</text>"#
            );
        }
        for (v, y) in [(self.y.0, b), (self.y.1, t + 10.0)] {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{y:.2}" text-anchor="end" font-size="10">{v:.3}</text>"#,
                l - 5.0
            );
        }
    }
}

fn header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {WIDTH} {HEIGHT}\" width=\"{WIDTH}\" height=\"{HEIGHT}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    )
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

/// Scatter plot of 2-D points, one color per distinct label (sorted
/// order). Unlabelled points share the first palette color.
pub fn scatter_svg(points: &[(f64, f64)], labels: Option<&[String]>, title: &str) -> String {
    let frame = Frame {
        x: padded_range(points.iter().map(|p| p.0)),
        y: padded_range(points.iter().map(|p| p.1)),
    };
    let mut colors: BTreeMap<&str, &str> = BTreeMap::new();
    if let Some(labels) = labels {
        for l in labels {
            colors.entry(l.as_str()).or_insert("");
        }
        for (i, c) in colors.values_mut().enumerate() {
            *c = PALETTE[i % PALETTE.len()];
        }
    }

    let mut out = header();
    frame.axes(&mut out, title, "dim1", "dim2");
    for (i, &(x, y)) in points.iter().enumerate() {
        let color = labels
            .and_then(|l| l.get(i))
            .and_then(|l| colors.get(l.as_str()).copied())
            .unwrap_or(PALETTE[0]);
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}" fill-opacity="0.7"/>"#,
            frame.px(x),
            frame.py(y)
        );
    }
    for (i, (label, color)) in colors.iter().enumerate() {
        let y = MARGIN + 15.0 + 16.0 * i as f64;
        let x = WIDTH - MARGIN + 8.0;
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{:.2}" r="4" fill="{color}"/><text x="{:.2}" y="{y:.2}" font-size="10">{}</text>"#,
            y - 3.0,
            x + 7.0,
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Histogram bars (as densities) with a density curve drawn over them.
pub fn histogram_density_svg(
    edges: &[f64],
    densities: &[f64],
    curve: &[(f64, f64)],
    title: &str,
) -> String {
    let x_range = padded_range(edges.iter().copied().chain(curve.iter().map(|p| p.0)));
    let y_top = densities
        .iter()
        .copied()
        .chain(curve.iter().map(|p| p.1))
        .fold(0.0f64, f64::max);
    let frame = Frame {
        x: x_range,
        y: (0.0, if y_top > 0.0 { 1.05 * y_top } else { 1.0 }),
    };
    let mut out = header();
    frame.axes(&mut out, title, "eigenvalue", "density");
    for (j, &h) in densities.iter().enumerate() {
        let (x0, x1) = (frame.px(edges[j]), frame.px(edges[j + 1]));
        let (y0, y1) = (frame.py(h), frame.py(0.0));
        let _ = writeln!(
            out,
            r##"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="#9ecae1" stroke="#3182bd" stroke-width="0.5"/>"##,
            x1 - x0,
            y1 - y0
        );
    }
    let path: Vec<String> = curve
        .iter()
        .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
        .collect();
    let _ = writeln!(
        out,
        r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="2"/>"##,
        path.join(" ")
    );
    out.push_str("</svg>\n");
    out
}
