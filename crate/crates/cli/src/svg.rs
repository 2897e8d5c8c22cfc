//! Minimal static SVG line and scatter charts.

use std::fmt::Write;

const PANEL_W: f64 = 480.0;
const PANEL_H: f64 = 360.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 32.0;
const MARGIN_B: f64 = 46.0;

pub const BLUE: &str = "#1f77b4";
pub const ORANGE: &str = "#ff7f0e";
pub const GREEN: &str = "#2ca02c";
pub const RED: &str = "#d62728";
pub const GREY: &str = "#7f7f7f";
pub const BLACK: &str = "#000000";

#[derive(Clone, Copy, Debug)]
pub struct Stroke {
    pub color: &'static str,
    pub dashed: bool,
}

impl Stroke {
    pub const fn solid(color: &'static str) -> Self {
        Stroke {
            color,
            dashed: false,
        }
    }

    pub const fn dashed(color: &'static str) -> Self {
        Stroke {
            color,
            dashed: true,
        }
    }
}

enum Item {
    Line(Vec<(f64, f64)>, Stroke),
    Dots(Vec<(f64, f64)>, &'static str, f64),
    Segment((f64, f64), (f64, f64), Stroke, f64),
    VLine(f64, Stroke),
    HBand(f64, f64, &'static str),
    VBand(f64, f64, &'static str),
}

pub struct Chart {
    title: String,
    x_label: String,
    y_label: String,
    x_range: Option<(f64, f64)>,
    y_range: Option<(f64, f64)>,
    items: Vec<Item>,
    legend: Vec<(String, Stroke)>,
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Chart {
            title: title.into(),
            x_label: x_label.into(),
            y_label: y_label.into(),
            x_range: None,
            y_range: None,
            items: Vec::new(),
            legend: Vec::new(),
        }
    }

    pub fn x_range(mut self, lo: f64, hi: f64) -> Self {
        self.x_range = Some((lo, hi));
        self
    }

    pub fn y_range(mut self, lo: f64, hi: f64) -> Self {
        self.y_range = Some((lo, hi));
        self
    }

    pub fn line(&mut self, points: Vec<(f64, f64)>, stroke: Stroke) -> &mut Self {
        self.items.push(Item::Line(points, stroke));
        self
    }

    pub fn dots(&mut self, points: Vec<(f64, f64)>, color: &'static str, radius: f64) -> &mut Self {
        self.items.push(Item::Dots(points, color, radius));
        self
    }

    pub fn segment(
        &mut self,
        from: (f64, f64),
        to: (f64, f64),
        stroke: Stroke,
        width: f64,
    ) -> &mut Self {
        self.items.push(Item::Segment(from, to, stroke, width));
        self
    }

    pub fn vline(&mut self, x: f64, stroke: Stroke) -> &mut Self {
        self.items.push(Item::VLine(x, stroke));
        self
    }

    /// Shaded horizontal strip `y0 <= y <= y1` across the whole panel.
    pub fn hband(&mut self, y0: f64, y1: f64, color: &'static str) -> &mut Self {
        self.items.push(Item::HBand(y0, y1, color));
        self
    }

    /// Shaded vertical strip `x0 <= x <= x1`.
    pub fn vband(&mut self, x0: f64, x1: f64, color: &'static str) -> &mut Self {
        self.items.push(Item::VBand(x0, x1, color));
        self
    }

    pub fn legend(&mut self, label: &str, stroke: Stroke) -> &mut Self {
        self.legend.push((label.into(), stroke));
        self
    }

    fn data_extent(&self) -> ((f64, f64), (f64, f64)) {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for item in &self.items {
            match item {
                Item::Line(pts, _) | Item::Dots(pts, _, _) => {
                    for &(x, y) in pts {
                        xs.push(x);
                        ys.push(y);
                    }
                }
                Item::Segment(a, b, _, _) => {
                    xs.extend([a.0, b.0]);
                    ys.extend([a.1, b.1]);
                }
                Item::VLine(x, _) => xs.push(*x),
                Item::HBand(y0, y1, _) => ys.extend([*y0, *y1]),
                Item::VBand(x0, x1, _) => xs.extend([*x0, *x1]),
            }
        }
        (padded_extent(&xs), padded_extent(&ys))
    }

    fn render(&self, out: &mut String, ox: f64, oy: f64) {
        let (auto_x, auto_y) = self.data_extent();
        let (x0, x1) = self.x_range.unwrap_or(auto_x);
        let (y0, y1) = self.y_range.unwrap_or(auto_y);
        let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
        let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
        let left = ox + MARGIN_L;
        let top = oy + MARGIN_T;
        let sx = |x: f64| left + (x - x0) / (x1 - x0) * plot_w;
        let sy = |y: f64| top + plot_h - (y - y0) / (y1 - y0) * plot_h;

        let _ = writeln!(out, "<g>");
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#,
            left + plot_w / 2.0,
            oy + 20.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<defs><clipPath id="clip{ox:.0}_{oy:.0}"><rect x="{left:.1}" y="{top:.1}" width="{plot_w:.1}" height="{plot_h:.1}"/></clipPath></defs>"#
        );
        let _ = writeln!(out, r#"<g clip-path="url(#clip{ox:.0}_{oy:.0})">"#);
        for item in &self.items {
            match item {
                Item::HBand(a, b, color) => {
                    let (ya, yb) = (sy(*a), sy(*b));
                    let _ = writeln!(
                        out,
                        r#"<rect x="{left:.1}" y="{:.2}" width="{plot_w:.1}" height="{:.2}" fill="{color}" fill-opacity="0.2"/>"#,
                        ya.min(yb),
                        (ya - yb).abs()
                    );
                }
                Item::VBand(a, b, color) => {
                    let (xa, xb) = (sx(*a), sx(*b));
                    let _ = writeln!(
                        out,
                        r#"<rect x="{:.2}" y="{top:.1}" width="{:.2}" height="{plot_h:.1}" fill="{color}" fill-opacity="0.2"/>"#,
                        xa.min(xb),
                        (xa - xb).abs()
                    );
                }
                _ => {}
            }
        }
        for item in &self.items {
            match item {
                Item::Line(pts, stroke) if pts.len() > 1 => {
                    let path: Vec<String> = pts
                        .iter()
                        .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
                        .collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"{}/>"#,
                        path.join(" "),
                        stroke.color,
                        dash(stroke)
                    );
                }
                Item::Dots(pts, color, r) => {
                    for &(x, y) in pts {
                        let _ = writeln!(
                            out,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="{r}" fill="{color}"/>"#,
                            sx(x),
                            sy(y)
                        );
                    }
                }
                Item::Segment(a, b, stroke, width) => {
                    let _ = writeln!(
                        out,
                        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="{width}"{}/>"#,
                        sx(a.0),
                        sy(a.1),
                        sx(b.0),
                        sy(b.1),
                        stroke.color,
                        dash(stroke)
                    );
                }
                Item::VLine(x, stroke) => {
                    let _ = writeln!(
                        out,
                        r#"<line x1="{0:.2}" y1="{top:.1}" x2="{0:.2}" y2="{1:.1}" stroke="{2}" stroke-width="1.2"{3}/>"#,
                        sx(*x),
                        top + plot_h,
                        stroke.color,
                        dash(stroke)
                    );
                }
                _ => {}
            }
        }
        let _ = writeln!(out, "</g>");

        let _ = writeln!(
            out,
            r#"<rect x="{left:.1}" y="{top:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="{BLACK}"/>"#
        );
        for t in ticks(x0, x1) {
            let x = sx(t);
            let _ = writeln!(
                out,
                r#"<line x1="{x:.2}" y1="{0:.1}" x2="{x:.2}" y2="{1:.1}" stroke="{BLACK}"/><text x="{x:.2}" y="{2:.1}" text-anchor="middle" font-size="11">{3}</text>"#,
                top + plot_h,
                top + plot_h + 5.0,
                top + plot_h + 18.0,
                tick_label(t)
            );
        }
        for t in ticks(y0, y1) {
            let y = sy(t);
            let _ = writeln!(
                out,
                r#"<line x1="{0:.1}" y1="{y:.2}" x2="{left:.1}" y2="{y:.2}" stroke="{BLACK}"/><text x="{1:.1}" y="{2:.2}" text-anchor="end" font-size="11">{3}</text>"#,
                left - 5.0,
                left - 8.0,
                y + 4.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"#,
            left + plot_w / 2.0,
            oy + PANEL_H - 8.0,
            escape(&self.x_label)
        );
        let (lx, ly) = (ox + 14.0, top + plot_h / 2.0);
        let _ = writeln!(
            out,
            r#"<text x="{lx:.1}" y="{ly:.1}" text-anchor="middle" font-size="12" transform="rotate(-90 {lx:.1} {ly:.1})">{}</text>"#,
            escape(&self.y_label)
        );
        for (i, (label, stroke)) in self.legend.iter().enumerate() {
            let y = top + 14.0 + 16.0 * i as f64;
            let x = left + plot_w - 175.0;
            let _ = writeln!(
                out,
                r#"<line x1="{x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{}" stroke-width="2"{}/><text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
                x + 22.0,
                stroke.color,
                dash(stroke),
                x + 28.0,
                y + 4.0,
                escape(label)
            );
        }
        let _ = writeln!(out, "</g>");
    }
}

/// Lays the panels out in a grid with `columns` per row.
pub fn render(panels: &[Chart], columns: usize) -> String {
    let columns = columns.clamp(1, panels.len().max(1));
    let rows = panels.len().div_ceil(columns);
    let width = PANEL_W * columns as f64;
    let height = PANEL_H * rows as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (i, chart) in panels.iter().enumerate() {
        let ox = PANEL_W * (i % columns) as f64;
        let oy = PANEL_H * (i / columns) as f64;
        chart.render(&mut out, ox, oy);
    }
    out.push_str("</svg>\n");
    out
}

fn dash(stroke: &Stroke) -> &'static str {
    if stroke.dashed {
        r#" stroke-dasharray="5,4""#
    } else {
        ""
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn padded_extent(values: &[f64]) -> (f64, f64) {
    let finite = values.iter().copied().filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    let pad = if hi > lo {
        0.05 * (hi - lo)
    } else {
        0.5 * lo.abs().max(1.0)
    };
    (lo - pad, hi + pad)
}

/// Round tick positions, roughly five per axis.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if span <= 0.0 || !span.is_finite() {
        return Vec::new();
    }
    let raw = span / 5.0;
    let magnitude = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * magnitude)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * magnitude);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let rounded = (v * 1e6).round() / 1e6;
    if rounded == 0.0 {
        "0".into()
    } else {
        format!("{rounded}")
    }
}
