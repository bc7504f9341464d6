//! Minimal SVG charts: line panels and grouped bar panels.

use std::fmt::Write;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

pub fn color(i: usize) -> &'static str {
    PALETTE[i % PALETTE.len()]
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

/// One bar group: a category label and one value per bar.
pub struct Group {
    pub label: String,
    pub values: Vec<Option<f64>>,
}

pub enum Panel {
    Lines {
        title: String,
        x_label: String,
        y_label: String,
        series: Vec<Series>,
    },
    Bars {
        title: String,
        y_label: String,
        bar_labels: Vec<String>,
        groups: Vec<Group>,
    },
}

const PANEL_W: f64 = 460.0;
const PANEL_H: f64 = 300.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 110.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

/// Round-ish axis range covering `lo..hi`.
fn axis_range(lo: f64, hi: f64) -> (f64, f64) {
    if !(lo.is_finite() && hi.is_finite()) {
        return (0.0, 1.0);
    }
    if (hi - lo).abs() < 1e-12 {
        let pad = if lo.abs() < 1e-12 { 1.0 } else { lo.abs() * 0.1 };
        return (lo - pad, hi + pad);
    }
    let pad = (hi - lo) * 0.05;
    (lo - pad, hi + pad)
}

fn fmt_tick(v: f64) -> String {
    if v.abs() >= 1000.0 || (v != 0.0 && v.abs() < 0.01) {
        format!("{v:.1e}")
    } else {
        format!("{v:.2}")
    }
}

struct Frame {
    x0: f64,
    y0: f64,
    w: f64,
    h: f64,
    lo: f64,
    hi: f64,
}

impl Frame {
    fn y(&self, v: f64) -> f64 {
        self.y0 + self.h - (v - self.lo) / (self.hi - self.lo) * self.h
    }
}

fn axes(out: &mut String, f: &Frame, title: &str, y_label: &str) {
    let _ = write!(
        out,
        r##"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="none" stroke="#333"/>"##,
        f.x0, f.y0, f.w, f.h
    );
    let _ = write!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="14">{}</text>"#,
        f.x0 + f.w / 2.0,
        f.y0 - 10.0,
        escape(title)
    );
    for i in 0..=4 {
        let v = f.lo + (f.hi - f.lo) * i as f64 / 4.0;
        let y = f.y(v);
        let _ = write!(
            out,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="10">{}</text>"##,
            f.x0,
            f.x0 + f.w,
            f.x0 - 4.0,
            y + 3.0,
            fmt_tick(v)
        );
    }
    let _ = write!(
        out,
        r#"<text transform="translate({:.1},{:.1}) rotate(-90)" text-anchor="middle" font-size="11">{}</text>"#,
        f.x0 - 45.0,
        f.y0 + f.h / 2.0,
        escape(y_label)
    );
}

fn legend(out: &mut String, f: &Frame, labels: &[String]) {
    for (i, label) in labels.iter().enumerate() {
        let y = f.y0 + 12.0 + 14.0 * i as f64;
        let x = f.x0 + f.w + 10.0;
        let _ = write!(
            out,
            r#"<rect x="{x:.1}" y="{:.1}" width="10" height="10" fill="{}"/><text x="{:.1}" y="{:.1}" font-size="10">{}</text>"#,
            y - 9.0,
            color(i),
            x + 14.0,
            y,
            escape(label)
        );
    }
}

fn draw_panel(out: &mut String, panel: &Panel, ox: f64, oy: f64) {
    let frame = |lo: f64, hi: f64| {
        let (lo, hi) = axis_range(lo, hi);
        Frame {
            x0: ox + LEFT,
            y0: oy + TOP,
            w: PANEL_W - LEFT - RIGHT,
            h: PANEL_H - TOP - BOTTOM,
            lo,
            hi,
        }
    };
    match panel {
        Panel::Lines {
            title,
            x_label,
            y_label,
            series,
        } => {
            let pts = || series.iter().flat_map(|s| s.points.iter());
            let ylo = pts().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let yhi = pts().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
            let xlo = pts().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let xhi = pts().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
            let f = frame(ylo, yhi);
            axes(out, &f, title, y_label);
            let (xlo, xhi) = if xlo.is_finite() && xhi > xlo {
                (xlo, xhi)
            } else if xlo.is_finite() {
                (xlo - 1.0, xlo + 1.0)
            } else {
                (0.0, 1.0)
            };
            let x = |v: f64| f.x0 + (v - xlo) / (xhi - xlo) * f.w;
            let mut ticks: Vec<f64> = pts().map(|p| p.0).collect();
            ticks.sort_by(f64::total_cmp);
            ticks.dedup();
            for t in ticks {
                let _ = write!(
                    out,
                    r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="10">{}</text>"#,
                    x(t),
                    f.y0 + f.h + 14.0,
                    t
                );
            }
            let _ = write!(
                out,
                r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="11">{}</text>"#,
                f.x0 + f.w / 2.0,
                f.y0 + f.h + 32.0,
                escape(x_label)
            );
            for (i, s) in series.iter().enumerate() {
                let coords: Vec<String> = s
                    .points
                    .iter()
                    .map(|&(a, b)| format!("{:.1},{:.1}", x(a), f.y(b)))
                    .collect();
                let _ = write!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
                    coords.join(" "),
                    color(i)
                );
                for c in &coords {
                    let (cx, cy) = c.split_once(',').expect("formatted pair");
                    let _ = write!(out, r#"<circle cx="{cx}" cy="{cy}" r="2.5" fill="{}"/>"#, color(i));
                }
            }
            let labels: Vec<String> = series.iter().map(|s| s.label.clone()).collect();
            legend(out, &f, &labels);
        }
        Panel::Bars {
            title,
            y_label,
            bar_labels,
            groups,
        } => {
            let vals = || groups.iter().flat_map(|g| g.values.iter().flatten().copied());
            let lo = vals().fold(0.0, f64::min);
            let hi = vals().fold(0.0, f64::max);
            let f = frame(lo, hi);
            axes(out, &f, title, y_label);
            let slot = f.w / groups.len().max(1) as f64;
            let bars = bar_labels.len().max(1) as f64;
            let bw = slot * 0.8 / bars;
            let zero = f.y(0.0_f64.clamp(f.lo, f.hi));
            for (gi, g) in groups.iter().enumerate() {
                let gx = f.x0 + slot * gi as f64 + slot * 0.1;
                for (bi, v) in g.values.iter().enumerate() {
                    let Some(v) = v else { continue };
                    let y = f.y(*v);
                    let _ = write!(
                        out,
                        r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{:.1}" fill="{}"/>"#,
                        gx + bw * bi as f64,
                        y.min(zero),
                        bw,
                        (y - zero).abs(),
                        color(bi)
                    );
                }
                let _ = write!(
                    out,
                    r#"<text transform="translate({:.1},{:.1}) rotate(45)" font-size="10">{}</text>"#,
                    gx + slot * 0.3,
                    f.y0 + f.h + 12.0,
                    escape(&g.label)
                );
            }
            legend(out, &f, bar_labels);
        }
    }
}

/// Lays the panels out in a grid, `columns` wide.
pub fn render(title: &str, panels: &[Panel], columns: usize) -> String {
    let columns = columns.max(1);
    let rows = panels.len().div_ceil(columns).max(1);
    let width = PANEL_W * columns as f64;
    let height = PANEL_H * rows as f64 + 40.0;
    let mut out = String::new();
    let _ = write!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif">"#
    );
    let _ = write!(
        out,
        r#"<rect width="100%" height="100%" fill="white"/><text x="{:.1}" y="24" text-anchor="middle" font-size="16">{}</text>"#,
        width / 2.0,
        escape(title)
    );
    for (i, panel) in panels.iter().enumerate() {
        let ox = PANEL_W * (i % columns) as f64;
        let oy = 40.0 + PANEL_H * (i / columns) as f64;
        out.push('\n');
        draw_panel(&mut out, panel, ox, oy);
    }
    out.push_str("\n</svg>\n");
    out
}
