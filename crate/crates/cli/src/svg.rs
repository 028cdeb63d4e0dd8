//! Self-contained SVG line plots and heatmaps.
//!
//! Output depends only on the input data: fixed sizes, fixed palette, numbers
//! printed with fixed precision.

use std::f64::consts::FRAC_2_PI;
use std::fmt::Write;

use hcs_core::WignerGrid;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const COLORS: [&str; 7] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"];
const LEVELS: usize = 129;

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, Option<f64>)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let f = raw / mag;
    let nice = if f < 1.5 {
        1.0
    } else if f < 3.5 {
        2.0
    } else if f < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> (Vec<f64>, usize) {
    let step = nice_step(hi - lo);
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    ((first..=last).map(|k| k as f64 * step).collect(), decimals)
}

fn label(v: f64, decimals: usize) -> String {
    let s = format!("{:.*}", decimals, v);
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        "0".to_string()
    } else {
        s
    }
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) =
        values.filter(|v| v.is_finite()).fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * lo.abs().max(1.0) {
        let pad = 0.5 * lo.abs().max(1.0);
        return (lo - pad, hi + pad);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

struct Frame {
    left: f64,
    top: f64,
    width: f64,
    height: f64,
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        self.left + (x - self.x.0) / (self.x.1 - self.x.0) * self.width
    }

    fn py(&self, y: f64) -> f64 {
        self.top + self.height - (y - self.y.0) / (self.y.1 - self.y.0) * self.height
    }

    fn axes(&self, out: &mut String, x_label: &str, y_label: &str) {
        let bottom = self.top + self.height;
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
            self.left, self.top, self.width, self.height
        );
        let (xt, xd) = ticks(self.x.0, self.x.1);
        for t in xt {
            let x = self.px(t);
            let _ = writeln!(
                out,
                r#"<line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
                bottom + 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                bottom + 20.0,
                label(t, xd)
            );
        }
        let (yt, yd) = ticks(self.y.0, self.y.1);
        for t in yt {
            let y = self.py(t);
            let _ = writeln!(
                out,
                r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black"/>"#,
                self.left - 5.0,
                self.left
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                self.left - 8.0,
                y + 4.0,
                label(t, yd)
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            self.left + self.width / 2.0,
            bottom + 42.0,
            escape(x_label)
        );
        let cy = self.top + self.height / 2.0;
        let _ = writeln!(
            out,
            r#"<text x="18" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 18 {cy:.2})">{}</text>"#,
            escape(y_label)
        );
    }
}

fn open(out: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        width / 2.0,
        escape(title)
    );
}

/// Lines through each series; missing points break the line.
pub fn line_plot(title: &str, x_label: &str, y_label: &str, series: &[Series], markers: bool) -> String {
    let frame = Frame {
        left: 80.0,
        top: 40.0,
        width: WIDTH - 80.0 - 150.0,
        height: HEIGHT - 40.0 - 70.0,
        x: padded_range(series.iter().flat_map(|s| s.points.iter().map(|p| p.0))),
        y: padded_range(series.iter().flat_map(|s| s.points.iter().filter_map(|p| p.1))),
    };
    let mut out = String::new();
    open(&mut out, WIDTH, HEIGHT, title);
    frame.axes(&mut out, x_label, y_label);
    if frame.y.0 < 0.0 && frame.y.1 > 0.0 {
        let y = frame.py(0.0);
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
            frame.left,
            frame.left + frame.width
        );
    }
    for (k, s) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut path = String::new();
        let mut pen_down = false;
        for &(x, y) in &s.points {
            match y.filter(|v| v.is_finite()) {
                Some(y) => {
                    let _ = write!(path, "{}{:.2},{:.2} ", if pen_down { "L" } else { "M" }, frame.px(x), frame.py(y));
                    pen_down = true;
                }
                None => pen_down = false,
            }
        }
        let _ = writeln!(out, r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.8"/>"#, path.trim_end());
        if markers {
            for &(x, y) in &s.points {
                if let Some(y) = y.filter(|v| v.is_finite()) {
                    let _ = writeln!(
                        out,
                        r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                        frame.px(x),
                        frame.py(y)
                    );
                }
            }
        }
        let ly = frame.top + 12.0 + 20.0 * k as f64;
        let lx = frame.left + frame.width + 15.0;
        let _ = writeln!(
            out,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#,
            lx + 24.0
        );
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{}</text>"#, lx + 30.0, ly + 4.0, escape(&s.name));
    }
    out.push_str("</svg>\n");
    out
}

/// `t ∈ [0, 1]` on a blue–white–red ramp.
fn diverging(t: f64) -> (u8, u8, u8) {
    let blue = (33.0, 102.0, 172.0);
    let red = (178.0, 24.0, 43.0);
    let (from, to, s) =
        if t < 0.5 { (blue, (255.0, 255.0, 255.0), t * 2.0) } else { ((255.0, 255.0, 255.0), red, t * 2.0 - 1.0) };
    let mix = |a: f64, b: f64| (a + (b - a) * s).round() as u8;
    (mix(from.0, to.0), mix(from.1, to.1), mix(from.2, to.2))
}

fn level(w: f64) -> usize {
    let t = ((w / FRAC_2_PI + 1.0) / 2.0).clamp(0.0, 1.0);
    (t * (LEVELS - 1) as f64).round() as usize
}

fn level_color(l: usize) -> String {
    let (r, g, b) = diverging(l as f64 / (LEVELS - 1) as f64);
    format!("#{r:02x}{g:02x}{b:02x}")
}

/// Wigner heatmap on a palette pinned to `[−2/π, 2/π]`.
pub fn heatmap(title: &str, grid: &WignerGrid) -> String {
    let b = grid.bounds;
    let (dx, dp) = (b.dx(), b.dp());
    let side = 400.0;
    let frame = Frame {
        left: 80.0,
        top: 40.0,
        width: side,
        height: side,
        x: (b.x_min - dx / 2.0, b.x_max + dx / 2.0),
        y: (b.p_min - dp / 2.0, b.p_max + dp / 2.0),
    };
    let (width, height) = (620.0, 510.0);
    let mut out = String::new();
    open(&mut out, width, height, title);
    let cw = side / b.nx as f64;
    let ch = side / b.np as f64;
    out.push_str(r#"<g shape-rendering="crispEdges">"#);
    out.push('\n');
    for j in 0..b.np {
        let y = frame.top + side - (j + 1) as f64 * ch;
        let mut i = 0;
        while i < b.nx {
            let l = level(grid.value(i, j));
            let mut run = 1;
            while i + run < b.nx && level(grid.value(i + run, j)) == l {
                run += 1;
            }
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                frame.left + i as f64 * cw,
                run as f64 * cw + 0.3,
                ch + 0.3,
                level_color(l)
            );
            i += run;
        }
    }
    out.push_str("</g>\n");
    frame.axes(&mut out, "x = Re z", "p = Im z");

    let bar_x = frame.left + side + 30.0;
    let steps = 32;
    let bh = side / steps as f64;
    for k in 0..steps {
        let l = (k as f64 + 0.5) / steps as f64 * (LEVELS - 1) as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{bar_x:.2}" y="{:.2}" width="20" height="{:.2}" fill="{}"/>"#,
            frame.top + side - (k + 1) as f64 * bh,
            bh + 0.3,
            level_color(l.round() as usize)
        );
    }
    let _ = writeln!(
        out,
        r#"<rect x="{bar_x:.2}" y="{:.2}" width="20" height="{side:.2}" fill="none" stroke="black"/>"#,
        frame.top
    );
    for (v, text) in [(-FRAC_2_PI, "-2/π"), (0.0, "0"), (FRAC_2_PI, "2/π")] {
        let y = frame.top + side * (1.0 - (v / FRAC_2_PI + 1.0) / 2.0);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{text}</text>"#, bar_x + 26.0, y + 4.0);
    }
    out.push_str("</svg>\n");
    out
}
