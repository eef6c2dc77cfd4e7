//! Minimal hand-emitted SVG 1.1 line charts: axes, tick labels, one
//! polyline per series, and a legend. No external plotting dependency.

use std::fmt::Write;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 30.0;
const MARGIN_B: f64 = 55.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#555555"];

pub struct Series {
    pub label: String,
    /// (x, y) pairs; non-finite points break the polyline.
    pub points: Vec<(f64, f64)>,
}

pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

impl Chart {
    pub fn to_svg(&self) -> String {
        let xs: Vec<f64> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|p| if self.log_x { p.0.log10() } else { p.0 })
            .collect();
        let ys: Vec<f64> = self
            .series
            .iter()
            .flat_map(|s| s.points.iter())
            .filter(|p| p.0.is_finite() && p.1.is_finite())
            .map(|p| p.1)
            .collect();
        let (x_lo, x_hi) = pad_range(min_max(&xs));
        let (y_lo, y_hi) = pad_range(min_max(&ys));

        let plot_w = WIDTH - MARGIN_L - MARGIN_R;
        let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
        let sx = |x: f64| MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w;
        let sy = |y: f64| MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h;

        let mut svg = String::new();
        let _ = write!(
            svg,
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
             <svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
             width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n\
             <rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"
        );
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"15\">{}</text>",
            MARGIN_L + plot_w / 2.0,
            escape(&self.title)
        );
        // frame
        let _ = writeln!(
            svg,
            "<rect x=\"{MARGIN_L}\" y=\"{MARGIN_T}\" width=\"{plot_w}\" height=\"{plot_h}\" \
             fill=\"none\" stroke=\"black\"/>"
        );
        // x ticks
        for t in ticks(x_lo, x_hi, 8) {
            let px = sx(t);
            let label = if self.log_x { format_log_tick(t) } else { format_tick(t) };
            let _ = write!(
                svg,
                "<line x1=\"{px}\" y1=\"{0}\" x2=\"{px}\" y2=\"{1}\" stroke=\"black\"/>\n\
                 <text x=\"{px}\" y=\"{2}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
                 font-size=\"11\">{label}</text>\n",
                MARGIN_T + plot_h,
                MARGIN_T + plot_h + 5.0,
                MARGIN_T + plot_h + 20.0
            );
        }
        // y ticks
        for t in ticks(y_lo, y_hi, 6) {
            let py = sy(t);
            let _ = write!(
                svg,
                "<line x1=\"{0}\" y1=\"{py}\" x2=\"{MARGIN_L}\" y2=\"{py}\" stroke=\"black\"/>\n\
                 <text x=\"{1}\" y=\"{2}\" text-anchor=\"end\" font-family=\"sans-serif\" \
                 font-size=\"11\">{3}</text>\n",
                MARGIN_L - 5.0,
                MARGIN_L - 8.0,
                py + 4.0,
                format_tick(t)
            );
        }
        // axis labels
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"13\">{}</text>",
            MARGIN_L + plot_w / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            "<text x=\"18\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
             font-size=\"13\" transform=\"rotate(-90 18 {0})\">{1}</text>",
            MARGIN_T + plot_h / 2.0,
            escape(&self.y_label)
        );
        // series
        for (i, series) in self.series.iter().enumerate() {
            let color = PALETTE[i % PALETTE.len()];
            let mut path = String::new();
            let mut open = false;
            for &(x, y) in &series.points {
                if !x.is_finite() || !y.is_finite() {
                    open = false;
                    continue;
                }
                let px = sx(if self.log_x { x.log10() } else { x });
                let py = sy(y);
                let _ = write!(path, "{}{px:.2},{py:.2} ", if open { "" } else { "M" });
                open = true;
            }
            if !path.is_empty() {
                let path = path.trim_end().replace("M", "M ").replace("  ", " ");
                let _ = writeln!(
                    svg,
                    "<path d=\"{path}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\"/>"
                );
            }
            // legend entry
            let ly = MARGIN_T + 14.0 + 18.0 * i as f64;
            let _ = write!(
                svg,
                "<line x1=\"{0}\" y1=\"{ly}\" x2=\"{1}\" y2=\"{ly}\" stroke=\"{color}\" \
                 stroke-width=\"2\"/>\n\
                 <text x=\"{2}\" y=\"{3}\" font-family=\"sans-serif\" font-size=\"12\">{4}</text>\n",
                WIDTH - MARGIN_R + 10.0,
                WIDTH - MARGIN_R + 34.0,
                WIDTH - MARGIN_R + 40.0,
                ly + 4.0,
                escape(&series.label)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn min_max(values: &[f64]) -> (f64, f64) {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if lo.is_finite() && hi.is_finite() {
        (lo, hi)
    } else {
        (0.0, 1.0)
    }
}

fn pad_range((lo, hi): (f64, f64)) -> (f64, f64) {
    if lo == hi {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    }
}

fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw_step = (hi - lo) / target as f64;
    let mag = 10f64.powf(raw_step.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|&s| s * mag)
        .find(|&s| s >= raw_step)
        .unwrap_or(mag * 10.0);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + 1e-9 * step {
        out.push(t);
        t += step;
    }
    out
}

fn format_tick(t: f64) -> String {
    if t == 0.0 {
        "0".to_string()
    } else if t.abs() >= 1000.0 || t.abs() < 0.01 {
        format!("{t:.1e}")
    } else {
        let s = format!("{t:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// log-scale ticks receive 10^t labels
fn format_log_tick(t: f64) -> String {
    if (t - t.round()).abs() < 1e-9 {
        format!("1e{}", t.round() as i64)
    } else {
        format_tick(10f64.powf(t))
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
