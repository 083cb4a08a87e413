//! Hand-written SVG charts.

use std::fmt::Write;

use flowmap_core::analysis::{ThresholdSetReport, TifdField, TripCurve, Verdict};
use flowmap_core::steane::{McTrip, PseudothresholdFit};

use crate::provenance::Provenance;

const W: f64 = 640.0;
const H: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 36.0;
const BOTTOM: f64 = 56.0;

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

#[derive(Clone, Debug)]
pub struct Axis {
    pub lo: f64,
    pub hi: f64,
    pub log: bool,
    pub label: String,
}

impl Axis {
    pub fn linear(lo: f64, hi: f64, label: &str) -> Self {
        let hi = if hi > lo { hi } else { lo + 1.0 };
        Axis {
            lo,
            hi,
            log: false,
            label: label.into(),
        }
    }

    pub fn log(lo: f64, hi: f64, label: &str) -> Self {
        let lo = lo.max(f64::MIN_POSITIVE);
        let hi = if hi > lo { hi } else { lo * 10.0 };
        Axis {
            lo,
            hi,
            log: true,
            label: label.into(),
        }
    }

    /// Position in `[0, 1]`; values outside the range map outside it, and
    /// non-positive values on a log axis go to the bottom edge.
    fn frac(&self, v: f64) -> f64 {
        if self.log {
            if v <= 0.0 {
                return -0.05;
            }
            (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        }
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        if self.log {
            let (a, b) = (
                self.lo.log10().ceil() as i32,
                self.hi.log10().floor() as i32,
            );
            let step = ((b - a) / 8 + 1).max(1);
            (a..=b)
                .step_by(step as usize)
                .map(|k| (10f64.powi(k), format!("1e{k}")))
                .collect()
        } else {
            (0..=5)
                .map(|i| {
                    let v = self.lo + (self.hi - self.lo) * i as f64 / 5.0;
                    (v, format!("{}", (v * 1e4).round() / 1e4))
                })
                .collect()
        }
    }
}

/// One chart: plot area, axes and a list of drawing commands.
pub struct Chart {
    title: String,
    x: Axis,
    y: Axis,
    body: String,
    legend: Vec<(String, String)>,
}

impl Chart {
    pub fn new(title: &str, x: Axis, y: Axis) -> Self {
        Chart {
            title: title.into(),
            x,
            y,
            body: String::new(),
            legend: Vec::new(),
        }
    }

    pub fn px(&self, v: f64) -> f64 {
        LEFT + self.x.frac(v) * (W - LEFT - RIGHT)
    }

    pub fn py(&self, v: f64) -> f64 {
        H - BOTTOM - self.y.frac(v) * (H - TOP - BOTTOM)
    }

    pub fn polyline(&mut self, pts: &[(f64, f64)], color: &str, dashed: bool) {
        let coords: Vec<String> = pts
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        let dash = if dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            self.body,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
            coords.join(" ")
        );
    }

    /// Open circle, used for pseudothresholds.
    pub fn circle(&mut self, x: f64, y: f64, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.2}" cy="{:.2}" r="5" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            self.px(x),
            self.py(y)
        );
    }

    /// Filled dot, used for data points.
    pub fn dot(&mut self, x: f64, y: f64, color: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
            self.px(x),
            self.py(y)
        );
    }

    /// Six-armed star, used for asymptotic thresholds.
    pub fn asterisk(&mut self, x: f64, y: f64, color: &str) {
        let (cx, cy) = (self.px(x), self.py(y));
        let mut d = String::new();
        for k in 0..3 {
            let a = std::f64::consts::PI * k as f64 / 3.0 + std::f64::consts::FRAC_PI_2;
            let (dx, dy) = (7.0 * a.cos(), 7.0 * a.sin());
            let _ = write!(
                d,
                "M{:.2},{:.2}L{:.2},{:.2}",
                cx - dx,
                cy - dy,
                cx + dx,
                cy + dy
            );
        }
        let _ = writeln!(
            self.body,
            r#"<path d="{d}" stroke="{color}" stroke-width="2"/>"#
        );
    }

    /// Vertical bar from `y0` to `y1` at `x`.
    pub fn error_bar(&mut self, x: f64, y0: f64, y1: f64, color: &str) {
        let (cx, a, b) = (self.px(x), self.py(y0), self.py(y1));
        let _ = writeln!(
            self.body,
            r#"<line x1="{cx:.2}" y1="{a:.2}" x2="{cx:.2}" y2="{b:.2}" stroke="{color}" stroke-width="1"/>"#
        );
    }

    /// Arrow from data point `(x, y)` with a screen-space offset.
    pub fn arrow(&mut self, x: f64, y: f64, dx_px: f64, dy_px: f64, color: &str) {
        let (x0, y0) = (self.px(x), self.py(y));
        let _ = writeln!(
            self.body,
            r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="1" marker-end="url(#head)"/>"#,
            x0 + dx_px,
            y0 + dy_px
        );
    }

    pub fn cell(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, fill: &str) {
        let (a, b) = (self.px(x0), self.px(x1));
        let (c, d) = (self.py(y1), self.py(y0));
        let _ = writeln!(
            self.body,
            r#"<rect x="{a:.2}" y="{c:.2}" width="{:.2}" height="{:.2}" fill="{fill}"/>"#,
            b - a,
            d - c
        );
    }

    pub fn legend(&mut self, label: &str, color: &str) {
        self.legend.push((label.into(), color.into()));
    }

    pub fn finish(self, p: &Provenance) -> String {
        let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
        let mut s = String::new();
        let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        s.push_str(&p.xml_comment());
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(
            s,
            r##"<defs><clipPath id="area"><rect x="{x0}" y="{y0}" width="{}" height="{}"/></clipPath><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto"><path d="M0,0L6,3L0,6z" fill="#333"/></marker></defs>"##,
            x1 - x0,
            y1 - y0
        );
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
            W / 2.0,
            escape(&self.title)
        );
        for (v, label) in self.x.ticks() {
            let x = LEFT + self.x.frac(v) * (W - LEFT - RIGHT);
            let _ = writeln!(
                s,
                r#"<line x1="{x:.2}" y1="{y1}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
                y1 + 5.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{x:.2}" y="{}" text-anchor="middle">{label}</text>"#,
                y1 + 18.0
            );
        }
        for (v, label) in self.y.ticks() {
            let y = H - BOTTOM - self.y.frac(v) * (H - TOP - BOTTOM);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{y:.2}" x2="{x0}" y2="{y:.2}" stroke="black"/>"#,
                x0 - 5.0
            );
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{:.2}" text-anchor="end">{label}</text>"#,
                x0 - 8.0,
                y + 4.0
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            H - 14.0,
            escape(&self.x.label)
        );
        let _ = writeln!(
            s,
            r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
            (y0 + y1) / 2.0,
            (y0 + y1) / 2.0,
            escape(&self.y.label)
        );
        let _ = writeln!(s, r#"<g clip-path="url(#area)">"#);
        s.push_str(&self.body);
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y1 - y0
        );
        for (i, (label, color)) in self.legend.iter().enumerate() {
            let y = y0 + 16.0 + 16.0 * i as f64;
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
                x1 - 130.0,
                x1 - 110.0,
                x1 - 104.0,
                y + 4.0,
                escape(label)
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// TRIP curves with the identity line, a circle at each level's
/// pseudothreshold and an asterisk at the asymptotic threshold.
pub fn trip(
    p: &Provenance,
    curves: &[TripCurve],
    pseudo: &[(u32, f64)],
    asymptotic: Option<f64>,
    log: bool,
) -> String {
    let gammas: Vec<f64> = curves
        .iter()
        .flat_map(|c| c.samples.iter().map(|s| s.0))
        .collect();
    let lo = gammas
        .iter()
        .copied()
        .filter(|g| !log || *g > 0.0)
        .fold(f64::INFINITY, f64::min);
    let hi = gammas.iter().copied().fold(0.0, f64::max);
    let (x, y) = if log {
        (
            Axis::log(lo, hi, "γ"),
            Axis::log(lo, hi, "failure probability"),
        )
    } else {
        (
            Axis::linear(lo, hi, "γ"),
            Axis::linear(lo, hi, "failure probability"),
        )
    };
    let loc = curves.first().map(|c| c.location.as_str()).unwrap_or("");
    let setting = curves.first().map(|c| c.setting.as_str()).unwrap_or("");
    let mut ch = Chart::new(&format!("TRIP of `{loc}`, setting {setting}"), x, y);
    // a straight line on both linear and log-log axes
    ch.polyline(&[(lo, lo), (hi, hi)], "#555", true);
    ch.legend("L = 0", "#555");
    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        ch.polyline(&c.samples, color, false);
        ch.legend(&format!("L = {}", c.level), color);
    }
    for &(level, v) in pseudo {
        let i = curves.iter().position(|c| c.level == level).unwrap_or(0);
        ch.circle(v, v, PALETTE[i % PALETTE.len()]);
    }
    if let Some(v) = asymptotic {
        ch.asterisk(v, v, "black");
    }
    ch.finish(p)
}

/// Unit-length arrows of the displacement field; magnitude is in the CSV.
pub fn tifd(p: &Provenance, f: &TifdField, xs: &[f64], ys: &[f64], log: bool) -> String {
    let span = |v: &[f64]| {
        let lo = v
            .iter()
            .copied()
            .filter(|x| !log || *x > 0.0)
            .fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let ((xl, xh), (yl, yh)) = (span(xs), span(ys));
    let (ax, ay) = if log {
        (Axis::log(xl, xh, &f.plane.0), Axis::log(yl, yh, &f.plane.1))
    } else {
        // pad by half a cell so edge arrows stay visible
        let px = 0.5 * (xh - xl) / (xs.len().max(2) - 1) as f64;
        let py = 0.5 * (yh - yl) / (ys.len().max(2) - 1) as f64;
        (
            Axis::linear(xl - px, xh + px, &f.plane.0),
            Axis::linear(yl - py, yh + py, &f.plane.1),
        )
    };
    let cell = 0.7
        * ((W - LEFT - RIGHT) / xs.len().max(1) as f64)
            .min((H - TOP - BOTTOM) / ys.len().max(1) as f64);
    let mut ch = Chart::new(
        &format!("TIFD in the ({}, {}) plane", f.plane.0, f.plane.1),
        ax,
        ay,
    );
    for a in &f.arrows {
        if log && (a.x <= 0.0 || a.y <= 0.0) {
            continue;
        }
        // direction in screen space, so log axes bend arrows correctly
        let (sx, sy) = (
            ch.px(a.x + a.dx) - ch.px(a.x),
            ch.py(a.y + a.dy) - ch.py(a.y),
        );
        let len = (sx * sx + sy * sy).sqrt();
        if len > 0.0 && len.is_finite() {
            ch.arrow(a.x, a.y, cell * sx / len, cell * sy / len, "#333");
        } else {
            ch.dot(a.x, a.y, "#d62728");
        }
    }
    ch.finish(p)
}

/// Node classes as coloured cells, the staircase boundary and the largest
/// cube.
pub fn threshold_set(p: &Provenance, r: &ThresholdSetReport) -> String {
    let s = &r.slice;
    let mut ch = Chart::new(
        &format!("Threshold set in the ({}, {}) plane", s.x_var, s.y_var),
        Axis::linear(0.0, s.x_hi, &s.x_var),
        Axis::linear(0.0, s.y_hi, &s.y_var),
    );
    let (hx, hy) = (s.x_hi / (s.n - 1) as f64, s.y_hi / (s.n - 1) as f64);
    for (iy, &y) in r.y_nodes.iter().enumerate() {
        for (ix, &x) in r.x_nodes.iter().enumerate() {
            let fill = match r.class(ix, iy) {
                Verdict::Below => "#9fd39a",
                Verdict::Above => "#eeeeee",
                Verdict::Undetermined => "#f2b35c",
            };
            ch.cell(x - 0.5 * hx, y - 0.5 * hy, x + 0.5 * hx, y + 0.5 * hy, fill);
        }
    }
    ch.polyline(&r.boundary, "#1f5f1a", false);
    ch.legend("boundary", "#1f5f1a");
    let e = r.largest_cube_edge;
    ch.polyline(&[(0.0, e), (e, e), (e, 0.0)], "#d62728", true);
    ch.legend("largest cube", "#d62728");
    ch.finish(p)
}

/// Estimated failure rates with ±1σ bars, the fitted curve, the identity
/// line and a circle at the fitted crossing.
pub fn mc_trip(p: &Provenance, t: &McTrip, fit: Option<&PseudothresholdFit>) -> String {
    let lo = t.gammas.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = t.gammas.iter().copied().fold(0.0, f64::max);
    let floor = t
        .estimates
        .iter()
        .map(|e| e.p_hat)
        .filter(|&v| v > 0.0)
        .fold(lo, f64::min)
        .min(lo);
    let top = t.estimates.iter().map(|e| e.p_hat).fold(hi, f64::max);
    let mut ch = Chart::new(
        &format!("exRec `{}`, setting {}", t.kind.symbol(), t.setting),
        Axis::log(lo, hi, "γ"),
        Axis::log(floor, top, "p̂"),
    );
    ch.polyline(&[(lo, lo), (hi, hi)], "#555", true);
    ch.legend("L = 0", "#555");
    for (&g, e) in t.gammas.iter().zip(&t.estimates) {
        if e.p_hat > 0.0 {
            ch.error_bar(
                g,
                (e.p_hat - e.stderr).max(floor),
                e.p_hat + e.stderr,
                PALETTE[0],
            );
            ch.dot(g, e.p_hat, PALETTE[0]);
        }
    }
    ch.legend("Monte Carlo", PALETTE[0]);
    if let Some(f) = fit {
        let pts: Vec<(f64, f64)> = (0..=60)
            .map(|i| {
                let g = lo * (hi / lo).powf(i as f64 / 60.0);
                (g, f.c2 * g * g + f.c3 * g * g * g)
            })
            .collect();
        ch.polyline(&pts, PALETTE[1], false);
        ch.legend("fit", PALETTE[1]);
        ch.circle(f.value, f.value, PALETTE[1]);
    }
    ch.finish(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn prov() -> Provenance {
        Provenance {
            config: json!({}),
            hash: ("map_sha256", "00".into()),
            setting: None,
            tolerances: json!({}),
        }
    }

    #[test]
    fn trip_chart_has_identity_and_markers() {
        let c = TripCurve::from_samples(
            "w",
            1,
            "diagonal",
            vec![(0.0, 0.0), (0.1, 0.05), (0.2, 0.3)],
        )
        .unwrap();
        let s = trip(&prov(), &[c], &[(1, 0.129)], Some(0.246), false);
        assert!(s.contains("stroke-dasharray"));
        assert!(s.contains("<circle") && s.contains("<path d=\"M"));
        assert!(s.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn log_axis_ticks_are_decades() {
        let a = Axis::log(1e-6, 1e-1, "γ");
        let t: Vec<String> = a.ticks().into_iter().map(|(_, l)| l).collect();
        assert_eq!(t.first().unwrap(), "1e-6");
        assert_eq!(t.last().unwrap(), "1e-1");
        assert!((a.frac(1e-1) - 1.0).abs() < 1e-12);
    }
}
