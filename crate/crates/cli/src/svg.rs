//! Static SVG 1.1 figures: line plots, correlogram stems, densities,
//! Q-Q scatter and forecast fans.

use std::fmt::Write;

use tsarma_core::diagnostics::DiagnosticsReport;
use tsarma_core::special::normal_pdf;
use tsarma_core::{CorrelationSequence, ForecastResult, TimeSeries};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;

const INK: &str = "#1f3b73";
const ACCENT: &str = "#c0392b";
const BAND: &str = "#9bb7e0";
const GRID: &str = "#dddddd";

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Tick positions at 1, 2 or 5 times a power of ten.
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if span.is_nan() || span <= 0.0 {
        return vec![lo];
    }
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|s| span / s <= target as f64)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_owned()
    } else {
        s.to_owned()
    }
}

pub struct Figure {
    x: (f64, f64),
    y: (f64, f64),
    body: String,
    title: String,
    x_label: String,
    y_label: String,
}

impl Figure {
    pub fn new(title: &str, x: (f64, f64), y: (f64, f64)) -> Self {
        let pad = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 1.0, hi + 1.0) };
        Self {
            x: pad(x),
            y: pad(y),
            body: String::new(),
            title: title.to_owned(),
            x_label: String::new(),
            y_label: String::new(),
        }
    }

    pub fn labels(mut self, x: &str, y: &str) -> Self {
        self.x_label = x.to_owned();
        self.y_label = y.to_owned();
        self
    }

    fn sx(&self, v: f64) -> f64 {
        LEFT + (v - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - LEFT - RIGHT)
    }

    fn sy(&self, v: f64) -> f64 {
        HEIGHT - BOTTOM - (v - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - TOP - BOTTOM)
    }

    fn path(&self, points: &[(f64, f64)]) -> String {
        let mut d = String::new();
        for (i, &(x, y)) in points.iter().enumerate() {
            let _ = write!(
                d,
                "{}{:.2},{:.2}",
                if i == 0 { "M" } else { " L" },
                self.sx(x),
                self.sy(y)
            );
        }
        d
    }

    pub fn line(&mut self, points: &[(f64, f64)], color: &str, dashed: bool) {
        let dash = if dashed { r#" stroke-dasharray="6,4""# } else { "" };
        let _ = writeln!(
            self.body,
            r#"<path d="{}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>"#,
            self.path(points)
        );
    }

    pub fn hline(&mut self, y: f64, color: &str, dashed: bool) {
        let (lo, hi) = self.x;
        self.line(&[(lo, y), (hi, y)], color, dashed);
    }

    pub fn band(&mut self, upper: &[(f64, f64)], lower: &[(f64, f64)], color: &str) {
        let mut outline: Vec<(f64, f64)> = upper.to_vec();
        outline.extend(lower.iter().rev());
        let _ = writeln!(
            self.body,
            r#"<path d="{} Z" fill="{color}" fill-opacity="0.45" stroke="none"/>"#,
            self.path(&outline)
        );
    }

    pub fn points(&mut self, points: &[(f64, f64)], color: &str) {
        for &(x, y) in points {
            let _ = writeln!(
                self.body,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}"/>"#,
                self.sx(x),
                self.sy(y)
            );
        }
    }

    pub fn stems(&mut self, points: &[(f64, f64)], color: &str) {
        for &(x, y) in points {
            let _ = writeln!(
                self.body,
                r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="{color}" stroke-width="2"/>"#,
                self.sx(x),
                self.sy(0.0),
                self.sy(y)
            );
        }
        self.points(points, color);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let (x0, x1) = (LEFT, WIDTH - RIGHT);
        let (y0, y1) = (HEIGHT - BOTTOM, TOP);
        for t in ticks(self.y.0, self.y.1, 6) {
            let y = self.sy(t);
            let _ = writeln!(
                out,
                r#"<line x1="{x0}" y1="{y:.2}" x2="{x1}" y2="{y:.2}" stroke="{GRID}"/>"#
            );
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 6.0,
                y + 4.0,
                tick_label(t)
            );
        }
        for t in ticks(self.x.0, self.x.1, 8) {
            let x = self.sx(t);
            let _ = writeln!(
                out,
                r#"<line x1="{x:.2}" y1="{y0}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
                y0 + 5.0
            );
            let _ = writeln!(
                out,
                r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                y0 + 18.0,
                tick_label(t)
            );
        }
        let _ = writeln!(
            out,
            r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            x1 - x0,
            y0 - y1
        );
        out.push_str(&self.body);
        let _ = writeln!(
            out,
            r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            (x0 + x1) / 2.0,
            HEIGHT - 10.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            out,
            r#"<text x="16" y="{0}" text-anchor="middle" transform="rotate(-90 16 {0})">{1}</text>"#,
            (y0 + y1) / 2.0,
            escape(&self.y_label)
        );
        out.push_str("</svg>\n");
        out
    }
}

fn range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let pad = 0.05 * (hi - lo).max(1e-12);
    (lo - pad, hi + pad)
}

pub fn series_plot(series: &TimeSeries, title: &str) -> String {
    let points: Vec<(f64, f64)> = series
        .times()
        .zip(series.values())
        .map(|(t, &v)| (t as f64, v))
        .collect();
    let mut fig = Figure::new(
        title,
        (series.start() as f64, series.end() as f64),
        range(series.values().iter().copied()),
    )
    .labels("year", "anomaly");
    fig.line(&points, INK, false);
    fig.render()
}

pub fn correlogram(seq: &CorrelationSequence, title: &str) -> String {
    let points: Vec<(f64, f64)> = seq.lags().map(|(h, v)| (h as f64, v)).collect();
    let lo = points.iter().map(|p| p.1).fold(-seq.threshold, f64::min).min(0.0);
    let mut fig = Figure::new(
        title,
        (seq.first_lag() as f64 - 0.5, seq.max_lag() as f64 + 0.5),
        (lo.min(-0.2) - 0.05, 1.05),
    )
    .labels("lag", "correlation");
    fig.hline(0.0, "black", false);
    fig.hline(seq.threshold, ACCENT, true);
    fig.hline(-seq.threshold, ACCENT, true);
    fig.stems(&points, INK);
    fig.render()
}

/// Residual KDE with the standard normal density for reference.
pub fn density(report: &DiagnosticsReport, title: &str) -> String {
    let kde = &report.kde_curve.points;
    let (x_lo, x_hi) = (kde[0].0, kde[kde.len() - 1].0);
    let normal: Vec<(f64, f64)> = kde.iter().map(|&(x, _)| (x, normal_pdf(x))).collect();
    let top = kde.iter().chain(&normal).map(|p| p.1).fold(0.0, f64::max);
    let mut fig = Figure::new(title, (x_lo, x_hi), (0.0, 1.08 * top)).labels("standardized residual", "density");
    fig.line(&normal, ACCENT, true);
    fig.line(kde, INK, false);
    fig.render()
}

pub fn qq_plot(report: &DiagnosticsReport, title: &str) -> String {
    let pts = &report.qq_points;
    let (lo, hi) = range(pts.iter().flat_map(|&(a, b)| [a, b]));
    let mut fig = Figure::new(title, (lo, hi), (lo, hi)).labels("theoretical quantile", "sample quantile");
    fig.line(&[(lo, lo), (hi, hi)], ACCENT, true);
    fig.points(pts, INK);
    fig.render()
}

/// The last `history` observations followed by point forecasts and the
/// prediction band.
pub fn forecast_fan(series: &TimeSeries, f: &ForecastResult, history: usize, title: &str) -> String {
    let skip = series.len().saturating_sub(history);
    let past: Vec<(f64, f64)> = series
        .times()
        .zip(series.values())
        .skip(skip)
        .map(|(t, &v)| (t as f64, v))
        .collect();
    let times: Vec<f64> = f.times().map(|t| t as f64).collect();
    let join = *past.last().expect("non-empty series");
    let with_join = |vals: &[f64]| -> Vec<(f64, f64)> {
        std::iter::once(join)
            .chain(times.iter().copied().zip(vals.iter().copied()))
            .collect()
    };
    let upper = with_join(&f.upper);
    let lower = with_join(&f.lower);
    let point = with_join(&f.point);
    let y = range(
        past.iter()
            .map(|p| p.1)
            .chain(f.upper.iter().copied())
            .chain(f.lower.iter().copied()),
    );
    let x = (past[0].0, *times.last().expect("horizon >= 1"));
    let mut fig = Figure::new(title, x, y).labels("year", "anomaly");
    fig.band(&upper, &lower, BAND);
    fig.line(&past, INK, false);
    fig.line(&point, ACCENT, false);
    fig.render()
}
