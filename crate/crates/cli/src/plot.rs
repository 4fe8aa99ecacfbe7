//! Dependency-free SVG charts of one scan column.

use std::fmt::Write as _;

use anyhow::{bail, Result};
use siegel::scan::{Column, ScanRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    Scatter,
    Histogram,
}

#[derive(Debug, Clone)]
pub struct PlotSpec {
    pub kind: Kind,
    pub column: Column,
    pub range: (u64, u64),
    pub bins: usize,
    pub log_x: bool,
    pub reference_lines: Vec<(f64, String)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub count: usize,
    pub mean: f64,
    pub sigma: f64,
    pub min: f64,
    pub max: f64,
}

/// Population mean and standard deviation (Welford).
pub fn stats(values: &[f64]) -> Option<Stats> {
    if values.is_empty() {
        return None;
    }
    let (mut mean, mut m2) = (0.0, 0.0);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &v) in values.iter().enumerate() {
        let d = v - mean;
        mean += d / (i + 1) as f64;
        m2 += d * (v - mean);
        min = min.min(v);
        max = max.max(v);
    }
    Some(Stats {
        count: values.len(),
        mean,
        sigma: (m2 / values.len() as f64).sqrt(),
        min,
        max,
    })
}

const W: f64 = 960.0;
const H: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn new(lo: f64, hi: f64, log: bool) -> Self {
        let (lo, hi) = if log {
            (lo.log10(), hi.log10())
        } else {
            (lo, hi)
        };
        let pad = if hi > lo {
            0.0
        } else {
            lo.abs().max(1.0) * 0.05
        };
        Self {
            lo: lo - pad,
            hi: hi + pad,
            log,
        }
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let first = self.lo.ceil() as i32;
            let last = self.hi.floor() as i32;
            return (first..=last).map(|e| 10f64.powi(e)).collect();
        }
        let raw = (self.hi - self.lo) / 6.0;
        let mag = 10f64.powf(raw.log10().floor());
        let step = [1.0, 2.0, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|s| *s >= raw)
            .unwrap_or(10.0 * mag);
        let mut t = (self.lo / step).ceil() * step;
        let mut out = Vec::new();
        while t <= self.hi + step * 1e-9 {
            out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
            t += step;
        }
        out
    }
}

fn px(a: &Axis, v: f64) -> f64 {
    LEFT + a.frac(v) * (W - LEFT - RIGHT)
}

fn py(a: &Axis, v: f64) -> f64 {
    H - BOTTOM - a.frac(v) * (H - TOP - BOTTOM)
}

fn label(v: f64) -> String {
    if v != 0.0 && (v.abs() >= 1e5 || v.abs() < 1e-3) {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn frame(svg: &mut String, x: &Axis, y: &Axis, title: &str, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="28" text-anchor="middle" font-size="15">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let (x0, x1, y0, y1) = (LEFT, W - RIGHT, TOP, H - BOTTOM);
    let _ = writeln!(
        svg,
        r#"<rect x="{x0}" y="{y0}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y1 - y0
    );
    for t in x.ticks() {
        let p = px(x, t);
        let _ = writeln!(
            svg,
            r#"<line x1="{p:.2}" y1="{y1}" x2="{p:.2}" y2="{}" stroke="black"/><text x="{p:.2}" y="{}" text-anchor="middle">{}</text>"#,
            y1 + 5.0,
            y1 + 18.0,
            label(t)
        );
    }
    for t in y.ticks() {
        let p = py(y, t);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{p:.2}" x2="{x0}" y2="{p:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            p + 4.0,
            label(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        (x0 + x1) / 2.0,
        H - 15.0,
        escape(xlabel)
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{}" text-anchor="middle" transform="rotate(-90 18 {})">{}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(ylabel)
    );
}

fn legend(svg: &mut String, lines: &[String]) {
    for (i, l) in lines.iter().enumerate() {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            W - RIGHT - 10.0,
            TOP + 18.0 + 16.0 * i as f64,
            escape(l)
        );
    }
}

/// `(q, value)` pairs of `rows` inside the range that define the column.
pub fn points(rows: &[ScanRow], spec: &PlotSpec) -> Vec<(u64, f64)> {
    rows.iter()
        .filter(|r| r.q >= spec.range.0 && r.q <= spec.range.1)
        .filter_map(|r| r.get(spec.column).map(|v| (r.q, v)))
        .collect()
}

/// Renders the chart; fails when no row contributes a value.
pub fn render(rows: &[ScanRow], spec: &PlotSpec) -> Result<(String, Stats)> {
    let pts = points(rows, spec);
    let values: Vec<f64> = pts.iter().map(|p| p.1).collect();
    let Some(st) = stats(&values) else {
        bail!(
            "no values of {} for {} <= q <= {}",
            spec.column.name(),
            spec.range.0,
            spec.range.1
        );
    };
    if spec.bins == 0 {
        bail!("bins must be at least 1");
    }
    let name = spec.column.name();
    let mut svg = String::new();
    let mean_label = format!("mean = {:.10}", st.mean);
    let sigma_label = format!("sigma = {:.10}", st.sigma);
    match spec.kind {
        Kind::Scatter => {
            let (qlo, qhi) = (pts[0].0 as f64, pts[pts.len() - 1].0 as f64);
            let x = Axis::new(qlo, qhi, spec.log_x);
            let mut ylo = st.min;
            let mut yhi = st.max;
            for (v, _) in &spec.reference_lines {
                ylo = ylo.min(*v);
                yhi = yhi.max(*v);
            }
            let y = Axis::new(ylo, yhi, false);
            frame(&mut svg, &x, &y, &format!("{name}(q)"), "q", name);
            let mut path = String::new();
            for &(q, v) in &pts {
                let _ = write!(path, "M{:.1} {:.1}h0", px(&x, q as f64), py(&y, v));
            }
            let _ = writeln!(
                svg,
                r#"<path d="{path}" stroke="steelblue" stroke-width="2" stroke-linecap="round"/>"#
            );
            for (v, l) in &spec.reference_lines {
                let p = py(&y, *v);
                let _ = writeln!(
                    svg,
                    r#"<line x1="{LEFT}" y1="{p:.2}" x2="{}" y2="{p:.2}" stroke="black"/><text x="{}" y="{:.2}">{}</text>"#,
                    W - RIGHT,
                    LEFT + 4.0,
                    p - 3.0,
                    escape(l)
                );
            }
            let p = py(&y, st.mean);
            let _ = writeln!(
                svg,
                r#"<line x1="{LEFT}" y1="{p:.2}" x2="{}" y2="{p:.2}" stroke="red" stroke-dasharray="6 4"/>"#,
                W - RIGHT
            );
            legend(
                &mut svg,
                &[
                    format!("{} primes", st.count),
                    format!("min = {:.10}", st.min),
                    format!("max = {:.10}", st.max),
                    mean_label,
                ],
            );
        }
        Kind::Histogram => {
            let width = (st.max - st.min) / spec.bins as f64;
            let mut counts = vec![0usize; spec.bins];
            for &v in &values {
                let i = if width > 0.0 {
                    (((v - st.min) / width) as usize).min(spec.bins - 1)
                } else {
                    0
                };
                counts[i] += 1;
            }
            let top = *counts.iter().max().expect("bins >= 1") as f64;
            let x = Axis::new(st.min, st.max.max(st.min + width), false);
            let y = Axis::new(0.0, top, false);
            frame(
                &mut svg,
                &x,
                &y,
                &format!("histogram of {name}(q)"),
                name,
                "primes per bin",
            );
            for (i, &c) in counts.iter().enumerate() {
                let a = st.min + width * i as f64;
                let (x0, x1) = (px(&x, a), px(&x, a + width).max(px(&x, a) + 1.0));
                let (y0, y1) = (py(&y, c as f64), py(&y, 0.0));
                let _ = writeln!(
                    svg,
                    r#"<rect x="{x0:.2}" y="{y0:.2}" width="{:.2}" height="{:.2}" fill="steelblue" stroke="white" stroke-width="0.5"/>"#,
                    x1 - x0,
                    y1 - y0
                );
            }
            let p = px(&x, st.mean);
            let _ = writeln!(
                svg,
                r#"<line x1="{p:.2}" y1="{TOP}" x2="{p:.2}" y2="{}" stroke="red" stroke-dasharray="6 4"/>"#,
                H - BOTTOM
            );
            for (v, l) in &spec.reference_lines {
                let p = px(&x, *v);
                let _ = writeln!(
                    svg,
                    r#"<line x1="{p:.2}" y1="{TOP}" x2="{p:.2}" y2="{}" stroke="black"/><text x="{:.2}" y="{}">{}</text>"#,
                    H - BOTTOM,
                    p + 3.0,
                    TOP + 12.0,
                    escape(l)
                );
            }
            legend(
                &mut svg,
                &[
                    format!("{} primes, {} bins", st.count, spec.bins),
                    format!("interval length = {width:.10}"),
                    mean_label,
                    sigma_label,
                ],
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok((svg, st))
}
