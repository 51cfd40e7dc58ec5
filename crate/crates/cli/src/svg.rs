//! Hand-emitted SVG log-log plots: fixed 800×600 viewport, decade
//! ticks on both axes, one circle per data point, and an optional
//! fitted power-law line with a text annotation.

use std::fmt::Write as _;

use greedylab_core::analysis::RateEstimate;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 780.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 550.0;

struct LogAxis {
    lo: f64,
    hi: f64,
}

impl LogAxis {
    fn from_values(values: impl Iterator<Item = f64>) -> LogAxis {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for v in values {
            if v > 0.0 {
                lo = lo.min(v.log10());
                hi = hi.max(v.log10());
            }
        }
        if !lo.is_finite() {
            lo = 0.0;
            hi = 1.0;
        }
        if hi - lo < 1e-9 {
            hi += 0.5;
            lo -= 0.5;
        }
        let pad = 0.05 * (hi - lo);
        LogAxis { lo: lo - pad, hi: hi + pad }
    }

    fn decades(&self) -> impl Iterator<Item = i32> {
        self.lo.ceil() as i32..=self.hi.floor() as i32
    }
}

/// Renders positive (x, y) points on log₁₀ axes. Non-positive values
/// cannot be placed on a log scale and are skipped.
pub fn log_log_plot(
    points: &[(f64, f64)],
    fit: Option<&RateEstimate>,
    x_label: &str,
    y_label: &str,
    annotation: Option<&str>,
) -> String {
    let xs = LogAxis::from_values(points.iter().map(|p| p.0));
    let ys = LogAxis::from_values(points.iter().map(|p| p.1));
    let sx = |x: f64| LEFT + (x.log10() - xs.lo) / (xs.hi - xs.lo) * (RIGHT - LEFT);
    let sy = |y: f64| BOTTOM - (y.log10() - ys.lo) / (ys.hi - ys.lo) * (BOTTOM - TOP);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<rect x="{LEFT}" y="{TOP}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        RIGHT - LEFT,
        BOTTOM - TOP
    );

    for d in xs.decades() {
        let x = sx(10f64.powi(d));
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{BOTTOM}" x2="{x:.2}" y2="{}" stroke="gray" stroke-dasharray="2,4"/>"#,
            TOP
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{}" font-size="12" text-anchor="middle">1e{d}</text>"#,
            BOTTOM + 18.0
        );
    }
    for d in ys.decades() {
        let y = sy(10f64.powi(d));
        let _ = writeln!(
            svg,
            r#"<line x1="{LEFT}" y1="{y:.2}" x2="{RIGHT}" y2="{y:.2}" stroke="gray" stroke-dasharray="2,4"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{:.2}" font-size="12" text-anchor="end">1e{d}</text>"#,
            LEFT - 6.0,
            y + 4.0
        );
    }

    if let Some(est) = fit {
        // Straight line in log-log space between the x extremes.
        let x0 = 10f64.powf(xs.lo);
        let x1 = 10f64.powf(xs.hi);
        let y_at = |x: f64| (est.intercept + est.slope * x.ln()).exp();
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="crimson" stroke-width="1.5"/>"#,
            sx(x0),
            sy(y_at(x0)),
            sx(x1),
            sy(y_at(x1))
        );
    }

    for &(x, y) in points {
        if x > 0.0 && y > 0.0 {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="steelblue"/>"#,
                sx(x),
                sy(y)
            );
        }
    }

    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{}" font-size="14" text-anchor="middle">{}</text>"#,
        (LEFT + RIGHT) / 2.0,
        HEIGHT - 12.0,
        xml_escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="16" y="{:.1}" font-size="14" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}</text>"#,
        (TOP + BOTTOM) / 2.0,
        (TOP + BOTTOM) / 2.0,
        xml_escape(y_label)
    );
    if let Some(text) = annotation {
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-size="14" fill="crimson">{}</text>"#,
            LEFT + 12.0,
            TOP + 20.0,
            xml_escape(text)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
