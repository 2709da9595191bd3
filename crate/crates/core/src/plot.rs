//! Self-contained SVG charts. Output depends only on the input values.

use std::fmt::Write as _;

use crate::corpus::EvolutionStats;
use crate::replicability::TopicDrift;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn open(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
}

/// Linear map from `[lo, hi]` onto `[a, b]`.
fn scale(v: f64, lo: f64, hi: f64, a: f64, b: f64) -> f64 {
    if hi == lo {
        return (a + b) / 2.0;
    }
    a + (v - lo) / (hi - lo) * (b - a)
}

/// Stacked bars per snapshot transition: removed, decreased, unchanged,
/// increased, added.
pub fn evolution_svg(transitions: &[(String, EvolutionStats)]) -> String {
    const CATEGORIES: [(&str, &str); 5] = [
        ("removed", "#d62728"),
        ("decreased", "#ff7f0e"),
        ("unchanged", "#7f7f7f"),
        ("increased", "#2ca02c"),
        ("added", "#1f77b4"),
    ];
    let values = |s: &EvolutionStats| [s.removed, s.decreased, s.unchanged, s.increased, s.added];

    let mut out = String::new();
    open(&mut out, "Document evolution");
    let max_total = transitions
        .iter()
        .map(|(_, s)| values(s).iter().sum::<usize>())
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let slot = (WIDTH - 2.0 * MARGIN - 120.0) / transitions.len().max(1) as f64;
    for (i, (label, stats)) in transitions.iter().enumerate() {
        let x = MARGIN + i as f64 * slot + slot * 0.15;
        let w = slot * 0.7;
        let mut y = HEIGHT - MARGIN;
        for ((_, color), v) in CATEGORIES.iter().zip(values(stats)) {
            let h = v as f64 / max_total * plot_h;
            y -= h;
            let _ = writeln!(
                out,
                r#"<rect x="{x:.2}" y="{y:.2}" width="{w:.2}" height="{h:.2}" fill="{color}"><title>{v}</title></rect>"#
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            x + w / 2.0,
            HEIGHT - MARGIN + 16.0,
            escape(label)
        );
    }
    for (i, (name, color)) in CATEGORIES.iter().enumerate() {
        let y = MARGIN + i as f64 * 18.0;
        let x = WIDTH - MARGIN - 100.0;
        let _ = writeln!(out, r#"<rect x="{x:.2}" y="{y:.2}" width="12" height="12" fill="{color}"/>"#);
        let _ = writeln!(out, r#"<text x="{:.2}" y="{:.2}">{name}</text>"#, x + 18.0, y + 10.0);
    }
    out.push_str("</svg>\n");
    out
}

/// Scatter of (ER, ΔRI) points with reference lines at ER = 1 and ΔRI = 0.
pub fn er_delta_ri_svg(title: &str, points: &[(String, f64, f64)]) -> String {
    let mut out = String::new();
    open(&mut out, title);
    let (mut x_lo, mut x_hi, mut y_lo, mut y_hi) = (0.0_f64, 2.0_f64, -0.1_f64, 0.1_f64);
    for &(_, er, dri) in points {
        x_lo = x_lo.min(er);
        x_hi = x_hi.max(er);
        y_lo = y_lo.min(dri);
        y_hi = y_hi.max(dri);
    }
    let pad_x = (x_hi - x_lo) * 0.05;
    let pad_y = (y_hi - y_lo) * 0.05;
    let (x_lo, x_hi, y_lo, y_hi) = (x_lo - pad_x, x_hi + pad_x, y_lo - pad_y, y_hi + pad_y);
    let sx = |v: f64| scale(v, x_lo, x_hi, MARGIN, WIDTH - MARGIN);
    let sy = |v: f64| scale(v, y_lo, y_hi, HEIGHT - MARGIN, MARGIN);

    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        WIDTH - 2.0 * MARGIN,
        HEIGHT - 2.0 * MARGIN
    );
    let _ = writeln!(
        out,
        r##"<line x1="{0:.2}" y1="{MARGIN}" x2="{0:.2}" y2="{1:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
        sx(1.0),
        HEIGHT - MARGIN
    );
    let _ = writeln!(
        out,
        r##"<line x1="{MARGIN}" y1="{0:.2}" x2="{1:.2}" y2="{0:.2}" stroke="#888" stroke-dasharray="4 3"/>"##,
        sy(0.0),
        WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">ER</text>"#,
        WIDTH / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{:.2}" text-anchor="middle" transform="rotate(-90 14 {:.2})">ΔRI</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (lo, hi, pos) in [(x_lo, x_hi, true), (y_lo, y_hi, false)] {
        for i in 0..=4 {
            let v = lo + (hi - lo) * i as f64 / 4.0;
            if pos {
                let _ = writeln!(
                    out,
                    r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{v:.2}</text>"#,
                    sx(v),
                    HEIGHT - MARGIN + 14.0
                );
            } else {
                let _ = writeln!(
                    out,
                    r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.3}</text>"#,
                    MARGIN - 4.0,
                    sy(v) + 4.0
                );
            }
        }
    }
    for (label, er, dri) in points {
        let _ = writeln!(
            out,
            r##"<circle cx="{:.2}" cy="{:.2}" r="4" fill="#1f77b4"><title>{} ER={er:.3} ΔRI={dri:.3}</title></circle>"##,
            sx(*er),
            sy(*dri),
            escape(label)
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
            sx(*er) + 6.0,
            sy(*dri) - 6.0,
            escape(label)
        );
    }
    out.push_str("</svg>\n");
    out
}

/// One bar per topic, in the given order.
pub fn drift_svg(title: &str, drift: &[TopicDrift]) -> String {
    let mut out = String::new();
    open(&mut out, title);
    let bound = drift
        .iter()
        .map(|d| d.delta.abs())
        .fold(0.0_f64, f64::max)
        .max(1e-9);
    let sy = |v: f64| scale(v, -bound, bound, HEIGHT - MARGIN, MARGIN);
    let slot = (WIDTH - 2.0 * MARGIN) / drift.len().max(1) as f64;
    let zero = sy(0.0);
    let _ = writeln!(
        out,
        r#"<line x1="{MARGIN}" y1="{zero:.2}" x2="{:.2}" y2="{zero:.2}" stroke="black"/>"#,
        WIDTH - MARGIN
    );
    for (i, d) in drift.iter().enumerate() {
        let y = sy(d.delta);
        let (top, h) = if y < zero { (y, zero - y) } else { (zero, y - zero) };
        let color = if d.delta >= 0.0 { "#2ca02c" } else { "#d62728" };
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{top:.2}" width="{:.2}" height="{h:.2}" fill="{color}"><title>{} {:.4}</title></rect>"#,
            MARGIN + i as f64 * slot,
            (slot * 0.9).max(0.5),
            escape(&d.topic_ee1),
            d.delta
        );
    }
    for v in [-bound, 0.0, bound] {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.2}</text>"#,
            MARGIN - 4.0,
            sy(v) + 4.0
        );
    }
    out.push_str("</svg>\n");
    out
}
