//! Minimal SVG charts: a confusion heat map and an overlaid line chart.

use std::fmt::Write as _;

const CELL: f64 = 60.0;
const MARGIN: f64 = 130.0;

/// Heat map shaded by row-normalized counts, with the raw count in each cell.
pub fn heat_map(counts: &[Vec<u64>], names: &[String]) -> String {
    let n = counts.len();
    let size = MARGIN + CELL * n as f64 + 20.0;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" font-family="sans-serif" font-size="11">"#
    );
    for (r, row) in counts.iter().enumerate() {
        let total: u64 = row.iter().sum();
        for (c, &v) in row.iter().enumerate() {
            let share = if total == 0 { 0.0 } else { v as f64 / total as f64 };
            let shade = (255.0 * (1.0 - share)).round() as u8;
            let (x, y) = (MARGIN + c as f64 * CELL, MARGIN + r as f64 * CELL);
            let _ = writeln!(
                s,
                r#"<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="rgb({shade},{shade},255)" stroke="gray"/>"#
            );
            let ink = if share > 0.5 { "white" } else { "black" };
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" text-anchor="middle" fill="{ink}">{v}</text>"#,
                x + CELL / 2.0,
                y + CELL / 2.0 + 4.0
            );
        }
    }
    for (i, name) in names.iter().enumerate().take(n) {
        let mid = MARGIN + (i as f64 + 0.5) * CELL;
        let _ = writeln!(s, r#"<text x="{}" y="{mid}" text-anchor="end">{name}</text>"#, MARGIN - 6.0);
        let _ = writeln!(
            s,
            r#"<text x="{mid}" y="{}" text-anchor="start" transform="rotate(-45 {mid} {})">{name}</text>"#,
            MARGIN - 6.0,
            MARGIN - 6.0
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Overlaid polylines sharing one y range.
pub fn line_chart(series: &[(&str, &str, &[f64])], width: f64, height: f64) -> String {
    let len = series.iter().map(|(_, _, v)| v.len()).max().unwrap_or(0).max(2);
    let (lo, hi) = series
        .iter()
        .flat_map(|(_, _, v)| v.iter())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    for (k, (name, color, values)) in series.iter().enumerate() {
        let pts: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let x = 10.0 + (width - 20.0) * i as f64 / (len - 1) as f64;
                let y = height - 10.0 - (height - 30.0) * (v - lo) / span;
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1" points="{}"/>"#, pts.join(" "));
        let _ = writeln!(s, r#"<text x="{}" y="14" fill="{color}">{name}</text>"#, 10.0 + 90.0 * k as f64);
    }
    s.push_str("</svg>\n");
    s
}
