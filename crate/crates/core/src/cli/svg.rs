//! Minimal fixed-style SVG line chart.

use std::fmt::Write;

use super::Table;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const MARGIN: f64 = 56.0;
const PALETTE: [&str; 8] =
    ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2"];

/// Plots every column whose name starts with `V` against the first column.
/// The y axis is fixed to `[0, y_max]`; values above are clipped.
pub fn render(table: &Table, title: &str, y_max: f64) -> String {
    let t = table.column(&table.columns[0]).unwrap_or_default();
    let t_max = t.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let sx = |x: f64| MARGIN + x / t_max * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - y.clamp(0.0, y_max) / y_max * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(
        s,
        r#"<path d="M{m} {m} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    // separability threshold
    let _ = writeln!(
        s,
        r#"<line x1="{}" x2="{}" y1="{y}" y2="{y}" stroke="gray" stroke-dasharray="4 4"/>"#,
        MARGIN,
        WIDTH - MARGIN,
        y = sy(4.0)
    );
    for i in 0..=4 {
        let yv = y_max * i as f64 / 4.0;
        let xv = t_max * i as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{}" y="{:.1}" text-anchor="end">{yv}</text>"#, MARGIN - 6.0, sy(yv) + 4.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{}" text-anchor="middle">{xv}</text>"#, sx(xv), HEIGHT - MARGIN + 18.0);
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">k₁t</text>"#, WIDTH / 2.0, HEIGHT - 14.0);

    let series = table.columns.iter().enumerate().skip(1).filter(|(_, c)| c.starts_with('V'));
    for (n, (i, name)) in series.enumerate() {
        let color = PALETTE[n % PALETTE.len()];
        let pts: Vec<String> = table
            .rows
            .iter()
            .map(|r| format!("{:.2},{:.2}", sx(r[0]), sy(r[i])))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
        let ly = MARGIN + 14.0 * n as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{ly}" fill="{color}">{name}</text>"#,
            WIDTH - MARGIN - 110.0
        );
    }
    s.push_str("</svg>\n");
    s
}
