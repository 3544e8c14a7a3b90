use std::fmt::Write as _;

use donoghue_core::realize::CurvePoint;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

/// Polyline of `kappa` against `Q`; the vertical axis is fixed to `[0, 1]`.
pub fn kappa_polyline(a: f64, points: &[CurvePoint]) -> String {
    let (lo, hi) = match (points.first(), points.last()) {
        (Some(f), Some(l)) if l.q > f.q => (f.q, l.q),
        _ => (-1.0, 1.0),
    };
    let x = |q: f64| MARGIN + (q - lo) / (hi - lo) * (WIDTH - 2.0 * MARGIN);
    let y = |k: f64| HEIGHT - MARGIN - k * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    // axes: Q along the bottom, kappa through Q = 0 when it is in range
    let x_axis_y = y(0.0);
    writeln!(
        out,
        r#"<line x1="{:.2}" y1="{x_axis_y:.2}" x2="{:.2}" y2="{x_axis_y:.2}" stroke="black"/>"#,
        x(lo),
        x(hi)
    )
    .unwrap();
    let y_axis_x = if lo <= 0.0 && hi >= 0.0 { x(0.0) } else { x(lo) };
    writeln!(
        out,
        r#"<line x1="{y_axis_x:.2}" y1="{:.2}" x2="{y_axis_x:.2}" y2="{:.2}" stroke="black"/>"#,
        y(0.0),
        y(1.0)
    )
    .unwrap();
    writeln!(
        out,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="4 4"/>"#,
        x(lo),
        y(1.0),
        x(hi),
        y(1.0)
    )
    .unwrap();
    for (tx, ty, anchor, label) in [
        (x(lo), x_axis_y + 18.0, "start", format!("{lo}")),
        (x(hi), x_axis_y + 18.0, "end", format!("{hi}")),
        (WIDTH / 2.0, HEIGHT - 8.0, "middle", "Q".to_string()),
        (y_axis_x - 6.0, y(0.0), "end", "0".to_string()),
        (y_axis_x - 6.0, y(1.0) + 4.0, "end", "1".to_string()),
        (y_axis_x + 6.0, MARGIN - 14.0, "start", format!("kappa, a = {a}")),
    ] {
        writeln!(
            out,
            r#"<text x="{tx:.2}" y="{ty:.2}" font-family="sans-serif" font-size="12" text-anchor="{anchor}">{label}</text>"#
        )
        .unwrap();
    }
    let coords: Vec<String> = points
        .iter()
        .map(|p| format!("{:.2},{:.2}", x(p.q), y(p.kappa)))
        .collect();
    writeln!(
        out,
        r#"<polyline fill="none" stroke="steelblue" stroke-width="2" points="{}"/>"#,
        coords.join(" ")
    )
    .unwrap();
    writeln!(out, "</svg>").unwrap();
    out
}
