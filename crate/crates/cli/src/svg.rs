//! Agreement heatmap as standalone SVG.

use std::fmt::Write as _;

use rankeval::agreement::AgreementMatrix;

const CELL: usize = 14;
const MARGIN: usize = 120;

const PINK: [f64; 3] = [231.0, 84.0, 128.0];
const WHITE: [f64; 3] = [255.0, 255.0, 255.0];
const GREEN: [f64; 3] = [46.0, 160.0, 67.0];
const UNDEFINED: &str = "#bdbdbd";

/// Pink at 0, white at 0.5, green at 1, linear in between.
pub fn color(ratio: f64) -> String {
    let t = ratio.clamp(0.0, 1.0);
    let (from, to, s) = if t <= 0.5 { (PINK, WHITE, t * 2.0) } else { (WHITE, GREEN, t * 2.0 - 1.0) };
    let c: Vec<u8> = (0..3).map(|i| (from[i] + (to[i] - from[i]) * s).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn heatmap(m: &AgreementMatrix) -> String {
    let size = MARGIN + CELL * m.len() + 10;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="10">"#
    )
    .unwrap();
    for (i, id) in m.metrics().iter().enumerate() {
        let center = MARGIN + CELL * i + CELL / 2;
        let name = escape(id.name());
        writeln!(
            out,
            r#"<text x="{}" y="{}" text-anchor="end" dominant-baseline="middle">{name}</text>"#,
            MARGIN - 4,
            center
        )
        .unwrap();
        writeln!(
            out,
            r#"<text x="{center}" y="{}" text-anchor="start" dominant-baseline="middle" transform="rotate(-90 {center} {})">{name}</text>"#,
            MARGIN - 4,
            MARGIN - 4
        )
        .unwrap();
    }
    for a in 0..m.len() {
        for b in 0..m.len() {
            let (fill, label) = match m.ratio(a, b) {
                Some(r) => (color(r), format!("{r:.6}")),
                None => (UNDEFINED.to_string(), "undef".to_string()),
            };
            writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{fill}"><title>{} / {}: {label}</title></rect>"#,
                MARGIN + CELL * b,
                MARGIN + CELL * a,
                m.metrics()[a],
                m.metrics()[b]
            )
            .unwrap();
        }
    }
    out.push_str("</svg>\n");
    out
}
