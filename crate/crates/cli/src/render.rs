//! Static renderings of a window `[0, W) × [0, H)` of a grid coloring. Rows
//! are emitted top-down, so the first row is `x2 = H - 1`.

use std::fmt::Write;

use gridcover::PeriodicColoring;

/// Plain PBM (`P1`), `1` = black, at most 70 characters per line.
pub fn pbm(coloring: &PeriodicColoring, width: usize, height: usize) -> String {
    let mut out = format!("P1 {width} {height}\n");
    for x2 in (0..height as i64).rev() {
        let row: Vec<u8> = (0..width as i64)
            .map(|x1| {
                if coloring.is_black(x1, x2) {
                    b'1'
                } else {
                    b'0'
                }
            })
            .collect();
        for chunk in row.chunks(70) {
            out.push_str(std::str::from_utf8(chunk).expect("ascii"));
            out.push('\n');
        }
    }
    out
}

/// SVG 1.1 with one square per black cell on a white background.
pub fn svg(coloring: &PeriodicColoring, width: usize, height: usize, cell: usize) -> String {
    let (w, h) = (width * cell, height * cell);
    let mut out = String::new();
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#
    )
    .unwrap();
    for (row, x2) in (0..height as i64).rev().enumerate() {
        for x1 in 0..width as i64 {
            if coloring.is_black(x1, x2) {
                writeln!(
                    out,
                    r#"<rect class="black" x="{}" y="{}" width="{cell}" height="{cell}" fill="black"/>"#,
                    x1 as usize * cell,
                    row * cell
                )
                .unwrap();
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
