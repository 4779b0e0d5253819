//! ASCII and SVG rendering of instances and solutions.
//!
//! ASCII uses a fixed two-character cell so pin labels like `S1`/`E2` stay
//! aligned: `##` obstacle, `. ` free, `a `/`b `/... path glyph per net, and
//! `S#`/`E#` for pins where `#` is the 1-based net number in base 36. Both
//! renderers are pure functions of their inputs.

use std::fmt::Write as _;

use thiserror::Error;

use crate::grid::{ProblemInstance, RoutingOutcome, Vertex};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("solution has {got} nets but instance has {expected}")]
    NetCountMismatch { got: usize, expected: usize },
    #[error("solution path leaves the grid at {0}")]
    PathOutOfBounds(Vertex),
}

const PATH_GLYPHS: &[u8] = b"abcdefghijklmnopqrstuvwxyz";
const NET_DIGITS: &[u8] = b"123456789abcdefghijklmnopqrstuvwxyz0";

const SVG_COLORS: &[&str] = &[
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6", "#bcf60c",
    "#008080", "#9a6324", "#800000", "#000075",
];

fn check(instance: &ProblemInstance, outcome: Option<&RoutingOutcome>) -> Result<(), RenderError> {
    if let Some(out) = outcome {
        if out.paths().len() != instance.net_count() {
            return Err(RenderError::NetCountMismatch {
                got: out.paths().len(),
                expected: instance.net_count(),
            });
        }
        for path in out.paths().iter().flatten() {
            for &v in path.vertices() {
                if !instance.grid().in_bounds(v) {
                    return Err(RenderError::PathOutOfBounds(v));
                }
            }
        }
    }
    Ok(())
}

/// Renders the instance (and optionally a solution) as one text block with
/// one line per grid row.
pub fn ascii(
    instance: &ProblemInstance,
    outcome: Option<&RoutingOutcome>,
) -> Result<String, RenderError> {
    check(instance, outcome)?;
    let grid = instance.grid();
    let mut cells: Vec<[u8; 2]> = vec![*b". "; grid.vertex_count()];
    for idx in 0..grid.vertex_count() {
        if grid.is_obstacle(grid.vertex_at(idx)) {
            cells[idx] = *b"##";
        }
    }
    if let Some(out) = outcome {
        for (i, path) in out.paths().iter().enumerate() {
            let glyph = PATH_GLYPHS[i % PATH_GLYPHS.len()];
            if let Some(path) = path {
                for &v in path.vertices() {
                    cells[grid.index(v)] = [glyph, b' '];
                }
            }
        }
    }
    for (i, net) in instance.nets().iter().enumerate() {
        let digit = NET_DIGITS[i % NET_DIGITS.len()];
        cells[grid.index(net.start)] = [b'S', digit];
        cells[grid.index(net.end)] = [b'E', digit];
    }

    let mut out = String::new();
    for y in 0..grid.height() {
        let mut line = String::with_capacity(grid.width() as usize * 2);
        for x in 0..grid.width() {
            let cell = cells[grid.index(Vertex::new(x, y))];
            line.push(cell[0] as char);
            line.push(cell[1] as char);
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    Ok(out)
}

/// Renders the instance (and optionally a solution) as a standalone SVG
/// document. All coordinates are integers, so output is byte-deterministic.
pub fn svg(
    instance: &ProblemInstance,
    outcome: Option<&RoutingOutcome>,
) -> Result<String, RenderError> {
    check(instance, outcome)?;
    let grid = instance.grid();
    const CELL: u32 = 20;
    let w = grid.width() * CELL;
    let h = grid.height() * CELL;
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}">"#
    )
    .unwrap();
    writeln!(out, r##"<rect width="{w}" height="{h}" fill="#ffffff"/>"##).unwrap();

    // Grid lines.
    let mut lines = String::new();
    for x in 0..=grid.width() {
        write!(lines, "M{} 0V{h}", x * CELL).unwrap();
    }
    for y in 0..=grid.height() {
        write!(lines, "M0 {}H{w}", y * CELL).unwrap();
    }
    writeln!(
        out,
        r##"<path d="{lines}" stroke="#dddddd" stroke-width="1" fill="none"/>"##
    )
    .unwrap();

    for idx in 0..grid.vertex_count() {
        let v = grid.vertex_at(idx);
        if grid.is_obstacle(v) {
            writeln!(
                out,
                r##"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="#333333"/>"##,
                v.x * CELL,
                v.y * CELL
            )
            .unwrap();
        }
    }

    let center = |v: Vertex| (v.x * CELL + CELL / 2, v.y * CELL + CELL / 2);
    if let Some(out_paths) = outcome {
        for (i, path) in out_paths.paths().iter().enumerate() {
            let color = SVG_COLORS[i % SVG_COLORS.len()];
            if let Some(path) = path {
                let points: Vec<String> = path
                    .vertices()
                    .iter()
                    .map(|&v| {
                        let (cx, cy) = center(v);
                        format!("{cx},{cy}")
                    })
                    .collect();
                writeln!(
                    out,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="6" stroke-linecap="round" stroke-linejoin="round" opacity="0.85"/>"#,
                    points.join(" ")
                )
                .unwrap();
            }
        }
    }

    for (i, net) in instance.nets().iter().enumerate() {
        let color = SVG_COLORS[i % SVG_COLORS.len()];
        let (sx, sy) = center(net.start);
        writeln!(
            out,
            r##"<circle cx="{sx}" cy="{sy}" r="7" fill="{color}" stroke="#000000" stroke-width="1"/>"##
        )
        .unwrap();
        let (ex, ey) = center(net.end);
        writeln!(
            out,
            r##"<rect x="{}" y="{}" width="14" height="14" fill="{color}" stroke="#000000" stroke-width="1"/>"##,
            ex - 7,
            ey - 7
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
