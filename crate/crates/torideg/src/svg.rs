//! SVG rendering of two-dimensional triangulations from exact coordinates.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::exact::{rint, round_to_i64, Rat};
use crate::stratify::FlagTriangulation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SvgError {
    #[error("rendering supports dimension 2 only, got {0}")]
    UnsupportedDimension(usize),
}

const SCALE: i64 = 120;
const MARGIN: i64 = 30;
const POINT_RADIUS: i64 = 5;

/// Renders the polygon outline, the triangulation edges and the marking
/// points. Coordinates are scaled to pixels and the y axis points down.
pub fn render_svg(tri: &FlagTriangulation) -> Result<String, SvgError> {
    let dim = tri.lattice.dim();
    if dim != 2 {
        return Err(SvgError::UnsupportedDimension(dim));
    }
    let vertices = tri.lattice.vertices();
    let min_x = vertices.iter().map(|v| v[0]).min().unwrap();
    let max_x = vertices.iter().map(|v| v[0]).max().unwrap();
    let min_y = vertices.iter().map(|v| v[1]).min().unwrap();
    let max_y = vertices.iter().map(|v| v[1]).max().unwrap();
    let width = (max_x - min_x) * SCALE + 2 * MARGIN;
    let height = (max_y - min_y) * SCALE + 2 * MARGIN;

    let to_px = |p: &[Rat]| -> (i64, i64) {
        let x = round_to_i64(&((&p[0] - rint(min_x)) * rint(SCALE))) + MARGIN;
        let y = height - MARGIN - round_to_i64(&((&p[1] - rint(min_y)) * rint(SCALE)));
        (x, y)
    };

    // triangulation edges: all vertex pairs of every maximal simplex
    let mut edges: BTreeSet<((i64, i64), (i64, i64))> = BTreeSet::new();
    for simplex in &tri.simplices {
        for i in 0..simplex.len() {
            for j in i + 1..simplex.len() {
                let a = to_px(&simplex[i]);
                let b = to_px(&simplex[j]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
    }
    // polytope boundary: the one-dimensional faces
    let mut boundary: BTreeSet<((i64, i64), (i64, i64))> = BTreeSet::new();
    for face in tri.lattice.faces.iter().filter(|f| f.dim == 1) {
        let vs = &face.vertex_set;
        let a = to_px(&vertices[vs[0]].iter().map(|&c| rint(c)).collect::<Vec<_>>());
        let b = to_px(&vertices[vs[1]].iter().map(|&c| rint(c)).collect::<Vec<_>>());
        boundary.insert((a.min(b), a.max(b)));
    }
    let mut points: BTreeSet<(i64, i64)> = BTreeSet::new();
    for p in tri.marking.points.values() {
        points.insert(to_px(p));
    }

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str(&format!(
        "  <rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>\n"
    ));
    for ((x1, y1), (x2, y2)) in &edges {
        out.push_str(&format!(
            "  <line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"#888888\" stroke-width=\"2\"/>\n"
        ));
    }
    for ((x1, y1), (x2, y2)) in &boundary {
        out.push_str(&format!(
            "  <line x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\" stroke=\"black\" stroke-width=\"3\"/>\n"
        ));
    }
    for (x, y) in &points {
        out.push_str(&format!(
            "  <circle cx=\"{x}\" cy=\"{y}\" r=\"{POINT_RADIUS}\" fill=\"black\"/>\n"
        ));
    }
    out.push_str("</svg>\n");
    Ok(out)
}
